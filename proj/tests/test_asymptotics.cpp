#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <memory>
#include <vector>

#include "mde/asymptotics.hpp"
#include "mde/quadrature.hpp"
#include "mde/rng.hpp"

using namespace mde;

namespace {

Vector vec1(double a) {
    Vector v(1);
    v[0] = a;
    return v;
}

Vector vec2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

// brute-force matrix entries straight from the definitions
Matrix uut_direct(const ConvexGenerator& g, const ParametricModel& m, const Vector& th,
                  int wpow) {
    const int p = m.dim();
    Matrix out(p, p);
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            auto term = [&](double x) {
                double f = m.density(th, x);
                Vector u = m.score(th, x);
                double w = g.weight(f);
                return u[i] * u[j] * (wpow == 2 ? w * w : w) * f;
            };
            if (m.discrete()) {
                out(i, j) = sum_discrete([&](long k) { return term(double(k)); },
                                         [&](long k) { return m.density(th, double(k)); });
            } else {
                out(i, j) = integrate(term, m.support(), 1e-11);
            }
        }
    }
    return out;
}

}  // namespace

TEST_SUITE("asymptotics") {

TEST_CASE("at-model matrices match their integral definitions") {
    struct Probe {
        std::shared_ptr<ParametricModel> model;
        Vector theta;
    };
    std::vector<Probe> probes = {{std::make_shared<NormalLocationScale>(), vec2(0.6, 0.11)},
                                 {std::make_shared<ExponentialMean>(), vec1(1.8)},
                                 {std::make_shared<Poisson>(), vec1(2.6)}};
    for (const auto& pr : probes) {
        for (const auto& g : {ConvexGenerator::ewd(0.35), ConvexGenerator::dpd(0.6)}) {
            AsymptoticsBundle b = model_matrices(g, *pr.model, pr.theta);
            Matrix j_direct = uut_direct(g, *pr.model, pr.theta, 1);
            Matrix k0_direct = uut_direct(g, *pr.model, pr.theta, 2);
            Vector xi = pr.model->xi_vector(g, pr.theta);
            Matrix k_direct = k0_direct - xi * xi.transpose();
            for (int i = 0; i < pr.model->dim(); ++i) {
                for (int jj = 0; jj < pr.model->dim(); ++jj) {
                    CHECK(b.j(i, jj) == doctest::Approx(j_direct(i, jj)).epsilon(1e-7));
                    CHECK(b.k(i, jj) == doctest::Approx(k_direct(i, jj)).epsilon(1e-7));
                }
            }
            // sandwich = J^-1 K J^-1
            Matrix jinv = invert_spd(b.j, "test");
            Matrix s = jinv * b.k * jinv;
            for (int i = 0; i < pr.model->dim(); ++i) {
                for (int jj = 0; jj < pr.model->dim(); ++jj) {
                    CHECK(b.sandwich(i, jj) == doctest::Approx(s(i, jj)).epsilon(1e-10));
                }
            }
        }
    }
}

TEST_CASE("likelihood weights collapse everything to fisher information") {
    NormalLocationScale m;
    Vector th = vec2(0.0, 1.0);
    AsymptoticsBundle b = model_matrices(ConvexGenerator::kl(), m, th);
    Matrix info = m.fisher_information(th);
    Matrix iinv = invert_spd(info, "test");
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            CHECK(b.j(i, j) == doctest::Approx(info(i, j)).epsilon(1e-10));
            CHECK(b.k(i, j) == doctest::Approx(info(i, j)).epsilon(1e-10));
            CHECK(b.sandwich(i, j) == doctest::Approx(iinv(i, j)).epsilon(1e-10));
        }
    }
}

TEST_CASE("singular matrices are refused with the collapse direction named") {
    Matrix m(2, 2);
    m << 1.0, 1.0, 1.0, 1.0;
    CHECK_THROWS_AS(invert_spd(m, "caller"), ConsistencyError);
    Matrix fine(2, 2);
    fine << 2.0, 0.5, 0.5, 1.0;
    Matrix inv = invert_spd(fine, "caller");
    Matrix id = inv * fine;
    CHECK(id(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(id(0, 1) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("location efficiency follows the power-family closed form") {
    // for the power generator at the normal location model,
    // ARE = (1 + a^2/(1+2a))^{-3/2}
    NormalMean m(1.0);
    for (double a : {0.05, 0.25, 0.5, 1.0, 2.0, 4.0}) {
        double expected = std::pow(1.0 + a * a / (1.0 + 2.0 * a), -1.5);
        CHECK(are(ConvexGenerator::dpd(a), m, vec1(0.0)) ==
              doctest::Approx(expected).epsilon(1e-8));
    }
    CHECK(are(ConvexGenerator::kl(), m, vec1(0.0)) == 1.0);
    // exponentially weighted members trade less efficiency at heavy tuning
    double e_heavy = are(ConvexGenerator::ewd(4.0), m, vec1(0.0));
    double d_heavy = are(ConvexGenerator::dpd(4.0), m, vec1(0.0));
    CHECK(e_heavy > d_heavy);
    CHECK(e_heavy < 1.0);
}

TEST_CASE("efficiency is monotone in the tuning strength at the location model") {
    NormalMean m(1.0);
    double prev = 1.0;
    for (double beta : {0.001, 0.01, 0.1, 0.5, 1.0}) {
        double v = are(ConvexGenerator::ewd(beta), m, vec1(0.0));
        CHECK(v < prev);
        CHECK(v > 0.5);
        prev = v;
    }
}

TEST_CASE("empirical matrices converge to the model matrices at the model") {
    NormalLocationScale m;
    Vector th = vec2(0.3, 1.1);
    ConvexGenerator g = ConvexGenerator::ewd(0.5);
    Rng rng(2718);
    std::vector<double> data;
    const int n = 20000;
    data.reserve(n);
    for (int i = 0; i < n; ++i) data.push_back(m.simulate(th, rng));

    AsymptoticsBundle at_model = model_matrices(g, m, th);
    AsymptoticsBundle emp = empirical_matrices(g, m, th, data);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            double scale = std::abs(at_model.j(i, j)) + 0.05;
            CHECK(std::abs(emp.j(i, j) - at_model.j(i, j)) / scale < 0.06);
            scale = std::abs(at_model.k(i, j)) + 0.05;
            CHECK(std::abs(emp.k(i, j) - at_model.k(i, j)) / scale < 0.06);
        }
    }
}

TEST_CASE("influence is centered under the model") {
    NormalLocationScale m;
    Vector th = vec2(0.0, 1.0);
    ConvexGenerator g = ConvexGenerator::ewd(0.7);
    for (int c = 0; c < 2; ++c) {
        double mean_if = integrate(
            [&](double x) { return influence(g, m, th, x)[c] * m.density(th, x); },
            m.support());
        CHECK(std::abs(mean_if) < 1e-9);
    }
    // the location influence of the weighted fit is redescending: far
    // outliers contribute less than moderate ones
    double mid = std::abs(influence(g, m, th, 1.5)[0]);
    double far = std::abs(influence(g, m, th, 6.0)[0]);
    CHECK(far < mid);
    // whereas the likelihood influence keeps growing
    CHECK(std::abs(influence(ConvexGenerator::kl(), m, th, 6.0)[0]) >
          std::abs(influence(ConvexGenerator::kl(), m, th, 1.5)[0]));
}

}  // TEST_SUITE
