#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <memory>
#include <vector>

#include "mde/model.hpp"
#include "mde/model_integrals.hpp"
#include "mde/quadrature.hpp"

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

struct Case {
    std::shared_ptr<ParametricModel> model;
    Vector theta;
};

std::vector<Case> model_sweep() {
    return {{std::make_shared<NormalMean>(1.0), vec1(0.4)},
            {std::make_shared<NormalLocationScale>(), vec2(0.62, 0.09)},
            {std::make_shared<NormalLocationScale>(), vec2(-1.0, 2.3)},
            {std::make_shared<NormalScale>(0.0), vec1(1.4)},
            {std::make_shared<ExponentialMean>(), vec1(2.2)},
            {std::make_shared<Poisson>(), vec1(3.7)}};
}

std::vector<ConvexGenerator> gen_sweep() {
    return {ConvexGenerator::ewd(0.25), ConvexGenerator::ewd(1.5), ConvexGenerator::dpd(0.5),
            ConvexGenerator::kl(), ConvexGenerator::l2()};
}

double density_mass(const ParametricModel& m, const Vector& th) {
    if (m.discrete()) {
        return sum_discrete([&](long k) { return m.density(th, double(k)); },
                            [&](long k) { return m.density(th, double(k)); });
    }
    return integrate([&](double x) { return m.density(th, x); }, m.support());
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("densities carry unit mass") {
    for (const auto& c : model_sweep()) {
        CHECK(density_mass(*c.model, c.theta) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("score is the parameter gradient of log density") {
    for (const auto& c : model_sweep()) {
        const auto& m = *c.model;
        std::vector<double> probes = m.discrete() ? std::vector<double>{0.0, 2.0, 6.0}
                                                  : std::vector<double>{0.3, 1.1};
        for (double x : probes) {
            Vector u = m.score(c.theta, x);
            for (int j = 0; j < m.dim(); ++j) {
                double h = 1e-6 * (1.0 + std::abs(c.theta[j]));
                Vector tp = c.theta, tm = c.theta;
                tp[j] += h;
                tm[j] -= h;
                double fd =
                    (std::log(m.density(tp, x)) - std::log(m.density(tm, x))) / (2.0 * h);
                CHECK(u[j] == doctest::Approx(fd).epsilon(1e-5));
            }
        }
    }
}

TEST_CASE("negative score jacobian matches finite differences") {
    for (const auto& c : model_sweep()) {
        const auto& m = *c.model;
        double x = m.discrete() ? 3.0 : 0.9;
        Matrix neg = m.score_jacobian_neg(c.theta, x);
        for (int j = 0; j < m.dim(); ++j) {
            double h = 1e-6 * (1.0 + std::abs(c.theta[j]));
            Vector tp = c.theta, tm = c.theta;
            tp[j] += h;
            tm[j] -= h;
            Vector d = (m.score(tp, x) - m.score(tm, x)) / (2.0 * h);
            for (int i = 0; i < m.dim(); ++i) {
                CHECK(neg(i, j) == doctest::Approx(-d[i]).epsilon(1e-5));
            }
        }
    }
}

TEST_CASE("fisher information equals the integrated score outer product") {
    for (const auto& c : model_sweep()) {
        const auto& m = *c.model;
        Matrix info = m.fisher_information(c.theta);
        for (int i = 0; i < m.dim(); ++i) {
            for (int j = 0; j < m.dim(); ++j) {
                double direct;
                auto term = [&](double x) {
                    Vector u = m.score(c.theta, x);
                    return u[i] * u[j] * m.density(c.theta, x);
                };
                if (m.discrete()) {
                    direct = sum_discrete([&](long k) { return term(double(k)); },
                                          [&](long k) { return m.density(c.theta, double(k)); });
                } else {
                    direct = integrate(term, m.support());
                }
                CHECK(info(i, j) == doctest::Approx(direct).epsilon(1e-8));
            }
        }
    }
}

TEST_CASE("closed-form likelihood fits") {
    std::vector<double> xs = {0.2, 0.5, 0.9, 1.4, 2.0, 3.3};
    double mean = 0.0;
    for (double v : xs) mean += v;
    mean /= xs.size();
    double rms = 0.0;
    for (double v : xs) rms += (v - mean) * (v - mean);
    rms = std::sqrt(rms / xs.size());

    CHECK(NormalMean(1.0).mle(xs)[0] == doctest::Approx(mean).epsilon(1e-14));
    Vector ls = NormalLocationScale().mle(xs);
    CHECK(ls[0] == doctest::Approx(mean).epsilon(1e-14));
    CHECK(ls[1] == doctest::Approx(rms).epsilon(1e-14));
    CHECK(ExponentialMean().mle(xs)[0] == doctest::Approx(mean).epsilon(1e-14));
    CHECK(Poisson().mle({0, 1, 2, 0, 5})[0] == doctest::Approx(1.6).epsilon(1e-14));

    double rms0 = 0.0;
    for (double v : xs) rms0 += v * v;
    rms0 = std::sqrt(rms0 / xs.size());
    CHECK(NormalScale(0.0).mle(xs)[0] == doctest::Approx(rms0).epsilon(1e-14));

    CHECK_THROWS_AS(NormalLocationScale().mle({1.0, 1.0, 1.0}), DegenerateFitError);
}

TEST_CASE("robust starts use order statistics") {
    std::vector<double> xs = {1.0, 2.0, 3.0, 4.0, 100.0};
    CHECK(median(xs) == 3.0);
    CHECK(mad(xs) == 1.0);  // |x - 3| = {2,1,0,1,97} -> median 1
    Vector r = NormalLocationScale().robust_init(xs);
    CHECK(r[0] == 3.0);
    CHECK(r[1] == doctest::Approx(1.4826));
    CHECK(ExponentialMean().robust_init(xs)[0] == doctest::Approx(3.0 / std::log(2.0)));
}

TEST_CASE("model-side integral term agrees with direct quadrature") {
    for (const auto& c : model_sweep()) {
        for (const auto& g : gen_sweep()) {
            double fast = c.model->integral_term(g, c.theta);
            double slow = integral_term_reference(g, *c.model, c.theta);
            CHECK(fast == doctest::Approx(slow).epsilon(1e-8));
        }
    }
}

TEST_CASE("xi agrees with direct quadrature and differentiates the integral term") {
    for (const auto& c : model_sweep()) {
        for (const auto& g : gen_sweep()) {
            Vector fast = c.model->xi_vector(g, c.theta);
            Vector slow = xi_vector_reference(g, *c.model, c.theta);
            for (int j = 0; j < c.model->dim(); ++j) {
                CHECK(fast[j] == doctest::Approx(slow[j]).epsilon(1e-7));
            }
            for (int j = 0; j < c.model->dim(); ++j) {
                double h = 1e-5 * (1.0 + std::abs(c.theta[j]));
                Vector tp = c.theta, tm = c.theta;
                tp[j] += h;
                tm[j] -= h;
                double fd = (c.model->integral_term(g, tp) - c.model->integral_term(g, tm)) /
                            (2.0 * h);
                CHECK(fast[j] == doctest::Approx(fd).epsilon(5e-5));
            }
        }
    }
}

TEST_CASE("location model has identically zero xi") {
    NormalMean m(0.7);
    for (const auto& g : gen_sweep()) {
        CHECK(m.xi_vector(g, vec1(2.0))[0] == 0.0);
    }
}

TEST_CASE("weighted normal moment engine against direct quadrature") {
    ConvexGenerator g = ConvexGenerator::ewd(0.25);
    double sigma = 0.8;
    for (int wpow : {1, 2}) {
        NormalMoments mm = normal_weighted_moments(g, sigma, wpow);
        for (int p : {0, 2, 4}) {
            double direct = integrate(
                [&](double t) {
                    double phi = std::exp(-0.5 * t * t) / std::sqrt(2.0 * 3.14159265358979324);
                    double w = g.weight(phi / sigma);
                    return std::pow(t, p) * (wpow == 2 ? w * w : w) * phi;
                },
                IntegrationDomain::real_line());
            CHECK(mm.m[p] == doctest::Approx(direct).epsilon(1e-9));
        }
        CHECK(mm.m[1] == 0.0);
        CHECK(mm.m[3] == 0.0);
    }
    // likelihood weights reduce to raw moments
    NormalMoments kl = normal_weighted_moments(ConvexGenerator::kl(), 1.3, 1);
    CHECK(kl.m[0] == 1.0);
    CHECK(kl.m[2] == 1.0);
    CHECK(kl.m[4] == 3.0);
}

TEST_CASE("simulation respects the parameters") {
    Rng rng(77);
    for (const auto& c : model_sweep()) {
        double sum = 0.0;
        const int n = 40000;
        for (int i = 0; i < n; ++i) sum += c.model->simulate(c.theta, rng);
        double mean = sum / n;
        double expect;
        switch (c.model->kind()) {
            case ModelKind::normal_mean:
            case ModelKind::normal_location_scale:
                expect = c.theta[0];
                break;
            case ModelKind::normal_scale:
                expect = 0.0;
                break;
            default:
                expect = c.theta[0];
        }
        double scale = c.model->dim() == 2 ? c.theta[1] : 1.0 + std::abs(expect);
        CHECK(std::abs(mean - expect) < 5.0 * scale / std::sqrt(double(n)) + 0.01);
    }
}

TEST_CASE("coverage interval holds the mass the grids rely on") {
    for (const auto& c : model_sweep()) {
        if (c.model->discrete()) continue;
        auto [lo, hi] = c.model->coverage_interval(c.theta);
        double inside = integrate([&](double x) { return c.model->density(c.theta, x); },
                                  IntegrationDomain::interval(lo, hi));
        CHECK(inside == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("internal coordinates round trip") {
    NormalLocationScale ls;
    Vector th = vec2(-0.3, 0.7);
    Vector u = ls.to_internal(th);
    CHECK(u[0] == -0.3);
    CHECK(u[1] == doctest::Approx(std::log(0.7)));
    Vector back = ls.from_internal(u);
    CHECK(back[0] == doctest::Approx(th[0]).epsilon(1e-15));
    CHECK(back[1] == doctest::Approx(th[1]).epsilon(1e-15));
}

TEST_CASE("poisson pmf arithmetic") {
    Poisson p;
    Vector th = vec1(2.0);
    CHECK(p.density(th, 0.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    CHECK(p.density(th, 3.0) == doctest::Approx(std::exp(-2.0) * 8.0 / 6.0).epsilon(1e-13));
    CHECK_THROWS_AS(p.density(th, 2.5), DomainError);
    CHECK(p.discrete_upper(th) >= 20);
    // truncated support holds essentially all mass
    double mass = 0.0;
    for (long k = 0; k <= p.discrete_upper(th); ++k) mass += p.density(th, double(k));
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("minimum identifiable samples") {
    CHECK(NormalMean(1.0).min_sample() == 1);
    CHECK(NormalLocationScale().min_sample() == 2);
    CHECK(ExponentialMean().min_sample() == 1);
    CHECK_THROWS_AS(NormalLocationScale().mle({1.0}), EstimationError);
}

}  // TEST_SUITE
