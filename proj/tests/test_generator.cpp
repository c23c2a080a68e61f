#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <vector>

#include "mde/generator.hpp"

using namespace mde;

namespace {

// central differences at a relative step, for derivative cross-checks
double fd1(const ConvexGenerator& g, double x, double h) {
    return (g.b(x + h) - g.b(x - h)) / (2.0 * h);
}

std::vector<ConvexGenerator> positive_family_sweep() {
    return {ConvexGenerator::ewd(0.25), ConvexGenerator::ewd(1.0),  ConvexGenerator::ewd(4.0),
            ConvexGenerator::dpd(0.5),  ConvexGenerator::dpd(1.0),  ConvexGenerator::dpd(0.3),
            ConvexGenerator::kl(),      ConvexGenerator::l2()};
}

}  // namespace

TEST_SUITE("generator") {

TEST_CASE("closed form anchors frozen from arbitrary-precision evaluation") {
    ConvexGenerator e1 = ConvexGenerator::ewd(1.0);
    CHECK(e1.b(1.0) == doctest::Approx(0.4287201581256108).epsilon(1e-12));
    CHECK(e1.b_prime(1.0) == doctest::Approx(0.7965995992970531).epsilon(1e-12));

    ConvexGenerator e2 = ConvexGenerator::ewd(2.0);
    CHECK(e2.b(0.5) == doctest::Approx(0.06000040296988048).epsilon(1e-12));
    CHECK(e2.b(0.01) == doctest::Approx(2.4979184014765620e-5).epsilon(1e-12));  // series branch

    // large-argument case: a fixed-length series loses the tolerance here
    ConvexGenerator e015 = ConvexGenerator::ewd(0.15);
    CHECK(e015.b(3.0) == doctest::Approx(7.868843815352464).epsilon(1e-12));

    ConvexGenerator e07 = ConvexGenerator::ewd(0.7);
    CHECK(e07.b_prime(0.3) == doctest::Approx(0.3866975576289744).epsilon(1e-12));
}

TEST_CASE("series and closed form agree across the branch point") {
    for (double beta : {0.4, 1.0, 3.0}) {
        ConvexGenerator g = ConvexGenerator::ewd(beta);
        double z0 = 1e-2;  // branch switches at z = x/beta = 1e-2
        for (double f : {0.9, 0.999, 1.001, 1.1}) {
            double x = f * z0 * beta;
            double lo = g.b(x * (1.0 - 1e-9));
            double hi = g.b(x * (1.0 + 1e-9));
            CHECK(lo == doctest::Approx(hi).epsilon(1e-7));
        }
    }
}

TEST_CASE("derivative ladder is internally consistent") {
    for (const auto& g : positive_family_sweep()) {
        for (double x : {0.08, 0.5, 1.3, 3.0}) {
            double h = 1e-6 * (1.0 + x);
            CHECK(g.b_prime(x) == doctest::Approx(fd1(g, x, h)).epsilon(1e-6));
            double d2 = (g.b_prime(x + h) - g.b_prime(x - h)) / (2.0 * h);
            CHECK(g.b_second(x) == doctest::Approx(d2).epsilon(1e-6));
            double d3 = (g.b_second(x + h) - g.b_second(x - h)) / (2.0 * h);
            CHECK(g.b_third(x) == doctest::Approx(d3).epsilon(2e-5));
        }
    }
}

TEST_CASE("weight identities") {
    for (const auto& g : positive_family_sweep()) {
        for (double t : {0.05, 0.4, 1.0, 2.5}) {
            // w(t) = B''(t) t
            CHECK(g.weight(t) == doctest::Approx(g.b_second(t) * t).epsilon(1e-12));
            // w'(t) by central difference
            double h = 1e-6 * (1.0 + t);
            double wd = (g.weight(t + h) - g.weight(t - h)) / (2.0 * h);
            CHECK(g.weight_prime(t) == doctest::Approx(wd).epsilon(1e-5));
            // x B'(x) - B(x) is the antiderivative of w
            CHECK(g.antiderivative_term(t) ==
                  doctest::Approx(t * g.b_prime(t) - g.b(t)).epsilon(1e-10));
        }
    }
}

TEST_CASE("antiderivative_term integrates the weight from zero") {
    for (const auto& g : positive_family_sweep()) {
        double x = 1.7;
        // trapezoid on a fine grid, skipping the origin where DPD(<1) w' blows up
        int m = 20000;
        double acc = 0.0;
        for (int i = 0; i < m; ++i) {
            double a = x * i / m, b = x * (i + 1) / m;
            double wa = (i == 0) ? g.weight(1e-300) : g.weight(a);
            acc += 0.5 * (wa + g.weight(b)) * (b - a);
        }
        CHECK(g.antiderivative_term(x) == doctest::Approx(acc).epsilon(1e-6));
    }
    CHECK(ConvexGenerator::ewd(0.5).antiderivative_term(0.0) == 0.0);
}

TEST_CASE("exponentially weighted family limits and bounds") {
    ConvexGenerator g = ConvexGenerator::ewd(0.8);
    CHECK(g.weight(0.0) == 0.0);
    CHECK(g.weight(1e4) == doctest::Approx(1.0).epsilon(1e-12));
    double prev = -1.0;
    for (double t = 0.1; t < 5.0; t += 0.3) {
        double w = g.weight(t);
        CHECK(w > prev);  // monotone
        CHECK(w > 0.0);
        CHECK(w < 1.0);
        prev = w;
    }
    // B''(0+) = 1/beta continuation
    CHECK(g.b_second(1e-12) == doctest::Approx(1.0 / 0.8).epsilon(1e-9));
}

TEST_CASE("power family forms") {
    double a = 0.5;
    ConvexGenerator g = ConvexGenerator::dpd(a);
    for (double x : {0.3, 1.0, 2.0}) {
        CHECK(g.b(x) == doctest::Approx(std::pow(x, 1 + a) / (a * (1 + a))).epsilon(1e-13));
        CHECK(g.weight(x) == doctest::Approx(std::pow(x, a)).epsilon(1e-13));
    }
    // alpha = 1 has constant weight slope
    CHECK(ConvexGenerator::dpd(1.0).weight_prime(0.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(ConvexGenerator::dpd(0.5).weight_prime(0.0), DomainError);
}

TEST_CASE("likelihood members") {
    CHECK(ConvexGenerator::kl().is_mle());
    CHECK(ConvexGenerator::ewd(0.0).is_mle());
    CHECK(ConvexGenerator::dpd(0.0).is_mle());
    CHECK_FALSE(ConvexGenerator::ewd(0.1).is_mle());
    CHECK_FALSE(ConvexGenerator::l2().is_mle());

    // the degenerate tags refuse direct generator evaluation
    CHECK_THROWS_AS(ConvexGenerator::ewd(0.0).b(1.0), DomainError);
    CHECK_THROWS_AS(ConvexGenerator::dpd(0.0).b_prime(1.0), DomainError);
    // but expose the shared likelihood limits where those are well defined
    CHECK(ConvexGenerator::ewd(0.0).weight(0.7) == 1.0);
    CHECK(ConvexGenerator::dpd(0.0).weight(0.7) == 1.0);
    CHECK(ConvexGenerator::ewd(0.0).antiderivative_term(0.7) == doctest::Approx(0.7));

    ConvexGenerator kl = ConvexGenerator::kl();
    CHECK(kl.b(1.0) == 0.0);
    CHECK(kl.b(2.0) == doctest::Approx(2.0 * std::log(2.0)));
    CHECK(kl.weight(5.0) == 1.0);
}

TEST_CASE("names identify family and tuning") {
    CHECK(ConvexGenerator::ewd(0.25).name() == "E(0.25)");
    CHECK(ConvexGenerator::dpd(0.05).name() == "D(0.05)");
    CHECK(ConvexGenerator::kl().name() == "KL");
    CHECK(ConvexGenerator::l2().name() == "L2");
}

TEST_CASE("convexity on a positive grid") {
    for (const auto& g : positive_family_sweep()) {
        for (double x = 0.05; x < 6.0; x += 0.25) CHECK(g.b_second(x) > 0.0);
    }
}

TEST_CASE("divergence of a density from itself is exactly zero") {
    DensityGrid grid;
    for (int i = 0; i < 50; ++i) {
        double x = -3.0 + 6.0 * i / 49.0;
        double f = std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979324);
        grid.x.push_back(x);
        grid.wts.push_back(6.0 / 49.0);
        grid.g.push_back(f);
        grid.f.push_back(f);
    }
    for (const auto& g : positive_family_sweep()) CHECK(divergence(g, grid) == 0.0);
}

TEST_CASE("divergence between distinct densities is positive") {
    DensityGrid grid;
    auto phi = [](double x, double m) {
        return std::exp(-0.5 * (x - m) * (x - m)) / std::sqrt(2.0 * 3.14159265358979324);
    };
    for (int i = 0; i < 400; ++i) {
        double x = -8.0 + 16.0 * i / 399.0;
        grid.x.push_back(x);
        grid.wts.push_back(16.0 / 399.0);
        grid.g.push_back(phi(x, 0.0));
        grid.f.push_back(phi(x, 0.6));
    }
    for (const auto& g : positive_family_sweep()) CHECK(divergence(g, grid) > 0.0);
}

TEST_CASE("zero-density handling in divergences") {
    DensityGrid grid;
    grid.x = {0.0, 1.0};
    grid.wts = {1.0, 1.0};
    grid.g = {0.5, 0.0};
    grid.f = {0.0, 0.5};
    // bounded-slope families take B(g) at the f = 0 node
    ConvexGenerator e = ConvexGenerator::ewd(1.0);
    CHECK(divergence(e, grid) ==
          doctest::Approx(e.b(0.5) + (0.0 - e.b(0.5) - (0.0 - 0.5) * e.b_prime(0.5))));
    CHECK(divergence(ConvexGenerator::l2(), grid) > 0.0);
    // the likelihood limit rejects mass where the reference vanishes
    CHECK_THROWS_AS(divergence(ConvexGenerator::kl(), grid), DomainError);
}

}  // TEST_SUITE
