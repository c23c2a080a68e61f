#include <doctest.h>

#include <cmath>
#include <limits>

#include "mde/optimize.hpp"

using namespace mde;

namespace {

double rosenbrock(const Vector& v) {
    double a = 1.0 - v[0], b = v[1] - v[0] * v[0];
    return a * a + 100.0 * b * b;
}

std::pair<double, Vector> rosenbrock_fg(const Vector& v) {
    double a = 1.0 - v[0], b = v[1] - v[0] * v[0];
    Vector g(2);
    g[0] = -2.0 * a - 400.0 * v[0] * b;
    g[1] = 200.0 * b;
    return {a * a + 100.0 * b * b, g};
}

Vector vec2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

}  // namespace

TEST_SUITE("optimize") {

TEST_CASE("simplex solves the standard curved valley") {
    OptimizerReport rep = nelder_mead(rosenbrock, vec2(-1.2, 1.0), 1e-10, 1e-12, 4000);
    CHECK(rep.converged);
    CHECK(rep.x[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rep.x[1] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(rep.value < 1e-15);
    CHECK(rep.evaluations > 0);
}

TEST_CASE("simplex treats NaN regions as forbidden") {
    auto f = [](const Vector& v) {
        if (v[0] < -2.0) return std::numeric_limits<double>::quiet_NaN();
        return (v[0] - 1.0) * (v[0] - 1.0) + v[1] * v[1];
    };
    OptimizerReport rep = nelder_mead(f, vec2(-1.5, 0.5), 1e-10, 1e-12, 2000);
    CHECK(rep.converged);
    CHECK(rep.x[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("simplex refuses a non-finite start") {
    auto f = [](const Vector&) { return std::numeric_limits<double>::infinity(); };
    CHECK_THROWS_AS(nelder_mead(f, vec2(0, 0), 1e-8, 1e-10, 100), EstimationError);
}

TEST_CASE("quasi-newton with the analytic gradient reaches tight tolerance") {
    OptimizerReport rep = bfgs(rosenbrock_fg, vec2(-1.2, 1.0), 1e-10, 400);
    CHECK(rep.converged);
    CHECK(rep.grad_norm <= 1e-10);
    CHECK(rep.x[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.x[1] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("quasi-newton is exact on a quadratic in a couple of steps") {
    auto fg = [](const Vector& v) {
        Vector g(2);
        g[0] = 2.0 * (v[0] - 3.0);
        g[1] = 8.0 * (v[1] + 1.0);
        return std::make_pair((v[0] - 3.0) * (v[0] - 3.0) + 4.0 * (v[1] + 1.0) * (v[1] + 1.0), g);
    };
    OptimizerReport rep = bfgs(fg, vec2(10.0, 10.0), 1e-12, 100);
    CHECK(rep.converged);
    CHECK(rep.iterations <= 20);
    CHECK(rep.x[0] == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(rep.x[1] == doctest::Approx(-1.0).epsilon(1e-10));
}

TEST_CASE("finite-difference gradient wrapper matches the analytic one") {
    Vector at = vec2(-0.7, 2.3);
    auto fd = with_fd_gradient(rosenbrock);
    auto [fv, gv] = fd(at);
    auto [fa, ga] = rosenbrock_fg(at);
    CHECK(fv == doctest::Approx(fa).epsilon(1e-15));
    CHECK(gv[0] == doctest::Approx(ga[0]).epsilon(1e-6));
    CHECK(gv[1] == doctest::Approx(ga[1]).epsilon(1e-6));
}

TEST_CASE("fd_gradient uses a relative step") {
    auto f = [](const Vector& v) { return v[0] * v[0]; };
    Vector big(1);
    big[0] = 1e6;
    Vector g = fd_gradient(f, big);
    CHECK(g[0] == doctest::Approx(2e6).epsilon(1e-6));
}

TEST_CASE("combined driver polishes the simplex result") {
    MinimizeOptions opt;
    OptimizerReport rep = minimize(rosenbrock, vec2(-1.2, 1.0), opt);
    CHECK(rep.converged);
    CHECK(rep.x[0] == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(rep.x[1] == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("combined driver restarts out of a flat shelf") {
    // flat at the start, curved elsewhere: the simplex stalls, restarts rescue
    auto f = [](const Vector& v) {
        double r2 = v[0] * v[0] + v[1] * v[1];
        if (r2 < 1e-6) return 1.0;
        return 1.0 + (r2 - 4.0) * (r2 - 4.0);
    };
    MinimizeOptions opt;
    OptimizerReport rep = minimize(f, vec2(0.0, 0.0), opt);
    CHECK(rep.value <= 1.0 + 1e-9);
}

}  // TEST_SUITE
