#pragma once

#include <functional>
#include <vector>

#include "mde/errors.hpp"

namespace mde {

struct IntegrationDomain {
    enum class Kind { real_line, half_line, interval, discrete };

    Kind kind = Kind::real_line;
    double lower = 0.0;  // interval / half_line origin
    double upper = 0.0;  // interval only
    double tail = 1e-12; // discrete truncation: sum until mass >= 1 - tail

    static IntegrationDomain real_line() { return {Kind::real_line, 0, 0, 1e-12}; }
    static IntegrationDomain half_line(double origin = 0.0) {
        return {Kind::half_line, origin, 0, 1e-12};
    }
    static IntegrationDomain interval(double a, double b) {
        return {Kind::interval, a, b, 1e-12};
    }
    static IntegrationDomain discrete(double tail = 1e-12) {
        return {Kind::discrete, 0, 0, tail};
    }
};

struct GlRule {
    std::vector<double> x;  // nodes on [-1, 1], ascending
    std::vector<double> w;
};

// Cached Gauss-Legendre rule; nodes by Newton iteration on the Legendre
// recurrence, accurate to ~1e-15.
const GlRule& gl_rule(int n);

// Fixed Gauss-Legendre panel on [a, b].
double integrate_gl(const std::function<double(double)>& f, double a, double b, int n);

// Adaptive Gauss-Kronrod (7/15) with the usual compactifying transforms for
// infinite domains. Throws IntegrationError (carrying the best estimate) if
// the tolerance cannot be met. Not valid for discrete domains.
double integrate(const std::function<double(double)>& f, const IntegrationDomain& dom,
                 double tol = 1e-10);

// Sum of term(k) for k = 0, 1, 2, ... where mass(k) is the model pmf driving
// truncation: stop once cumulative mass >= 1 - tail and mass(k) < 1e-14.
double sum_discrete(const std::function<double(long)>& term,
                    const std::function<double(long)>& mass, double tail = 1e-12);

}  // namespace mde
