#include "mde/special.hpp"

#include <cmath>
#include <cstdlib>

#include "mde/errors.hpp"

namespace mde {

namespace {

// sum_{k>=1} (-1)^{k+1} z^k / (k * k!), the entire part of E1's expansion.
double e1_series_tail(double z) {
    double term = 1.0;  // (-z)^k / k!
    double sum = 0.0;
    for (int k = 1; k <= 80; ++k) {
        term *= -z / k;
        double add = -term / k;
        sum += add;
        if (std::abs(add) < 1e-18 * (std::abs(sum) + 1e-300)) break;
    }
    return sum;
}

// Modified Lentz on E1(z) = exp(-z) / (z + 1 - 1/(z + 3 - 4/(z + 5 - ...))),
// a_i = -i^2, b_i = z + 2i + 1.
double e1_continued_fraction(double z) {
    const double tiny = 1e-300;
    double b = z + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 400; ++i) {
        double a = -static_cast<double>(i) * static_cast<double>(i);
        b += 2.0;
        d = b + a * d;
        if (std::abs(d) < tiny) d = tiny;
        c = b + a / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    return h * std::exp(-z);
}

}  // namespace

double exp_integral_e1(double z) {
    if (!(z > 0.0)) throw DomainError("exp_integral_e1: z must be positive");
    if (z < 1.0) return -kEulerGamma - std::log(z) + e1_series_tail(z);
    return e1_continued_fraction(z);
}

double e1_plus_log_gamma(double z) {
    if (!(z > 0.0)) throw DomainError("e1_plus_log_gamma: z must be positive");
    // Below 1 the series is the same alternating tail E1 itself uses; summing
    // it directly avoids adding and re-subtracting log(z) near the singularity.
    if (z < 1.0) return e1_series_tail(z);
    return kEulerGamma + std::log(z) + e1_continued_fraction(z);
}

}  // namespace mde
