#pragma once

namespace mde {

inline constexpr double kEulerGamma = 0.57721566490153286061;

// Exponential integral E1(z) = Gamma(0, z) for z > 0. Power series below
// z = 1, modified Lentz continued fraction above; relative error < 1e-12
// across the switch.
double exp_integral_e1(double z);

// gamma + log(z) + E1(z) = integral of (1 - exp(-s))/s over (0, z].
// Evaluated by its own alternating series for small z, where the three-term
// form loses all significant digits.
double e1_plus_log_gamma(double z);

}  // namespace mde
