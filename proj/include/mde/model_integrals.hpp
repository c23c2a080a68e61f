#pragma once

#include "mde/generator.hpp"

namespace mde {

// Standard-normal weighted moments m[p] = integral of t^p w(phi(t)/sigma)^wpow
// phi(t) dt over the real line, p = 0..4. Odd moments are exactly zero by
// symmetry; even ones use a Gauss-Legendre rule on [0, 9] doubled. The node
// count rises to 600 when sigma*beta < 3e-3, where the EWD weight develops a
// sharp knee in the tail.
struct NormalMoments {
    double m[5];
};
NormalMoments normal_weighted_moments(const ConvexGenerator& gen, double sigma, int wpow);

// Model-side objective term C(sigma) = integral of [x B'(x) - B](f) dx for
// N(mu, sigma^2); independent of mu.
double normal_integral_term(const ConvexGenerator& gen, double sigma);

// Same for the exponential density with mean lambda. Closed form for every
// family (the EWD case reduces to the exponential integral).
double exponential_integral_term(const ConvexGenerator& gen, double lambda);

// d/d lambda of the above; the model-side piece of the exponential gradient.
double exponential_integral_term_dlambda(const ConvexGenerator& gen, double lambda);

}  // namespace mde
