#pragma once

#include <vector>

#include "mde/iid.hpp"
#include "mde/model.hpp"

namespace mde {

struct AsymptoticsBundle {
    Matrix j;         // curvature of the estimating equations
    Matrix k;         // variance of the estimating function
    Vector xi;        // model-side centering term
    Matrix sandwich;  // J^{-1} K J^{-1}
};

// Invert with a definiteness check; on failure reports the direction along
// which the matrix collapses.
Matrix invert_spd(const Matrix& m, const char* who);

// At-model forms: J = int u u^T w(f) f, K = int u u^T w(f)^2 f - xi xi^T.
AsymptoticsBundle model_matrices(const ConvexGenerator& gen, const ParametricModel& model,
                                 const Vector& theta);

// Plug-in forms at theta_hat with the empirical distribution replacing G
// where it appears; K from centered per-observation estimating functions
// (n-1 divisor), J from the pointwise information kernel.
AsymptoticsBundle empirical_matrices(const ConvexGenerator& gen,
                                     const ParametricModel& model, const Vector& theta_hat,
                                     const std::vector<double>& data);

// Influence function at y under the model: J^{-1} [u(y) w(f(y)) - xi].
Vector influence(const ConvexGenerator& gen, const ParametricModel& model,
                 const Vector& theta, double y);

// Asymptotic efficiency of the fit relative to the likelihood estimator for
// one parameter component: (I^{-1})_cc / (J^{-1} K J^{-1})_cc.
double are(const ConvexGenerator& gen, const ParametricModel& model, const Vector& theta,
           int component = 0);

}  // namespace mde
