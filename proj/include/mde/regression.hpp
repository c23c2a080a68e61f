#pragma once

#include <cstdint>
#include <utility>

#include "mde/generator.hpp"
#include "mde/eigen_utils.hpp"
#include "mde/optimize.hpp"

namespace mde {

// Fixed-design normal regression: y_i = x_i^T gamma + sigma e_i. The design
// matrix carries its intercept column explicitly.
struct RegressionData {
    Matrix x;
    Vector y;
    int n() const { return static_cast<int>(y.size()); }
    int s() const { return static_cast<int>(x.cols()); }
};

struct RegressionEstimate {
    Vector gamma;
    double sigma = 0.0;
    double objective = 0.0;
    int inliers = 0;       // observations with |standardized residual| <= 4
    bool guard_ok = false; // inliers >= max(s + 2, ceil(0.6 n))
    OptimizerReport report;
};

void validate_design(const RegressionData& d);
Vector ols(const RegressionData& d);

// Inhomogeneous-data objective: each observation contributes through its own
// fitted density, so the model-side term depends on sigma alone while the
// data term is averaged over the standardized residuals.
double objective_inh(const ConvexGenerator& gen, const RegressionData& d,
                     const Vector& gamma, double sigma);

// Value and gradient in (gamma, log sigma) coordinates.
std::pair<double, Vector> objective_inh_grad(const ConvexGenerator& gen,
                                             const RegressionData& d, const Vector& params);

// Least-median-of-squares fit over seeded elemental subsets; returns the
// coefficient vector and a rescaled-median residual scale.
std::pair<Vector, double> lms_elemental(const RegressionData& d, int trials = 500,
                                        std::uint64_t seed = 0x5EED1234ABCD0001ULL);

// Three starts (least squares with a rescaled-MAD scale, least squares with
// the ML scale, the elemental LMS fit), each refined by two quasi-Newton
// sweeps on the analytic gradient. Lowest objective among guard-passing
// candidates wins; if every candidate fails the guard the one keeping the
// most inliers is returned with guard_ok = false.
RegressionEstimate estimate_regression(const ConvexGenerator& gen, const RegressionData& d);

// At-model normalized estimating-equation matrices (Psi_n, Omega_n); both
// block-diagonal between the coefficient and scale blocks.
std::pair<Matrix, Matrix> psi_omega(const ConvexGenerator& gen, const RegressionData& d,
                                    const Vector& gamma, double sigma);

// tr(Psi^{-1} Omega Psi^{-1}) in closed block form; the variance part of the
// tuning risk.
double regression_trace_term(const ConvexGenerator& gen, const RegressionData& d,
                             double sigma);

}  // namespace mde
