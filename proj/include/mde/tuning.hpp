#pragma once

#include <string>
#include <vector>

#include "mde/asymptotics.hpp"
#include "mde/regression.hpp"

namespace mde {

struct TuningPoint {
    double beta = 0.0;
    Vector theta;
    double mse = 0.0;
    bool valid = false;
    std::string note;  // why the point was excluded, when it was
};

struct TuningResult {
    std::vector<TuningPoint> curve;
    Vector pilot;
    double beta_opt = 0.0;
    Vector theta_opt;
    double mse_opt = 0.0;
};

// 60 log-spaced candidates on [1e-3, 4].
std::vector<double> default_beta_grid();

// Estimated risk of theta_hat against the pilot: squared pilot distance plus
// the at-model variance trace over n. Raw (per-observation) scale; multiply
// by n for the sample-size-scaled convention used in summaries.
double mse_hat_iid(const ConvexGenerator& gen, const ParametricModel& model,
                   const Vector& theta_hat, const Vector& pilot, int n);

// Regression version; theta and pilot are (gamma, sigma) stacked.
double mse_hat_regression(const ConvexGenerator& gen, const RegressionData& d,
                          const Vector& theta_hat, const Vector& pilot);

// Scan the grid, pilot fixed at the unit-power member D(1); the smallest
// risk wins and ties resolve toward smaller beta. Fit failures (and, for
// regression, guard failures) are kept on the curve but excluded from the
// argmin.
TuningResult select_beta_iid(const ParametricModel& model, const std::vector<double>& data,
                             const std::vector<double>& grid = default_beta_grid());
TuningResult select_beta_regression(const RegressionData& d,
                                    const std::vector<double>& grid = default_beta_grid());

}  // namespace mde
