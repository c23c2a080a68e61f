#include "mde/tuning.hpp"

#include <cmath>

namespace mde {

std::vector<double> default_beta_grid() {
    std::vector<double> grid(60);
    double lo = std::log(1e-3), hi = std::log(4.0);
    for (int i = 0; i < 60; ++i) {
        grid[i] = std::exp(lo + (hi - lo) * i / 59.0);
    }
    return grid;
}

double mse_hat_iid(const ConvexGenerator& gen, const ParametricModel& model,
                   const Vector& theta_hat, const Vector& pilot, int n) {
    if (n < 1) throw DomainError("mse_hat_iid: n must be positive");
    if (pilot.size() != theta_hat.size()) throw DomainError("mse_hat_iid: pilot size mismatch");
    AsymptoticsBundle b = model_matrices(gen, model, theta_hat);
    return (theta_hat - pilot).squaredNorm() + b.sandwich.trace() / n;
}

double mse_hat_regression(const ConvexGenerator& gen, const RegressionData& d,
                          const Vector& theta_hat, const Vector& pilot) {
    if (theta_hat.size() != d.s() + 1 || pilot.size() != theta_hat.size()) {
        throw DomainError("mse_hat_regression: parameter sizes mismatch");
    }
    double sigma = theta_hat[d.s()];
    return (theta_hat - pilot).squaredNorm() +
           regression_trace_term(gen, d, sigma) / d.n();
}

TuningResult select_beta_iid(const ParametricModel& model, const std::vector<double>& data,
                             const std::vector<double>& grid) {
    if (grid.empty()) throw DomainError("select_beta_iid: empty grid");
    TuningResult result;
    result.pilot = estimate_iid(ConvexGenerator::dpd(1.0), model, data).theta;

    bool have_best = false;
    for (double beta : grid) {
        TuningPoint pt;
        pt.beta = beta;
        try {
            Estimate est = estimate_iid(ConvexGenerator::ewd(beta), model, data);
            pt.theta = est.theta;
            pt.mse = mse_hat_iid(ConvexGenerator::ewd(beta), model, est.theta,
                                 result.pilot, est.n);
            pt.valid = true;
        } catch (const Error& e) {
            pt.note = e.what();
        }
        if (pt.valid && (!have_best || pt.mse < result.mse_opt - 1e-15)) {
            result.beta_opt = pt.beta;
            result.theta_opt = pt.theta;
            result.mse_opt = pt.mse;
            have_best = true;
        }
        result.curve.push_back(std::move(pt));
    }
    if (!have_best) throw EstimationError("select_beta_iid: every candidate failed");
    return result;
}

TuningResult select_beta_regression(const RegressionData& d,
                                    const std::vector<double>& grid) {
    if (grid.empty()) throw DomainError("select_beta_regression: empty grid");
    TuningResult result;
    RegressionEstimate pilot_fit = estimate_regression(ConvexGenerator::dpd(1.0), d);
    result.pilot = Vector(d.s() + 1);
    result.pilot.head(d.s()) = pilot_fit.gamma;
    result.pilot[d.s()] = pilot_fit.sigma;

    bool have_best = false;
    for (double beta : grid) {
        TuningPoint pt;
        pt.beta = beta;
        try {
            RegressionEstimate est = estimate_regression(ConvexGenerator::ewd(beta), d);
            pt.theta = Vector(d.s() + 1);
            pt.theta.head(d.s()) = est.gamma;
            pt.theta[d.s()] = est.sigma;
            pt.mse = mse_hat_regression(ConvexGenerator::ewd(beta), d, pt.theta,
                                        result.pilot);
            // A fit that had to fall back to the most-inliers candidate never
            // found a trustworthy root; keep it off the argmin.
            pt.valid = est.guard_ok;
            if (!est.guard_ok) pt.note = "guard failed: fit keeps too few inliers";
        } catch (const Error& e) {
            pt.note = e.what();
        }
        if (pt.valid && (!have_best || pt.mse < result.mse_opt - 1e-15)) {
            result.beta_opt = pt.beta;
            result.theta_opt = pt.theta;
            result.mse_opt = pt.mse;
            have_best = true;
        }
        result.curve.push_back(std::move(pt));
    }
    if (!have_best) throw EstimationError("select_beta_regression: every candidate failed");
    return result;
}

}  // namespace mde
