#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mde/eigen_utils.hpp"
#include "mde/generator.hpp"
#include "mde/iid.hpp"
#include "mde/model.hpp"

namespace mde {

// Affine restriction m(theta) = C theta - d = 0 with C of full row rank r.
// r = 0 (empty C) means "no restriction" and is accepted everywhere below.
class ConstraintSet {
public:
    ConstraintSet(Matrix c, Vector d);

    static ConstraintSet none(int p);
    // theta[index] = value as a one-row constraint.
    static ConstraintSet fix_component(int p, int index, double value);

    int r() const { return static_cast<int>(c_.rows()); }
    int p() const { return static_cast<int>(c_.cols()); }
    Vector residual(const Vector& theta) const { return c_ * theta - d_; }
    // M = dm^T/dtheta, p x r. Constant for affine m.
    Matrix m_jacobian() const { return c_.transpose(); }
    const Matrix& c() const { return c_; }
    const Vector& d() const { return d_; }

    // Indices fixed outright when every row of C is one-hot; empty optional
    // for general affine rows. Used to keep coordinate restrictions in the
    // model's internal (log-transformed) parameterization.
    std::optional<std::vector<std::pair<int, double>>> fixed_components() const;

private:
    Matrix c_;
    Vector d_;
};

// Minimum-divergence fit subject to the restriction. When `hints` is
// nonempty, exactly those full-length parameter vectors seed the search
// (infeasible ones are projected onto the constraint); otherwise the model's
// robust and ML fits are projected and used. Simplex-only refinement: the
// restricted surface is low dimensional and the tight simplex tolerances are
// what the reference statistics were produced with.
Estimate estimate_restricted(const ConvexGenerator& gen, const ParametricModel& model,
                             const std::vector<double>& data, const ConstraintSet& constraints,
                             const std::vector<Vector>& hints = {});

// Asymptotic covariance of the restricted estimator: with Q = J^-1 M (M^T J^-1 M)^-1
// and P = J^-1 - Q M^T J^-1, returns P K P. Reduces to the sandwich at r = 0.
Matrix restricted_vcov(const ConvexGenerator& gen, const ParametricModel& model,
                       const Vector& theta, const ConstraintSet& constraints);

// Divergence test statistic 2 n D_B2(f_hat, f_tilde). Continuous models use a
// fixed 600-node rule over the union of the two coverage intervals; discrete
// models sum over the union of the truncated supports.
double bdts(const ConvexGenerator& gen2, const ParametricModel& model, const Vector& theta_hat,
            const Vector& theta_tilde, int n);

// Weights of the null limit law sum lambda_i Z_i^2: the r nonzero eigenvalues
// of A_B2 * (B K B) with B = J^-1 M (M^T J^-1 M)^-1 M^T J^-1, everything
// evaluated at the restricted fit. gen1 drives estimation (J, K), gen2 the
// statistic (A). Throws ConsistencyError when the nonzero count is not r.
std::vector<double> null_eigenvalues(const ConvexGenerator& gen1, const ConvexGenerator& gen2,
                                     const ParametricModel& model, const Vector& theta_tilde,
                                     const ConstraintSet& constraints);

// P(sum lambda_i Z_i^2 >= stat) by Monte Carlo. reps below 10000 is an error:
// the tail probabilities quoted downstream are meaningless with fewer draws.
double mc_pvalue(const std::vector<double>& eigenvalues, double stat, int reps = 100000,
                 std::uint64_t seed = 0x5EEDC0DE);

struct TestResult {
    Vector theta_unrestricted;
    Vector theta_restricted;
    double statistic = 0.0;               // 2 n D_B2
    std::vector<double> eigenvalues;      // null law weights, descending
    double p_value = 1.0;
    int mc_reps = 0;
    std::uint64_t seed = 0;
    double beta = 0.0;                    // estimation tuning
    double gamma = 0.0;                   // statistic tuning
};

// Full test of H0: mu = mu0 for the normal location-scale model with EWD(beta)
// estimation and EWD(gamma) statistic (gamma defaults to beta).
TestResult ewdts_normal_mean(const std::vector<double>& data, double mu0, double beta,
                             std::optional<double> gamma = std::nullopt, int reps = 100000,
                             std::uint64_t seed = 0x5EEDC0DE);

}  // namespace mde
