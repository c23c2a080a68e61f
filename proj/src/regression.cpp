#include "mde/regression.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "mde/asymptotics.hpp"
#include "mde/model.hpp"
#include "mde/model_integrals.hpp"
#include "mde/rng.hpp"

namespace mde {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;

Vector standardized_residuals(const RegressionData& d, const Vector& gamma, double sigma) {
    return (d.y - d.x * gamma) / sigma;
}

}  // namespace

void validate_design(const RegressionData& d) {
    if (d.x.rows() != d.y.size()) throw DataError("regression: X and y sizes differ");
    if (d.n() < d.s() + 2) throw DataError("regression: need at least s + 2 observations");
    Eigen::ColPivHouseholderQR<Matrix> qr(d.x);
    if (qr.rank() < d.s()) throw DataError("regression: design matrix is rank deficient");
}

Vector ols(const RegressionData& d) {
    return d.x.colPivHouseholderQr().solve(d.y);
}

double objective_inh(const ConvexGenerator& gen, const RegressionData& d,
                     const Vector& gamma, double sigma) {
    if (!(sigma > 0.0)) throw DomainError("objective_inh: sigma must be positive");
    Vector t = standardized_residuals(d, gamma, sigma);
    double acc = 0.0;
    for (int i = 0; i < t.size(); ++i) {
        double f = kInvSqrt2Pi * std::exp(-0.5 * t[i] * t[i]) / sigma;
        acc += gen.b_prime(f);
    }
    return normal_integral_term(gen, sigma) - acc / d.n();
}

std::pair<double, Vector> objective_inh_grad(const ConvexGenerator& gen,
                                             const RegressionData& d, const Vector& params) {
    const int s = d.s();
    if (params.size() != s + 1) throw DomainError("objective_inh_grad: bad parameter length");
    Vector gamma = params.head(s);
    double sigma = std::exp(params[s]);

    Vector t = standardized_residuals(d, gamma, sigma);
    const double n = d.n();
    double acc = 0.0;
    Vector wt(t.size());
    double wt2m1 = 0.0;
    for (int i = 0; i < t.size(); ++i) {
        double f = kInvSqrt2Pi * std::exp(-0.5 * t[i] * t[i]) / sigma;
        acc += gen.b_prime(f);
        double w = gen.weight(f);
        wt[i] = w * t[i];
        wt2m1 += w * (t[i] * t[i] - 1.0);
    }
    double value = normal_integral_term(gen, sigma) - acc / n;

    NormalMoments m1 = normal_weighted_moments(gen, sigma, 1);
    double xi_sigma = (m1.m[2] - m1.m[0]) / sigma;

    Vector grad(s + 1);
    grad.head(s) = -(d.x.transpose() * wt) / (n * sigma);
    double sgrad = xi_sigma - wt2m1 / (n * sigma);
    grad[s] = sgrad * sigma;  // d/d log sigma
    return {value, grad};
}

std::pair<Vector, double> lms_elemental(const RegressionData& d, int trials,
                                        std::uint64_t seed) {
    validate_design(d);
    const int n = d.n(), s = d.s();
    Rng rng(seed);
    double best_med = std::numeric_limits<double>::infinity();
    Vector best_g;

    std::vector<int> idx(s);
    for (int trial = 0; trial < trials; ++trial) {
        int got = 0;
        while (got < s) {
            int j = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(n));
            bool dup = false;
            for (int k = 0; k < got; ++k) dup = dup || idx[k] == j;
            if (!dup) idx[got++] = j;
        }
        Matrix xs(s, s);
        Vector ys(s);
        for (int k = 0; k < s; ++k) {
            xs.row(k) = d.x.row(idx[k]);
            ys[k] = d.y[idx[k]];
        }
        Eigen::FullPivLU<Matrix> lu(xs);
        if (!lu.isInvertible()) continue;
        Vector g = lu.solve(ys);
        Vector r = d.y - d.x * g;
        std::vector<double> r2(n);
        for (int i = 0; i < n; ++i) r2[i] = r[i] * r[i];
        double med = median(std::move(r2));
        if (med < best_med) {
            best_med = med;
            best_g = g;
        }
    }
    if (best_g.size() == 0) throw EstimationError("lms_elemental: no solvable subset");

    double scale = 1.4826 * std::sqrt(best_med);
    if (scale < 1e-8) {
        Vector r = d.y - d.x * best_g;
        std::vector<double> rv(r.data(), r.data() + r.size());
        double m = median(rv);
        std::vector<double> dev(rv.size());
        for (std::size_t i = 0; i < rv.size(); ++i) dev[i] = std::abs(rv[i] - m);
        scale = std::max(1.4826 * median(std::move(dev)), 1e-6);
    }
    return {best_g, scale};
}

RegressionEstimate estimate_regression(const ConvexGenerator& gen, const RegressionData& d) {
    validate_design(d);
    const int n = d.n(), s = d.s();

    Vector g_ols = ols(d);
    Vector r = d.y - d.x * g_ols;
    std::vector<double> rv(r.data(), r.data() + r.size());
    double rm = median(rv);
    std::vector<double> dev(rv.size());
    for (std::size_t i = 0; i < rv.size(); ++i) dev[i] = std::abs(rv[i] - rm);
    double s_mad = 1.4826 * median(std::move(dev));
    double s_ml = std::sqrt(r.squaredNorm() / n);
    auto [g_lms, s_lms] = lms_elemental(d);

    struct Candidate {
        Vector gamma;
        double sigma;
        double value;
        int inliers;
        bool ok;
        OptimizerReport report;
    };
    std::vector<std::pair<Vector, double>> inits = {
        {g_ols, std::max(s_mad, 1e-6)}, {g_ols, s_ml}, {g_lms, s_lms}};

    ValueGrad fg = [&](const Vector& p) { return objective_inh_grad(gen, d, p); };
    const int guard = std::max(s + 2, static_cast<int>(std::ceil(0.6 * n)));

    bool have_best = false, have_fallback = false;
    Candidate best{}, fallback{};
    for (const auto& [g0, sig0] : inits) {
        if (!(sig0 > 0.0)) continue;
        Vector p0(s + 1);
        p0.head(s) = g0;
        p0[s] = std::log(sig0);
        OptimizerReport rep = bfgs(fg, p0, 1e-10, 400);
        rep = bfgs(fg, rep.x, 1e-12, 200);

        Candidate c;
        c.gamma = rep.x.head(s);
        c.sigma = std::exp(rep.x[s]);
        c.value = rep.value;
        c.report = rep;
        Vector t = standardized_residuals(d, c.gamma, c.sigma);
        c.inliers = 0;
        for (int i = 0; i < n; ++i) {
            if (std::abs(t[i]) <= 4.0) ++c.inliers;
        }
        c.ok = c.inliers >= guard;

        if (c.ok && (!have_best || c.value < best.value)) {
            best = c;
            have_best = true;
        }
        if (!have_fallback || c.inliers > fallback.inliers ||
            (c.inliers == fallback.inliers && c.value < fallback.value)) {
            fallback = c;
            have_fallback = true;
        }
    }
    const Candidate& win = have_best ? best : fallback;
    RegressionEstimate est;
    est.gamma = win.gamma;
    est.sigma = win.sigma;
    est.objective = win.value;
    est.inliers = win.inliers;
    est.guard_ok = win.ok;
    est.report = win.report;
    return est;
}

std::pair<Matrix, Matrix> psi_omega(const ConvexGenerator& gen, const RegressionData& d,
                                    const Vector& gamma, double sigma) {
    validate_design(d);
    if (gamma.size() != d.s()) throw DomainError("psi_omega: wrong coefficient length");
    if (!(sigma > 0.0)) throw DomainError("psi_omega: sigma must be positive");
    const int s = d.s();
    const double s2 = sigma * sigma;
    NormalMoments m1 = normal_weighted_moments(gen, sigma, 1);
    NormalMoments m2 = normal_weighted_moments(gen, sigma, 2);
    Matrix xtx = (d.x.transpose() * d.x) / static_cast<double>(d.n());

    double dw1 = m1.m[4] - 2.0 * m1.m[2] + m1.m[0];
    double dw2 = m2.m[4] - 2.0 * m2.m[2] + m2.m[0];
    double delta = m1.m[2] - m1.m[0];  // sigma * xi_sigma

    Matrix psi = Matrix::Zero(s + 1, s + 1);
    psi.topLeftCorner(s, s) = xtx * (m1.m[2] / s2);
    psi(s, s) = dw1 / s2;
    Matrix omega = Matrix::Zero(s + 1, s + 1);
    omega.topLeftCorner(s, s) = xtx * (m2.m[2] / s2);
    omega(s, s) = (dw2 - delta * delta) / s2;
    return {psi, omega};
}

double regression_trace_term(const ConvexGenerator& gen, const RegressionData& d,
                             double sigma) {
    if (!(sigma > 0.0)) throw DomainError("regression_trace_term: sigma must be positive");
    NormalMoments m1 = normal_weighted_moments(gen, sigma, 1);
    NormalMoments m2 = normal_weighted_moments(gen, sigma, 2);
    double dw1 = m1.m[4] - 2.0 * m1.m[2] + m1.m[0];
    double dw2 = m2.m[4] - 2.0 * m2.m[2] + m2.m[0];
    double delta = m1.m[2] - m1.m[0];
    Matrix xtx = (d.x.transpose() * d.x) / static_cast<double>(d.n());
    double tr_gamma =
        m2.m[2] / (m1.m[2] * m1.m[2]) * invert_spd(xtx, "regression_trace_term").trace();
    double tr_sigma = (dw2 - delta * delta) / (dw1 * dw1);
    return sigma * sigma * (tr_gamma + tr_sigma);
}

}  // namespace mde
