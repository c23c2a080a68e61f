#include "mde/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mde/asymptotics.hpp"
#include "mde/optimize.hpp"
#include "mde/quadrature.hpp"

namespace mde {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ConstraintSet::ConstraintSet(Matrix c, Vector d) : c_(std::move(c)), d_(std::move(d)) {
    if (c_.cols() < 1) throw DomainError("ConstraintSet: parameter dimension must be >= 1");
    if (c_.rows() != d_.size()) throw DomainError("ConstraintSet: C rows and d length differ");
    if (c_.rows() > c_.cols()) throw DomainError("ConstraintSet: more restrictions than parameters");
    if (c_.rows() > 0) {
        Eigen::ColPivHouseholderQR<Matrix> qr(c_);
        if (qr.rank() < c_.rows()) {
            throw DomainError("ConstraintSet: C is rank deficient; drop redundant rows");
        }
    }
}

ConstraintSet ConstraintSet::none(int p) {
    if (p < 1) throw DomainError("ConstraintSet::none: bad dimension");
    return ConstraintSet(Matrix(0, p), Vector(0));
}

ConstraintSet ConstraintSet::fix_component(int p, int index, double value) {
    if (p < 1 || index < 0 || index >= p) throw DomainError("ConstraintSet::fix_component: bad index");
    if (!std::isfinite(value)) throw DomainError("ConstraintSet::fix_component: value not finite");
    Matrix c = Matrix::Zero(1, p);
    c(0, index) = 1.0;
    Vector d(1);
    d[0] = value;
    return ConstraintSet(std::move(c), std::move(d));
}

std::optional<std::vector<std::pair<int, double>>> ConstraintSet::fixed_components() const {
    std::vector<std::pair<int, double>> out;
    std::vector<char> seen(static_cast<std::size_t>(p()), 0);
    for (int i = 0; i < r(); ++i) {
        int col = -1;
        for (int j = 0; j < p(); ++j) {
            if (c_(i, j) != 0.0) {
                if (col >= 0) return std::nullopt;  // row couples two coordinates
                col = j;
            }
        }
        if (col < 0 || seen[static_cast<std::size_t>(col)]) return std::nullopt;
        seen[static_cast<std::size_t>(col)] = 1;
        out.emplace_back(col, d_[i] / c_(i, col));
    }
    return out;
}

namespace {

// Euclidean projection onto {C theta = d}; exact coordinate overwrite when
// the rows are one-hot.
Vector project_onto_constraint(const ConstraintSet& cs, const Vector& th) {
    if (cs.r() == 0) return th;
    Matrix cct = cs.c() * cs.c().transpose();
    Vector corr = cct.ldlt().solve(cs.residual(th));
    return th - cs.c().transpose() * corr;
}

struct RestrictedParam {
    // Maps the reduced optimization vector to a full parameter vector and back.
    std::function<Vector(const Vector&)> to_full;
    std::function<Vector(const Vector&)> to_reduced;
    // Projects a full-space residual onto the free directions.
    std::function<Vector(const Vector&)> project_residual;
    int free_dim = 0;
};

RestrictedParam make_param(const ParametricModel& model, const ConstraintSet& cs) {
    const int p = model.dim();
    RestrictedParam par;
    if (auto fixed = cs.fixed_components()) {
        // Free coordinates run through the model's internal transform so that
        // positive components are searched on the log scale, same as the
        // unrestricted fit.
        std::vector<char> is_fixed(static_cast<std::size_t>(p), 0);
        Vector fixed_value = Vector::Zero(p);
        for (auto& [idx, val] : *fixed) {
            is_fixed[static_cast<std::size_t>(idx)] = 1;
            fixed_value[idx] = val;
        }
        std::vector<int> free_idx;
        for (int j = 0; j < p; ++j) {
            if (!is_fixed[static_cast<std::size_t>(j)]) free_idx.push_back(j);
        }
        par.free_dim = static_cast<int>(free_idx.size());
        par.to_full = [&model, is_fixed, fixed_value, free_idx, p](const Vector& u) {
            Vector th(p);
            for (int j = 0; j < p; ++j) {
                if (is_fixed[static_cast<std::size_t>(j)]) th[j] = fixed_value[j];
            }
            for (std::size_t k = 0; k < free_idx.size(); ++k) {
                int j = free_idx[k];
                th[j] = model.positive_coord(j) ? std::exp(u[static_cast<int>(k)])
                                                : u[static_cast<int>(k)];
            }
            return th;
        };
        par.to_reduced = [&model, free_idx](const Vector& th) {
            Vector u(static_cast<int>(free_idx.size()));
            for (std::size_t k = 0; k < free_idx.size(); ++k) {
                int j = free_idx[k];
                double v = th[j];
                if (model.positive_coord(j)) {
                    if (!(v > 0.0)) throw DomainError("estimate_restricted: seed has a nonpositive scale");
                    v = std::log(v);
                }
                u[static_cast<int>(k)] = v;
            }
            return u;
        };
        par.project_residual = [free_idx](const Vector& res) {
            Vector out(static_cast<int>(free_idx.size()));
            for (std::size_t k = 0; k < free_idx.size(); ++k) out[static_cast<int>(k)] = res[free_idx[k]];
            return out;
        };
        return par;
    }

    // General affine rows: theta = theta_p + N phi with N an orthonormal null
    // basis of C. Positivity is handled by the domain guard, not a transform.
    Eigen::JacobiSVD<Matrix> svd(cs.c(), Eigen::ComputeFullV | Eigen::ComputeThinU);
    Matrix v = svd.matrixV();
    const int r = cs.r();
    Matrix nbasis = v.rightCols(p - r);
    Vector theta_p = svd.solve(cs.d());
    par.free_dim = p - r;
    par.to_full = [nbasis, theta_p](const Vector& phi) { return Vector(theta_p + nbasis * phi); };
    par.to_reduced = [nbasis, theta_p](const Vector& th) {
        return Vector(nbasis.transpose() * (th - theta_p));
    };
    par.project_residual = [nbasis](const Vector& res) { return Vector(nbasis.transpose() * res); };
    return par;
}

}  // namespace

Estimate estimate_restricted(const ConvexGenerator& gen, const ParametricModel& model,
                             const std::vector<double>& data, const ConstraintSet& constraints,
                             const std::vector<Vector>& hints) {
    const int p = model.dim();
    if (constraints.p() != p) throw DomainError("estimate_restricted: constraint dimension mismatch");
    if (static_cast<int>(data.size()) < model.min_sample()) {
        throw EstimationError("estimate_restricted: sample smaller than the model can identify");
    }
    if (constraints.r() == 0) {
        return estimate_iid(gen, model, data,
                            hints.empty() ? std::nullopt : std::optional<Vector>(hints.front()));
    }

    std::vector<Vector> seeds;
    if (!hints.empty()) {
        seeds = hints;
    } else {
        seeds.push_back(model.robust_init(data));
        try {
            seeds.push_back(model.mle(data));
        } catch (const EstimationError&) {
            // degenerate likelihood fit; the robust seed stands alone
        }
    }
    for (auto& s : seeds) {
        if (s.size() != p) throw DomainError("estimate_restricted: seed dimension mismatch");
        s = project_onto_constraint(constraints, s);
    }

    RestrictedParam par = make_param(model, constraints);
    if (par.free_dim == 0) {
        // Fully pinned: nothing to search.
        Vector th = par.to_full(Vector(0));
        if (!model.in_domain(th)) throw EstimationError("estimate_restricted: pinned point outside domain");
        Estimate est;
        est.theta = th;
        est.objective = objective_iid(gen, model, data, th);
        est.n = static_cast<int>(data.size());
        est.report.x = th;
        est.report.value = est.objective;
        est.report.converged = true;
        est.ee_residual = 0.0;
        return est;
    }

    Objective obj = [&](const Vector& u) {
        Vector th = par.to_full(u);
        if (!model.in_domain(th)) return kInf;
        return objective_iid(gen, model, data, th);
    };

    bool have_best = false;
    OptimizerReport best;
    for (const auto& s : seeds) {
        Vector u0;
        try {
            u0 = par.to_reduced(s);
        } catch (const DomainError&) {
            continue;
        }
        if (!std::isfinite(obj(u0))) continue;
        OptimizerReport rep = nelder_mead(obj, u0, 1e-12, 1e-14, 4000);
        if (!std::isfinite(rep.value)) continue;
        if (!have_best || rep.value < best.value - 1e-10) {
            best = rep;
            have_best = true;
        }
    }
    if (!have_best) throw EstimationError("estimate_restricted: no seed produced a finite fit");
    if (!best.converged) throw EstimationError("estimate_restricted: simplex did not converge");

    Estimate est;
    est.theta = par.to_full(best.x);
    est.objective = best.value;
    est.n = static_cast<int>(data.size());
    est.report = best;

    // Residual of the estimating equation along the free directions only;
    // binding restrictions leave the remaining components nonzero by design.
    Vector mean_uw = Vector::Zero(p);
    for (double x : data) {
        double f = model.density(est.theta, x);
        if (f <= 0.0) continue;  // w(0) = 0 for every non-likelihood member
        mean_uw += model.score(est.theta, x) * gen.weight(f);
    }
    mean_uw /= static_cast<double>(data.size());
    Vector res = mean_uw - model.xi_vector(gen, est.theta);
    est.ee_residual = par.project_residual(res).lpNorm<Eigen::Infinity>();
    return est;
}

Matrix restricted_vcov(const ConvexGenerator& gen, const ParametricModel& model,
                       const Vector& theta, const ConstraintSet& constraints) {
    if (constraints.p() != model.dim()) throw DomainError("restricted_vcov: dimension mismatch");
    AsymptoticsBundle mm = model_matrices(gen, model, theta);
    Matrix jinv = invert_spd(mm.j, "restricted_vcov: J");
    Matrix pmat;
    if (constraints.r() == 0) {
        pmat = jinv;
    } else {
        Matrix m = constraints.m_jacobian();
        Matrix tinv = invert_spd(m.transpose() * jinv * m, "restricted_vcov: M^T J^-1 M");
        Matrix q = jinv * m * tinv;
        pmat = jinv - q * m.transpose() * jinv;
    }
    Matrix sigma = pmat * mm.k * pmat.transpose();
    return 0.5 * (sigma + sigma.transpose());
}

double bdts(const ConvexGenerator& gen2, const ParametricModel& model, const Vector& theta_hat,
            const Vector& theta_tilde, int n) {
    if (n < 1) throw DomainError("bdts: n must be >= 1");
    if (theta_hat.size() != model.dim() || theta_tilde.size() != model.dim()) {
        throw DomainError("bdts: parameter dimension mismatch");
    }
    if (!model.in_domain(theta_hat) || !model.in_domain(theta_tilde)) {
        throw DomainError("bdts: parameter outside the model domain");
    }

    DensityGrid grid;
    if (model.discrete()) {
        long hi = std::max(model.discrete_upper(theta_hat), model.discrete_upper(theta_tilde));
        for (long k = 0; k <= hi; ++k) {
            double x = static_cast<double>(k);
            grid.x.push_back(x);
            grid.wts.push_back(1.0);
            grid.g.push_back(model.density(theta_hat, x));
            grid.f.push_back(model.density(theta_tilde, x));
        }
    } else {
        auto [lo1, hi1] = model.coverage_interval(theta_hat);
        auto [lo2, hi2] = model.coverage_interval(theta_tilde);
        double lo = std::min(lo1, lo2), hi = std::max(hi1, hi2);
        const GlRule& rule = gl_rule(600);
        double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
            double x = mid + half * rule.x[i];
            grid.x.push_back(x);
            grid.wts.push_back(half * rule.w[i]);
            grid.g.push_back(model.density(theta_hat, x));
            grid.f.push_back(model.density(theta_tilde, x));
        }
    }

    double d = divergence(gen2, grid);
    if (d < 0.0) {
        if (d < -1e-8) throw ConsistencyError("bdts: divergence negative beyond round-off");
        d = 0.0;
    }
    return 2.0 * static_cast<double>(n) * d;
}

std::vector<double> null_eigenvalues(const ConvexGenerator& gen1, const ConvexGenerator& gen2,
                                     const ParametricModel& model, const Vector& theta_tilde,
                                     const ConstraintSet& constraints) {
    const int r = constraints.r();
    if (r == 0) throw DomainError("null_eigenvalues: no restriction; the statistic is degenerate");
    if (constraints.p() != model.dim()) throw DomainError("null_eigenvalues: dimension mismatch");

    AsymptoticsBundle mm1 = model_matrices(gen1, model, theta_tilde);
    AsymptoticsBundle mm2 = model_matrices(gen2, model, theta_tilde);
    Matrix jinv = invert_spd(mm1.j, "null_eigenvalues: J");
    Matrix m = constraints.m_jacobian();
    Matrix tinv = invert_spd(m.transpose() * jinv * m, "null_eigenvalues: M^T J^-1 M");
    Matrix b = jinv * m * tinv * m.transpose() * jinv;
    Matrix s = b * mm1.k * b;
    s = 0.5 * (s + s.transpose());

    std::vector<double> all = product_eigvals_sym_psd(mm2.j, s);
    double top = 0.0;
    for (double v : all) top = std::max(top, std::abs(v));
    double thr = 1e-8 * std::max(top, 1e-300);
    std::vector<double> nonzero;
    for (double v : all) {
        if (v > thr) {
            nonzero.push_back(v);
        } else if (v < -thr) {
            throw ConsistencyError("null_eigenvalues: negative weight in the limit law");
        }
    }
    if (static_cast<int>(nonzero.size()) != r) {
        throw ConsistencyError("null_eigenvalues: nonzero count does not match the restriction count");
    }
    return nonzero;  // already descending
}

double mc_pvalue(const std::vector<double>& eigenvalues, double stat, int reps,
                 std::uint64_t seed) {
    if (eigenvalues.empty()) throw DomainError("mc_pvalue: no eigenvalues");
    for (double v : eigenvalues) {
        if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("mc_pvalue: weights must be positive");
    }
    if (reps < 10000) throw DomainError("mc_pvalue: need at least 10000 replicates");
    if (!std::isfinite(stat)) throw DomainError("mc_pvalue: statistic not finite");

    Rng rng(seed);
    long exceed = 0;
    for (int i = 0; i < reps; ++i) {
        double s = 0.0;
        for (double lam : eigenvalues) {
            double z = rng.normal();
            s += lam * z * z;
        }
        if (s >= stat) ++exceed;
    }
    return static_cast<double>(exceed) / static_cast<double>(reps);
}

TestResult ewdts_normal_mean(const std::vector<double>& data, double mu0, double beta,
                             std::optional<double> gamma, int reps, std::uint64_t seed) {
    if (!(beta > 0.0)) throw DomainError("ewdts_normal_mean: beta must be positive");
    double g = gamma.value_or(beta);
    if (!(g > 0.0)) throw DomainError("ewdts_normal_mean: gamma must be positive");
    if (!std::isfinite(mu0)) throw DomainError("ewdts_normal_mean: mu0 not finite");
    if (data.size() < 2) throw EstimationError("ewdts_normal_mean: need at least two observations");

    NormalLocationScale model;
    ConvexGenerator gen_b = ConvexGenerator::ewd(beta);
    ConvexGenerator gen_g = ConvexGenerator::ewd(g);

    Estimate hat = estimate_iid(gen_b, model, data);

    ConstraintSet cs = ConstraintSet::fix_component(2, 0, mu0);
    double ssq = 0.0;
    for (double x : data) ssq += (x - mu0) * (x - mu0);
    double s0 = std::max(std::sqrt(ssq / static_cast<double>(data.size())), 1e-12);
    Vector h1(2), h2(2);
    h1 << mu0, hat.theta[1];
    h2 << mu0, s0;
    Estimate til = estimate_restricted(gen_b, model, data, cs, {h1, h2});

    TestResult res;
    res.theta_unrestricted = hat.theta;
    res.theta_restricted = til.theta;
    res.statistic = bdts(gen_g, model, hat.theta, til.theta, static_cast<int>(data.size()));
    res.eigenvalues = null_eigenvalues(gen_b, gen_g, model, til.theta, cs);
    res.p_value = mc_pvalue(res.eigenvalues, res.statistic, reps, seed);
    res.mc_reps = reps;
    res.seed = seed;
    res.beta = beta;
    res.gamma = g;
    return res;
}

}  // namespace mde
