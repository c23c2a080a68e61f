#include "mde/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mde/errors.hpp"
#include "mde/rng.hpp"

namespace mde {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_eval(const Objective& f, const Vector& x, int& evals) {
    ++evals;
    double v = f(x);
    return std::isnan(v) ? kInf : v;
}

}  // namespace

Vector fd_gradient(const Objective& f, const Vector& x) {
    Vector g(x.size());
    Vector xp = x;
    for (int i = 0; i < x.size(); ++i) {
        double h = 1e-6 * (1.0 + std::abs(x[i]));
        double xi = x[i];
        xp[i] = xi + h;
        double fp = f(xp);
        xp[i] = xi - h;
        double fm = f(xp);
        xp[i] = xi;
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

ValueGrad with_fd_gradient(const Objective& f) {
    return [f](const Vector& x) { return std::make_pair(f(x), fd_gradient(f, x)); };
}

OptimizerReport nelder_mead(const Objective& f, const Vector& init, double xatol,
                            double fatol, int maxiter) {
    const int n = static_cast<int>(init.size());
    if (n < 1) throw DomainError("nelder_mead: empty parameter vector");
    const double rho = 1.0, chi = 2.0, psi = 0.5, sigma = 0.5;

    int evals = 0;
    std::vector<Vector> sim(n + 1, init);
    for (int k = 0; k < n; ++k) {
        sim[k + 1][k] = (init[k] != 0.0) ? 1.05 * init[k] : 2.5e-4;
    }
    std::vector<double> fs(n + 1);
    for (int k = 0; k <= n; ++k) fs[k] = safe_eval(f, sim[k], evals);
    if (!std::isfinite(fs[0])) {
        throw EstimationError("nelder_mead: objective not finite at init");
    }

    auto order = [&]() {
        std::vector<int> idx(n + 1);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(),
                         [&](int a, int b) { return fs[a] < fs[b]; });
        std::vector<Vector> s2;
        std::vector<double> f2;
        s2.reserve(n + 1);
        f2.reserve(n + 1);
        for (int i : idx) {
            s2.push_back(sim[i]);
            f2.push_back(fs[i]);
        }
        sim.swap(s2);
        fs.swap(f2);
    };
    order();

    int iter = 0;
    bool converged = false;
    while (iter < maxiter) {
        double xspread = 0.0, fspread = 0.0;
        for (int k = 1; k <= n; ++k) {
            xspread = std::max(xspread, (sim[k] - sim[0]).cwiseAbs().maxCoeff());
            fspread = std::max(fspread, std::abs(fs[k] - fs[0]));
        }
        if (xspread <= xatol && fspread <= fatol) {
            converged = true;
            break;
        }
        ++iter;

        Vector centroid = Vector::Zero(n);
        for (int k = 0; k < n; ++k) centroid += sim[k];
        centroid /= n;

        Vector xr = centroid + rho * (centroid - sim[n]);
        double fr = safe_eval(f, xr, evals);
        bool shrink = false;
        if (fr < fs[0]) {
            Vector xe = centroid + rho * chi * (centroid - sim[n]);
            double fe = safe_eval(f, xe, evals);
            if (fe < fr) {
                sim[n] = xe;
                fs[n] = fe;
            } else {
                sim[n] = xr;
                fs[n] = fr;
            }
        } else if (fr < fs[n - 1]) {
            sim[n] = xr;
            fs[n] = fr;
        } else if (fr < fs[n]) {
            Vector xc = centroid + psi * rho * (centroid - sim[n]);
            double fc = safe_eval(f, xc, evals);
            if (fc <= fr) {
                sim[n] = xc;
                fs[n] = fc;
            } else {
                shrink = true;
            }
        } else {
            Vector xcc = centroid - psi * (centroid - sim[n]);
            double fcc = safe_eval(f, xcc, evals);
            if (fcc < fs[n]) {
                sim[n] = xcc;
                fs[n] = fcc;
            } else {
                shrink = true;
            }
        }
        if (shrink) {
            for (int k = 1; k <= n; ++k) {
                sim[k] = sim[0] + sigma * (sim[k] - sim[0]);
                fs[k] = safe_eval(f, sim[k], evals);
            }
        }
        order();
    }

    OptimizerReport rep;
    rep.x = sim[0];
    rep.value = fs[0];
    rep.iterations = iter;
    rep.evaluations = evals;
    rep.converged = converged;
    return rep;
}

namespace {

struct LinePoint {
    double a, value, slope;
};

// Strong-Wolfe line search (c1 = 1e-4, c2 = 0.9): bracket then bisection zoom.
bool wolfe_search(const ValueGrad& fg, const Vector& x, const Vector& d, double f0,
                  const Vector& g0, double& step, Vector& x_out, double& f_out,
                  Vector& g_out, int& evals) {
    const double c1 = 1e-4, c2 = 0.9;
    double d0 = g0.dot(d);
    if (d0 >= 0.0) return false;

    auto probe = [&](double a) {
        ++evals;
        Vector xa = x + a * d;
        auto [v, g] = fg(xa);
        if (std::isnan(v)) v = kInf;
        return std::tuple<double, Vector, Vector>(v, g, xa);
    };

    double a_prev = 0.0, f_prev = f0, d_prev = d0;
    double a = std::min(step, 1.0);
    double a_lo = 0, a_hi = 0, f_lo = 0;
    bool bracketed = false;
    for (int it = 0; it < 25 && !bracketed; ++it) {
        auto [v, g, xa] = probe(a);
        double da = g.dot(d);
        if (v > f0 + c1 * a * d0 || (it > 0 && v >= f_prev)) {
            a_lo = a_prev;
            f_lo = f_prev;
            a_hi = a;
            bracketed = true;
            break;
        }
        if (std::abs(da) <= -c2 * d0) {
            step = a;
            x_out = xa;
            f_out = v;
            g_out = g;
            return true;
        }
        if (da >= 0.0) {
            a_lo = a;
            f_lo = v;
            a_hi = a_prev;
            bracketed = true;
            break;
        }
        a_prev = a;
        f_prev = v;
        d_prev = da;
        a *= 2.0;
    }
    (void)d_prev;
    if (!bracketed) return false;

    for (int it = 0; it < 40; ++it) {
        double am = 0.5 * (a_lo + a_hi);
        auto [v, g, xa] = probe(am);
        double dm = g.dot(d);
        if (v > f0 + c1 * am * d0 || v >= f_lo) {
            a_hi = am;
        } else {
            if (std::abs(dm) <= -c2 * d0) {
                step = am;
                x_out = xa;
                f_out = v;
                g_out = g;
                return true;
            }
            if (dm * (a_hi - a_lo) >= 0.0) a_hi = a_lo;
            a_lo = am;
            f_lo = v;
        }
        if (std::abs(a_hi - a_lo) < 1e-14 * (1.0 + std::abs(a_lo))) break;
    }
    // Fall back to the best sufficient-decrease point seen, if any.
    auto [v, g, xa] = probe(a_lo);
    if (a_lo > 0.0 && v < f0) {
        step = a_lo;
        x_out = xa;
        f_out = v;
        g_out = g;
        return true;
    }
    return false;
}

}  // namespace

OptimizerReport bfgs(const ValueGrad& fg, const Vector& init, double gtol, int maxiter) {
    const int n = static_cast<int>(init.size());
    int evals = 1;
    Vector x = init;
    auto [fx, g] = fg(x);
    if (!std::isfinite(fx)) throw EstimationError("bfgs: objective not finite at init");

    Matrix h = Matrix::Identity(n, n);
    OptimizerReport rep;
    int iter = 0;
    for (; iter < maxiter; ++iter) {
        if (g.cwiseAbs().maxCoeff() <= gtol) {
            rep.converged = true;
            break;
        }
        Vector d = -(h * g);
        double step = 1.0;
        Vector x_new, g_new;
        double f_new;
        if (!wolfe_search(fg, x, d, fx, g, step, x_new, f_new, g_new, evals)) {
            // Reset curvature once; if the steepest direction also fails the
            // iterate is as converged as the arithmetic allows.
            if (h.isIdentity(0.0)) break;
            h = Matrix::Identity(n, n);
            continue;
        }
        Vector s = x_new - x;
        Vector y = g_new - g;
        double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            if (iter == 0) {
                // Scale the seed inverse Hessian to the first curvature pair.
                h = (sy / y.dot(y)) * Matrix::Identity(n, n);
            }
            Matrix eye = Matrix::Identity(n, n);
            Matrix v = eye - (s * y.transpose()) / sy;
            h = v * h * v.transpose() + (s * s.transpose()) / sy;
        }
        x = x_new;
        fx = f_new;
        g = g_new;
        if (s.cwiseAbs().maxCoeff() < 1e-14 * (1.0 + x.cwiseAbs().maxCoeff())) {
            rep.converged = g.cwiseAbs().maxCoeff() <= gtol;
            break;
        }
    }
    if (iter == maxiter && g.cwiseAbs().maxCoeff() <= gtol) rep.converged = true;
    rep.x = x;
    rep.value = fx;
    rep.grad_norm = g.cwiseAbs().maxCoeff();
    rep.iterations = iter;
    rep.evaluations = evals;
    return rep;
}

OptimizerReport minimize(const Objective& f, const Vector& init,
                         const MinimizeOptions& opts) {
    double f0 = f(init);
    if (!std::isfinite(f0)) throw EstimationError("minimize: objective not finite at init");

    auto one_pass = [&](const Vector& start) {
        OptimizerReport rep =
            nelder_mead(f, start, opts.param_tol, opts.value_tol, opts.max_simplex_iter);
        if (opts.polish && opts.max_polish_iter > 0) {
            OptimizerReport pol =
                bfgs(with_fd_gradient(f), rep.x, opts.grad_tol, opts.max_polish_iter);
            pol.evaluations += rep.evaluations;
            pol.iterations += rep.iterations;
            if (pol.value <= rep.value) {
                pol.converged = pol.converged || rep.converged;
                return pol;
            }
            rep.evaluations = pol.evaluations;
            rep.converged = rep.converged || pol.converged;
        }
        return rep;
    };

    OptimizerReport best = one_pass(init);
    if (best.converged) return best;

    Rng rng(opts.restart_seed);
    for (int r = 1; r <= opts.restarts; ++r) {
        Vector start = init;
        for (int i = 0; i < start.size(); ++i) {
            start[i] += (0.5 * std::abs(init[i]) + 0.01) * rng.normal();
        }
        if (!std::isfinite(f(start))) continue;
        OptimizerReport rep = one_pass(start);
        rep.restarts = r;
        if (rep.value < best.value || (rep.converged && !best.converged)) {
            int evs = best.evaluations + rep.evaluations;
            best = rep;
            best.evaluations = evs;
        }
        if (best.converged) break;
    }
    return best;
}

}  // namespace mde
