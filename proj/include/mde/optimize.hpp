#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include "mde/eigen_utils.hpp"

namespace mde {

struct OptimizerReport {
    Vector x;
    double value = 0.0;
    double grad_norm = -1.0;  // inf-norm at exit; -1 if never computed
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    int restarts = 0;
};

using Objective = std::function<double(const Vector&)>;
// Combined value + gradient; objectives share most work between the two.
using ValueGrad = std::function<std::pair<double, Vector>(const Vector&)>;

struct MinimizeOptions {
    double grad_tol = 1e-8;
    double param_tol = 1e-10;   // simplex diameter tolerance
    double value_tol = 1e-12;   // simplex spread tolerance
    int max_simplex_iter = 500;
    int max_polish_iter = 200;
    int restarts = 3;
    std::uint64_t restart_seed = 0x5EED0EA1u;
    bool polish = true;
};

// Central differences, h_i = 1e-6 * (1 + |x_i|).
Vector fd_gradient(const Objective& f, const Vector& x);

// Nelder-Mead with the conventional reflection/expansion/contraction/shrink
// coefficients (1, 2, 0.5, 0.5) and the 5% / 2.5e-4 initial simplex.
// Converged means simplex diameter <= xatol and value spread <= fatol.
OptimizerReport nelder_mead(const Objective& f, const Vector& init, double xatol,
                            double fatol, int maxiter);

// BFGS with strong-Wolfe line search; gradient is finite-differenced when
// fg is built from an Objective via with_fd_gradient.
OptimizerReport bfgs(const ValueGrad& fg, const Vector& init, double gtol, int maxiter);

ValueGrad with_fd_gradient(const Objective& f);

// Simplex search polished by BFGS, with seeded randomized restarts if neither
// stage converges. Objective must be finite at init.
OptimizerReport minimize(const Objective& f, const Vector& init,
                         const MinimizeOptions& opts = {});

}  // namespace mde
