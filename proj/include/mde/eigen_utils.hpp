#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "mde/errors.hpp"

namespace mde {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Eigenvalues of the symmetric part of m, descending. When symmetrize is
// false the caller asserts m is already symmetric (checked loosely).
inline std::vector<double> sym_eigvals(const Matrix& m, bool symmetrize = true) {
    if (m.rows() != m.cols()) throw DomainError("sym_eigvals: matrix not square");
    Matrix s;
    if (symmetrize) {
        s = 0.5 * (m + m.transpose());
    } else {
        if ((m - m.transpose()).cwiseAbs().maxCoeff() >
            1e-8 * (1.0 + m.cwiseAbs().maxCoeff())) {
            throw DomainError("sym_eigvals: matrix is not symmetric");
        }
        s = m;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(s);
    if (es.info() != Eigen::Success) throw ConsistencyError("sym_eigvals: solver failed");
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
    std::reverse(ev.begin(), ev.end());
    return ev;
}

// Symmetric square root of a PSD matrix; tiny negative eigenvalues (round-off)
// are clamped to zero.
inline Matrix sqrt_psd(const Matrix& s) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (s + s.transpose()));
    if (es.info() != Eigen::Success) throw ConsistencyError("sqrt_psd: solver failed");
    Vector ev = es.eigenvalues();
    double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    for (int i = 0; i < ev.size(); ++i) {
        if (ev[i] < -1e-10 * scale) {
            throw DomainError("sqrt_psd: matrix has a negative eigenvalue");
        }
        ev[i] = std::sqrt(std::max(ev[i], 0.0));
    }
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

// Eigenvalues of a * s for symmetric a and symmetric PSD s. The product is
// not symmetric, but it is similar to s^{1/2} a s^{1/2}, which is; that route
// keeps the spectrum real without a general eigensolver.
inline std::vector<double> product_eigvals_sym_psd(const Matrix& a, const Matrix& s) {
    Matrix r = sqrt_psd(s);
    return sym_eigvals(r * (0.5 * (a + a.transpose())) * r, false);
}

}  // namespace mde
