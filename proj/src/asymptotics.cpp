#include "mde/asymptotics.hpp"

#include <cmath>

#include "mde/model_integrals.hpp"

namespace mde {

namespace {

// int u u^T w(f)^wpow f over the sample space, componentwise.
Matrix uut_weighted(const ConvexGenerator& gen, const ParametricModel& model,
                    const Vector& th, int wpow) {
    const int p = model.dim();
    Matrix m(p, p);
    for (int a = 0; a < p; ++a) {
        for (int b = a; b < p; ++b) {
            auto integrand = [&](double x) {
                double f = model.density(th, x);
                if (f <= 0.0) return 0.0;
                double w = gen.weight(f);
                if (wpow == 2) w *= w;
                Vector u = model.score(th, x);
                return u[a] * u[b] * w * f;
            };
            double v;
            if (model.discrete()) {
                v = sum_discrete([&](long k) { return integrand(k); },
                                 [&](long k) { return model.density(th, k); });
            } else {
                v = integrate(integrand, model.support(), 1e-11);
            }
            m(a, b) = v;
            m(b, a) = v;
        }
    }
    return m;
}

// Normal families: the moment engine gives the even integrals with the odd
// ones exactly zero, which keeps J and K cleanly block-structured.
bool normal_moment_matrices(const ConvexGenerator& gen, const ParametricModel& model,
                            const Vector& th, Matrix& j, Matrix& k0) {
    switch (model.kind()) {
        case ModelKind::normal_mean: {
            double s = static_cast<const NormalMean&>(model).sigma();
            NormalMoments m1 = normal_weighted_moments(gen, s, 1);
            NormalMoments m2 = normal_weighted_moments(gen, s, 2);
            j = Matrix::Constant(1, 1, m1.m[2] / (s * s));
            k0 = Matrix::Constant(1, 1, m2.m[2] / (s * s));
            return true;
        }
        case ModelKind::normal_scale: {
            double s = th[0];
            NormalMoments m1 = normal_weighted_moments(gen, s, 1);
            NormalMoments m2 = normal_weighted_moments(gen, s, 2);
            double s2 = s * s;
            j = Matrix::Constant(1, 1, (m1.m[4] - 2.0 * m1.m[2] + m1.m[0]) / s2);
            k0 = Matrix::Constant(1, 1, (m2.m[4] - 2.0 * m2.m[2] + m2.m[0]) / s2);
            return true;
        }
        case ModelKind::normal_location_scale: {
            double s = th[1];
            NormalMoments m1 = normal_weighted_moments(gen, s, 1);
            NormalMoments m2 = normal_weighted_moments(gen, s, 2);
            double s2 = s * s;
            j = Matrix::Zero(2, 2);
            j(0, 0) = m1.m[2] / s2;
            j(1, 1) = (m1.m[4] - 2.0 * m1.m[2] + m1.m[0]) / s2;
            k0 = Matrix::Zero(2, 2);
            k0(0, 0) = m2.m[2] / s2;
            k0(1, 1) = (m2.m[4] - 2.0 * m2.m[2] + m2.m[0]) / s2;
            return true;
        }
        default:
            return false;
    }
}

}  // namespace

Matrix invert_spd(const Matrix& m, const char* who) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.transpose()));
    if (es.info() != Eigen::Success) {
        throw ConsistencyError(std::string(who) + ": eigensolver failed");
    }
    const Vector& ev = es.eigenvalues();
    double top = ev.cwiseAbs().maxCoeff();
    if (!(top > 0.0) || ev.minCoeff() <= 1e-12 * top) {
        int at = 0;
        ev.minCoeff(&at);
        Vector dir = es.eigenvectors().col(at);
        std::string d = "(";
        for (int i = 0; i < dir.size(); ++i) {
            d += std::to_string(dir[i]);
            d += (i + 1 < dir.size()) ? ", " : ")";
        }
        throw ConsistencyError(std::string(who) +
                               ": matrix is singular or indefinite along direction " + d);
    }
    return es.eigenvectors() * ev.cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
}

AsymptoticsBundle model_matrices(const ConvexGenerator& gen, const ParametricModel& model,
                                 const Vector& theta) {
    if (!model.in_domain(theta)) throw DomainError("model_matrices: theta outside the model");
    AsymptoticsBundle b;
    if (!normal_moment_matrices(gen, model, theta, b.j, b.k)) {
        b.j = uut_weighted(gen, model, theta, 1);
        b.k = uut_weighted(gen, model, theta, 2);
    }
    b.xi = model.xi_vector(gen, theta);
    b.k -= b.xi * b.xi.transpose();
    Matrix jinv = invert_spd(b.j, "model_matrices");
    b.sandwich = jinv * b.k * jinv;
    return b;
}

AsymptoticsBundle empirical_matrices(const ConvexGenerator& gen,
                                     const ParametricModel& model, const Vector& theta_hat,
                                     const std::vector<double>& data) {
    if (!model.in_domain(theta_hat)) {
        throw DomainError("empirical_matrices: theta outside the model");
    }
    const int p = model.dim();
    const double n = static_cast<double>(data.size());
    if (data.size() < 2) throw DataError("empirical_matrices: need at least two observations");

    AsymptoticsBundle b;
    b.xi = model.xi_vector(gen, theta_hat);

    // K: (n-1)^{-1} sum of centered psi outer products.
    b.k = Matrix::Zero(p, p);
    for (double x : data) {
        double f = model.density(theta_hat, x);
        Vector ps = -b.xi;
        if (f > 0.0) ps += gen.weight(f) * model.score(theta_hat, x);
        b.k += ps * ps.transpose();
    }
    b.k /= (n - 1.0);

    // J: model integral plus the empirical-minus-model correction of the
    // information kernel, bracket(x) = I(x) w(f) - u u^T w'(f) f.
    auto bracket = [&](double x) -> Matrix {
        double f = model.density(theta_hat, x);
        if (f <= 0.0) return Matrix::Zero(p, p);
        Vector u = model.score(theta_hat, x);
        return model.score_jacobian_neg(theta_hat, x) * gen.weight(f) -
               (u * u.transpose()) * (gen.weight_prime(f) * f);
    };

    Matrix emp = Matrix::Zero(p, p);
    for (double x : data) emp += bracket(x);
    emp /= n;

    Matrix mod(p, p);
    for (int a = 0; a < p; ++a) {
        for (int c = a; c < p; ++c) {
            auto integrand = [&](double x) {
                double f = model.density(theta_hat, x);
                return f > 0.0 ? bracket(x)(a, c) * f : 0.0;
            };
            double v;
            if (model.discrete()) {
                v = sum_discrete([&](long k) { return integrand(k); },
                                 [&](long k) { return model.density(theta_hat, k); });
            } else {
                v = integrate(integrand, model.support(), 1e-10);
            }
            mod(a, c) = v;
            mod(c, a) = v;
        }
    }

    Matrix base;
    Matrix k0_unused;
    if (!normal_moment_matrices(gen, model, theta_hat, base, k0_unused)) {
        base = uut_weighted(gen, model, theta_hat, 1);
    }
    b.j = base + (emp - mod);
    b.j = 0.5 * (b.j + b.j.transpose());

    Matrix jinv = invert_spd(b.j, "empirical_matrices");
    b.sandwich = jinv * b.k * jinv;
    return b;
}

Vector influence(const ConvexGenerator& gen, const ParametricModel& model,
                 const Vector& theta, double y) {
    AsymptoticsBundle b = model_matrices(gen, model, theta);
    double f = model.density(theta, y);
    Vector ps = -b.xi;
    if (f > 0.0) ps += gen.weight(f) * model.score(theta, y);
    return invert_spd(b.j, "influence") * ps;
}

double are(const ConvexGenerator& gen, const ParametricModel& model, const Vector& theta,
           int component) {
    if (component < 0 || component >= model.dim()) {
        throw DomainError("are: component out of range");
    }
    if (gen.is_mle()) return 1.0;
    AsymptoticsBundle b = model_matrices(gen, model, theta);
    Matrix iinv = invert_spd(model.fisher_information(theta), "are");
    double v = b.sandwich(component, component);
    if (!(v > 0.0)) throw ConsistencyError("are: nonpositive asymptotic variance");
    return iinv(component, component) / v;
}

}  // namespace mde
