#include "mde/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mde/model_integrals.hpp"
#include "mde/special.hpp"

namespace mde {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void require_data(const std::vector<double>& v, std::size_t at_least, const char* who) {
    if (v.size() < at_least) {
        throw DegenerateFitError(std::string(who) +
                                 ": sample too small to identify the parameters");
    }
}

}  // namespace

double median(std::vector<double> v) {
    if (v.empty()) throw DataError("median: empty sample");
    std::size_t n = v.size();
    std::size_t h = n / 2;
    std::nth_element(v.begin(), v.begin() + h, v.end());
    double hi = v[h];
    if (n % 2 == 1) return hi;
    double lo = *std::max_element(v.begin(), v.begin() + h);
    return 0.5 * (lo + hi);
}

double mad(const std::vector<double>& v) {
    double m = median(v);
    std::vector<double> dev(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) dev[i] = std::abs(v[i] - m);
    return median(std::move(dev));
}

Vector ParametricModel::to_internal(const Vector& th) const {
    Vector u = th;
    for (int i = 0; i < u.size(); ++i) {
        if (positive_coord(i)) {
            if (!(th[i] > 0.0)) throw DomainError(name() + ": positive coordinate is not positive");
            u[i] = std::log(th[i]);
        }
    }
    return u;
}

Vector ParametricModel::from_internal(const Vector& u) const {
    Vector th = u;
    for (int i = 0; i < th.size(); ++i) {
        if (positive_coord(i)) th[i] = std::exp(u[i]);
    }
    return th;
}

long ParametricModel::discrete_upper(const Vector&) const {
    throw DomainError(name() + ": not a discrete model");
}

double integral_term_reference(const ConvexGenerator& gen, const ParametricModel& model,
                               const Vector& th, double tol) {
    if (!model.in_domain(th)) throw DomainError("integral_term_reference: theta outside the model");
    if (model.discrete()) {
        return sum_discrete([&](long k) { return gen.antiderivative_term(model.density(th, k)); },
                            [&](long k) { return model.density(th, k); });
    }
    return integrate([&](double x) { return gen.antiderivative_term(model.density(th, x)); },
                     model.support(), tol);
}

Vector xi_vector_reference(const ConvexGenerator& gen, const ParametricModel& model,
                           const Vector& th, double tol) {
    if (!model.in_domain(th)) throw DomainError("xi_vector_reference: theta outside the model");
    Vector xi = Vector::Zero(model.dim());
    for (int j = 0; j < model.dim(); ++j) {
        if (model.discrete()) {
            xi[j] = sum_discrete(
                [&](long k) {
                    double f = model.density(th, k);
                    return f > 0.0 ? model.score(th, k)[j] * gen.weight(f) * f : 0.0;
                },
                [&](long k) { return model.density(th, k); });
        } else {
            xi[j] = integrate(
                [&](double x) {
                    double f = model.density(th, x);
                    return f > 0.0 ? model.score(th, x)[j] * gen.weight(f) * f : 0.0;
                },
                model.support(), tol);
        }
    }
    return xi;
}

double ParametricModel::integral_term(const ConvexGenerator& gen, const Vector& th) const {
    return integral_term_reference(gen, *this, th);
}

Vector ParametricModel::xi_vector(const ConvexGenerator& gen, const Vector& th) const {
    return xi_vector_reference(gen, *this, th);
}

// ---------------------------------------------------------------- NormalMean

NormalMean::NormalMean(double sigma) : sigma_(sigma) {
    if (!(sigma > 0.0)) throw DomainError("NormalMean: sigma must be positive");
}

bool NormalMean::in_domain(const Vector& th) const {
    return th.size() == 1 && std::isfinite(th[0]);
}

double NormalMean::density(const Vector& th, double x) const {
    double t = (x - th[0]) / sigma_;
    return kInvSqrt2Pi * std::exp(-0.5 * t * t) / sigma_;
}

Vector NormalMean::score(const Vector& th, double x) const {
    Vector u(1);
    u[0] = (x - th[0]) / (sigma_ * sigma_);
    return u;
}

Matrix NormalMean::score_jacobian_neg(const Vector&, double) const {
    Matrix m(1, 1);
    m(0, 0) = 1.0 / (sigma_ * sigma_);
    return m;
}

Matrix NormalMean::fisher_information(const Vector&) const {
    Matrix m(1, 1);
    m(0, 0) = 1.0 / (sigma_ * sigma_);
    return m;
}

Vector NormalMean::mle(const std::vector<double>& data) const {
    require_data(data, 1, "NormalMean::mle");
    Vector th(1);
    th[0] = mean_of(data);
    return th;
}

Vector NormalMean::robust_init(const std::vector<double>& data) const {
    require_data(data, 1, "NormalMean::robust_init");
    Vector th(1);
    th[0] = median(data);
    return th;
}

double NormalMean::simulate(const Vector& th, Rng& rng) const {
    return th[0] + sigma_ * rng.normal();
}

double NormalMean::integral_term(const ConvexGenerator& gen, const Vector&) const {
    return normal_integral_term(gen, sigma_);
}

Vector NormalMean::xi_vector(const ConvexGenerator&, const Vector&) const {
    return Vector::Zero(1);  // odd integrand in t
}

std::pair<double, double> NormalMean::coverage_interval(const Vector& th) const {
    return {th[0] - 10.0 * sigma_, th[0] + 10.0 * sigma_};
}

// ------------------------------------------------------- NormalLocationScale

bool NormalLocationScale::in_domain(const Vector& th) const {
    return th.size() == 2 && std::isfinite(th[0]) && th[1] > 0.0 && std::isfinite(th[1]);
}

double NormalLocationScale::density(const Vector& th, double x) const {
    double t = (x - th[0]) / th[1];
    return kInvSqrt2Pi * std::exp(-0.5 * t * t) / th[1];
}

Vector NormalLocationScale::score(const Vector& th, double x) const {
    double s = th[1];
    double t = (x - th[0]) / s;
    Vector u(2);
    u[0] = t / s;
    u[1] = (t * t - 1.0) / s;
    return u;
}

Matrix NormalLocationScale::score_jacobian_neg(const Vector& th, double x) const {
    double s = th[1];
    double t = (x - th[0]) / s;
    Matrix m(2, 2);
    m(0, 0) = 1.0 / (s * s);
    m(0, 1) = 2.0 * t / (s * s);
    m(1, 0) = m(0, 1);
    m(1, 1) = (3.0 * t * t - 1.0) / (s * s);
    return m;
}

Matrix NormalLocationScale::fisher_information(const Vector& th) const {
    double s2 = th[1] * th[1];
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1.0 / s2;
    m(1, 1) = 2.0 / s2;
    return m;
}

Vector NormalLocationScale::mle(const std::vector<double>& data) const {
    require_data(data, 2, "NormalLocationScale::mle");
    double mu = mean_of(data);
    double ss = 0.0;
    for (double x : data) ss += (x - mu) * (x - mu);
    double s = std::sqrt(ss / static_cast<double>(data.size()));
    if (!(s > 0.0)) {
        throw DegenerateFitError("NormalLocationScale::mle: zero scale (all observations equal)");
    }
    Vector th(2);
    th[0] = mu;
    th[1] = s;
    return th;
}

Vector NormalLocationScale::robust_init(const std::vector<double>& data) const {
    require_data(data, 2, "NormalLocationScale::robust_init");
    double mu = median(data);
    double s = 1.4826 * mad(data);
    if (!(s > 0.0)) {
        double mu_bar = mean_of(data);
        double ss = 0.0;
        for (double x : data) ss += (x - mu_bar) * (x - mu_bar);
        s = std::sqrt(ss / static_cast<double>(data.size()));
    }
    if (!(s > 0.0)) {
        throw DegenerateFitError("NormalLocationScale::robust_init: zero spread");
    }
    Vector th(2);
    th[0] = mu;
    th[1] = s;
    return th;
}

double NormalLocationScale::simulate(const Vector& th, Rng& rng) const {
    return th[0] + th[1] * rng.normal();
}

double NormalLocationScale::integral_term(const ConvexGenerator& gen, const Vector& th) const {
    return normal_integral_term(gen, th[1]);
}

Vector NormalLocationScale::xi_vector(const ConvexGenerator& gen, const Vector& th) const {
    NormalMoments mm = normal_weighted_moments(gen, th[1], 1);
    Vector xi(2);
    xi[0] = 0.0;
    xi[1] = (mm.m[2] - mm.m[0]) / th[1];
    return xi;
}

std::pair<double, double> NormalLocationScale::coverage_interval(const Vector& th) const {
    return {th[0] - 10.0 * th[1], th[0] + 10.0 * th[1]};
}

// --------------------------------------------------------------- NormalScale

NormalScale::NormalScale(double mu) : mu_(mu) {
    if (!std::isfinite(mu)) throw DomainError("NormalScale: mu must be finite");
}

bool NormalScale::in_domain(const Vector& th) const {
    return th.size() == 1 && th[0] > 0.0 && std::isfinite(th[0]);
}

double NormalScale::density(const Vector& th, double x) const {
    double t = (x - mu_) / th[0];
    return kInvSqrt2Pi * std::exp(-0.5 * t * t) / th[0];
}

Vector NormalScale::score(const Vector& th, double x) const {
    double t = (x - mu_) / th[0];
    Vector u(1);
    u[0] = (t * t - 1.0) / th[0];
    return u;
}

Matrix NormalScale::score_jacobian_neg(const Vector& th, double x) const {
    double s = th[0];
    double t = (x - mu_) / s;
    Matrix m(1, 1);
    m(0, 0) = (3.0 * t * t - 1.0) / (s * s);
    return m;
}

Matrix NormalScale::fisher_information(const Vector& th) const {
    Matrix m(1, 1);
    m(0, 0) = 2.0 / (th[0] * th[0]);
    return m;
}

Vector NormalScale::mle(const std::vector<double>& data) const {
    require_data(data, 1, "NormalScale::mle");
    double ss = 0.0;
    for (double x : data) ss += (x - mu_) * (x - mu_);
    double s = std::sqrt(ss / static_cast<double>(data.size()));
    if (!(s > 0.0)) throw DegenerateFitError("NormalScale::mle: zero scale");
    Vector th(1);
    th[0] = s;
    return th;
}

Vector NormalScale::robust_init(const std::vector<double>& data) const {
    require_data(data, 1, "NormalScale::robust_init");
    std::vector<double> dev(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) dev[i] = std::abs(data[i] - mu_);
    double s = 1.4826 * median(std::move(dev));
    if (!(s > 0.0)) {
        double ss = 0.0;
        for (double x : data) ss += (x - mu_) * (x - mu_);
        s = std::sqrt(ss / static_cast<double>(data.size()));
    }
    if (!(s > 0.0)) throw DegenerateFitError("NormalScale::robust_init: zero spread");
    Vector th(1);
    th[0] = s;
    return th;
}

double NormalScale::simulate(const Vector& th, Rng& rng) const {
    return mu_ + th[0] * rng.normal();
}

double NormalScale::integral_term(const ConvexGenerator& gen, const Vector& th) const {
    return normal_integral_term(gen, th[0]);
}

Vector NormalScale::xi_vector(const ConvexGenerator& gen, const Vector& th) const {
    NormalMoments mm = normal_weighted_moments(gen, th[0], 1);
    Vector xi(1);
    xi[0] = (mm.m[2] - mm.m[0]) / th[0];
    return xi;
}

std::pair<double, double> NormalScale::coverage_interval(const Vector& th) const {
    return {mu_ - 10.0 * th[0], mu_ + 10.0 * th[0]};
}

// ----------------------------------------------------------- ExponentialMean

bool ExponentialMean::in_domain(const Vector& th) const {
    return th.size() == 1 && th[0] > 0.0 && std::isfinite(th[0]);
}

double ExponentialMean::density(const Vector& th, double x) const {
    if (x < 0.0) return 0.0;
    return std::exp(-x / th[0]) / th[0];
}

Vector ExponentialMean::score(const Vector& th, double x) const {
    Vector u(1);
    u[0] = (x - th[0]) / (th[0] * th[0]);
    return u;
}

Matrix ExponentialMean::score_jacobian_neg(const Vector& th, double x) const {
    double l = th[0];
    Matrix m(1, 1);
    m(0, 0) = 1.0 / (l * l) + 2.0 * (x - l) / (l * l * l);
    return m;
}

Matrix ExponentialMean::fisher_information(const Vector& th) const {
    Matrix m(1, 1);
    m(0, 0) = 1.0 / (th[0] * th[0]);
    return m;
}

Vector ExponentialMean::mle(const std::vector<double>& data) const {
    require_data(data, 1, "ExponentialMean::mle");
    double m = mean_of(data);
    if (!(m > 0.0)) throw DegenerateFitError("ExponentialMean::mle: nonpositive sample mean");
    Vector th(1);
    th[0] = m;
    return th;
}

Vector ExponentialMean::robust_init(const std::vector<double>& data) const {
    require_data(data, 1, "ExponentialMean::robust_init");
    double m = median(data) / std::log(2.0);
    if (!(m > 0.0)) m = mean_of(data);
    if (!(m > 0.0)) throw DegenerateFitError("ExponentialMean::robust_init: nonpositive sample");
    Vector th(1);
    th[0] = m;
    return th;
}

double ExponentialMean::simulate(const Vector& th, Rng& rng) const {
    return rng.exponential(th[0]);
}

double ExponentialMean::integral_term(const ConvexGenerator& gen, const Vector& th) const {
    return exponential_integral_term(gen, th[0]);
}

Vector ExponentialMean::xi_vector(const ConvexGenerator& gen, const Vector& th) const {
    Vector xi(1);
    xi[0] = exponential_integral_term_dlambda(gen, th[0]);
    return xi;
}

std::pair<double, double> ExponentialMean::coverage_interval(const Vector& th) const {
    return {0.0, 40.0 * th[0]};
}

// --------------------------------------------------------------------Poisson

double Poisson::pmf(double lambda, long k) const {
    if (k < 0) return 0.0;
    return std::exp(-lambda + k * std::log(lambda) - std::lgamma(k + 1.0));
}

bool Poisson::in_domain(const Vector& th) const {
    return th.size() == 1 && th[0] > 0.0 && std::isfinite(th[0]);
}

double Poisson::density(const Vector& th, double x) const {
    long k = std::lround(x);
    if (std::abs(x - k) > 1e-8) {
        throw DomainError("Poisson::density: observation is not a count");
    }
    return pmf(th[0], k);
}

Vector Poisson::score(const Vector& th, double x) const {
    Vector u(1);
    u[0] = x / th[0] - 1.0;
    return u;
}

Matrix Poisson::score_jacobian_neg(const Vector& th, double x) const {
    Matrix m(1, 1);
    m(0, 0) = x / (th[0] * th[0]);
    return m;
}

Matrix Poisson::fisher_information(const Vector& th) const {
    Matrix m(1, 1);
    m(0, 0) = 1.0 / th[0];
    return m;
}

Vector Poisson::mle(const std::vector<double>& data) const {
    require_data(data, 1, "Poisson::mle");
    double m = mean_of(data);
    if (!(m > 0.0)) throw DegenerateFitError("Poisson::mle: all counts are zero");
    Vector th(1);
    th[0] = m;
    return th;
}

Vector Poisson::robust_init(const std::vector<double>& data) const {
    require_data(data, 1, "Poisson::robust_init");
    Vector th(1);
    th[0] = std::max(median(data), 0.05);
    return th;
}

double Poisson::simulate(const Vector& th, Rng& rng) const {
    return static_cast<double>(rng.poisson(th[0]));
}

long Poisson::discrete_upper(const Vector& th) const {
    double cum = 0.0;
    for (long k = 0; k < 200000; ++k) {
        double p = pmf(th[0], k);
        cum += p;
        if (cum >= 1.0 - 1e-12 && p < 1e-14) return k;
    }
    throw IntegrationError("Poisson::discrete_upper: truncation never satisfied", 0.0);
}

double Poisson::integral_term(const ConvexGenerator& gen, const Vector& th) const {
    return sum_discrete([&](long k) { return gen.antiderivative_term(pmf(th[0], k)); },
                        [&](long k) { return pmf(th[0], k); });
}

Vector Poisson::xi_vector(const ConvexGenerator& gen, const Vector& th) const {
    double l = th[0];
    Vector xi(1);
    xi[0] = sum_discrete(
        [&](long k) {
            double p = pmf(l, k);
            return p > 0.0 ? (k / l - 1.0) * gen.weight(p) * p : 0.0;
        },
        [&](long k) { return pmf(l, k); });
    return xi;
}

std::pair<double, double> Poisson::coverage_interval(const Vector& th) const {
    return {0.0, static_cast<double>(discrete_upper(th))};
}

}  // namespace mde
