#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mde/eigen_utils.hpp"
#include "mde/generator.hpp"
#include "mde/quadrature.hpp"
#include "mde/rng.hpp"

namespace mde {

enum class ModelKind {
    normal_mean,            // N(mu, sigma^2), sigma fixed
    normal_location_scale,  // N(mu, sigma^2), both free
    normal_scale,           // N(mu0, sigma^2), mu0 fixed
    exponential_mean,       // mean-parameterized exponential
    poisson,                // counts
};

class ParametricModel {
public:
    virtual ~ParametricModel() = default;

    virtual ModelKind kind() const = 0;
    virtual std::string name() const = 0;
    virtual int dim() const = 0;
    virtual bool in_domain(const Vector& th) const = 0;
    virtual bool discrete() const { return false; }
    virtual IntegrationDomain support() const = 0;

    virtual double density(const Vector& th, double x) const = 0;
    // u = gradient of log f in theta
    virtual Vector score(const Vector& th, double x) const = 0;
    // -gradient of the score in theta (the information kernel of the
    // estimating equations, evaluated pointwise)
    virtual Matrix score_jacobian_neg(const Vector& th, double x) const = 0;
    virtual Matrix fisher_information(const Vector& th) const = 0;

    virtual Vector mle(const std::vector<double>& data) const = 0;
    virtual Vector robust_init(const std::vector<double>& data) const = 0;
    virtual double simulate(const Vector& th, Rng& rng) const = 0;

    // Optimizers run in internal coordinates: positive components through log.
    virtual bool positive_coord(int i) const = 0;
    Vector to_internal(const Vector& th) const;
    Vector from_internal(const Vector& u) const;

    // Model-side term of the estimating objective,
    // C(theta) = integral (or sum) of [x B'(x) - B(x)] at f_theta.
    // Families override with closed or reduced forms; the default integrates
    // the definition directly.
    virtual double integral_term(const ConvexGenerator& gen, const Vector& th) const;

    // xi(theta) = integral of u w(f) f; equals the gradient of integral_term.
    virtual Vector xi_vector(const ConvexGenerator& gen, const Vector& th) const;

    // Interval carrying all the mass that any tolerance here can see;
    // used for divergence grids and plot ranges.
    virtual std::pair<double, double> coverage_interval(const Vector& th) const = 0;

    // For discrete models: truncation point of the support sums.
    virtual long discrete_upper(const Vector& th) const;

    // Smallest sample size the family can identify.
    virtual int min_sample() const { return dim(); }
};

// Direct quadrature/summation of the integral-term definition; the slow route
// kept callable so closed forms are always checkable against it.
double integral_term_reference(const ConvexGenerator& gen, const ParametricModel& model,
                               const Vector& th, double tol = 1e-10);
Vector xi_vector_reference(const ConvexGenerator& gen, const ParametricModel& model,
                           const Vector& th, double tol = 1e-10);

class NormalMean : public ParametricModel {
public:
    explicit NormalMean(double sigma);
    ModelKind kind() const override { return ModelKind::normal_mean; }
    std::string name() const override { return "normal-mean"; }
    int dim() const override { return 1; }
    bool in_domain(const Vector& th) const override;
    IntegrationDomain support() const override { return IntegrationDomain::real_line(); }
    double density(const Vector& th, double x) const override;
    Vector score(const Vector& th, double x) const override;
    Matrix score_jacobian_neg(const Vector& th, double x) const override;
    Matrix fisher_information(const Vector& th) const override;
    Vector mle(const std::vector<double>& data) const override;
    Vector robust_init(const std::vector<double>& data) const override;
    double simulate(const Vector& th, Rng& rng) const override;
    bool positive_coord(int) const override { return false; }
    double integral_term(const ConvexGenerator& gen, const Vector& th) const override;
    Vector xi_vector(const ConvexGenerator& gen, const Vector& th) const override;
    std::pair<double, double> coverage_interval(const Vector& th) const override;
    double sigma() const { return sigma_; }

private:
    double sigma_;
};

class NormalLocationScale : public ParametricModel {
public:
    ModelKind kind() const override { return ModelKind::normal_location_scale; }
    std::string name() const override { return "normal"; }
    int dim() const override { return 2; }
    bool in_domain(const Vector& th) const override;
    IntegrationDomain support() const override { return IntegrationDomain::real_line(); }
    double density(const Vector& th, double x) const override;
    Vector score(const Vector& th, double x) const override;
    Matrix score_jacobian_neg(const Vector& th, double x) const override;
    Matrix fisher_information(const Vector& th) const override;
    Vector mle(const std::vector<double>& data) const override;
    Vector robust_init(const std::vector<double>& data) const override;
    double simulate(const Vector& th, Rng& rng) const override;
    bool positive_coord(int i) const override { return i == 1; }
    double integral_term(const ConvexGenerator& gen, const Vector& th) const override;
    Vector xi_vector(const ConvexGenerator& gen, const Vector& th) const override;
    std::pair<double, double> coverage_interval(const Vector& th) const override;
    int min_sample() const override { return 2; }
};

class NormalScale : public ParametricModel {
public:
    explicit NormalScale(double mu);
    ModelKind kind() const override { return ModelKind::normal_scale; }
    std::string name() const override { return "normal-scale"; }
    int dim() const override { return 1; }
    bool in_domain(const Vector& th) const override;
    IntegrationDomain support() const override { return IntegrationDomain::real_line(); }
    double density(const Vector& th, double x) const override;
    Vector score(const Vector& th, double x) const override;
    Matrix score_jacobian_neg(const Vector& th, double x) const override;
    Matrix fisher_information(const Vector& th) const override;
    Vector mle(const std::vector<double>& data) const override;
    Vector robust_init(const std::vector<double>& data) const override;
    double simulate(const Vector& th, Rng& rng) const override;
    bool positive_coord(int) const override { return true; }
    double integral_term(const ConvexGenerator& gen, const Vector& th) const override;
    Vector xi_vector(const ConvexGenerator& gen, const Vector& th) const override;
    std::pair<double, double> coverage_interval(const Vector& th) const override;
    double mu() const { return mu_; }

private:
    double mu_;
};

class ExponentialMean : public ParametricModel {
public:
    ModelKind kind() const override { return ModelKind::exponential_mean; }
    std::string name() const override { return "exponential"; }
    int dim() const override { return 1; }
    bool in_domain(const Vector& th) const override;
    IntegrationDomain support() const override { return IntegrationDomain::half_line(); }
    double density(const Vector& th, double x) const override;
    Vector score(const Vector& th, double x) const override;
    Matrix score_jacobian_neg(const Vector& th, double x) const override;
    Matrix fisher_information(const Vector& th) const override;
    Vector mle(const std::vector<double>& data) const override;
    Vector robust_init(const std::vector<double>& data) const override;
    double simulate(const Vector& th, Rng& rng) const override;
    bool positive_coord(int) const override { return true; }
    double integral_term(const ConvexGenerator& gen, const Vector& th) const override;
    Vector xi_vector(const ConvexGenerator& gen, const Vector& th) const override;
    std::pair<double, double> coverage_interval(const Vector& th) const override;
};

class Poisson : public ParametricModel {
public:
    ModelKind kind() const override { return ModelKind::poisson; }
    std::string name() const override { return "poisson"; }
    int dim() const override { return 1; }
    bool discrete() const override { return true; }
    bool in_domain(const Vector& th) const override;
    IntegrationDomain support() const override { return IntegrationDomain::discrete(); }
    double density(const Vector& th, double x) const override;  // pmf at round(x)
    Vector score(const Vector& th, double x) const override;
    Matrix score_jacobian_neg(const Vector& th, double x) const override;
    Matrix fisher_information(const Vector& th) const override;
    Vector mle(const std::vector<double>& data) const override;
    Vector robust_init(const std::vector<double>& data) const override;
    double simulate(const Vector& th, Rng& rng) const override;
    bool positive_coord(int) const override { return true; }
    double integral_term(const ConvexGenerator& gen, const Vector& th) const override;
    Vector xi_vector(const ConvexGenerator& gen, const Vector& th) const override;
    std::pair<double, double> coverage_interval(const Vector& th) const override;
    long discrete_upper(const Vector& th) const override;
    double pmf(double lambda, long k) const;
};

double median(std::vector<double> v);
double mad(const std::vector<double>& v);  // median absolute deviation (raw)

}  // namespace mde
