#include "mde/generator.hpp"

#include <cmath>
#include <cstdio>

#include "mde/special.hpp"

namespace mde {

namespace {

void require_positive(double x, const char* what) {
    if (!(x > 0.0)) throw DomainError(std::string(what) + ": argument must be positive");
}

void require_nonnegative(double x, const char* what) {
    if (!(x >= 0.0)) throw DomainError(std::string(what) + ": argument must be nonnegative");
}

std::string format_tuning(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", t);
    return buf;
}

}  // namespace

ConvexGenerator ConvexGenerator::ewd(double beta) {
    if (!(beta >= 0.0)) throw DomainError("ewd: beta must be nonnegative");
    return ConvexGenerator(Family::ewd, beta);
}

ConvexGenerator ConvexGenerator::dpd(double alpha) {
    if (!(alpha >= 0.0)) throw DomainError("dpd: alpha must be nonnegative");
    return ConvexGenerator(Family::dpd, alpha);
}

ConvexGenerator ConvexGenerator::kl() { return ConvexGenerator(Family::kl, 0.0); }

ConvexGenerator ConvexGenerator::l2() { return ConvexGenerator(Family::l2, 0.0); }

bool ConvexGenerator::is_mle() const {
    if (fam_ == Family::kl) return true;
    return (fam_ == Family::ewd || fam_ == Family::dpd) && tune_ == 0.0;
}

std::string ConvexGenerator::name() const {
    switch (fam_) {
        case Family::ewd: return "E(" + format_tuning(tune_) + ")";
        case Family::dpd: return "D(" + format_tuning(tune_) + ")";
        case Family::kl: return "KL";
        case Family::l2: return "L2";
    }
    return "?";
}

double ewd_b_series(double x, double beta) {
    require_positive(x, "ewd_b_series");
    require_positive(beta, "ewd_b_series");
    double z = x / beta;
    // B = (x^2 / beta) * sum_{n>=0} (-z)^n / ((n+2)! (n+1)); term ratio
    // -z n / ((n+2)(n+1)).
    double term = 0.5;
    double sum = term;
    for (int n = 1; n <= 400; ++n) {
        term *= -z * n / ((n + 2.0) * (n + 1.0));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return x * x / beta * sum;
}

double ConvexGenerator::b(double x) const {
    require_positive(x, "b");
    switch (fam_) {
        case Family::ewd: {
            if (tune_ == 0.0) {
                throw DomainError("b: EWD at beta = 0 is the likelihood limit; use the KL tag");
            }
            double z = x / tune_;
            if (z < 1e-2) return ewd_b_series(x, tune_);
            return -x + kEulerGamma * x + tune_ - tune_ * std::exp(-z) +
                   x * exp_integral_e1(z) + x * std::log(z);
        }
        case Family::dpd: {
            if (tune_ == 0.0) {
                throw DomainError("b: DPD at alpha = 0 is the likelihood limit; use the KL tag");
            }
            return std::pow(x, 1.0 + tune_) / (tune_ * (1.0 + tune_));
        }
        case Family::kl: return x * std::log(x);
        case Family::l2: return x * x;
    }
    throw DomainError("b: bad family");
}

double ConvexGenerator::b_prime(double x) const {
    require_positive(x, "b_prime");
    switch (fam_) {
        case Family::ewd:
            if (tune_ == 0.0) {
                throw DomainError("b_prime: EWD at beta = 0 is the likelihood limit; use the KL tag");
            }
            return e1_plus_log_gamma(x / tune_);
        case Family::dpd:
            if (tune_ == 0.0) {
                throw DomainError("b_prime: DPD at alpha = 0 is the likelihood limit; use the KL tag");
            }
            return std::pow(x, tune_) / tune_;
        case Family::kl: return std::log(x) + 1.0;
        case Family::l2: return 2.0 * x;
    }
    throw DomainError("b_prime: bad family");
}

double ConvexGenerator::b_second(double x) const {
    require_positive(x, "b_second");
    switch (fam_) {
        case Family::ewd:
            if (tune_ == 0.0) return 1.0 / x;  // KL limit
            return -std::expm1(-x / tune_) / x;
        case Family::dpd:
            if (tune_ == 0.0) return 1.0 / x;
            return std::pow(x, tune_ - 1.0);
        case Family::kl: return 1.0 / x;
        case Family::l2: return 2.0;
    }
    throw DomainError("b_second: bad family");
}

double ConvexGenerator::b_third(double x) const {
    require_positive(x, "b_third");
    switch (fam_) {
        case Family::ewd: {
            if (tune_ == 0.0) return -1.0 / (x * x);
            double z = x / tune_;
            return (std::exp(-z) * (1.0 + z) - 1.0) / (x * x);
        }
        case Family::dpd:
            if (tune_ == 0.0) return -1.0 / (x * x);
            return (tune_ - 1.0) * std::pow(x, tune_ - 2.0);
        case Family::kl: return -1.0 / (x * x);
        case Family::l2: return 0.0;
    }
    throw DomainError("b_third: bad family");
}

double ConvexGenerator::weight(double t) const {
    require_nonnegative(t, "weight");
    switch (fam_) {
        case Family::ewd:
            if (tune_ == 0.0) return 1.0;
            return -std::expm1(-t / tune_);
        case Family::dpd:
            if (tune_ == 0.0) return 1.0;
            return std::pow(t, tune_);
        case Family::kl: return 1.0;
        case Family::l2: return 2.0 * t;
    }
    throw DomainError("weight: bad family");
}

double ConvexGenerator::weight_prime(double t) const {
    require_nonnegative(t, "weight_prime");
    switch (fam_) {
        case Family::ewd:
            if (tune_ == 0.0) return 0.0;
            return std::exp(-t / tune_) / tune_;
        case Family::dpd:
            if (tune_ == 0.0) return 0.0;
            if (tune_ == 1.0) return 1.0;
            if (t == 0.0) {
                if (tune_ < 1.0) throw DomainError("weight_prime: DPD slope unbounded at 0");
                return 0.0;
            }
            return tune_ * std::pow(t, tune_ - 1.0);
        case Family::kl: return 0.0;
        case Family::l2: return 2.0;
    }
    throw DomainError("weight_prime: bad family");
}

double ConvexGenerator::antiderivative_term(double x) const {
    require_nonnegative(x, "antiderivative_term");
    if (x == 0.0) return 0.0;
    switch (fam_) {
        case Family::ewd:
            if (tune_ == 0.0) return x;
            return x + tune_ * std::expm1(-x / tune_);
        case Family::dpd:
            if (tune_ == 0.0) return x;
            return std::pow(x, 1.0 + tune_) / (1.0 + tune_);
        case Family::kl: return x;
        case Family::l2: return x * x;
    }
    throw DomainError("antiderivative_term: bad family");
}

double divergence(const ConvexGenerator& gen, const DensityGrid& grid) {
    const std::size_t m = grid.wts.size();
    if (grid.g.size() != m || grid.f.size() != m || m == 0) {
        throw DomainError("divergence: grid arrays must be nonempty and equal length");
    }
    bool bounded_slope_at_zero = !gen.is_mle();  // B'(0+) = 0 except for the KL limit
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double wt = grid.wts[i], g = grid.g[i], f = grid.f[i];
        if (!(wt > 0.0)) throw DomainError("divergence: quadrature weights must be positive");
        if (!(g >= 0.0) || !(f >= 0.0)) throw DomainError("divergence: densities must be >= 0");
        if (f == 0.0) {
            if (g == 0.0) continue;
            if (!bounded_slope_at_zero) {
                throw DomainError("divergence: g > 0 where f = 0 and B' is unbounded at 0");
            }
            sum += wt * gen.b(g);  // B(0) = 0 and B'(0) = 0
            continue;
        }
        double bg = (g == 0.0) ? 0.0 : gen.b(g);
        sum += wt * (bg - gen.b(f) - (g - f) * gen.b_prime(f));
    }
    return sum;
}

}  // namespace mde
