#include "mde/model_integrals.hpp"

#include <cmath>

#include "mde/quadrature.hpp"
#include "mde/special.hpp"

namespace mde {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kSqrtPi = 1.77245385090551602730;

double phi(double t) { return kInvSqrt2Pi * std::exp(-0.5 * t * t); }

// The standard-normal integrals live on [0, 9] after symmetry folding;
// phi(9) ~ 1e-18 is beyond every tolerance used here.
int node_count(const ConvexGenerator& gen, double sigma) {
    if (gen.family() == Family::ewd && gen.tuning() > 0.0 && sigma * gen.tuning() < 3e-3) {
        return 600;
    }
    return 200;
}

}  // namespace

NormalMoments normal_weighted_moments(const ConvexGenerator& gen, double sigma, int wpow) {
    if (!(sigma > 0.0)) throw DomainError("normal_weighted_moments: sigma must be positive");
    if (wpow != 1 && wpow != 2) throw DomainError("normal_weighted_moments: wpow is 1 or 2");

    NormalMoments mm{};
    if (gen.is_mle()) {
        mm.m[0] = 1.0;
        mm.m[2] = 1.0;
        mm.m[4] = 3.0;
        return mm;
    }
    const GlRule& rule = gl_rule(node_count(gen, sigma));
    double s0 = 0.0, s2 = 0.0, s4 = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        double t = 4.5 * (rule.x[i] + 1.0);
        double p = phi(t);
        double w = gen.weight(p / sigma);
        if (wpow == 2) w *= w;
        double base = 4.5 * rule.w[i] * w * p;
        double t2 = t * t;
        s0 += base;
        s2 += base * t2;
        s4 += base * t2 * t2;
    }
    mm.m[0] = 2.0 * s0;
    mm.m[2] = 2.0 * s2;
    mm.m[4] = 2.0 * s4;
    return mm;
}

double normal_integral_term(const ConvexGenerator& gen, double sigma) {
    if (!(sigma > 0.0)) throw DomainError("normal_integral_term: sigma must be positive");
    switch (gen.family()) {
        case Family::ewd: {
            double beta = gen.tuning();
            if (beta == 0.0) return 1.0;
            // 1 - beta*sigma * integral of (1 - exp(-phi(t)/(sigma beta))) dt
            double c = sigma * beta;
            const GlRule& rule = gl_rule(node_count(gen, sigma));
            double g = 0.0;
            for (std::size_t i = 0; i < rule.x.size(); ++i) {
                double t = 4.5 * (rule.x[i] + 1.0);
                g += 4.5 * rule.w[i] * (-std::expm1(-phi(t) / c));
            }
            return 1.0 - beta * sigma * 2.0 * g;
        }
        case Family::dpd: {
            double a = gen.tuning();
            if (a == 0.0) return 1.0;
            return std::pow(2.0 * M_PI, -0.5 * a) * std::pow(sigma, -a) *
                   std::pow(1.0 + a, -1.5);
        }
        case Family::kl: return 1.0;
        case Family::l2: return 1.0 / (2.0 * sigma * kSqrtPi);
    }
    throw DomainError("normal_integral_term: bad family");
}

double exponential_integral_term(const ConvexGenerator& gen, double lambda) {
    if (!(lambda > 0.0)) throw DomainError("exponential_integral_term: lambda must be positive");
    switch (gen.family()) {
        case Family::ewd: {
            double beta = gen.tuning();
            if (beta == 0.0) return 1.0;
            return 1.0 - lambda * beta * e1_plus_log_gamma(1.0 / (lambda * beta));
        }
        case Family::dpd: {
            double a = gen.tuning();
            if (a == 0.0) return 1.0;
            return std::pow(lambda, -a) / ((1.0 + a) * (1.0 + a));
        }
        case Family::kl: return 1.0;
        case Family::l2: return 1.0 / (2.0 * lambda);
    }
    throw DomainError("exponential_integral_term: bad family");
}

double exponential_integral_term_dlambda(const ConvexGenerator& gen, double lambda) {
    if (!(lambda > 0.0)) throw DomainError("exponential_integral_term_dlambda: lambda must be positive");
    switch (gen.family()) {
        case Family::ewd: {
            double beta = gen.tuning();
            if (beta == 0.0) return 0.0;
            double z = 1.0 / (lambda * beta);
            return beta * (-std::expm1(-z) - e1_plus_log_gamma(z));
        }
        case Family::dpd: {
            double a = gen.tuning();
            if (a == 0.0) return 0.0;
            return -a * std::pow(lambda, -a - 1.0) / ((1.0 + a) * (1.0 + a));
        }
        case Family::kl: return 0.0;
        case Family::l2: return -1.0 / (2.0 * lambda * lambda);
    }
    throw DomainError("exponential_integral_term_dlambda: bad family");
}

}  // namespace mde
