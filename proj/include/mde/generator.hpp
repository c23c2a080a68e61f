#pragma once

#include <string>
#include <vector>

#include "mde/errors.hpp"

namespace mde {

enum class Family { ewd, dpd, kl, l2 };

// Convex generator B of a Bregman divergence, with the derived quantities the
// estimation machinery needs. Everything is defined on x > 0; the weight
// function w(t) = B''(t) t extends continuously to t = 0.
class ConvexGenerator {
public:
    static ConvexGenerator ewd(double beta);   // exponentially weighted, beta >= 0
    static ConvexGenerator dpd(double alpha);  // density power, alpha >= 0
    static ConvexGenerator kl();
    static ConvexGenerator l2();

    Family family() const { return fam_; }
    double tuning() const { return tune_; }

    // True for KL and for the zero-tuning members of both families; these are
    // the likelihood estimator and are fitted in closed form, since B itself
    // degenerates (EWD) or is only defined as a limit (DPD) at 0.
    bool is_mle() const;

    std::string name() const;  // "E(0.25)", "D(0.5)", "KL", "L2"

    double b(double x) const;
    double b_prime(double x) const;
    double b_second(double x) const;
    double b_third(double x) const;

    double weight(double t) const;        // B''(t) t
    double weight_prime(double t) const;  // B''(t) + B'''(t) t

    // x B'(x) - B(x) = integral of w over (0, x]; the model-side term of the
    // estimating objective.
    double antiderivative_term(double x) const;

private:
    ConvexGenerator(Family f, double t) : fam_(f), tune_(t) {}
    Family fam_;
    double tune_;
};

// Series form of the EWD generator, summed adaptively (terms alternate; stops
// when the next term is below 1e-17 of the partial sum). Agrees with the
// closed form everywhere both converge; exported for the identity check.
double ewd_b_series(double x, double beta);

// Two densities tabulated on a common quadrature grid.
struct DensityGrid {
    std::vector<double> x;    // nodes (unused by the sum, kept for provenance)
    std::vector<double> wts;  // positive quadrature weights
    std::vector<double> g;    // first density at the nodes
    std::vector<double> f;    // second density at the nodes
};

// D_B(g, f) = sum wts * [B(g) - B(f) - (g - f) B'(f)]. Zero density values
// take the B(0) = 0 limit; g > 0 where f = 0 is rejected for the KL-type
// generators (B' unbounded at 0) and uses B'(0+) = 0 for EWD, DPD and L2.
double divergence(const ConvexGenerator& gen, const DensityGrid& grid);

}  // namespace mde
