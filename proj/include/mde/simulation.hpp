#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mde/generator.hpp"
#include "mde/model.hpp"

namespace mde {

struct EstimatorSpec {
    ConvexGenerator gen;
    std::string label;
};

// Contamination study: data are drawn from (1 - eps) f_theta0 + eps h_thetac
// with a per-draw coin, the listed estimators are fitted to the same sample,
// and squared error on the target component is averaged over replicates.
struct ExperimentSpec {
    std::shared_ptr<const ParametricModel> model;
    Vector theta0;
    std::shared_ptr<const ParametricModel> contaminant;  // null = same as model
    std::vector<Vector> contaminant_thetas;
    std::vector<double> eps_levels;  // strictly positive; the clean cell is always run
    int n = 200;
    int reps = 2000;
    std::vector<EstimatorSpec> estimators;  // must contain a likelihood-tagged entry
    std::uint64_t seed = 0x5EEDFACE;
    int component = 0;
};

struct SimulationCell {
    double eps = 0.0;
    int contaminant_index = -1;  // -1 marks the clean cell
    std::vector<double> mse;     // per estimator, failed replicates excluded
    std::vector<double> fsre;    // MSE(likelihood fit) / MSE(estimator)
    std::vector<int> failures;   // per estimator
    std::vector<char> flagged;   // failures exceeded 1% of reps; mse is suspect
    int reps = 0;
};

struct SimulationResult {
    std::vector<std::string> labels;
    std::vector<SimulationCell> cells;  // clean cell first, then column-major over
                                        // contaminant_thetas x eps_levels
    int n = 0;
    int component = 0;
};

// One sample of size n with the per-draw contamination coin. The coin is
// drawn before the observation so the stream layout does not depend on eps.
std::vector<double> sample_contaminated(const ParametricModel& target, const Vector& theta0,
                                        const ParametricModel& contaminant, const Vector& theta_c,
                                        double eps, int n, Rng& rng);

// Replicates use one substream each (index = cell * reps + rep), so every
// estimator inside a replicate sees the same sample and reruns are exact.
// Failed replicates are excluded from the estimator's average and counted;
// a count above 1% of reps flags the cell entry as suspect.
SimulationResult run_experiment(const ExperimentSpec& spec);

// Clean-sample MSE of ewd(beta) on common data for each grid point, matched
// against the reference generator's; returns the beta whose MSE is closest,
// ties toward the smaller value.
double pair_calibration(const ParametricModel& model, const Vector& theta0, int n, int reps,
                        const ConvexGenerator& reference, const std::vector<double>& beta_grid,
                        std::uint64_t seed, int component = 0);

// The three benchmark studies: location, scale, and exponential mean under
// 5%/10%/20% contamination at two outlier severities, n = 200, 2000 runs.
ExperimentSpec location_study_spec();
ExperimentSpec scale_study_spec();
ExperimentSpec exponential_study_spec();

// JSON form of ExperimentSpec; see README for the schema.
ExperimentSpec parse_experiment_json(const std::string& text);

}  // namespace mde
