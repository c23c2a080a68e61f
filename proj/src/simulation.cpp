#include "mde/simulation.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include <json.hpp>

#include "mde/iid.hpp"
#include "mde/parallel.hpp"

namespace mde {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void validate_spec(const ExperimentSpec& spec) {
    if (!spec.model) throw DomainError("run_experiment: no model");
    if (spec.theta0.size() != spec.model->dim()) {
        throw DomainError("run_experiment: theta0 dimension mismatch");
    }
    if (!spec.model->in_domain(spec.theta0)) {
        throw DomainError("run_experiment: theta0 outside the model domain");
    }
    const ParametricModel& cont = spec.contaminant ? *spec.contaminant : *spec.model;
    for (const auto& tc : spec.contaminant_thetas) {
        if (tc.size() != cont.dim() || !cont.in_domain(tc)) {
            throw DomainError("run_experiment: bad contaminant parameter");
        }
    }
    for (double e : spec.eps_levels) {
        if (!(e > 0.0) || !(e < 1.0)) {
            throw DomainError("run_experiment: eps levels must lie in (0, 1)");
        }
    }
    if (!spec.eps_levels.empty() && spec.contaminant_thetas.empty()) {
        throw DomainError("run_experiment: eps levels given without contaminant parameters");
    }
    if (spec.n < spec.model->min_sample()) throw DomainError("run_experiment: n too small");
    if (spec.reps < 1) throw DomainError("run_experiment: reps must be >= 1");
    if (spec.estimators.empty()) throw DomainError("run_experiment: no estimators");
    if (spec.component < 0 || spec.component >= spec.model->dim()) {
        throw DomainError("run_experiment: bad target component");
    }
}

int likelihood_index(const std::vector<EstimatorSpec>& est) {
    for (std::size_t i = 0; i < est.size(); ++i) {
        if (est[i].gen.is_mle()) return static_cast<int>(i);
    }
    throw DomainError("run_experiment: estimator list needs a likelihood-tagged entry for FSRE");
}
}  // namespace

std::vector<double> sample_contaminated(const ParametricModel& target, const Vector& theta0,
                                        const ParametricModel& contaminant, const Vector& theta_c,
                                        double eps, int n, Rng& rng) {
    if (!(eps >= 0.0) || !(eps < 1.0)) throw DomainError("sample_contaminated: eps must lie in [0, 1)");
    if (n < 1) throw DomainError("sample_contaminated: n must be >= 1");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        bool tainted = rng.uniform() < eps;
        out.push_back(tainted ? contaminant.simulate(theta_c, rng)
                              : target.simulate(theta0, rng));
    }
    return out;
}

SimulationResult run_experiment(const ExperimentSpec& spec) {
    validate_spec(spec);
    const ParametricModel& model = *spec.model;
    const ParametricModel& cont = spec.contaminant ? *spec.contaminant : model;
    const int mle_idx = likelihood_index(spec.estimators);
    const int n_est = static_cast<int>(spec.estimators.size());
    const std::size_t reps = static_cast<std::size_t>(spec.reps);

    struct CellPlan {
        double eps;
        int cidx;
    };
    std::vector<CellPlan> plan;
    plan.push_back({0.0, -1});
    for (std::size_t c = 0; c < spec.contaminant_thetas.size(); ++c) {
        for (double e : spec.eps_levels) plan.push_back({e, static_cast<int>(c)});
    }

    SimulationResult result;
    result.n = spec.n;
    result.component = spec.component;
    for (const auto& es : spec.estimators) {
        result.labels.push_back(es.label.empty() ? es.gen.name() : es.label);
    }

    Rng master(spec.seed);
    const Vector theta_clean = spec.theta0;  // the clean cell reuses theta0 as a dummy
    for (std::size_t cell_id = 0; cell_id < plan.size(); ++cell_id) {
        const CellPlan& cp = plan[cell_id];
        const Vector& theta_c = cp.cidx < 0 ? theta_clean
                                            : spec.contaminant_thetas[static_cast<std::size_t>(cp.cidx)];
        // Slot per (rep, estimator): squared error, NaN when the fit failed.
        std::vector<double> sq(reps * static_cast<std::size_t>(n_est), kNan);
        run_indexed(reps, [&](std::size_t rep) {
            Rng rng = master.substream(cell_id * reps + rep);
            std::vector<double> data =
                sample_contaminated(model, spec.theta0, cont, theta_c, cp.eps, spec.n, rng);
            for (int e = 0; e < n_est; ++e) {
                double err = kNan;
                try {
                    Estimate est = estimate_iid_fast(spec.estimators[static_cast<std::size_t>(e)].gen,
                                                     model, data);
                    err = est.theta[spec.component] - spec.theta0[spec.component];
                    err = err * err;
                } catch (const Error&) {
                    // leave the slot NaN; counted below
                }
                sq[rep * static_cast<std::size_t>(n_est) + static_cast<std::size_t>(e)] = err;
            }
        });

        SimulationCell cell;
        cell.eps = cp.eps;
        cell.contaminant_index = cp.cidx;
        cell.reps = spec.reps;
        cell.mse.assign(static_cast<std::size_t>(n_est), kNan);
        cell.fsre.assign(static_cast<std::size_t>(n_est), kNan);
        cell.failures.assign(static_cast<std::size_t>(n_est), 0);
        cell.flagged.assign(static_cast<std::size_t>(n_est), 0);
        for (int e = 0; e < n_est; ++e) {
            double acc = 0.0;
            long good = 0;
            for (std::size_t rep = 0; rep < reps; ++rep) {
                double v = sq[rep * static_cast<std::size_t>(n_est) + static_cast<std::size_t>(e)];
                if (std::isnan(v)) {
                    ++cell.failures[static_cast<std::size_t>(e)];
                } else {
                    acc += v;
                    ++good;
                }
            }
            if (good > 0) cell.mse[static_cast<std::size_t>(e)] = acc / static_cast<double>(good);
            cell.flagged[static_cast<std::size_t>(e)] =
                cell.failures[static_cast<std::size_t>(e)] * 100 > spec.reps ? 1 : 0;
        }
        double mse_mle = cell.mse[static_cast<std::size_t>(mle_idx)];
        for (int e = 0; e < n_est; ++e) {
            cell.fsre[static_cast<std::size_t>(e)] =
                e == mle_idx ? 1.0 : mse_mle / cell.mse[static_cast<std::size_t>(e)];
        }
        result.cells.push_back(std::move(cell));
    }
    return result;
}

double pair_calibration(const ParametricModel& model, const Vector& theta0, int n, int reps,
                        const ConvexGenerator& reference, const std::vector<double>& beta_grid,
                        std::uint64_t seed, int component) {
    if (beta_grid.empty()) throw DomainError("pair_calibration: empty beta grid");
    if (n < model.min_sample() || reps < 1) throw DomainError("pair_calibration: bad n or reps");
    if (component < 0 || component >= model.dim()) throw DomainError("pair_calibration: bad component");
    for (double b : beta_grid) {
        if (!(b > 0.0)) throw DomainError("pair_calibration: beta grid must be positive");
    }

    const std::size_t n_col = beta_grid.size() + 1;  // reference first
    std::vector<double> sq(static_cast<std::size_t>(reps) * n_col, kNan);
    std::vector<ConvexGenerator> gens;
    gens.push_back(reference);
    for (double b : beta_grid) gens.push_back(ConvexGenerator::ewd(b));

    Rng master(seed);
    run_indexed(static_cast<std::size_t>(reps), [&](std::size_t rep) {
        Rng rng = master.substream(rep);
        std::vector<double> data;
        data.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) data.push_back(model.simulate(theta0, rng));
        for (std::size_t c = 0; c < n_col; ++c) {
            try {
                Estimate est = estimate_iid_fast(gens[c], model, data);
                double err = est.theta[component] - theta0[component];
                sq[rep * n_col + c] = err * err;
            } catch (const Error&) {
            }
        }
    });

    std::vector<double> mse(n_col, kNan);
    for (std::size_t c = 0; c < n_col; ++c) {
        double acc = 0.0;
        long good = 0;
        for (std::size_t rep = 0; rep < static_cast<std::size_t>(reps); ++rep) {
            double v = sq[rep * n_col + c];
            if (!std::isnan(v)) {
                acc += v;
                ++good;
            }
        }
        if (good > 0) mse[c] = acc / static_cast<double>(good);
    }
    if (std::isnan(mse[0])) throw EstimationError("pair_calibration: reference fit failed everywhere");

    double best_beta = kNan, best_gap = std::numeric_limits<double>::infinity();
    for (std::size_t c = 1; c < n_col; ++c) {
        if (std::isnan(mse[c])) continue;
        double gap = std::abs(mse[c] - mse[0]);
        if (gap < best_gap - 1e-18) {  // grid is ascending, so ties keep the smaller beta
            best_gap = gap;
            best_beta = beta_grid[c - 1];
        }
    }
    if (std::isnan(best_beta)) throw EstimationError("pair_calibration: every candidate failed");
    return best_beta;
}

namespace {
ExperimentSpec benchmark_base(std::shared_ptr<const ParametricModel> model, Vector theta0,
                              std::vector<Vector> theta_c) {
    ExperimentSpec spec;
    spec.model = std::move(model);
    spec.theta0 = std::move(theta0);
    spec.contaminant_thetas = std::move(theta_c);
    spec.eps_levels = {0.05, 0.10, 0.20};
    spec.n = 200;
    spec.reps = 2000;
    spec.seed = 0x5EEDFACE;
    spec.component = 0;
    return spec;
}

std::vector<EstimatorSpec> paired_estimators(const std::vector<std::pair<double, double>>& pairs) {
    std::vector<EstimatorSpec> est;
    est.push_back({ConvexGenerator::kl(), "MLE"});
    for (auto [alpha, beta] : pairs) {
        est.push_back({ConvexGenerator::dpd(alpha), ""});
        est.push_back({ConvexGenerator::ewd(beta), ""});
    }
    est.push_back({ConvexGenerator::l2(), ""});
    return est;
}

Vector scalar(double v) {
    Vector out(1);
    out[0] = v;
    return out;
}
}  // namespace

ExperimentSpec location_study_spec() {
    ExperimentSpec spec = benchmark_base(std::make_shared<NormalMean>(1.0), scalar(0.0),
                                         {scalar(3.0), scalar(5.0)});
    spec.estimators = paired_estimators(
        {{0.05, 0.001}, {0.1, 0.004}, {0.43, 0.063}, {0.74, 0.25}, {0.98, 4.0}});
    return spec;
}

ExperimentSpec scale_study_spec() {
    ExperimentSpec spec = benchmark_base(std::make_shared<NormalScale>(0.0), scalar(1.0),
                                         {scalar(3.0), scalar(5.0)});
    spec.estimators = paired_estimators(
        {{0.098, 0.001}, {0.177, 0.004}, {0.551, 0.063}, {0.884, 0.5}, {0.983, 4.0}});
    return spec;
}

ExperimentSpec exponential_study_spec() {
    ExperimentSpec spec = benchmark_base(std::make_shared<ExponentialMean>(), scalar(1.0),
                                         {scalar(3.0), scalar(5.0)});
    spec.estimators = paired_estimators(
        {{0.153, 0.004}, {0.44, 0.063}, {0.844, 1.0}, {0.989, 16.0}});
    return spec;
}

namespace {
std::shared_ptr<const ParametricModel> model_from_json(const nlohmann::json& j) {
    std::string fam = j.at("family").get<std::string>();
    if (fam == "normal-mean") return std::make_shared<NormalMean>(j.value("sigma", 1.0));
    if (fam == "normal") return std::make_shared<NormalLocationScale>();
    if (fam == "normal-scale") return std::make_shared<NormalScale>(j.value("mu", 0.0));
    if (fam == "exponential") return std::make_shared<ExponentialMean>();
    if (fam == "poisson") return std::make_shared<Poisson>();
    throw DataError("unknown model family '" + fam + "'");
}

ConvexGenerator generator_from_json(const nlohmann::json& j) {
    std::string type = j.at("type").get<std::string>();
    if (type == "mle" || type == "kl") return ConvexGenerator::kl();
    if (type == "ewd") return ConvexGenerator::ewd(j.at("beta").get<double>());
    if (type == "dpd") return ConvexGenerator::dpd(j.at("alpha").get<double>());
    if (type == "l2") return ConvexGenerator::l2();
    throw DataError("unknown estimator type '" + type + "'");
}

Vector vector_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw DataError("expected an array of numbers");
    Vector out(static_cast<int>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) out[static_cast<int>(i)] = j[i].get<double>();
    return out;
}
}  // namespace

ExperimentSpec parse_experiment_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("experiment config is not valid JSON: ") + e.what());
    }
    try {
        ExperimentSpec spec;
        spec.model = model_from_json(j.at("model"));
        spec.theta0 = vector_from_json(j.at("theta0"));
        if (j.contains("contaminant")) spec.contaminant = model_from_json(j.at("contaminant"));
        if (j.contains("contaminant_thetas")) {
            for (const auto& row : j.at("contaminant_thetas")) {
                spec.contaminant_thetas.push_back(vector_from_json(row));
            }
        }
        if (j.contains("eps")) spec.eps_levels = j.at("eps").get<std::vector<double>>();
        spec.n = j.value("n", 200);
        spec.reps = j.value("reps", 2000);
        spec.seed = j.value("seed", static_cast<std::uint64_t>(0x5EEDFACE));
        spec.component = j.value("component", 0);
        for (const auto& e : j.at("estimators")) {
            spec.estimators.push_back({generator_from_json(e), e.value("label", std::string())});
        }
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("experiment config is missing or mistypes a field: ") + e.what());
    }
}

}  // namespace mde
