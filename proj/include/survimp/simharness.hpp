#ifndef SURVIMP_SIMHARNESS_HPP
#define SURVIMP_SIMHARNESS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "survimp/repvar.hpp"

namespace survimp {

std::string population_kind_name(PopulationKind k);
PopulationKind population_kind_from_name(const std::string& name);
std::string design_kind_name(DesignKind k);
DesignKind design_kind_from_name(const std::string& name);

struct SimulationConfig {
    PopulationSpec population;
    DesignKind design = DesignKind::SRS;
    int sample_size = 400;
    std::vector<Method> methods{Method::PMM};
    int reps = 2000;
    std::uint64_t base_seed = 0;
    SchemeKind scheme = SchemeKind::JackknifeD1;
    int bootstrap_replicates = 500;
    int threads = 1;
};

struct MethodSummary {
    Method method = Method::PMM;
    double bias_e2 = 0.0;  // mean(mu_hat - mu) * 100
    double se_e2 = 0.0;    // MC std of mu_hat * 100
    double rb_e2 = 0.0;    // 100 * (mean(V) - var_MC) / var_MC
    double cr_pct = 0.0;   // 100 * fraction of CIs covering mu
};

struct SimulationResult {
    std::string population;
    std::string design;
    std::int64_t popsize = 0;
    int sample_size = 0;
    int reps = 0;
    std::uint64_t seed = 0;
    double mu_true = 0.0;
    double runtime_s = 0.0;
    std::vector<MethodSummary> methods;
};

/// One fixed population (with its response indicators) per config; `reps`
/// independent sample draws; per draw, every requested estimator plus its
/// replication variance and 95% CI. Deterministic given base_seed, including
/// under multithreading.
SimulationResult run_monte_carlo(const SimulationConfig& config);

/// Text table in the methods-by-metrics layout plus an embedded JSON record.
std::string format_table(std::span<const SimulationResult> results);

std::string results_to_json(std::span<const SimulationResult> results);
std::vector<SimulationResult> results_from_json(const std::string& text);

/// Extracts the machine-readable record back out of a formatted table.
std::vector<SimulationResult> parse_table(const std::string& table);

}  // namespace survimp

#endif
