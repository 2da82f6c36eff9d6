#include "survimp/simharness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "survimp/rng.hpp"

namespace survimp {

using ordered_json = nlohmann::ordered_json;

std::string population_kind_name(PopulationKind k) {
    switch (k) {
        case PopulationKind::P1: return "P1";
        case PopulationKind::P2: return "P2";
        case PopulationKind::P3: return "P3";
    }
    return "?";
}

PopulationKind population_kind_from_name(const std::string& name) {
    if (name == "P1" || name == "p1") return PopulationKind::P1;
    if (name == "P2" || name == "p2") return PopulationKind::P2;
    if (name == "P3" || name == "p3") return PopulationKind::P3;
    throw Error("unknown population kind: " + name);
}

std::string design_kind_name(DesignKind k) {
    return k == DesignKind::SRS ? "srs" : "pps";
}

DesignKind design_kind_from_name(const std::string& name) {
    if (name == "srs") return DesignKind::SRS;
    if (name == "pps") return DesignKind::PPS;
    throw Error("unknown design: " + name);
}

namespace {

struct RepOutcome {
    bool ok = false;
    double mu = 0.0;
    double v = 0.0;
    bool covered = false;
};

}  // namespace

SimulationResult run_monte_carlo(const SimulationConfig& config) {
    if (config.reps < 1) throw Error("reps must be >= 1");
    const auto t0 = std::chrono::steady_clock::now();

    FinitePopulation pop = generate_population(config.population);
    apply_response_model(
        pop, derive_seed(config.population.seed, seedtag::response));
    const double mu = population_mean(pop);

    std::vector<double> pps_pi;
    if (config.design == DesignKind::PPS)
        pps_pi = compute_pps_probabilities(
            pop, config.sample_size,
            derive_seed(config.population.seed, seedtag::size_var));

    const MeanModel model = MeanModel::for_population(config.population.kind);
    const int M = config.reps;
    const int n_methods = static_cast<int>(config.methods.size());
    std::vector<RepOutcome> outcomes(static_cast<std::size_t>(M) * n_methods);

    auto run_rep = [&](int rep) {
        const std::uint64_t rep_seed =
            derive_seed(config.base_seed, seedtag::rep, rep);
        SurveySample sample =
            config.design == DesignKind::SRS
                ? draw_srs(pop, config.sample_size, rep_seed)
                : draw_pps(pop, pps_pi, rep_seed);
        const ReplicationScheme scheme =
            config.scheme == SchemeKind::JackknifeD1
                ? ReplicationScheme::jackknife(sample.n())
                : ReplicationScheme::bootstrap(config.bootstrap_replicates,
                                               sample.n(), rep_seed);
        for (int m = 0; m < n_methods; ++m) {
            RepOutcome& out = outcomes[static_cast<std::size_t>(rep) * n_methods + m];
            try {
                const EstimateReport report = estimate_with_variance(
                    sample, model, config.methods[m], scheme, rep_seed);
                out.ok = true;
                out.mu = report.mu_hat;
                out.v = report.v_hat;
                out.covered = report.ci.first <= mu && mu <= report.ci.second;
            } catch (const Error&) {
                out.ok = false;
            }
        }
    };

    int threads = config.threads;
    if (threads <= 0)
        threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, M));
    if (threads == 1) {
        for (int rep = 0; rep < M; ++rep) run_rep(rep);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (int rep = next.fetch_add(1); rep < M;
                     rep = next.fetch_add(1))
                    run_rep(rep);
            });
        for (auto& th : pool) th.join();
    }

    SimulationResult result;
    result.population = population_kind_name(config.population.kind);
    result.design = design_kind_name(config.design);
    result.popsize = config.population.size;
    result.sample_size = config.sample_size;
    result.reps = M;
    result.seed = config.base_seed;
    result.mu_true = mu;

    for (int m = 0; m < n_methods; ++m) {
        std::vector<double> mus, vs;
        int covered = 0, failed = 0;
        for (int rep = 0; rep < M; ++rep) {
            const RepOutcome& out =
                outcomes[static_cast<std::size_t>(rep) * n_methods + m];
            if (!out.ok) {
                ++failed;
                continue;
            }
            mus.push_back(out.mu);
            vs.push_back(out.v);
            covered += out.covered ? 1 : 0;
        }
        if (failed * 100 > M)
            throw Error("more than 1% of Monte Carlo reps failed for method " +
                        method_name(config.methods[m]));
        const int ok = static_cast<int>(mus.size());
        MethodSummary summary;
        summary.method = config.methods[m];
        double mean_mu = 0.0;
        for (double v : mus) mean_mu += v;
        mean_mu /= ok;
        summary.bias_e2 = (mean_mu - mu) * 100.0;
        double var_mc = 0.0;
        for (double v : mus) var_mc += (v - mean_mu) * (v - mean_mu);
        var_mc = ok > 1 ? var_mc / (ok - 1) : 0.0;
        summary.se_e2 = std::sqrt(var_mc) * 100.0;
        double mean_v = 0.0;
        for (double v : vs) mean_v += v;
        mean_v /= ok;
        summary.rb_e2 = var_mc > 0.0 ? 100.0 * (mean_v - var_mc) / var_mc : 0.0;
        summary.cr_pct = 100.0 * covered / ok;
        result.methods.push_back(summary);
    }

    result.runtime_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return result;
}

namespace {

ordered_json result_record(const SimulationResult& r, const MethodSummary& m) {
    ordered_json rec;
    rec["scenario"] = {{"population", r.population},
                       {"design", r.design},
                       {"popsize", r.popsize},
                       {"n", r.sample_size},
                       {"mu_true", r.mu_true}};
    rec["method"] = method_name(m.method);
    rec["bias_e2"] = m.bias_e2;
    rec["se_e2"] = m.se_e2;
    rec["rb_e2"] = m.rb_e2;
    rec["cr_pct"] = m.cr_pct;
    rec["M"] = r.reps;
    rec["seed"] = r.seed;
    rec["runtime_s"] = r.runtime_s;
    return rec;
}

}  // namespace

std::string results_to_json(std::span<const SimulationResult> results) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : results)
        for (const auto& m : r.methods) arr.push_back(result_record(r, m));
    return arr.dump(2) + "\n";
}

std::vector<SimulationResult> results_from_json(const std::string& text) {
    const ordered_json arr = ordered_json::parse(text);
    std::vector<SimulationResult> out;
    for (const auto& rec : arr) {
        const auto& sc = rec.at("scenario");
        SimulationResult probe;
        probe.population = sc.at("population").get<std::string>();
        probe.design = sc.at("design").get<std::string>();
        probe.popsize = sc.at("popsize").get<std::int64_t>();
        probe.sample_size = sc.at("n").get<int>();
        probe.mu_true = sc.at("mu_true").get<double>();
        probe.reps = rec.at("M").get<int>();
        probe.seed = rec.at("seed").get<std::uint64_t>();
        probe.runtime_s = rec.at("runtime_s").get<double>();

        SimulationResult* target = nullptr;
        if (!out.empty()) {
            SimulationResult& last = out.back();
            if (last.population == probe.population &&
                last.design == probe.design && last.popsize == probe.popsize &&
                last.sample_size == probe.sample_size &&
                last.reps == probe.reps && last.seed == probe.seed)
                target = &last;
        }
        if (!target) {
            out.push_back(probe);
            target = &out.back();
        }
        MethodSummary m;
        m.method = method_from_name(rec.at("method").get<std::string>());
        m.bias_e2 = rec.at("bias_e2").get<double>();
        m.se_e2 = rec.at("se_e2").get<double>();
        m.rb_e2 = rec.at("rb_e2").get<double>();
        m.cr_pct = rec.at("cr_pct").get<double>();
        target->methods.push_back(m);
    }
    return out;
}

namespace {
constexpr const char* kRecordMarker = "--- machine-readable record ---";
}

std::string format_table(std::span<const SimulationResult> results) {
    std::ostringstream os;
    os << "Bias (x100) and S.E. (x100) of the point estimator, relative bias "
          "(x100)\nof the variance estimate and coverage rate (%) of 95% "
          "confidence intervals.\n\n";
    char line[256];
    std::snprintf(line, sizeof(line), "%-16s %-8s %8s %8s %8s %8s\n",
                  "scenario", "method", "Bias", "S.E.", "RB", "CR");
    os << line;
    for (const auto& r : results) {
        const std::string scen = r.population + "/" + r.design +
                                 " n=" + std::to_string(r.sample_size);
        for (const auto& m : r.methods) {
            std::snprintf(line, sizeof(line),
                          "%-16s %-8s %8.2f %8.2f %8.0f %8.1f\n", scen.c_str(),
                          method_name(m.method).c_str(), m.bias_e2, m.se_e2,
                          m.rb_e2, m.cr_pct);
            os << line;
        }
    }
    os << "\n" << kRecordMarker << "\n" << results_to_json(results);
    return os.str();
}

std::vector<SimulationResult> parse_table(const std::string& table) {
    const std::size_t pos = table.find(kRecordMarker);
    if (pos == std::string::npos)
        throw Error("formatted table has no machine-readable record");
    return results_from_json(
        table.substr(pos + std::string(kRecordMarker).size()));
}

}  // namespace survimp
