#include <pybind11/pybind11.h>
#include <pybind11/eigen.h>
#include <pybind11/stl.h>

#include "survimp/io.hpp"
#include "survimp/simharness.hpp"

namespace py = pybind11;
using namespace survimp;

namespace {

ReplicationScheme make_scheme(const SurveySample& sample,
                              const std::string& name, int bootstrap_reps,
                              std::uint64_t seed) {
    return scheme_from_name(name) == SchemeKind::JackknifeD1
               ? ReplicationScheme::jackknife(sample.n())
               : ReplicationScheme::bootstrap(bootstrap_reps, sample.n(), seed);
}

}  // namespace

PYBIND11_MODULE(_survimpute, m) {
    m.doc() = "Design-weighted survey imputation: predictive mean matching, "
              "nearest neighbor imputation and replication variance "
              "estimation.";

    py::register_exception<Error>(m, "SurvimputeError");

    py::enum_<PopulationKind>(m, "PopulationKind")
        .value("P1", PopulationKind::P1)
        .value("P2", PopulationKind::P2)
        .value("P3", PopulationKind::P3);

    py::class_<PopulationSpec>(m, "PopulationSpec")
        .def(py::init([](PopulationKind kind, std::int64_t size,
                         std::uint64_t seed) {
                 return PopulationSpec{kind, size, seed};
             }),
             py::arg("kind"), py::arg("size"), py::arg("seed"))
        .def_readwrite("kind", &PopulationSpec::kind)
        .def_readwrite("size", &PopulationSpec::size)
        .def_readwrite("seed", &PopulationSpec::seed);

    py::class_<FinitePopulation>(m, "FinitePopulation")
        .def_readonly("size", &FinitePopulation::size)
        .def_readonly("x", &FinitePopulation::x)
        .def_readonly("y", &FinitePopulation::y)
        .def_readonly("delta", &FinitePopulation::delta)
        .def("mean", &population_mean)
        .def("to_csv", &population_to_csv);

    py::class_<SurveySample>(m, "SurveySample")
        .def_readonly("ids", &SurveySample::ids)
        .def_readonly("x", &SurveySample::x)
        .def_readonly("p", &SurveySample::p)
        .def_readonly("y", &SurveySample::y)
        .def_readonly("delta", &SurveySample::delta)
        .def_readonly("pi", &SurveySample::pi)
        .def_readonly("weights", &SurveySample::weights)
        .def_readonly("popsize", &SurveySample::popsize)
        .def_property_readonly("n", &SurveySample::n)
        .def("to_csv", &sample_to_csv);

    py::class_<MeanModel>(m, "MeanModel")
        .def(py::init([](std::vector<int> active) {
                 return MeanModel{std::move(active)};
             }),
             py::arg("active"))
        .def_readonly("active", &MeanModel::active)
        .def_property_readonly("dim", &MeanModel::dim);

    py::class_<FittedModel>(m, "FittedModel")
        .def_readonly("beta", &FittedModel::beta)
        .def_readonly("score_norm", &FittedModel::score_norm)
        .def_readonly("iterations", &FittedModel::iterations)
        .def_readonly("converged", &FittedModel::converged);

    py::class_<DonorAssignment>(m, "DonorAssignment")
        .def_readonly("donor_of", &DonorAssignment::donor_of)
        .def_readonly("k", &DonorAssignment::k);

    py::class_<ImputedEstimate>(m, "ImputedEstimate")
        .def_property_readonly(
            "method",
            [](const ImputedEstimate& e) { return method_name(e.method); })
        .def_readonly("mu_hat", &ImputedEstimate::mu_hat)
        .def_readonly("assignment", &ImputedEstimate::assignment)
        .def_readonly("beta_hat", &ImputedEstimate::beta_hat);

    py::class_<EstimateReport>(m, "EstimateReport")
        .def_readonly("mu_hat", &EstimateReport::mu_hat)
        .def_readonly("v_hat", &EstimateReport::v_hat)
        .def_readonly("ci", &EstimateReport::ci)
        .def_readonly("n", &EstimateReport::n)
        .def_readonly("respondents", &EstimateReport::respondents)
        .def_readonly("replicates", &EstimateReport::replicates)
        .def("to_json",
             [](const EstimateReport& r) { return report_to_json(r); });

    m.def("generate_population", &generate_population, py::arg("spec"));
    m.def("apply_response_model", &apply_response_model, py::arg("population"),
          py::arg("seed"));
    m.def("population_mean", &population_mean);
    m.def("population_from_csv", &population_from_csv);

    m.def("draw_srs", &draw_srs, py::arg("population"), py::arg("n"),
          py::arg("seed"));
    m.def("compute_pps_probabilities", &compute_pps_probabilities,
          py::arg("population"), py::arg("n"), py::arg("seed"));
    m.def(
        "draw_pps",
        [](const FinitePopulation& pop, const std::vector<double>& pi,
           std::uint64_t seed) { return draw_pps(pop, pi, seed); },
        py::arg("population"), py::arg("pi"), py::arg("seed"));
    m.def(
        "horvitz_thompson",
        [](const SurveySample& s, const std::vector<double>& values) {
            return horvitz_thompson(s, values);
        },
        py::arg("sample"), py::arg("values"));
    m.def("sample_from_csv", &sample_from_csv, py::arg("csv"),
          py::arg("popsize"));

    m.def(
        "fit_mean_model",
        [](const SurveySample& s, const MeanModel& model) {
            return fit_mean_model(s, model);
        },
        py::arg("sample"), py::arg("model"));
    m.def(
        "match_scalar",
        [](const std::vector<double>& donors,
           const std::vector<double>& recipients) {
            return match_scalar(donors, recipients);
        },
        py::arg("donor_scores"), py::arg("recipient_scores"));
    m.def(
        "match_vector",
        [](const std::vector<double>& donors,
           const std::vector<double>& recipients, int p) {
            return match_vector(donors, recipients, p);
        },
        py::arg("donor_x"), py::arg("recipient_x"), py::arg("p"));

    m.def("pmm_estimate", &pmm_estimate, py::arg("sample"), py::arg("model"));
    m.def(
        "nni_estimate",
        [](const SurveySample& s, const std::vector<int>& covariates) {
            return nni_estimate(s, covariates);
        },
        py::arg("sample"), py::arg("covariates"));
    m.def("nni_bias_corrected", &nni_bias_corrected, py::arg("sample"),
          py::arg("model"));
    m.def("sri_estimate", &sri_estimate, py::arg("sample"), py::arg("model"),
          py::arg("seed"));

    m.def(
        "estimate_with_variance",
        [](const SurveySample& sample, const MeanModel& model,
           const std::string& method, const std::string& scheme,
           int bootstrap_reps, std::uint64_t seed) {
            return estimate_with_variance(
                sample, model, method_from_name(method),
                make_scheme(sample, scheme, bootstrap_reps, seed), seed);
        },
        py::arg("sample"), py::arg("model"), py::arg("method") = "pmm",
        py::arg("scheme") = "jackknife", py::arg("bootstrap_reps") = 500,
        py::arg("seed") = 0);

    m.def(
        "run_monte_carlo",
        [](const std::string& population, std::int64_t pop_size,
           const std::string& design, int n,
           const std::vector<std::string>& methods, int reps,
           std::uint64_t seed, const std::string& scheme, int bootstrap_reps,
           int threads) {
            SimulationConfig config;
            config.population.kind = population_kind_from_name(population);
            config.population.size = pop_size;
            config.population.seed = seed;
            config.design = design_kind_from_name(design);
            config.sample_size = n;
            config.reps = reps;
            config.base_seed = seed;
            config.scheme = scheme_from_name(scheme);
            config.bootstrap_replicates = bootstrap_reps;
            config.threads = threads;
            config.methods.clear();
            for (const auto& name : methods)
                config.methods.push_back(method_from_name(name));
            const SimulationResult result = run_monte_carlo(config);
            return results_to_json({&result, 1});
        },
        py::arg("population"), py::arg("pop_size"), py::arg("design"),
        py::arg("n"), py::arg("methods"), py::arg("reps"), py::arg("seed"),
        py::arg("scheme") = "jackknife", py::arg("bootstrap_reps") = 500,
        py::arg("threads") = 1);
}
