"""Design-weighted survey imputation.

Predictive mean matching, nearest neighbor imputation (plain and
bias-corrected), stochastic regression imputation, and replication variance
estimation built from the linear (pseudo-value) form of the estimators.
"""

from ._survimpute import (
    DonorAssignment,
    EstimateReport,
    FinitePopulation,
    FittedModel,
    ImputedEstimate,
    MeanModel,
    PopulationKind,
    PopulationSpec,
    SurveySample,
    SurvimputeError,
    apply_response_model,
    compute_pps_probabilities,
    draw_pps,
    draw_srs,
    estimate_with_variance,
    fit_mean_model,
    generate_population,
    horvitz_thompson,
    match_scalar,
    match_vector,
    nni_bias_corrected,
    nni_estimate,
    pmm_estimate,
    population_from_csv,
    population_mean,
    run_monte_carlo,
    sample_from_csv,
    sri_estimate,
)

__all__ = [
    "DonorAssignment",
    "EstimateReport",
    "FinitePopulation",
    "FittedModel",
    "ImputedEstimate",
    "MeanModel",
    "PopulationKind",
    "PopulationSpec",
    "SurveySample",
    "SurvimputeError",
    "apply_response_model",
    "compute_pps_probabilities",
    "draw_pps",
    "draw_srs",
    "estimate_with_variance",
    "fit_mean_model",
    "generate_population",
    "horvitz_thompson",
    "match_scalar",
    "match_vector",
    "nni_bias_corrected",
    "nni_estimate",
    "pmm_estimate",
    "population_from_csv",
    "population_mean",
    "run_monte_carlo",
    "sample_from_csv",
    "sri_estimate",
]
