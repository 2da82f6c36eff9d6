#ifndef SURVIMP_IMPUTATION_HPP
#define SURVIMP_IMPUTATION_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "survimp/matching.hpp"
#include "survimp/meanmodel.hpp"

namespace survimp {

enum class Method { PMM, NNI, NNI_BC, SRI };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct ImputedEstimate {
    Method method = Method::PMM;
    double mu_hat = 0.0;
    DonorAssignment assignment;     // donor record; for SRI, k holds the
                                    // residual selection counts
    Eigen::VectorXd beta_hat;       // empty for plain NNI
};

/// Predictive mean matching: fit the working model, match nonrespondents on
/// the fitted means, average donor values with design weights. The donor-sum
/// and k-weighted forms of the estimator are both computed and checked equal.
ImputedEstimate pmm_estimate(const SurveySample& sample, const MeanModel& model);

/// Same, skipping the fit (matching on m(x; beta) with beta supplied).
ImputedEstimate pmm_estimate_known_beta(const SurveySample& sample,
                                        const MeanModel& model,
                                        const Eigen::VectorXd& beta);

/// Nearest neighbor imputation matching on the listed covariates directly.
ImputedEstimate nni_estimate(const SurveySample& sample,
                             std::span<const int> covariates);

/// NNI with the matching discrepancy removed through the fitted working
/// model: y* = m^(x_i) + y_{i(1)} - m^(x_{i(1)}).
ImputedEstimate nni_bias_corrected(const SurveySample& sample,
                                   const MeanModel& model);

/// Stochastic regression imputation; residual donors drawn uniformly with
/// replacement from respondent residuals on a dedicated substream of `seed`.
ImputedEstimate sri_estimate(const SurveySample& sample, const MeanModel& model,
                             std::uint64_t seed);

/// psi_i = m(x_i;beta) + delta_i (1 + k_i) {y_i - m(x_i;beta)}.
std::vector<double> pseudo_values(const SurveySample& sample,
                                  const MeanModel& model,
                                  const Eigen::VectorXd& beta,
                                  const DonorAssignment& assignment);

namespace diag {
/// Exact finite-sample decomposition of the centered matching estimator:
/// main term (HT of the pseudo-values, centered at mu) and matching
/// discrepancy, both scaled by n^{1/2}. Satisfies
/// main_term + discrepancy == n^{1/2} (mu_hat - mu).
struct Decomposition {
    double main_term = 0.0;    // centered pseudo-value HT mean
    double discrepancy = 0.0;  // scaled sum of m(x_donor) - m(x_recipient)
};
Decomposition decompose(const SurveySample& sample, const MeanModel& model,
                        const Eigen::VectorXd& beta,
                        const DonorAssignment& assignment, double mu_true);
}  // namespace diag

}  // namespace survimp

#endif
