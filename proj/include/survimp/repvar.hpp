#ifndef SURVIMP_REPVAR_HPP
#define SURVIMP_REPVAR_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "survimp/imputation.hpp"

namespace survimp {

enum class SchemeKind { JackknifeD1, Bootstrap };

std::string scheme_name(SchemeKind k);
SchemeKind scheme_from_name(const std::string& name);

/// Replicate weight generator. Delete-1 jackknife: L = n, c_k = (n-1)/n,
/// w_i^{(k)} = n w_i / (n-1) for i != k and w_k^{(k)} = 0. Bootstrap:
/// c_k = 1/L, w_i^{(k)} = w_i m_i n/(n-1) with multiplicities m from a
/// with-replacement resample of the sample rows.
class ReplicationScheme {
  public:
    static ReplicationScheme jackknife(int n);
    static ReplicationScheme bootstrap(int L, int n, std::uint64_t seed);

    SchemeKind kind() const { return kind_; }
    int replicate_count() const { return L_; }
    double factor(int k) const { return c_[k]; }

    /// Fills `out` (size n) with the absolute replicate weights w_i^{(k)}.
    void replicate_weights(int k, std::span<const double> base_weights,
                           std::vector<double>& out) const;

  private:
    SchemeKind kind_ = SchemeKind::JackknifeD1;
    int L_ = 0;
    int n_ = 0;
    std::vector<double> c_;
    std::vector<std::uint16_t> multiplicities_;  // L x n, bootstrap only
};

/// V_rep = sum_k c_k (mu^{(k)} - mu_hat)^2.
double replication_variance(double mu_hat, std::span<const double> replicates,
                            const ReplicationScheme& scheme);

struct ReplicateSet {
    std::vector<double> mu;               // per-replicate values, in k order
    std::vector<Eigen::VectorXd> beta;    // per-replicate fits
    double center = 0.0;                  // base-weight value of the same
                                          // linear form the replicates use
    int damped = 0;                       // fits recovered by ridge damping
};

/// PMM replicates: refit beta on the replicate weights, then assemble the
/// pseudo-value sum with donor counts frozen at the base assignment. With
/// rematch=true the nonrespondents are re-matched on the replicate fitted
/// means instead; at moderate n the donor flips this induces act as
/// incoherent noise of the same order as the target variance and inflate
/// the estimator badly, so frozen counts are the default. Matching always
/// draws from the full respondent pool; replicate weights never remove
/// donors.
ReplicateSet pmm_replicates(const SurveySample& sample, const MeanModel& model,
                            const ReplicationScheme& scheme,
                            bool rematch = false);

/// Known-beta variant: the matching (and hence the pseudo-values) stays
/// fixed, only the weights vary.
ReplicateSet pmm_replicates_known_beta(const SurveySample& sample,
                                       const MeanModel& model,
                                       const Eigen::VectorXd& beta,
                                       const ReplicationScheme& scheme);

/// Replicates with donor counts frozen at `base_k` (SRI residual selection
/// counts, or NNI donor counts, which do not depend on beta); beta is refit
/// per replicate.
ReplicateSet fixed_count_replicates(const SurveySample& sample,
                                    const MeanModel& model,
                                    std::span<const double> base_k,
                                    const ReplicationScheme& scheme);

/// Plug-in sample analogues of the asymptotic variance pieces. sigma2 maps a
/// covariate row to var(y | x); when absent a pooled residual variance from
/// the fitted model is used. Diagnostic-grade, not the shipped estimator.
struct PluginDiagnostics {
    double v1 = 0.0;  // vm + ve
    double vm = 0.0;  // design variance of the fitted means
    double ve = 0.0;  // residual term with (1 + k)^2 weighting
    Eigen::VectorXd gamma1;
    Eigen::VectorXd gamma2;
    Eigen::MatrixXd v_s;
    Eigen::MatrixXd i_beta;
    double v2 = 0.0;  // v1 adjusted for the estimated predictive mean
};
PluginDiagnostics plugin_variance_diagnostics(
    const SurveySample& sample, const MeanModel& model,
    const Eigen::VectorXd& beta, const DonorAssignment& assignment,
    std::optional<std::function<double(std::span<const double>)>> sigma2 =
        std::nullopt);

/// mu_hat -/+ z sqrt(v_hat); z hardcoded for levels 0.90, 0.95, 0.99.
std::pair<double, double> confidence_interval(double mu_hat, double v_hat,
                                              double level = 0.95);

struct EstimateReport {
    Method method = Method::PMM;
    SchemeKind scheme = SchemeKind::JackknifeD1;
    double mu_hat = 0.0;
    double v_hat = 0.0;
    std::pair<double, double> ci{0.0, 0.0};
    int n = 0;
    int respondents = 0;
    int replicate_count = 0;
    std::vector<double> replicates;  // per-k values for audit dumps
};

/// Full pipeline: point estimate, replication variance, 95% CI.
EstimateReport estimate_with_variance(const SurveySample& sample,
                                      const MeanModel& model, Method method,
                                      const ReplicationScheme& scheme,
                                      std::uint64_t seed);

}  // namespace survimp

#endif
