#ifndef SURVIMP_MEANMODEL_HPP
#define SURVIMP_MEANMODEL_HPP

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "survimp/design.hpp"

namespace survimp {

/// Linear working mean model m(x; b) = b0 + sum_j b_j x_j over the active
/// covariates; the gradient is (1, x_active).
struct MeanModel {
    std::vector<int> active;  // 0-based covariate indices

    int dim() const { return static_cast<int>(active.size()) + 1; }
    static MeanModel for_population(PopulationKind kind) {
        return kind == PopulationKind::P3 ? MeanModel{{0, 1, 2, 3, 4, 5}}
                                          : MeanModel{{0, 1}};
    }
};

struct FittedModel {
    Eigen::VectorXd beta;
    double score_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

struct DegenerateDesignError : Error {
    using Error::Error;
};

double predict(const MeanModel& model, const Eigen::VectorXd& beta,
               std::span<const double> x_row);

std::vector<double> predict_all(const MeanModel& model,
                                const Eigen::VectorXd& beta,
                                const SurveySample& sample);

/// Normalized estimating-equation value
///   (n^{1/2}/N) sum_{i in A} pi_i^{-1} delta_i g(x_i;b) {y_i - m(x_i;b)}.
Eigen::VectorXd score(const SurveySample& sample, const MeanModel& model,
                      const Eigen::VectorXd& beta);

/// Weighted least squares on respondent rows. `weights` supplies replicate
/// weights w_i^{(k)}; the base weights w_i are used when absent. Throws
/// DegenerateDesignError when the respondent design matrix is singular.
FittedModel fit_mean_model(const SurveySample& sample, const MeanModel& model,
                           std::span<const double> weights = {},
                           double ridge = 0.0);

namespace detail {
/// Guarded Newton iteration on the weighted estimating equation (tolerance
/// 1e-10, max 50 iterations, step halving). Kept for nonlinear mean models;
/// agrees with the direct solve on the linear one.
FittedModel newton_solve(const SurveySample& sample, const MeanModel& model,
                         std::span<const double> weights,
                         const Eigen::VectorXd& beta0);
}  // namespace detail

}  // namespace survimp

#endif
