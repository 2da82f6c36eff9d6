#include "survimp/imputation.hpp"

#include <cmath>

#include "survimp/rng.hpp"

namespace survimp {

std::string method_name(Method m) {
    switch (m) {
        case Method::PMM: return "pmm";
        case Method::NNI: return "nni";
        case Method::NNI_BC: return "nni_bc";
        case Method::SRI: return "sri";
    }
    return "?";
}

Method method_from_name(const std::string& name) {
    if (name == "pmm") return Method::PMM;
    if (name == "nni") return Method::NNI;
    if (name == "nni_bc") return Method::NNI_BC;
    if (name == "sri") return Method::SRI;
    throw Error("unknown method: " + name);
}

namespace {

int require_respondents(const SurveySample& sample) {
    int r = 0;
    for (int i = 0; i < sample.n(); ++i) r += sample.delta[i] ? 1 : 0;
    if (r == 0) throw Error("no respondents to draw donors from");
    return r;
}

/// Donor-sum form of the matching estimator.
double donor_sum_estimate(const SurveySample& sample,
                          const DonorAssignment& a) {
    double sum = 0.0;
    for (int i = 0; i < sample.n(); ++i) {
        const double v = sample.delta[i] ? sample.y[i] : sample.y[a.donor_of[i]];
        sum += sample.weights[i] * v;
    }
    return sum;
}

/// k-weighted form; must agree with the donor-sum form.
double k_weighted_estimate(const SurveySample& sample,
                           const DonorAssignment& a) {
    double sum = 0.0;
    for (int i = 0; i < sample.n(); ++i)
        if (sample.delta[i])
            sum += sample.weights[i] * (1.0 + a.k[i]) * sample.y[i];
    return sum;
}

double checked_matching_estimate(const SurveySample& sample,
                                 const DonorAssignment& a) {
    const double mu3 = donor_sum_estimate(sample, a);
    const double mu4 = k_weighted_estimate(sample, a);
    const double scale = std::max({std::fabs(mu3), std::fabs(mu4), 1.0});
    if (std::fabs(mu3 - mu4) > 1e-12 * scale)
        throw Error("matching estimator form mismatch");
    return mu3;
}

}  // namespace

ImputedEstimate pmm_estimate_known_beta(const SurveySample& sample,
                                        const MeanModel& model,
                                        const Eigen::VectorXd& beta) {
    require_respondents(sample);
    ImputedEstimate est;
    est.method = Method::PMM;
    est.beta_hat = beta;
    const std::vector<double> scores = predict_all(model, beta, sample);
    est.assignment = assign_donors_scalar(sample, scores);
    est.mu_hat = checked_matching_estimate(sample, est.assignment);
    return est;
}

ImputedEstimate pmm_estimate(const SurveySample& sample,
                             const MeanModel& model) {
    const FittedModel fit = fit_mean_model(sample, model);
    return pmm_estimate_known_beta(sample, model, fit.beta);
}

ImputedEstimate nni_estimate(const SurveySample& sample,
                             std::span<const int> covariates) {
    require_respondents(sample);
    ImputedEstimate est;
    est.method = Method::NNI;
    est.assignment = assign_donors_vector(sample, covariates);
    est.mu_hat = checked_matching_estimate(sample, est.assignment);
    return est;
}

ImputedEstimate nni_bias_corrected(const SurveySample& sample,
                                   const MeanModel& model) {
    require_respondents(sample);
    const FittedModel fit = fit_mean_model(sample, model);
    ImputedEstimate est;
    est.method = Method::NNI_BC;
    est.beta_hat = fit.beta;
    est.assignment = assign_donors_vector(sample, model.active);
    const std::vector<double> mhat = predict_all(model, fit.beta, sample);
    double sum = 0.0;
    for (int i = 0; i < sample.n(); ++i) {
        double v;
        if (sample.delta[i]) {
            v = sample.y[i];
        } else {
            const int d = est.assignment.donor_of[i];
            v = mhat[i] + sample.y[d] - mhat[d];
        }
        sum += sample.weights[i] * v;
    }
    est.mu_hat = sum;
    return est;
}

ImputedEstimate sri_estimate(const SurveySample& sample, const MeanModel& model,
                             std::uint64_t seed) {
    require_respondents(sample);
    const FittedModel fit = fit_mean_model(sample, model);
    const std::vector<double> mhat = predict_all(model, fit.beta, sample);

    std::vector<int> respondent_rows;
    for (int i = 0; i < sample.n(); ++i)
        if (sample.delta[i]) respondent_rows.push_back(i);

    ImputedEstimate est;
    est.method = Method::SRI;
    est.beta_hat = fit.beta;
    est.assignment.donor_of.assign(sample.n(), -1);
    est.assignment.k.assign(sample.n(), 0.0);

    Rng rng(derive_seed(seed, seedtag::residual));
    double sum = 0.0;
    for (int i = 0; i < sample.n(); ++i) {
        if (sample.delta[i]) {
            sum += sample.weights[i] * sample.y[i];
            continue;
        }
        const int pick =
            respondent_rows[rng.uniform_index(respondent_rows.size())];
        const double resid = sample.y[pick] - mhat[pick];
        est.assignment.donor_of[i] = pick;
        est.assignment.k[pick] += 1.0;  // raw selection count
        sum += sample.weights[i] * (mhat[i] + resid);
    }
    est.mu_hat = sum;
    return est;
}

std::vector<double> pseudo_values(const SurveySample& sample,
                                  const MeanModel& model,
                                  const Eigen::VectorXd& beta,
                                  const DonorAssignment& assignment) {
    if (static_cast<int>(assignment.k.size()) != sample.n())
        throw Error("assignment not aligned with sample");
    std::vector<double> psi(sample.n());
    for (int i = 0; i < sample.n(); ++i) {
        const double m = predict(model, beta, sample.x_row(i));
        psi[i] = m;
        if (sample.delta[i])
            psi[i] += (1.0 + assignment.k[i]) * (sample.y[i] - m);
    }
    return psi;
}

namespace diag {

Decomposition decompose(const SurveySample& sample, const MeanModel& model,
                        const Eigen::VectorXd& beta,
                        const DonorAssignment& assignment, double mu_true) {
    const double root_n = std::sqrt(static_cast<double>(sample.n()));
    const std::vector<double> psi =
        pseudo_values(sample, model, beta, assignment);
    Decomposition d;
    d.main_term = root_n * (horvitz_thompson(sample, psi) - mu_true);
    double b = 0.0;
    for (int i = 0; i < sample.n(); ++i) {
        if (sample.delta[i]) continue;
        const int donor = assignment.donor_of[i];
        b += sample.weights[i] * (predict(model, beta, sample.x_row(donor)) -
                                  predict(model, beta, sample.x_row(i)));
    }
    d.discrepancy = root_n * b;
    return d;
}

}  // namespace diag

}  // namespace survimp
