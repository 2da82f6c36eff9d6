#include "survimp/repvar.hpp"

#include <cmath>

#include "survimp/rng.hpp"

namespace survimp {

std::string scheme_name(SchemeKind k) {
    return k == SchemeKind::JackknifeD1 ? "jackknife" : "bootstrap";
}

SchemeKind scheme_from_name(const std::string& name) {
    if (name == "jackknife") return SchemeKind::JackknifeD1;
    if (name == "bootstrap") return SchemeKind::Bootstrap;
    throw Error("unknown replication scheme: " + name);
}

ReplicationScheme ReplicationScheme::jackknife(int n) {
    if (n < 2) throw Error("jackknife needs n >= 2");
    ReplicationScheme s;
    s.kind_ = SchemeKind::JackknifeD1;
    s.L_ = n;
    s.n_ = n;
    s.c_.assign(n, static_cast<double>(n - 1) / n);
    return s;
}

ReplicationScheme ReplicationScheme::bootstrap(int L, int n,
                                               std::uint64_t seed) {
    if (L < 2 || n < 2) throw Error("bootstrap needs L >= 2 and n >= 2");
    ReplicationScheme s;
    s.kind_ = SchemeKind::Bootstrap;
    s.L_ = L;
    s.n_ = n;
    s.c_.assign(L, 1.0 / L);
    s.multiplicities_.assign(static_cast<std::size_t>(L) * n, 0);
    Rng rng(derive_seed(seed, seedtag::bootstrap));
    for (int k = 0; k < L; ++k)
        for (int draw = 0; draw < n; ++draw)
            ++s.multiplicities_[static_cast<std::size_t>(k) * n +
                                rng.uniform_index(n)];
    return s;
}

void ReplicationScheme::replicate_weights(int k,
                                          std::span<const double> base_weights,
                                          std::vector<double>& out) const {
    if (k < 0 || k >= L_) throw Error("replicate index out of range");
    if (static_cast<int>(base_weights.size()) != n_)
        throw Error("scheme built for a different sample size");
    out.resize(n_);
    if (kind_ == SchemeKind::JackknifeD1) {
        const double f = static_cast<double>(n_) / (n_ - 1);
        for (int i = 0; i < n_; ++i) out[i] = f * base_weights[i];
        out[k] = 0.0;
    } else {
        const double adj = static_cast<double>(n_) / (n_ - 1);
        const std::uint16_t* m = &multiplicities_[static_cast<std::size_t>(k) * n_];
        for (int i = 0; i < n_; ++i) out[i] = base_weights[i] * m[i] * adj;
    }
}

double replication_variance(double mu_hat, std::span<const double> replicates,
                            const ReplicationScheme& scheme) {
    if (static_cast<int>(replicates.size()) != scheme.replicate_count())
        throw Error("replicate count mismatch");
    double v = 0.0;
    for (int k = 0; k < scheme.replicate_count(); ++k) {
        const double d = replicates[k] - mu_hat;
        v += scheme.factor(k) * d * d;
    }
    return v;
}

namespace {

/// sum_i w_i [m_i + delta_i (1 + k_i)(y_i - m_i)].
double pseudo_value_sum(const SurveySample& sample,
                        std::span<const double> weights,
                        std::span<const double> mhat,
                        std::span<const double> counts) {
    double sum = 0.0;
    for (int i = 0; i < sample.n(); ++i) {
        double v = mhat[i];
        if (sample.delta[i]) v += (1.0 + counts[i]) * (sample.y[i] - mhat[i]);
        sum += weights[i] * v;
    }
    return sum;
}

FittedModel fit_with_damping(const SurveySample& sample, const MeanModel& model,
                             std::span<const double> weights, bool& damped) {
    try {
        return fit_mean_model(sample, model, weights);
    } catch (const DegenerateDesignError&) {
        damped = true;
        return fit_mean_model(sample, model, weights, 1e-8);
    }
}

template <typename PerReplicate>
ReplicateSet run_replicates(const SurveySample& sample,
                            const ReplicationScheme& scheme,
                            double center, PerReplicate fn) {
    const int L = scheme.replicate_count();
    ReplicateSet out;
    out.center = center;
    out.mu.resize(L);
    out.beta.resize(L);
    int failed = 0;
    std::vector<double> w;
    for (int k = 0; k < L; ++k) {
        scheme.replicate_weights(k, sample.weights, w);
        try {
            fn(k, w, out);
        } catch (const Error&) {
            ++failed;
            out.mu[k] = center;  // flagged replicate contributes nothing
        }
    }
    if (failed * 100 > L)
        throw Error("more than 1% of replicate fits failed (" +
                    std::to_string(failed) + " of " + std::to_string(L) + ")");
    return out;
}

}  // namespace

ReplicateSet pmm_replicates(const SurveySample& sample, const MeanModel& model,
                            const ReplicationScheme& scheme, bool rematch) {
    const FittedModel base = fit_mean_model(sample, model);
    const std::vector<double> base_m = predict_all(model, base.beta, sample);
    const DonorAssignment base_a = assign_donors_scalar(sample, base_m);
    const double center =
        pseudo_value_sum(sample, sample.weights, base_m, base_a.k);
    int damped_total = 0;
    ReplicateSet out = run_replicates(
        sample, scheme, center,
        [&](int k, const std::vector<double>& w, ReplicateSet& rs) {
            bool damped = false;
            const FittedModel fit = fit_with_damping(sample, model, w, damped);
            if (damped) ++damped_total;
            const std::vector<double> m = predict_all(model, fit.beta, sample);
            if (rematch) {
                const DonorAssignment a = assign_donors_scalar(sample, m);
                rs.mu[k] = pseudo_value_sum(sample, w, m, a.k);
            } else {
                rs.mu[k] = pseudo_value_sum(sample, w, m, base_a.k);
            }
            rs.beta[k] = fit.beta;
        });
    out.damped = damped_total;
    return out;
}

ReplicateSet pmm_replicates_known_beta(const SurveySample& sample,
                                       const MeanModel& model,
                                       const Eigen::VectorXd& beta,
                                       const ReplicationScheme& scheme) {
    const std::vector<double> m = predict_all(model, beta, sample);
    const DonorAssignment a = assign_donors_scalar(sample, m);
    const double center = pseudo_value_sum(sample, sample.weights, m, a.k);
    return run_replicates(
        sample, scheme, center,
        [&](int k, const std::vector<double>& w, ReplicateSet& rs) {
            rs.mu[k] = pseudo_value_sum(sample, w, m, a.k);
            rs.beta[k] = beta;
        });
}

ReplicateSet fixed_count_replicates(const SurveySample& sample,
                                    const MeanModel& model,
                                    std::span<const double> base_k,
                                    const ReplicationScheme& scheme) {
    if (static_cast<int>(base_k.size()) != sample.n())
        throw Error("donor counts not aligned with sample");
    const FittedModel base = fit_mean_model(sample, model);
    const std::vector<double> base_m = predict_all(model, base.beta, sample);
    const double center =
        pseudo_value_sum(sample, sample.weights, base_m, base_k);
    int damped_total = 0;
    ReplicateSet out = run_replicates(
        sample, scheme, center,
        [&](int k, const std::vector<double>& w, ReplicateSet& rs) {
            bool damped = false;
            const FittedModel fit = fit_with_damping(sample, model, w, damped);
            if (damped) ++damped_total;
            const std::vector<double> m = predict_all(model, fit.beta, sample);
            rs.mu[k] = pseudo_value_sum(sample, w, m, base_k);
            rs.beta[k] = fit.beta;
        });
    out.damped = damped_total;
    return out;
}

PluginDiagnostics plugin_variance_diagnostics(
    const SurveySample& sample, const MeanModel& model,
    const Eigen::VectorXd& beta, const DonorAssignment& assignment,
    std::optional<std::function<double(std::span<const double>)>> sigma2) {
    const int n = sample.n();
    const int d = model.dim();
    const double N = static_cast<double>(sample.popsize);
    const std::vector<double> mhat = predict_all(model, beta, sample);

    // Pooled residual variance when no sigma^2(x) is supplied.
    double pooled = 0.0;
    if (!sigma2) {
        double wsum = 0.0;
        for (int i = 0; i < n; ++i) {
            if (!sample.delta[i]) continue;
            const double e = sample.y[i] - mhat[i];
            pooled += sample.weights[i] * e * e;
            wsum += sample.weights[i];
        }
        pooled = wsum > 0.0 ? pooled / wsum : 0.0;
    }
    auto sig2 = [&](int i) {
        return sigma2 ? (*sigma2)(sample.x_row(i)) : pooled;
    };

    PluginDiagnostics out;
    out.gamma1 = Eigen::VectorXd::Zero(d);
    out.gamma2 = Eigen::VectorXd::Zero(d);
    out.v_s = Eigen::MatrixXd::Zero(d, d);
    out.i_beta = Eigen::MatrixXd::Zero(d, d);

    // Design variance of the fitted means, scaled by n. Closed form for
    // equal probabilities; delete-1 jackknife of the HT mean otherwise.
    bool equal_pi = true;
    for (int i = 1; i < n; ++i)
        if (sample.pi[i] != sample.pi[0]) equal_pi = false;
    if (equal_pi) {
        double mean = 0.0;
        for (double v : mhat) mean += v;
        mean /= n;
        double s2 = 0.0;
        for (double v : mhat) s2 += (v - mean) * (v - mean);
        s2 /= (n - 1);
        out.vm = (1.0 - static_cast<double>(n) / N) * s2;
    } else {
        double total = 0.0;
        for (int i = 0; i < n; ++i) total += sample.weights[i] * mhat[i];
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double t = total - n * sample.weights[i] * mhat[i];
            acc += t * t;
        }
        out.vm = static_cast<double>(n) * acc /
                 (static_cast<double>(n) * (n - 1));
    }

    // Residual pieces: Horvitz-Thompson plug-ins of the population sums,
    // hence the 1/pi^2 weighting on sampled units.
    const double scale = static_cast<double>(n) / (N * N);
    double htn = 0.0;
    for (int i = 0; i < n; ++i) {
        const double invpi = 1.0 / sample.pi[i];
        htn += invpi;
        Eigen::VectorXd g(d);
        g(0) = 1.0;
        for (int j = 0; j < d - 1; ++j) g(j + 1) = sample.x_at(i, model.active[j]);
        out.gamma2 += invpi * g;
        if (!sample.delta[i]) continue;
        const double s2 = sig2(i);
        const double onek = 1.0 + assignment.k[i];
        const double fpc = 1.0 - sample.pi[i];
        out.ve += scale * invpi * invpi * fpc * onek * onek * s2;
        out.gamma1 += scale * invpi * invpi * fpc * onek * s2 * g;
        const double e = sample.y[i] - mhat[i];
        out.v_s += scale * invpi * invpi * (e * e) * g * g.transpose();
        out.i_beta += invpi * g * g.transpose();
    }
    out.gamma2 /= htn;
    out.i_beta /= htn;
    out.v1 = out.vm + out.ve;

    const Eigen::MatrixXd vs_inv =
        out.v_s.ldlt().solve(Eigen::MatrixXd::Identity(d, d));
    const Eigen::MatrixXd ib_inv =
        out.i_beta.ldlt().solve(Eigen::MatrixXd::Identity(d, d));
    out.v2 = out.v1 - out.gamma1.dot(vs_inv * out.gamma1) +
             out.gamma2.dot(ib_inv * out.v_s * ib_inv * out.gamma2);
    return out;
}

std::pair<double, double> confidence_interval(double mu_hat, double v_hat,
                                              double level) {
    if (v_hat < 0.0) throw Error("negative variance");
    double z;
    if (level == 0.95)
        z = 1.959964;
    else if (level == 0.90)
        z = 1.644854;
    else if (level == 0.99)
        z = 2.575829;
    else
        throw Error("unsupported confidence level");
    const double half = z * std::sqrt(v_hat);
    return {mu_hat - half, mu_hat + half};
}

EstimateReport estimate_with_variance(const SurveySample& sample,
                                      const MeanModel& model, Method method,
                                      const ReplicationScheme& scheme,
                                      std::uint64_t seed) {
    EstimateReport report;
    report.method = method;
    report.scheme = scheme.kind();
    report.n = sample.n();
    for (int i = 0; i < sample.n(); ++i)
        report.respondents += sample.delta[i] ? 1 : 0;

    ImputedEstimate est;
    ReplicateSet reps;
    switch (method) {
        case Method::PMM:
            est = pmm_estimate(sample, model);
            reps = pmm_replicates(sample, model, scheme);
            break;
        case Method::NNI:
            est = nni_estimate(sample, model.active);
            reps = fixed_count_replicates(sample, model, est.assignment.k, scheme);
            break;
        case Method::NNI_BC:
            est = nni_bias_corrected(sample, model);
            reps = fixed_count_replicates(sample, model, est.assignment.k, scheme);
            break;
        case Method::SRI:
            est = sri_estimate(sample, model, seed);
            reps = fixed_count_replicates(sample, model, est.assignment.k, scheme);
            break;
    }
    report.mu_hat = est.mu_hat;
    // Replicates are built from the linear form, so they are centered at the
    // base-weight value of that same form.
    report.v_hat = replication_variance(reps.center, reps.mu, scheme);
    report.replicate_count = scheme.replicate_count();
    report.ci = confidence_interval(report.mu_hat, report.v_hat);
    report.replicates = std::move(reps.mu);
    return report;
}

}  // namespace survimp
