#include "survimp/meanmodel.hpp"

#include <cmath>

namespace survimp {

namespace {

Eigen::VectorXd gradient_row(const MeanModel& model, const SurveySample& sample,
                             int row) {
    Eigen::VectorXd g(model.dim());
    g(0) = 1.0;
    for (std::size_t j = 0; j < model.active.size(); ++j)
        g(static_cast<int>(j) + 1) = sample.x_at(row, model.active[j]);
    return g;
}

/// Unnormalized weighted score sum_i w_i delta_i g_i (y_i - m_i).
Eigen::VectorXd weighted_score(const SurveySample& sample,
                               const MeanModel& model,
                               const Eigen::VectorXd& beta,
                               std::span<const double> weights) {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(model.dim());
    for (int i = 0; i < sample.n(); ++i) {
        if (!sample.delta[i]) continue;
        const double w = weights[i];
        if (w == 0.0) continue;
        const Eigen::VectorXd g = gradient_row(model, sample, i);
        s += w * (sample.y[i] - g.dot(beta)) * g;
    }
    return s;
}

}  // namespace

double predict(const MeanModel& model, const Eigen::VectorXd& beta,
               std::span<const double> x_row) {
    if (beta.size() != model.dim()) throw Error("beta dimension mismatch");
    double m = beta(0);
    for (std::size_t j = 0; j < model.active.size(); ++j) {
        const int c = model.active[j];
        if (c < 0 || c >= static_cast<int>(x_row.size()))
            throw Error("covariate index out of range");
        m += beta(static_cast<int>(j) + 1) * x_row[c];
    }
    return m;
}

std::vector<double> predict_all(const MeanModel& model,
                                const Eigen::VectorXd& beta,
                                const SurveySample& sample) {
    std::vector<double> out(sample.n());
    for (int i = 0; i < sample.n(); ++i)
        out[i] = predict(model, beta, sample.x_row(i));
    return out;
}

Eigen::VectorXd score(const SurveySample& sample, const MeanModel& model,
                      const Eigen::VectorXd& beta) {
    if (beta.size() != model.dim()) throw Error("beta dimension mismatch");
    Eigen::VectorXd s = Eigen::VectorXd::Zero(model.dim());
    for (int i = 0; i < sample.n(); ++i) {
        if (!sample.delta[i]) continue;
        const Eigen::VectorXd g = gradient_row(model, sample, i);
        const double resid = sample.y[i] - predict(model, beta, sample.x_row(i));
        s += (1.0 / sample.pi[i]) * resid * g;
    }
    return std::sqrt(static_cast<double>(sample.n())) /
           static_cast<double>(sample.popsize) * s;
}

FittedModel fit_mean_model(const SurveySample& sample, const MeanModel& model,
                           std::span<const double> weights, double ridge) {
    const int d = model.dim();
    std::span<const double> w =
        weights.empty() ? std::span<const double>(sample.weights) : weights;
    if (static_cast<int>(w.size()) != sample.n())
        throw Error("weight vector not aligned with sample");

    Eigen::MatrixXd xtx = Eigen::MatrixXd::Zero(d, d);
    Eigen::VectorXd xty = Eigen::VectorXd::Zero(d);
    int respondents = 0;
    for (int i = 0; i < sample.n(); ++i) {
        if (!sample.delta[i] || w[i] == 0.0) continue;
        ++respondents;
        const Eigen::VectorXd g = gradient_row(model, sample, i);
        xtx.selfadjointView<Eigen::Lower>().rankUpdate(g, w[i]);
        xty += w[i] * sample.y[i] * g;
    }
    xtx = xtx.selfadjointView<Eigen::Lower>();
    if (respondents < d)
        throw DegenerateDesignError("fewer weighted respondents than parameters");
    if (ridge > 0.0) xtx.diagonal().array() += ridge * xtx.trace() / d;

    Eigen::LDLT<Eigen::MatrixXd> ldlt(xtx);
    FittedModel fit;
    fit.beta = ldlt.solve(xty);
    fit.iterations = 1;
    if (ldlt.info() != Eigen::Success || !fit.beta.allFinite())
        throw DegenerateDesignError("degenerate design");
    // Rank-deficient normal equations can still be consistent (collinear
    // columns), so the residual check below would pass; catch them here.
    const Eigen::VectorXd dvec = ldlt.vectorD();
    if (dvec.minCoeff() <= 1e-12 * std::max(1e-300, dvec.maxCoeff()))
        throw DegenerateDesignError("degenerate design");
    // Normalized score at the solution; also flags near-singular systems the
    // LDLT factorization silently tolerates.
    fit.score_norm =
        std::sqrt(static_cast<double>(sample.n())) *
        weighted_score(sample, model, fit.beta, w).norm();
    // Relative residual of the normal equations.
    const double rel = (xtx * fit.beta - xty).norm() /
                       std::max(1e-300, xty.norm() + xtx.norm());
    if (rel > 1e-8) throw DegenerateDesignError("degenerate design");
    fit.converged = true;
    return fit;
}

namespace detail {

FittedModel newton_solve(const SurveySample& sample, const MeanModel& model,
                         std::span<const double> weights,
                         const Eigen::VectorXd& beta0) {
    constexpr double kTol = 1e-10;
    constexpr int kMaxIter = 50;
    std::span<const double> w =
        weights.empty() ? std::span<const double>(sample.weights) : weights;
    Eigen::VectorXd beta = beta0;
    FittedModel fit;
    double norm = weighted_score(sample, model, beta, w).norm();
    for (int it = 0; it < kMaxIter; ++it) {
        if (norm <= kTol) break;
        // Jacobian of the weighted score; for the linear model this is the
        // constant -X'WX.
        const int d = model.dim();
        Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(d, d);
        for (int i = 0; i < sample.n(); ++i) {
            if (!sample.delta[i] || w[i] == 0.0) continue;
            const Eigen::VectorXd g = gradient_row(model, sample, i);
            jac -= w[i] * g * g.transpose();
        }
        const Eigen::VectorXd s = weighted_score(sample, model, beta, w);
        Eigen::VectorXd step = jac.ldlt().solve(-s);
        if (!step.allFinite()) throw DegenerateDesignError("degenerate design");
        double t = 1.0;
        Eigen::VectorXd cand = beta + t * step;
        double cand_norm = weighted_score(sample, model, cand, w).norm();
        while (cand_norm > norm && t > 1e-8) {
            t *= 0.5;
            cand = beta + t * step;
            cand_norm = weighted_score(sample, model, cand, w).norm();
        }
        beta = cand;
        norm = cand_norm;
        fit.iterations = it + 1;
    }
    fit.beta = beta;
    fit.score_norm = norm;
    fit.converged = norm <= kTol;
    if (!fit.converged)
        throw Error("Newton iteration failed to converge; final score norm " +
                    std::to_string(norm));
    return fit;
}

}  // namespace detail

}  // namespace survimp
