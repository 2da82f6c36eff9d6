#include "survimp/design.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "survimp/rng.hpp"

namespace survimp {

namespace {

SurveySample build_sample(const FinitePopulation& pop,
                          const std::vector<std::int64_t>& rows,
                          const std::vector<double>& pi) {
    SurveySample s;
    s.popsize = pop.size;
    s.p = kNumCovariates;
    const int n = static_cast<int>(rows.size());
    s.ids = rows;
    s.pi = pi;
    s.x.resize(static_cast<std::size_t>(n) * kNumCovariates);
    s.y.resize(n);
    s.delta.resize(n);
    s.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        const std::int64_t r = rows[i];
        std::copy_n(&pop.x[static_cast<std::size_t>(r) * kNumCovariates],
                    kNumCovariates,
                    &s.x[static_cast<std::size_t>(i) * kNumCovariates]);
        s.y[i] = pop.y[r];
        s.delta[i] = pop.delta[r];
        s.weights[i] = 1.0 / (static_cast<double>(pop.size) * pi[i]);
    }
    return s;
}

}  // namespace

SurveySample draw_srs(const FinitePopulation& pop, int n, std::uint64_t seed) {
    const std::int64_t N = pop.size;
    if (n < 1 || n > N) throw Error("SRS sample size out of range");
    Rng rng(derive_seed(seed, seedtag::design));
    // Selection sampling: scan the frame once, keep inclusion counts exact.
    std::vector<std::int64_t> rows;
    rows.reserve(n);
    std::int64_t remaining = n;
    for (std::int64_t i = 0; i < N && remaining > 0; ++i) {
        const double u = rng.uniform();
        if (u * static_cast<double>(N - i) < static_cast<double>(remaining)) {
            rows.push_back(i);
            --remaining;
        }
    }
    // Exact arithmetic above guarantees n picks; guard anyway.
    while (static_cast<int>(rows.size()) < n) rows.push_back(N - 1);
    const double pi = static_cast<double>(n) / static_cast<double>(N);
    return build_sample(pop, rows, std::vector<double>(n, pi));
}

std::vector<double> compute_pps_probabilities(const FinitePopulation& pop,
                                              int n, std::uint64_t seed) {
    const std::int64_t N = pop.size;
    if (n < 1 || n > N) throw Error("PPS sample size out of range");
    if (pop.y.empty()) throw Error("PPS size variable needs y");
    Rng rng(derive_seed(seed, seedtag::size_var));
    std::vector<double> s(N);
    double total = 0.0;
    for (std::int64_t i = 0; i < N; ++i) {
        s[i] = std::log(std::fabs(pop.y[i] + rng.normal()) + 4.0);
        total += s[i];
    }
    std::vector<double> pi(N);
    for (std::int64_t i = 0; i < N; ++i)
        pi[i] = static_cast<double>(n) * s[i] / total;

    // Clip-and-renormalize loop for degenerate inputs.
    int clipped = 0;
    for (bool again = true; again;) {
        again = false;
        double mass = 0.0;
        int free_count = 0;
        for (double v : pi) {
            if (v < 1.0) {
                mass += v;
                ++free_count;
            }
        }
        const double target = static_cast<double>(n - (N - free_count));
        for (std::int64_t i = 0; i < N; ++i) {
            if (pi[i] >= 1.0 && pi[i] != 1.0) {
                pi[i] = 1.0;
                ++clipped;
                again = true;
            }
        }
        if (again && mass > 0.0) {
            for (std::int64_t i = 0; i < N; ++i)
                if (pi[i] < 1.0) pi[i] *= target / mass;
        }
    }
    if (clipped > 0)
        std::fprintf(stderr,
                     "warning: %d PPS inclusion probabilities clipped to 1\n",
                     clipped);
    return pi;
}

SurveySample draw_pps(const FinitePopulation& pop, std::span<const double> pi,
                      std::uint64_t seed) {
    const std::int64_t N = pop.size;
    if (static_cast<std::int64_t>(pi.size()) != N)
        throw Error("pi length must equal population size");
    double total = 0.0;
    for (double v : pi) {
        if (!(v > 0.0) || v > 1.0) throw Error("invalid inclusion probability");
        total += v;
    }
    const int n = static_cast<int>(std::llround(total));
    if (std::fabs(total - n) > 1e-6 || n < 1)
        throw Error("inclusion probabilities must sum to an integer sample size");

    Rng rng(derive_seed(seed, seedtag::design));
    std::vector<std::int64_t> perm(N);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::int64_t i = N - 1; i > 0; --i) {
        const std::size_t j = rng.uniform_index(static_cast<std::size_t>(i) + 1);
        std::swap(perm[i], perm[j]);
    }

    // Systematic selection: one point per unit interval of cumulated size.
    const double start = rng.uniform();
    std::vector<std::int64_t> rows;
    rows.reserve(n);
    double cum = 0.0;
    int next = 0;
    for (std::int64_t idx = 0; idx < N && next < n; ++idx) {
        const std::int64_t unit = perm[idx];
        const double hi = cum + pi[unit];
        while (next < n && start + next < hi) {
            rows.push_back(unit);
            ++next;
        }
        cum = hi;
    }
    while (next < n) {  // fp slack at the tail
        rows.push_back(perm[N - 1]);
        ++next;
    }
    std::sort(rows.begin(), rows.end());
    std::vector<double> spi(n);
    for (int i = 0; i < n; ++i) spi[i] = pi[rows[i]];
    return build_sample(pop, rows, spi);
}

double horvitz_thompson(const SurveySample& sample,
                        std::span<const double> values) {
    if (static_cast<int>(values.size()) != sample.n())
        throw Error("values not aligned with sample");
    double sum = 0.0;
    for (int i = 0; i < sample.n(); ++i) sum += sample.weights[i] * values[i];
    return sum;
}

}  // namespace survimp
