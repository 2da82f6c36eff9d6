#ifndef SURVIMP_TESTS_HELPERS_HPP
#define SURVIMP_TESTS_HELPERS_HPP

#include <cstdint>
#include <vector>

#include "survimp/design.hpp"
#include "survimp/population.hpp"
#include "survimp/rng.hpp"

namespace testutil {

// Hand-rolled SRS-style sample: equal pi = n/N, 6 covariate slots with only
// the leading ones filled.
inline survimp::SurveySample make_sample(const std::vector<std::vector<double>>& xs,
                                         const std::vector<double>& ys,
                                         const std::vector<int>& deltas,
                                         std::int64_t popsize) {
    survimp::SurveySample s;
    const int n = static_cast<int>(xs.size());
    s.popsize = popsize;
    const double pi = static_cast<double>(n) / static_cast<double>(popsize);
    for (int i = 0; i < n; ++i) {
        s.ids.push_back(i);
        for (int c = 0; c < survimp::kNumCovariates; ++c)
            s.x.push_back(c < static_cast<int>(xs[i].size()) ? xs[i][c] : 0.0);
        s.y.push_back(ys[i]);
        s.delta.push_back(static_cast<std::uint8_t>(deltas[i]));
        s.pi.push_back(pi);
        s.weights.push_back(1.0 / (static_cast<double>(popsize) * pi));
    }
    return s;
}

// Random respondent-heavy sample drawn from a generated population.
inline survimp::SurveySample p1_sample(int n = 200, std::uint64_t pop_seed = 5,
                                       std::uint64_t draw_seed = 17,
                                       std::int64_t N = 5000) {
    survimp::PopulationSpec spec{survimp::PopulationKind::P1, N, pop_seed};
    auto pop = survimp::generate_population(spec);
    survimp::apply_response_model(
        pop, survimp::derive_seed(pop_seed, survimp::seedtag::response));
    return survimp::draw_srs(pop, n, draw_seed);
}

}  // namespace testutil

#endif
