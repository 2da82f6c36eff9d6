#include "survimp/population.hpp"

#include <cmath>

#include "survimp/rng.hpp"

namespace survimp {

double expit(double t) { return 1.0 / (1.0 + std::exp(-t)); }

FinitePopulation generate_population(const PopulationSpec& spec) {
    if (spec.size < 1) throw Error("population size must be >= 1");
    const std::int64_t n = spec.size;
    FinitePopulation pop;
    pop.size = n;
    pop.x.resize(static_cast<std::size_t>(n) * kNumCovariates);
    pop.y.resize(n);
    pop.noise.resize(n);
    pop.delta.assign(n, 1);

    const std::uint64_t base = derive_seed(spec.seed, seedtag::population);
    for (std::int64_t i = 0; i < n; ++i) {
        // One substream per unit: row i is reproducible independently of N.
        Rng rng = Rng::stream(base, static_cast<std::uint64_t>(i));
        double* row = &pop.x[static_cast<std::size_t>(i) * kNumCovariates];
        row[0] = rng.uniform();
        row[1] = rng.uniform();
        row[2] = rng.uniform();
        row[3] = rng.normal();
        row[4] = rng.normal();
        row[5] = rng.normal();
        const double e = rng.normal();
        pop.noise[i] = e;
        double y = 0.0;
        switch (spec.kind) {
            case PopulationKind::P1:
                y = -1.0 + row[0] + row[1] + e;
                break;
            case PopulationKind::P2:
                y = -1.167 + row[0] + row[1] + (row[0] - 0.5) * (row[0] - 0.5) +
                    (row[1] - 0.5) * (row[1] - 0.5) + e;
                break;
            case PopulationKind::P3:
                y = -1.5 + row[0] + row[1] + row[2] + row[3] + row[4] + row[5] + e;
                break;
        }
        pop.y[i] = y;
    }
    return pop;
}

void apply_response_model(FinitePopulation& pop, std::uint64_t seed) {
    if (pop.size == 0 || pop.x.empty()) throw Error("population has no covariates");
    Rng rng(derive_seed(seed, seedtag::response));
    for (std::int64_t i = 0; i < pop.size; ++i) {
        const double p = expit(0.2 + pop.x_at(i, 0) + pop.x_at(i, 1));
        pop.delta[i] = rng.uniform() < p ? 1 : 0;
    }
}

double population_mean(const FinitePopulation& pop) {
    if (pop.size == 0) throw Error("empty population");
    double sum = 0.0;
    for (double v : pop.y) sum += v;
    return sum / static_cast<double>(pop.size);
}

}  // namespace survimp
