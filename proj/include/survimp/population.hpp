#ifndef SURVIMP_POPULATION_HPP
#define SURVIMP_POPULATION_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace survimp {

/// Invalid inputs and unrecoverable estimation states.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class PopulationKind { P1, P2, P3 };

inline constexpr int kNumCovariates = 6;

struct PopulationSpec {
    PopulationKind kind = PopulationKind::P1;
    std::int64_t size = 0;
    std::uint64_t seed = 0;
};

/// The N-row universe. x is row-major N x 6, noise holds the model error of
/// each unit so tests can recover the systematic part exactly.
struct FinitePopulation {
    std::int64_t size = 0;
    std::vector<double> x;        // size * 6, row-major
    std::vector<double> y;        // size
    std::vector<double> noise;    // size
    std::vector<std::uint8_t> delta;  // size, all 1 until a response model runs

    double x_at(std::int64_t row, int col) const {
        return x[static_cast<std::size_t>(row) * kNumCovariates + col];
    }
};

FinitePopulation generate_population(const PopulationSpec& spec);

/// Draws delta_i ~ Bernoulli(expit(0.2 + x1 + x2)) in place.
void apply_response_model(FinitePopulation& pop, std::uint64_t seed);

double population_mean(const FinitePopulation& pop);

double expit(double t);

}  // namespace survimp

#endif
