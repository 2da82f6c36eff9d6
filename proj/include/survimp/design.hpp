#ifndef SURVIMP_DESIGN_HPP
#define SURVIMP_DESIGN_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "survimp/population.hpp"

namespace survimp {

enum class DesignKind { SRS, PPS };

/// Sampled rows with inclusion probabilities and base weights
/// w_i = 1 / (N * pi_i), so the Horvitz-Thompson mean is sum w_i v_i.
struct SurveySample {
    std::vector<std::int64_t> ids;   // distinct population rows
    std::vector<double> x;           // n * p, row-major
    int p = kNumCovariates;
    std::vector<double> y;           // meaningful only where delta = 1
    std::vector<std::uint8_t> delta;
    std::vector<double> pi;          // in (0, 1]
    std::vector<double> weights;     // 1 / (N * pi)
    std::int64_t popsize = 0;

    int n() const { return static_cast<int>(ids.size()); }
    double x_at(int row, int col) const {
        return x[static_cast<std::size_t>(row) * p + col];
    }
    std::span<const double> x_row(int row) const {
        return {x.data() + static_cast<std::size_t>(row) * p,
                static_cast<std::size_t>(p)};
    }
};

/// Without-replacement uniform sample of size n; pi_i = n/N.
SurveySample draw_srs(const FinitePopulation& pop, int n, std::uint64_t seed);

/// pi_i = n * s_i / sum(s), with s_i = log(|y_i + nu_i| + 4), nu ~ N(0,1).
/// Any pi >= 1 is clipped to 1 and the rest renormalized (with a warning on
/// stderr); this size construction keeps pi well below 1 in practice.
std::vector<double> compute_pps_probabilities(const FinitePopulation& pop,
                                              int n, std::uint64_t seed);

/// Fixed-size systematic PPS on a randomly permuted frame. sum(pi) must be n
/// up to rounding.
SurveySample draw_pps(const FinitePopulation& pop, std::span<const double> pi,
                      std::uint64_t seed);

/// N^{-1} sum_{i in A} values_i / pi_i.
double horvitz_thompson(const SurveySample& sample,
                        std::span<const double> values);

}  // namespace survimp

#endif
