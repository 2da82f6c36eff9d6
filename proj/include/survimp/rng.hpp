#ifndef SURVIMP_RNG_HPP
#define SURVIMP_RNG_HPP

#include <cstdint>
#include <random>

namespace survimp {

/// splitmix64 finalizer; used for seed derivation only.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Derives an independent seed from (seed, a, b). Used to split one user
/// seed into non-overlapping substreams: one per population unit, per
/// Monte Carlo replicate, per purpose tag, and so on.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                    std::uint64_t b = 0) {
    return mix64(mix64(seed ^ mix64(a)) ^ mix64(b));
}

/// Purpose tags keeping substream families apart.
namespace seedtag {
constexpr std::uint64_t population = 0x706f7075ULL;  // covariate/noise draws
constexpr std::uint64_t response = 0x72657370ULL;    // Bernoulli response
constexpr std::uint64_t design = 0x64736e67ULL;      // sample selection
constexpr std::uint64_t size_var = 0x73697a65ULL;    // PPS size noise
constexpr std::uint64_t residual = 0x72657364ULL;    // SRI residual draws
constexpr std::uint64_t bootstrap = 0x62747370ULL;   // bootstrap multiplicities
constexpr std::uint64_t rep = 0x6d637270ULL;         // per-MC-rep streams
}  // namespace seedtag

/// Seedable wrapper around std::mt19937_64 (the engine's output sequence is
/// fully specified by the standard, so results are identical across
/// platforms). Uniform and normal variates are generated here rather than
/// through std:: distributions, whose algorithms are implementation-defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(mix64(seed)) {}

    /// Substream `stream` of the generator family identified by `seed`.
    static Rng stream(std::uint64_t seed, std::uint64_t stream) {
        return Rng(derive_seed(seed, stream));
    }

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; pairs are cached.
    double normal();

    /// Uniform integer in [0, n) without modulo bias.
    std::size_t uniform_index(std::size_t n);

  private:
    std::mt19937_64 eng_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace survimp

#endif
