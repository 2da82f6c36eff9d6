#include <doctest.h>

#include <cmath>
#include <set>

#include "survimp/design.hpp"
#include "survimp/rng.hpp"

using namespace survimp;

namespace {
FinitePopulation pop_p1(std::int64_t N, std::uint64_t seed) {
    return generate_population(PopulationSpec{PopulationKind::P1, N, seed});
}
}  // namespace

TEST_CASE("SRS draws n distinct units with pi = n/N") {
    auto pop = pop_p1(1000, 4);
    auto s = draw_srs(pop, 100, 9);
    CHECK(s.n() == 100);
    std::set<std::int64_t> ids(s.ids.begin(), s.ids.end());
    CHECK(ids.size() == 100);
    for (int i = 0; i < s.n(); ++i) {
        CHECK(s.pi[i] == doctest::Approx(0.1).epsilon(1e-15));
        CHECK(s.weights[i] == doctest::Approx(1.0 / (1000 * 0.1)).epsilon(1e-15));
        CHECK(s.y[i] == pop.y[s.ids[i]]);
        for (int c = 0; c < 6; ++c) CHECK(s.x_at(i, c) == pop.x_at(s.ids[i], c));
    }
}

TEST_CASE("SRS HT mean is unbiased over repeated draws") {
    auto pop = pop_p1(2000, 6);
    const double mu = population_mean(pop);
    double acc = 0.0;
    const int M = 400;
    for (int m = 0; m < M; ++m) {
        auto s = draw_srs(pop, 100, derive_seed(31, seedtag::design, m));
        acc += horvitz_thompson(s, s.y);
    }
    // SE of the MC mean ~ sd(y)/sqrt(n M) ~ 0.005
    CHECK(std::fabs(acc / M - mu) < 0.02);
}

TEST_CASE("PPS probabilities are a fixed-size design") {
    auto pop = pop_p1(3000, 8);
    auto pi = compute_pps_probabilities(pop, 150, 12);
    double sum = 0.0;
    for (double p : pi) {
        CHECK(p > 0.0);
        CHECK(p <= 1.0);
        sum += p;
    }
    CHECK(sum == doctest::Approx(150.0).epsilon(1e-9));
}

TEST_CASE("systematic PPS draws exactly n units honoring the probabilities") {
    auto pop = pop_p1(3000, 8);
    auto pi = compute_pps_probabilities(pop, 150, 12);
    auto s = draw_pps(pop, pi, 21);
    CHECK(s.n() == 150);
    std::set<std::int64_t> ids(s.ids.begin(), s.ids.end());
    CHECK(ids.size() == 150);
    for (int i = 0; i < s.n(); ++i)
        CHECK(s.pi[i] == doctest::Approx(pi[s.ids[i]]).epsilon(1e-15));

    // inclusion frequencies track pi
    std::vector<double> hits(pop.size, 0.0);
    const int M = 600;
    for (int m = 0; m < M; ++m) {
        auto d = draw_pps(pop, pi, derive_seed(77, seedtag::design, m));
        for (auto id : d.ids) hits[id] += 1.0;
    }
    double worst = 0.0;
    for (std::int64_t i = 0; i < pop.size; ++i)
        worst = std::max(worst, std::fabs(hits[i] / M - pi[i]));
    CHECK(worst < 0.06);
}

TEST_CASE("PPS HT mean is unbiased over repeated draws") {
    auto pop = pop_p1(2000, 14);
    const double mu = population_mean(pop);
    auto pi = compute_pps_probabilities(pop, 100, 33);
    double acc = 0.0;
    const int M = 400;
    for (int m = 0; m < M; ++m) {
        auto s = draw_pps(pop, pi, derive_seed(55, seedtag::design, m));
        acc += horvitz_thompson(s, s.y);
    }
    CHECK(std::fabs(acc / M - mu) < 0.02);
}

TEST_CASE("draws are deterministic in the seed") {
    auto pop = pop_p1(1000, 4);
    auto a = draw_srs(pop, 60, 5);
    auto b = draw_srs(pop, 60, 5);
    CHECK(a.ids == b.ids);
    auto pi = compute_pps_probabilities(pop, 60, 9);
    auto c = draw_pps(pop, pi, 5);
    auto d = draw_pps(pop, pi, 5);
    CHECK(c.ids == d.ids);
}
