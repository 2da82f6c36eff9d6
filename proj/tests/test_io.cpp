#include <doctest.h>

#include <cstdio>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "survimp/io.hpp"
#include "survimp/rng.hpp"

using namespace survimp;

TEST_CASE("format_double round-trips exactly") {
    for (double v : {0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, 0.0, -0.0,
                     0.1 + 0.2, 1.0000000000000002}) {
        CHECK(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("population CSV round-trips bit-exactly") {
    auto pop = generate_population(PopulationSpec{PopulationKind::P2, 300, 12});
    apply_response_model(pop, derive_seed(12, seedtag::response));
    auto text = population_to_csv(pop);
    auto back = population_from_csv(text);
    CHECK(back.size == pop.size);
    CHECK(back.x == pop.x);
    CHECK(back.y == pop.y);
    CHECK(back.delta == pop.delta);
}

TEST_CASE("sample CSV round-trips, with empty y on missing rows") {
    auto s = testutil::p1_sample(80);
    auto text = sample_to_csv(s);
    auto back = sample_from_csv(text, s.popsize);
    CHECK(back.n() == s.n());
    CHECK(back.x == s.x);
    CHECK(back.delta == s.delta);
    CHECK(back.pi == s.pi);
    CHECK(back.weights == s.weights);
    for (int i = 0; i < s.n(); ++i)
        if (s.delta[i]) CHECK(back.y[i] == s.y[i]);

    // a missing row serializes with an empty y cell
    int miss = -1;
    for (int i = 0; i < s.n(); ++i)
        if (!s.delta[i]) miss = i;
    REQUIRE(miss >= 0);
    CHECK(text.find(",,0,") != std::string::npos);
}

TEST_CASE("sample CSV validation points at the offending row") {
    const std::string header = "x1,x2,x3,x4,x5,x6,y,delta,pi\n";
    CHECK_THROWS_WITH_AS(
        sample_from_csv(header + "0,0,0,0,0,0,1.5,2,0.5\n", 100),
        doctest::Contains("row 2"), Error);
    // respondent without y
    CHECK_THROWS_AS(sample_from_csv(header + "0,0,0,0,0,0,,1,0.5\n", 100), Error);
    // pi out of range
    CHECK_THROWS_AS(sample_from_csv(header + "0,0,0,0,0,0,1.0,1,1.5\n", 100), Error);
    CHECK_THROWS_AS(sample_from_csv(header + "0,0,0,0,0,0,1.0,1,0\n", 100), Error);
}

TEST_CASE("estimate report JSON carries the headline numbers") {
    EstimateReport r;
    r.method = Method::PMM;
    r.scheme = SchemeKind::JackknifeD1;
    r.mu_hat = 1.25;
    r.v_hat = 0.04;
    r.ci = {0.858, 1.642};
    r.n = 100;
    r.respondents = 75;
    r.replicate_count = 100;
    r.replicates = {1.0, 2.0};
    auto text = report_to_json(r);
    CHECK(text.find("\"mu_hat\": 1.25") != std::string::npos);
    CHECK(text.find("pmm") != std::string::npos);
    CHECK(text.find("replicate_values") == std::string::npos);
    auto with = report_to_json(r, true);
    CHECK(with.find("replicate_values") != std::string::npos);
}

TEST_CASE("replicate CSV dump") {
    std::vector<double> reps{0.5, 0.25};
    auto text = replicates_to_csv(reps);
    CHECK(text == "k,mu_rep\n0,0.5\n1,0.25\n");
}

TEST_CASE("file round-trip") {
    const std::string path = "io_roundtrip_scratch.txt";
    write_file(path, "alpha\nbeta\n");
    CHECK(read_file(path) == "alpha\nbeta\n");
    std::remove(path.c_str());
}
