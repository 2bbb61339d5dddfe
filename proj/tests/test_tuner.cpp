#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "lambdagen/boltzmann.hpp"
#include "lambdagen/errors.hpp"
#include "lambdagen/serialize.hpp"
#include "lambdagen/tuner.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

using namespace lambdagen;

TEST_CASE("no targets reduces to plain mean-size calibration") {
    const SizeModel nat = SizeModel::natural();
    const TuningProfile p = tune({}, 500, nat, 12);
    CHECK(p.targets.empty());
    CHECK(p.weights.empty());
    const GfReal x0 = calibrate_terms(500, nat, 12);
    const double rel = std::fabs(static_cast<double>((p.x - x0) / x0));
    CHECK(rel < 1e-9);
    CHECK(p.expected_size == doctest::Approx(500.0).epsilon(1e-6));
}

TEST_CASE("one marked index lands on its share") {
    const SizeModel nat = SizeModel::natural();
    const TuningProfile p = tune({0.3}, 50, nat, 12);
    REQUIRE(p.achieved.size() == 1);
    CHECK(p.achieved[0] == doctest::Approx(0.3).epsilon(1e-6));
    CHECK(p.expected_size == doctest::Approx(50.0).epsilon(1e-6));
    CHECK(p.weights.size() == 1);
    // pushing the share of index 0 above its natural level requires u > 1
    CHECK(p.weights[0] > 1);
}

TEST_CASE("suppressing an index needs a weight below one") {
    const SizeModel nat = SizeModel::natural();
    const TuningProfile p = tune({0.02}, 50, nat, 12);
    CHECK(p.achieved[0] == doctest::Approx(0.02).epsilon(1e-6));
    CHECK(p.weights[0] < 1);
}

TEST_CASE("two marked indices") {
    const SizeModel nat = SizeModel::natural();
    const TuningProfile p = tune({0.25, 0.1}, 80, nat, 12);
    REQUIRE(p.achieved.size() == 2);
    CHECK(p.achieved[0] == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(p.achieved[1] == doctest::Approx(0.1).epsilon(1e-6));
    CHECK(p.expected_size == doctest::Approx(80.0).epsilon(1e-6));
}

TEST_CASE("impossible and degenerate targets") {
    const SizeModel nat = SizeModel::natural();
    CHECK_THROWS_AS((void)tune({0.6, 0.5}, 100, nat, 12), Infeasible);
    CHECK_THROWS_AS((void)tune({1.0}, 100, nat, 12), Infeasible);
    CHECK_THROWS_AS((void)tune({0.0}, 100, nat, 12), DegenerateTarget);
    CHECK_THROWS_AS((void)tune({-0.1}, 100, nat, 12), std::invalid_argument);
    CHECK_THROWS_AS((void)tune({0.1}, 0, nat, 12), DegenerateTarget);
    CHECK_THROWS_AS((void)tune({0.1}, 100, SizeModel::constant(), 12), std::invalid_argument);
    // more marked indices than the truncation can distinguish
    CHECK_THROWS_AS((void)tune(std::vector<double>(13, 0.01), 100, nat, 12),
                    std::invalid_argument);
}

TEST_CASE("profile JSON carries the solved state") {
    const SizeModel nat = SizeModel::natural();
    const TuningProfile p = tune({0.3}, 50, nat, 12);
    const auto j = nlohmann::json::parse(p.to_json());
    CHECK(j.at("n").get<std::size_t>() == 50);
    CHECK(j.at("targets").size() == 1);
    CHECK(j.at("weights").size() == 1);
    CHECK(j.at("achieved").size() == 1);
    CHECK(std::fabs(j.at("achieved")[0].get<double>() - 0.3) < 1e-6);
    CHECK(std::fabs(j.at("expected_size").get<double>() - 50.0) < 1e-4);
    CHECK(j.at("N").get<std::size_t>() == 12);
    const double x = j.at("x").get<double>();
    CHECK(x > 0);
    CHECK(x < 1);
}

TEST_CASE("tuned sampling respects the window and shifts the index mix") {
    const SizeModel nat = SizeModel::natural();
    const TuningProfile p = tune({0.3}, 50, nat, 12);
    Rng rng(14);

    std::size_t hits = 0;
    double share_sum = 0;
    const int wanted = 25;
    for (int i = 0; i < wanted; ++i) {
        SampleStats st;
        const Term t = sample_tuned(p, 0.3, rng, 20000000, &st);
        const auto sz = term_size(t, nat);
        CHECK(double(sz) >= 0.7 * 50 - 1e-9);
        CHECK(double(sz) <= 1.3 * 50 + 1e-9);
        CHECK(is_m_open(t, 0));
        const auto hist = index_histogram(t);
        const auto it = hist.find(0);
        const double zeros = it == hist.end() ? 0.0 : double(it->second);
        share_sum += zeros / double(sz);  // index 0 weighs 1 in the natural model
        ++hits;
    }
    REQUIRE(hits == wanted);
    // mean share of index 0 should sit near 0.3, far above the untuned ~0.22
    const double mean_share = share_sum / double(hits);
    CHECK(mean_share > 0.25);
    CHECK(mean_share < 0.36);
}

TEST_CASE("tuned sampling is deterministic for a fixed seed") {
    const SizeModel nat = SizeModel::natural();
    const TuningProfile p = tune({0.25}, 40, nat, 10);
    Rng a(5), b(5);
    const Term ta = sample_tuned(p, 0.3, a, 20000000);
    const Term tb = sample_tuned(p, 0.3, b, 20000000);
    CHECK(render(ta) == render(tb));
}
