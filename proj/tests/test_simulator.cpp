#include <doctest.h>

#include <cmath>
#include <vector>

#include "config.hpp"
#include "error.hpp"
#include "evaluator.hpp"
#include "planner.hpp"
#include "rng.hpp"
#include "sequence.hpp"
#include "simulator.hpp"

using doors::CounterRng;
using doors::DependencyKind;
using doors::Distribution;
using doors::DoorConfiguration;
using doors::KnockSequence;

namespace {

DoorConfiguration geometric_pair(double p, DependencyKind dep) {
    DoorConfiguration config;
    config.doors = {Distribution::geometric(p), Distribution::geometric(p)};
    config.dependency = dep;
    return config;
}

}  // namespace

TEST_CASE("deterministic trials") {
    DoorConfiguration config;
    config.doors = {Distribution::deterministic(1), Distribution::deterministic(1)};
    config.dependency = DependencyKind::independent;
    CounterRng rng(3, 0);
    for (int i = 0; i < 50; ++i) {
        const auto outcome = doors::simulate_trial(config, KnockSequence::round_robin(2), rng);
        REQUIRE(outcome.has_value());
        CHECK(outcome->completion_knock == 2);
        CHECK(outcome->per_door_open_knock == std::vector<std::uint64_t>{1, 2});
    }

    // cascading with a wasted leading 2-knock
    config.dependency = DependencyKind::cascading;
    const auto outcome =
        doors::simulate_trial(config, KnockSequence::from_block({2, 1, 2}, {}), rng);
    REQUIRE(outcome.has_value());
    CHECK(outcome->completion_knock == 3);
}

TEST_CASE("completion knock is the max per-door opening") {
    auto config = geometric_pair(0.4, DependencyKind::cascading);
    CounterRng rng(9, 7);
    for (int i = 0; i < 200; ++i) {
        const auto outcome = doors::simulate_trial(config, KnockSequence::round_robin(2), rng);
        REQUIRE(outcome.has_value());
        CHECK(outcome->completion_knock ==
              *std::max_element(outcome->per_door_open_knock.begin(),
                                outcome->per_door_open_knock.end()));
    }
}

TEST_CASE("monte carlo matches the exact evaluators") {
    // cascading alternating, p = 1/2: exact value 6
    auto chain = geometric_pair(0.5, DependencyKind::cascading);
    const auto est =
        doors::estimate_expected_time(chain, KnockSequence::round_robin(2), 1'000'000, 2024);
    CHECK(std::abs(est.mean - 6.0) <= est.ci99);
    CHECK(est.trials == 1'000'000);
    CHECK(est.timeouts == 0);

    // independent round robin, p = 1/2: exact value 5
    auto ind = geometric_pair(0.5, DependencyKind::independent);
    const auto est2 =
        doors::estimate_expected_time(ind, KnockSequence::round_robin(2), 1'000'000, 2024);
    CHECK(std::abs(est2.mean - 5.0) <= est2.ci99);

    // single door sanity
    DoorConfiguration one;
    one.doors = {Distribution::geometric(0.5)};
    one.dependency = DependencyKind::independent;
    const auto est3 =
        doors::estimate_expected_time(one, KnockSequence::round_robin(1), 1'000'000, 7);
    CHECK(std::abs(est3.mean - 2.0) <= est3.ci99);
}

TEST_CASE("same seed, same estimate, any thread count") {
    auto chain = geometric_pair(0.5, DependencyKind::cascading);
    const auto a =
        doors::estimate_expected_time(chain, KnockSequence::round_robin(2), 200'000, 99, 1);
    const auto b =
        doors::estimate_expected_time(chain, KnockSequence::round_robin(2), 200'000, 99, 2);
    const auto c3 =
        doors::estimate_expected_time(chain, KnockSequence::round_robin(2), 200'000, 99, 7);
    CHECK(a.mean == b.mean);
    CHECK(a.ci99 == b.ci99);
    CHECK(a.mean == c3.mean);

    const auto other =
        doors::estimate_expected_time(chain, KnockSequence::round_robin(2), 200'000, 100);
    CHECK(other.mean != a.mean);  // different seed, different stream
}

TEST_CASE("timeouts are loud") {
    auto chain = geometric_pair(0.5, DependencyKind::cascading);
    // never knocks door 2
    CHECK_THROWS_AS(doors::estimate_expected_time(chain, KnockSequence::from_block({}, {1}),
                                                  1000, 5, 1, 500),
                    doors::Error);
}

TEST_CASE("monte carlo agrees with the dag evaluator") {
    DoorConfiguration config;
    config.doors = {Distribution::geometric(0.5), Distribution::geometric(0.4),
                    Distribution::geometric(0.6)};
    config.dependency = DependencyKind::dag;
    config.dag_predecessors = {{}, {1}, {}};
    const auto seq = KnockSequence::round_robin(3);
    const double exact = doors::expected_time_cascading(config, seq, {.tol = 1e-9});
    const auto est = doors::estimate_expected_time(config, seq, 1'000'000, 31);
    CHECK(std::abs(est.mean - exact) <= est.ci99);
}

TEST_CASE("monte carlo agrees with the chain evaluator on the doubling plan") {
    DoorConfiguration chain;
    chain.doors = {Distribution::geometric(0.3), Distribution::geometric(0.7)};
    chain.dependency = DependencyKind::cascading;
    const auto seq = doors::doubling_sequence(chain);
    const double exact = doors::expected_time_cascading(chain, seq, {.tol = 1e-9});
    const auto est = doors::estimate_expected_time(chain, seq, 1'000'000, 47);
    CHECK(std::abs(est.mean - exact) <= est.ci99);
}

TEST_CASE("coupled dominance: pathwise order along edge-set inclusion") {
    std::vector<Distribution> doors3 = {Distribution::geometric(0.5),
                                        Distribution::geometric(0.4),
                                        Distribution::geometric(0.6)};
    const std::vector<std::vector<std::vector<std::uint32_t>>> edge_sets = {
        {{}, {}, {}},        // independent
        {{}, {1}, {}},       // one edge
        {{}, {1}, {2}},      // full chain
    };
    CounterRng rng(17, 0);
    const auto seq = KnockSequence::round_robin(3);
    for (int trial = 0; trial < 20000; ++trial) {
        const auto completions = doors::coupled_dominance_trial(doors3, edge_sets, seq, rng);
        REQUIRE(completions.size() == 3);
        CHECK(completions[0] <= completions[1]);
        CHECK(completions[1] <= completions[2]);
    }
}

TEST_CASE("coupled means approximate 5 and 6 for the half pair") {
    std::vector<Distribution> pair = {Distribution::geometric(0.5),
                                      Distribution::geometric(0.5)};
    const std::vector<std::vector<std::vector<std::uint32_t>>> edge_sets = {
        {{}, {}},
        {{}, {1}},
    };
    CounterRng rng(23, 0);
    double sum_ind = 0.0, sum_chain = 0.0;
    const int trials = 400'000;
    const auto seq = KnockSequence::round_robin(2);
    for (int trial = 0; trial < trials; ++trial) {
        const auto completions = doors::coupled_dominance_trial(pair, edge_sets, seq, rng);
        sum_ind += static_cast<double>(completions[0]);
        sum_chain += static_cast<double>(completions[1]);
    }
    CHECK(sum_ind / trials == doctest::Approx(5.0).epsilon(0.01));
    CHECK(sum_chain / trials == doctest::Approx(6.0).epsilon(0.01));

    // single door: every edge set collapses to the same completion
    std::vector<Distribution> solo = {Distribution::geometric(0.3)};
    const std::vector<std::vector<std::vector<std::uint32_t>>> solo_sets = {{{}}, {{}}};
    const auto completions =
        doors::coupled_dominance_trial(solo, solo_sets, KnockSequence::round_robin(1), rng);
    CHECK(completions[0] == completions[1]);
}
