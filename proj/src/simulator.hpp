#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "config.hpp"
#include "rng.hpp"
#include "sequence.hpp"

namespace doors {

struct TrialOutcome {
    std::uint64_t completion_knock = 0;               // global index of the final opening
    std::vector<std::uint64_t> per_door_open_knock;   // 1-based knock indices
};

// One coupled trial: knock counts N_i are drawn up front, then the sequence is
// replayed with gated effectiveness. Returns nullopt on timeout at cap.
std::optional<TrialOutcome> simulate_trial(const DoorConfiguration& config,
                                           const KnockSequence& seq, CounterRng& rng,
                                           std::uint64_t cap = 1'000'000);

struct SimEstimate {
    double mean = 0;
    double ci99 = 0;  // normal-approximation 99% half width
    std::uint64_t trials = 0;
    std::uint64_t timeouts = 0;
};

// Monte Carlo mean completion time; per-trial streams keyed by (seed, trial)
// make the result independent of thread count. Throws on any timeout.
SimEstimate estimate_expected_time(const DoorConfiguration& config, const KnockSequence& seq,
                                   std::uint64_t trials, std::uint64_t seed,
                                   unsigned threads = 1, std::uint64_t cap = 1'000'000);

// Replays one shared draw of knock counts under every edge set (each given as
// 1-based predecessor lists, ordered by inclusion); returns completion knocks
// in edge-set order. Pathwise these are non-decreasing.
std::vector<std::uint64_t> coupled_dominance_trial(
    const std::vector<Distribution>& doors,
    const std::vector<std::vector<std::vector<std::uint32_t>>>& edge_sets,
    const KnockSequence& seq, CounterRng& rng, std::uint64_t cap = 1'000'000);

}  // namespace doors
