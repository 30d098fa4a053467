#pragma once

#include <cstdint>
#include <vector>

#include "config.hpp"
#include "sequence.hpp"

namespace doors {

struct EvalOptions {
    double tol = 1e-9;
    std::uint64_t horizon_cap = 1'000'000;
};

// values[t] = P(some door still closed after the first t knocks), t = 0..horizon
struct SurvivalCurve {
    std::vector<double> values;
};

SurvivalCurve survival_curve_independent(const DoorConfiguration& config,
                                         const KnockSequence& seq, std::uint64_t horizon);

// sum_t SC(t) for independent doors; truncation error below opt.tol.
double expected_time_independent(const DoorConfiguration& config, const KnockSequence& seq,
                                 EvalOptions opt = {.tol = 1e-12});

// Expected completion time for cascading chains and DAG-gated configurations,
// by forward DP over the joint opening state.
double expected_time_cascading(const DoorConfiguration& config, const KnockSequence& seq,
                               EvalOptions opt = {});

// dispatch on config.dependency
double expected_time(const DoorConfiguration& config, const KnockSequence& seq,
                     EvalOptions opt = {});

// sum of per-door means: the optimal expected time with feedback
double feedback_baseline(const DoorConfiguration& config);

}  // namespace doors
