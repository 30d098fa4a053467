#pragma once

#include <cstdint>
#include <vector>

#include "sequence.hpp"

namespace doors {

// Two cascading memoryless doors: door 1 opens with probability p1 per unit
// knock, door 2 with probability p2 per knock of duration c, gated on door 1.
struct TwoDoorParams {
    double p1;
    double p2;
    double c;

    double q1() const { return 1.0 - p1; }
    double q2() const { return 1.0 - p2; }
};

TwoDoorParams make_two_door_params(double p1, double p2, double c);

// Optimal plan of the relaxed model 1^s (2 1^t)^inf and its expected time.
struct SemiFractionalPlan {
    double z_star = 0;  // minimizer of the objective over (0, 1)
    double x = 0;       // 1 - z_star: belief the zig-zag returns to
    double s = 0;       // opening 1-knock length, log_{q1}(x)
    double t = 0;       // recurring 1-knock length, log_{q1}(q2 + p2 x)
    double value = 0;
};

struct ApproxInterval {
    double lo = 0, hi = 0;
    double theta = 0, psi = 0;
};

// P(door 1 closed | not finished); 1-knocks scale it, 2-knocks renormalize it.
struct BeliefState {
    double x = 1.0;
};

BeliefState belief_step_one(const TwoDoorParams& params, BeliefState state, double len);
BeliefState belief_step_two(const TwoDoorParams& params, BeliefState state);

// Cumulative description pi_0 = 0 <= pi_1 <= pi_2 <= ...: pi_i is the total
// 1-knock time spent before the i-th 2-knock.
class TwoDoorSequence {
public:
    // pi_i = i: the 1,2,1,2,... sequence
    static TwoDoorSequence alternating();
    // explicit pi_1..pi_m, then pi_{m+i} = pi_m + i * tail_step
    static TwoDoorSequence explicit_then_affine(std::vector<double> cumulative,
                                                double tail_step);
    // pi_i = ceil(s + (i-1) t): the integer rounding of a semi-fractional plan
    static TwoDoorSequence ceil_affine(double s, double t);

    double cumulative(std::uint64_t i) const;
    bool integer() const;
    double step_max() const;   // sup of 1-knock lengths between consecutive 2-knocks
    double step_tail() const;  // asymptotic mean step
    std::uint64_t tail_start() const;  // first 2-knock index governed by the tail rule
    std::vector<double> materialize(std::uint64_t horizon) const;
    // door-index listing (1s and 2s); requires integer()
    std::vector<std::uint32_t> knocks(std::uint64_t n) const;

private:
    TwoDoorSequence() = default;
    std::vector<double> cumulative_;  // pi_1..pi_m
    double tail_step_ = 0;
    bool ceil_mode_ = false;
    double s_ = 0, t_ = 0;
};

// The semi-fractional objective at z in (0, 1).
double semifractional_objective(const TwoDoorParams& params, double z);

// Minimizes the objective; also derives s, t and checks first-order optimality
// against the quadratic z^2/theta + z - 1 = 0 when p1 is small.
SemiFractionalPlan solve_semifractional(const TwoDoorParams& params, double tol = 1e-12);

// Closed-form bracket around the optimal semi-fractional value.
ApproxInterval approx_value(const TwoDoorParams& params);

TwoDoorSequence round_to_integer(const SemiFractionalPlan& plan);

// Expected completion time of a two-door sequence via the belief recursion.
double expected_time_two_door(const TwoDoorParams& params, const TwoDoorSequence& seq,
                              double tol = 1e-9);

struct ValueIterationResult {
    double value = 0;
    std::vector<std::uint32_t> policy_prefix;
    std::uint64_t iterations = 0;
};

// Belief-grid optimal-value oracle for integer sequences.
ValueIterationResult value_iteration(const TwoDoorParams& params, std::uint64_t grid_size,
                                     double tol = 1e-10, std::size_t prefix_len = 16);

struct KnockRatio {
    std::uint64_t two_knocks = 0;
    std::uint64_t one_knocks = 0;
    double ratio_all = 0;       // 2-knocks over all 1-knocks
    double ratio_periodic = 0;  // excluding the opening 1-run and first 2-knock
};

// Counts knock types of the rounded plan within a time budget.
KnockRatio knock_type_ratio(const TwoDoorParams& params, const SemiFractionalPlan& plan,
                            double time_budget);

}  // namespace doors
