#include "two_door.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"

namespace doors {
namespace {

bool is_integral(double v) { return std::isfinite(v) && std::floor(v) == v; }

double log_base_q1(const TwoDoorParams& params, double u) {
    return std::log(u) / std::log(params.q1());
}

}  // namespace

TwoDoorParams make_two_door_params(double p1, double p2, double c) {
    if (!std::isfinite(p1) || p1 <= 0.0 || p1 >= 1.0)
        fail(errc::validation_failed, "two-door: p1 must be in (0, 1)");
    if (!std::isfinite(p2) || p2 <= 0.0 || p2 >= 1.0)
        fail(errc::validation_failed, "two-door: p2 must be in (0, 1)");
    if (!std::isfinite(c) || c <= 0.0) fail(errc::validation_failed, "two-door: c must be positive");
    return TwoDoorParams{p1, p2, c};
}

BeliefState belief_step_one(const TwoDoorParams& params, BeliefState state, double len) {
    if (!(state.x > 0.0) || state.x > 1.0)
        fail(errc::invalid_argument, "belief_step: x must be in (0, 1]");
    if (len < 0.0) fail(errc::invalid_argument, "belief_step: 1-knock length must be >= 0");
    return BeliefState{std::pow(params.q1(), len) * state.x};
}

BeliefState belief_step_two(const TwoDoorParams& params, BeliefState state) {
    if (!(state.x > 0.0) || state.x > 1.0)
        fail(errc::invalid_argument, "belief_step: x must be in (0, 1]");
    return BeliefState{state.x / (params.q2() + params.p2 * state.x)};
}

// ---- sequences ----

TwoDoorSequence TwoDoorSequence::alternating() {
    TwoDoorSequence seq;
    seq.tail_step_ = 1.0;
    return seq;
}

TwoDoorSequence TwoDoorSequence::explicit_then_affine(std::vector<double> cumulative,
                                                      double tail_step) {
    double prev = 0.0;
    for (double v : cumulative) {
        if (!std::isfinite(v) || v < prev)
            fail(errc::invalid_argument, "two-door sequence: cumulative must be non-decreasing");
        prev = v;
    }
    if (!std::isfinite(tail_step) || tail_step < 0.0)
        fail(errc::invalid_argument, "two-door sequence: tail step must be >= 0");
    TwoDoorSequence seq;
    seq.cumulative_ = std::move(cumulative);
    seq.tail_step_ = tail_step;
    return seq;
}

TwoDoorSequence TwoDoorSequence::ceil_affine(double s, double t) {
    if (!std::isfinite(s) || s < 0.0 || !std::isfinite(t) || t < 0.0)
        fail(errc::invalid_argument, "two-door sequence: s, t must be >= 0");
    TwoDoorSequence seq;
    seq.ceil_mode_ = true;
    seq.s_ = s;
    seq.t_ = t;
    return seq;
}

double TwoDoorSequence::cumulative(std::uint64_t i) const {
    if (i == 0) return 0.0;
    if (ceil_mode_) return std::ceil(s_ + static_cast<double>(i - 1) * t_);
    if (i <= cumulative_.size()) return cumulative_[i - 1];
    const double base = cumulative_.empty() ? 0.0 : cumulative_.back();
    return base + static_cast<double>(i - cumulative_.size()) * tail_step_;
}

bool TwoDoorSequence::integer() const {
    if (ceil_mode_) return true;
    for (double v : cumulative_)
        if (!is_integral(v)) return false;
    return is_integral(tail_step_);
}

double TwoDoorSequence::step_max() const {
    if (ceil_mode_) return t_ + 1.0;
    double m = tail_step_;
    double prev = 0.0;
    for (double v : cumulative_) {
        m = std::max(m, v - prev);
        prev = v;
    }
    return m;
}

double TwoDoorSequence::step_tail() const { return ceil_mode_ ? t_ : tail_step_; }

std::uint64_t TwoDoorSequence::tail_start() const {
    return ceil_mode_ ? 1 : cumulative_.size() + 1;
}

std::vector<double> TwoDoorSequence::materialize(std::uint64_t horizon) const {
    std::vector<double> out(horizon);
    for (std::uint64_t i = 1; i <= horizon; ++i) out[i - 1] = cumulative(i);
    return out;
}

std::vector<std::uint32_t> TwoDoorSequence::knocks(std::uint64_t n) const {
    if (!integer()) fail(errc::invalid_argument, "knocks: sequence is not integer");
    std::vector<std::uint32_t> out;
    out.reserve(n);
    double prev = 0.0;
    for (std::uint64_t j = 1; out.size() < n; ++j) {
        const double pi = cumulative(j);
        for (double k = prev; k < pi && out.size() < n; k += 1.0) out.push_back(1);
        if (out.size() < n) out.push_back(2);
        prev = pi;
    }
    return out;
}

// ---- semi-fractional optimum ----

double semifractional_objective(const TwoDoorParams& params, double z) {
    if (!(z > 0.0) || z >= 1.0) fail(errc::invalid_argument, "objective: z must be in (0, 1)");
    const double u = 1.0 - params.p2 * z;
    return log_base_q1(params, 1.0 - z) +
           (params.c + u * log_base_q1(params, u)) / (params.p2 * z);
}

namespace {

double golden_section(const TwoDoorParams& params, double a, double b, double tol) {
    constexpr double kInvPhi = 0.6180339887498949;
    double c1 = b - kInvPhi * (b - a);
    double c2 = a + kInvPhi * (b - a);
    double f1 = semifractional_objective(params, c1);
    double f2 = semifractional_objective(params, c2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - kInvPhi * (b - a);
            f1 = semifractional_objective(params, c1);
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + kInvPhi * (b - a);
            f2 = semifractional_objective(params, c2);
        }
    }
    return 0.5 * (a + b);
}

struct ScanResult {
    double z;
    double f;
    double step;
};

ScanResult scan_minimum(const TwoDoorParams& params, std::size_t points) {
    const double lo = 1e-9, hi = 1.0 - 1e-9;
    ScanResult best{lo, std::numeric_limits<double>::infinity(), (hi - lo) / points};
    for (std::size_t i = 1; i < points; ++i) {
        const double z = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points);
        const double f = semifractional_objective(params, z);
        if (f < best.f) {
            best.z = z;
            best.f = f;
        }
    }
    return best;
}

}  // namespace

SemiFractionalPlan solve_semifractional(const TwoDoorParams& params, double tol) {
    if (tol <= 0.0) fail(errc::invalid_argument, "solve_semifractional: tol must be positive");

    ScanResult scan = scan_minimum(params, 4096);
    double z = golden_section(params, std::max(1e-12, scan.z - scan.step),
                              std::min(1.0 - 1e-12, scan.z + scan.step), tol);
    double f = semifractional_objective(params, z);

    // unimodality is assumed; a dense rescan guards against a wrong valley
    if (f > scan.f + 10.0 * tol) {
        scan = scan_minimum(params, 100000);
        z = golden_section(params, std::max(1e-12, scan.z - scan.step),
                           std::min(1.0 - 1e-12, scan.z + scan.step), tol);
        f = semifractional_objective(params, z);
        if (f > scan.f + 10.0 * tol)
            fail(errc::nonconvergent, "solve_semifractional: refinement disagrees with dense scan");
    }

    if (params.p1 <= 1e-3 && params.p2 <= 1e-2) {
        // for small p the minimizer must satisfy z^2/theta + z - 1 ~ 0
        const double theta = -params.c * std::log(params.q1()) / params.p2;
        const double residual = z * z / theta + z - 1.0;
        if (std::abs(residual) > 0.01 + 10.0 * params.p2)
            fail(errc::nonconvergent,
                 "solve_semifractional: minimizer violates the small-p first-order condition");
    }

    SemiFractionalPlan plan;
    plan.z_star = z;
    plan.x = 1.0 - z;
    plan.s = log_base_q1(params, plan.x);
    plan.t = log_base_q1(params, params.q2() + params.p2 * plan.x);
    plan.value = f;
    return plan;
}

ApproxInterval approx_value(const TwoDoorParams& params) {
    const double log_inv_q1 = -std::log(params.q1());
    ApproxInterval out;
    out.theta = params.c * log_inv_q1 / params.p2;
    out.psi = 0.5 * (std::sqrt(out.theta * out.theta + 4.0 * out.theta) - out.theta);
    out.hi = (std::log(1.0 / (1.0 - out.psi)) + out.theta / out.psi + 1.0) / log_inv_q1;
    out.lo = out.hi - params.p2 / log_inv_q1;
    return out;
}

TwoDoorSequence round_to_integer(const SemiFractionalPlan& plan) {
    return TwoDoorSequence::ceil_affine(plan.s, plan.t);
}

double expected_time_two_door(const TwoDoorParams& params, const TwoDoorSequence& seq,
                              double tol) {
    if (tol <= 0.0) fail(errc::invalid_argument, "expected_time_two_door: tol must be positive");
    const double q1 = params.q1(), q2 = params.q2(), p1 = params.p1, p2 = params.p2,
                 c = params.c;

    const double step_tail = seq.step_tail();
    if (step_tail <= 0.0)
        fail(errc::divergent,
             "expected_time_two_door: 1-knocks do not keep the belief away from 1");

    // From any alive state: door 1 (memoryless) needs 1/p1 expected 1-knock
    // units, which the tail supplies at step_tail per 2-knock; then door 2
    // needs 1/p2 more 2-knocks. Every 2-knock spans at most step_max + c time.
    const double step_max = seq.step_max();
    const double remaining_bound =
        (step_max + c) * (1.0 / (p1 * step_tail) + 1.0 / p2 + 3.0);
    const std::uint64_t tail_start = seq.tail_start();

    long double total = 0.0;
    double u = 1.0;   // P(not finished after j-1 2-knocks)
    double x = 1.0;   // belief after j-1 2-knocks
    double w = 0.0;   // 1 - x, tracked separately so it survives x -> 1
    double prev = 0.0;
    constexpr std::uint64_t kMaxKnocks = 100'000'000;

    for (std::uint64_t j = 1; j <= kMaxKnocks; ++j) {
        const double pi = seq.cumulative(j);
        if (pi < prev) fail(errc::invalid_argument, "two-door sequence: cumulative decreased");
        const double g = std::pow(q1, pi - prev);
        const double xb = g * x;            // belief just before 2-knock j
        const double wb = w + (1.0 - g) * x;  // 1 - xb without cancellation
        const double denom = xb + q2 * wb;    // q2 + p2 xb: P(still going | was going)
        total +=
            static_cast<long double>(u * p2 * wb) * (pi + c * static_cast<double>(j));
        u *= denom;
        x = xb / denom;
        w = q2 * wb / denom;
        prev = pi;

        if ((j & 0x3f) == 0 || j + 16 >= kMaxKnocks) {
            if (j >= tail_start &&
                u * (pi + c * static_cast<double>(j) + remaining_bound) < tol)
                return static_cast<double>(total);
        }
    }
    fail(errc::nonconvergent, "expected_time_two_door: knock cap reached before the tail cleared tol");
}

ValueIterationResult value_iteration(const TwoDoorParams& params, std::uint64_t grid_size,
                                     double tol, std::size_t prefix_len) {
    if (grid_size < 1000) fail(errc::invalid_argument, "value_iteration: grid_size must be >= 1000");
    if (tol <= 0.0) fail(errc::invalid_argument, "value_iteration: tol must be positive");
    const double q1 = params.q1(), q2 = params.q2(), p2 = params.p2, c = params.c;

    const double x_min = std::clamp(tol * p2, 1e-14, 0.5);
    const std::size_t G = static_cast<std::size_t>(grid_size);
    const double lx0 = std::log(x_min);
    const double h = -lx0 / static_cast<double>(G - 1);  // grid uniform in ln x; x[G-1] = 1

    std::vector<double> xs(G);
    for (std::size_t k = 0; k < G; ++k) xs[k] = std::exp(lx0 + h * static_cast<double>(k));
    xs[G - 1] = 1.0;

    auto interp = [&](const std::vector<double>& v, double f) {
        if (f <= 0.0) return v.front();
        if (f >= static_cast<double>(G - 1)) return v.back();
        const std::size_t i = static_cast<std::size_t>(f);
        const double w = f - static_cast<double>(i);
        return v[i] * (1.0 - w) + v[i + 1] * w;
    };

    // grid coordinates of the two successor beliefs, precomputed per cell
    const double shift1 = std::log(q1) / h;
    std::vector<double> coord2(G);
    for (std::size_t k = 0; k < G; ++k) {
        const double lx2 = lx0 + h * static_cast<double>(k) - std::log(q2 + p2 * xs[k]);
        coord2[k] = (lx2 - lx0) / h;
    }

    std::vector<double> v(G, 0.0), vn(G, 0.0);
    constexpr std::uint64_t kMaxIter = 200'000;
    std::uint64_t it = 0;
    for (; it < kMaxIter; ++it) {
        double delta = 0.0;
        for (std::size_t k = 0; k < G; ++k) {
            const double take1 = 1.0 + interp(v, static_cast<double>(k) + shift1);
            const double take2 = c + (q2 + p2 * xs[k]) * interp(v, coord2[k]);
            vn[k] = std::min(take1, take2);
            delta = std::max(delta, std::abs(vn[k] - v[k]));
        }
        v.swap(vn);
        if (delta < tol) break;
    }
    if (it >= kMaxIter)
        fail(errc::nonconvergent, "value_iteration: iteration cap reached");

    ValueIterationResult out;
    out.value = v.back();
    out.iterations = it + 1;

    double x = 1.0;
    for (std::size_t i = 0; i < prefix_len; ++i) {
        const double f1 = (std::log(std::max(q1 * x, x_min)) - lx0) / h;
        const double take1 = 1.0 + interp(v, f1);
        const double y = x / (q2 + p2 * x);
        const double f2 = (std::log(std::min(y, 1.0)) - lx0) / h;
        const double take2 = c + (q2 + p2 * x) * interp(v, f2);
        if (take1 <= take2) {  // ties knock on door 1
            out.policy_prefix.push_back(1);
            x = q1 * x;
        } else {
            out.policy_prefix.push_back(2);
            x = y;
        }
    }
    return out;
}

KnockRatio knock_type_ratio(const TwoDoorParams& params, const SemiFractionalPlan& plan,
                            double time_budget) {
    if (time_budget <= 0.0) fail(errc::invalid_argument, "knock_type_ratio: budget must be positive");
    KnockRatio out;
    const TwoDoorSequence seq = round_to_integer(plan);
    double pi = 0.0;
    const double first = seq.cumulative(1);
    for (std::uint64_t j = 1;; ++j) {
        const double next = seq.cumulative(j);
        if (next + params.c * static_cast<double>(j) > time_budget) break;
        pi = next;
        out.two_knocks = j;
    }
    out.one_knocks = static_cast<std::uint64_t>(pi);
    if (out.one_knocks > 0)
        out.ratio_all = static_cast<double>(out.two_knocks) / static_cast<double>(out.one_knocks);
    if (out.two_knocks > 1 && pi > first)
        out.ratio_periodic = static_cast<double>(out.two_knocks - 1) / (pi - first);
    return out;
}

}  // namespace doors
