#include "evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <unordered_map>

#include "error.hpp"

namespace doors {
namespace {

constexpr std::uint64_t kNoGap = std::numeric_limits<std::uint64_t>::max();

// Largest number of consecutive knocks a door can wait between two of its
// knocks once the sequence is in its periodic regime (cyclic max gap).
std::vector<std::uint64_t> period_gaps(const std::vector<std::uint32_t>& period,
                                       std::uint32_t d) {
    std::vector<std::uint64_t> gap(d, kNoGap);
    const std::uint64_t L = period.size();
    for (std::uint32_t door = 0; door < d; ++door) {
        std::uint64_t last = kNoGap, first = kNoGap, worst = 0;
        for (std::uint64_t i = 0; i < L; ++i) {
            if (period[i] != door + 1) continue;
            if (first == kNoGap)
                first = i;
            else
                worst = std::max(worst, i - last);
            last = i;
        }
        if (first != kNoGap) gap[door] = std::max<std::uint64_t>(worst, L - last + first);
    }
    return gap;
}

// Max gap per door observed in a lookahead window; the leading edge counts as a
// gap, the unseen trailing edge does not (estimate for non-periodic sequences).
std::vector<std::uint64_t> window_gaps(const std::deque<std::uint32_t>& window,
                                       std::uint32_t d) {
    std::vector<std::uint64_t> gap(d, kNoGap);
    std::vector<std::uint64_t> last(d, 0);
    std::vector<bool> seen(d, false);
    for (std::uint64_t i = 0; i < window.size(); ++i) {
        const std::uint32_t door = window[i] - 1;
        if (door >= d) continue;
        const std::uint64_t g = seen[door] ? i - last[door] : i + 1;
        gap[door] = seen[door] ? std::max(gap[door] == kNoGap ? 0 : gap[door], g) : g;
        last[door] = i;
        seen[door] = true;
    }
    // the distance from the last occurrence to the window edge is a lower bound
    // on the next gap; fold it in so mid-block windows do not look too dense
    for (std::uint32_t door = 0; door < d; ++door)
        if (seen[door]) gap[door] = std::max(gap[door], window.size() - last[door]);
    return gap;
}

// Buffers knocks from a cursor so the evaluation loop can look ahead without
// disturbing its own position.
class BufferedCursor {
public:
    explicit BufferedCursor(std::unique_ptr<SequenceCursor> cur) : cur_(std::move(cur)) {}

    // next knock, 0 when exhausted
    std::uint32_t take() {
        if (buffer_.empty()) fill(1);
        if (buffer_.empty()) return 0;
        const std::uint32_t v = buffer_.front();
        buffer_.pop_front();
        return v;
    }

    const std::deque<std::uint32_t>& lookahead(std::uint64_t n) {
        fill(n);
        return buffer_;
    }

private:
    void fill(std::uint64_t n) {
        while (!exhausted_ && buffer_.size() < n) {
            const std::uint32_t v = cur_->next();
            if (v == 0)
                exhausted_ = true;
            else
                buffer_.push_back(v);
        }
    }

    std::unique_ptr<SequenceCursor> cur_;
    std::deque<std::uint32_t> buffer_;
    bool exhausted_ = false;
};

struct GapInfo {
    std::vector<std::uint64_t> gaps;  // per door, kNoGap when the door never recurs
    bool certified = false;           // true when derived from a periodic shape
};

GapInfo gaps_at(const KnockSequence& seq, BufferedCursor& buf, std::uint64_t t,
                std::uint64_t prefix_len, std::uint32_t d) {
    if (const PeriodicShape* shape = seq.periodic_shape(); shape && !shape->period.empty()) {
        if (t >= prefix_len) return {period_gaps(shape->period, d), true};
        return {{}, false};
    }
    const std::uint64_t window = std::max<std::uint64_t>(256, t);
    return {window_gaps(buf.lookahead(window), d), false};
}

void check_door_index(std::uint32_t door, std::uint32_t d) {
    if (door > d)
        fail(errc::invalid_argument,
             "sequence knocks on door " + std::to_string(door) + " but only " +
                 std::to_string(d) + " doors are configured");
}

}  // namespace

SurvivalCurve survival_curve_independent(const DoorConfiguration& config,
                                         const KnockSequence& seq, std::uint64_t horizon) {
    if (config.dependency != DependencyKind::independent)
        fail(errc::invalid_argument, "survival_curve_independent: dependency must be independent");
    const std::uint32_t d = config.door_count();
    std::vector<std::uint64_t> count(d, 0);
    SurvivalCurve curve;
    curve.values.reserve(horizon + 1);
    auto cur = seq.cursor();
    for (std::uint64_t t = 0; t <= horizon; ++t) {
        double prod = 1.0;
        for (std::uint32_t i = 0; i < d; ++i) prod *= 1.0 - config.doors[i].survival(count[i]);
        curve.values.push_back(1.0 - prod);
        if (t == horizon) break;
        const std::uint32_t door = cur->next();
        if (door == 0) fail(errc::invalid_argument, "sequence shorter than requested horizon");
        check_door_index(door, d);
        ++count[door - 1];
    }
    return curve;
}

double expected_time_independent(const DoorConfiguration& config, const KnockSequence& seq,
                                 EvalOptions opt) {
    if (config.dependency != DependencyKind::independent)
        fail(errc::invalid_argument, "expected_time_independent: dependency must be independent");
    const std::uint32_t d = config.door_count();
    const std::uint64_t prefix_len =
        seq.periodic_shape() ? seq.periodic_shape()->prefix.size() : 0;

    std::vector<std::uint64_t> count(d, 0);
    std::vector<double> factor(d);  // 1 - survival_i(count_i)
    std::uint32_t zero_factors = 0;
    double prod = 1.0;
    for (std::uint32_t i = 0; i < d; ++i) {
        factor[i] = 1.0 - config.doors[i].survival(0);
        if (factor[i] == 0.0)
            ++zero_factors;
        else
            prod *= factor[i];
    }

    BufferedCursor buf(seq.cursor());
    long double total = 0.0;
    std::uint64_t next_check = 2;
    for (std::uint64_t t = 0;; ++t) {
        const double sc = zero_factors > 0 ? 1.0 : 1.0 - prod;
        total += sc;
        if (sc == 0.0) return static_cast<double>(total);

        if (t >= next_check) {
            next_check = std::max(next_check + 1, t + t / 4);
            GapInfo info = gaps_at(seq, buf, t, prefix_len, d);
            if (!info.gaps.empty()) {
                double residual = 0.0;
                bool stuck = false;
                for (std::uint32_t i = 0; i < d; ++i) {
                    if (config.doors[i].survival(count[i]) == 0.0) continue;
                    if (info.gaps[i] == kNoGap) {
                        stuck = true;
                        break;
                    }
                    residual += static_cast<double>(info.gaps[i]) *
                                config.doors[i].tail_sum(count[i], opt.tol);
                }
                if (stuck && info.certified)
                    fail(errc::divergent,
                         "sequence stops knocking on a door that may still be closed");
                if (!stuck && residual < opt.tol) return static_cast<double>(total);
            }
        }
        if (t >= opt.horizon_cap)
            fail(errc::horizon_exceeded,
                 "expected_time_independent: horizon cap reached before the tail bound cleared tol");

        const std::uint32_t door = buf.take();
        if (door == 0) {
            // finite sequence: only valid if every door is surely open by now
            if (zero_factors > 0 || prod < 1.0)
                fail(errc::divergent, "finite sequence ends while some door may be closed");
            return static_cast<double>(total);
        }
        check_door_index(door, d);
        const std::uint32_t i = door - 1;
        const double fresh = 1.0 - config.doors[i].survival(++count[i]);
        if (factor[i] == 0.0) {
            if (fresh != 0.0) {
                --zero_factors;
                prod *= fresh;
            }
        } else {
            prod *= fresh / factor[i];
        }
        factor[i] = fresh;
        if ((t & 0x3f) == 0x3f && zero_factors == 0) {
            prod = 1.0;  // resync the incremental product
            for (std::uint32_t k = 0; k < d; ++k) prod *= factor[k];
        }
    }
}

namespace {

// ---- cascading chain: states (lowest closed door, effective knocks on it) ----

class ChainEvaluator {
public:
    ChainEvaluator(const DoorConfiguration& config, const KnockSequence& seq, EvalOptions opt)
        : config_(config), seq_(seq), opt_(opt), d_(config.door_count()), buf_(seq.cursor()) {
        mass_.resize(d_);
        mass_[0] = {1.0};
        mean_suffix_.assign(d_ + 1, 0.0);
        for (std::uint32_t i = d_; i-- > 0;)
            mean_suffix_[i] = mean_suffix_[i + 1] + config.doors[i].mean(opt.tol);
    }

    double run() {
        const std::uint64_t prefix_len =
            seq_.periodic_shape() ? seq_.periodic_shape()->prefix.size() : 0;
        long double total = 0.0;
        double alive = 1.0;
        std::uint64_t next_check = 2;
        for (std::uint64_t t = 0;; ++t) {
            total += alive;
            if (alive == 0.0) return static_cast<double>(total);

            if (t >= next_check) {
                next_check = std::max(next_check + 1, t + t / 4);
                double mass = 0.0;  // resync against drift in the incremental subtraction
                for (const auto& v : mass_)
                    for (double x : v) mass += x;
                alive = mass;
                GapInfo info = gaps_at(seq_, buf_, t, prefix_len, d_);
                if (!info.gaps.empty()) {
                    const double residual = residual_bound(info);
                    if (residual >= 0.0 && residual < opt_.tol) return static_cast<double>(total);
                    if (residual < 0.0 && info.certified)
                        fail(errc::divergent,
                             "sequence stops knocking on a door that may still be closed");
                }
            }
            if (t >= opt_.horizon_cap)
                fail(errc::horizon_exceeded,
                     "expected_time_cascading: horizon cap reached before the tail bound cleared tol");

            const std::uint32_t door = buf_.take();
            if (door == 0) {
                if (alive != 0.0)
                    fail(errc::divergent, "finite sequence ends while some door may be closed");
                return static_cast<double>(total);
            }
            check_door_index(door, d_);
            alive -= advance(door - 1);
            if (alive < 0.0) alive = 0.0;
        }
    }

private:
    // knocks door i; returns the probability mass that finished at this knock
    double advance(std::uint32_t i) {
        auto& v = mass_[i];
        if (v.empty()) return 0.0;
        const auto& dist = config_.doors[i];
        double opened = 0.0;
        v.push_back(0.0);
        for (std::size_t n = v.size() - 1; n-- > 0;) {
            const double m = v[n];
            v[n] = 0.0;
            if (m == 0.0) continue;
            const double h = dist.hazard(n);
            opened += m * h;
            v[n + 1] = m * (1.0 - h);
        }
        while (!v.empty() && v.back() == 0.0) v.pop_back();
        if (opened > 0.0 && i + 1 < d_) {
            if (mass_[i + 1].empty()) mass_[i + 1] = {0.0};
            mass_[i + 1][0] += opened;
            return 0.0;
        }
        return opened;  // final door opened: completion mass
    }

    // Upper bound on the expected remaining time given current masses, assuming
    // every door recurs within its gap. Negative means some possibly-closed door
    // never recurs.
    double residual_bound(const GapInfo& info) {
        double worst_gap = 0.0;
        std::uint32_t lowest = d_;
        for (std::uint32_t i = 0; i < d_; ++i)
            if (!mass_[i].empty()) {
                lowest = i;
                break;
            }
        for (std::uint32_t i = lowest; i < d_; ++i) {
            if (info.gaps[i] == kNoGap) {
                double m = 0.0;
                for (double x : mass_[i]) m += x;
                if (m > 0.0 || i > lowest) return -1.0;
                continue;
            }
            worst_gap = std::max(worst_gap, static_cast<double>(info.gaps[i]));
        }
        double bound = 0.0;
        for (std::uint32_t i = 0; i < d_; ++i) {
            for (std::size_t n = 0; n < mass_[i].size(); ++n) {
                const double m = mass_[i][n];
                if (m <= 0.0) continue;
                const double per_state = config_.doors[i].remaining_mean(n, opt_.tol) +
                                         mean_suffix_[i + 1] + d_ + 1;
                bound += m * worst_gap * per_state;
            }
        }
        return bound;
    }

    const DoorConfiguration& config_;
    const KnockSequence& seq_;
    EvalOptions opt_;
    std::uint32_t d_;
    BufferedCursor buf_;
    std::vector<std::vector<double>> mass_;  // mass_[i][n]
    std::vector<double> mean_suffix_;
};

// ---- DAG-gated: sparse DP over (open mask, counts of active doors) ----

struct DagState {
    std::uint32_t mask = 0;
    std::vector<std::uint32_t> counts;  // for active doors in ascending door order
    bool operator==(const DagState& o) const = default;
};

struct DagStateHash {
    std::size_t operator()(const DagState& s) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ull ^ s.mask;
        for (std::uint32_t c : s.counts) {
            h ^= c + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

class DagEvaluator {
public:
    DagEvaluator(const DoorConfiguration& config, const KnockSequence& seq, EvalOptions opt)
        : config_(config), seq_(seq), opt_(opt), d_(config.door_count()), buf_(seq.cursor()) {
        if (d_ > 26) fail(errc::invalid_argument, "dag evaluation supports at most 26 doors");
        pred_mask_.assign(d_, 0);
        auto preds = config.effective_predecessors();
        for (std::uint32_t i = 0; i < d_; ++i)
            for (std::uint32_t p : preds[i]) pred_mask_[i] |= 1u << (p - 1);
        full_mask_ = d_ == 32 ? 0xffffffffu : (1u << d_) - 1;
        states_[DagState{0, counts_template(0)}] = 1.0;
    }

    double run() {
        const std::uint64_t prefix_len =
            seq_.periodic_shape() ? seq_.periodic_shape()->prefix.size() : 0;
        long double total = 0.0;
        double alive = 1.0;
        std::uint64_t next_check = 2;
        for (std::uint64_t t = 0;; ++t) {
            total += alive;
            if (alive == 0.0) return static_cast<double>(total);

            if (t >= next_check) {
                next_check = std::max(next_check + 1, t + t / 4);
                double mass = 0.0;  // resync against drift in the incremental subtraction
                for (const auto& [state, m] : states_) mass += m;
                alive = mass;
                GapInfo info = gaps_at(seq_, buf_, t, prefix_len, d_);
                if (!info.gaps.empty()) {
                    const double residual = residual_bound(info);
                    if (residual >= 0.0 && residual < opt_.tol) return static_cast<double>(total);
                    if (residual < 0.0 && info.certified)
                        fail(errc::divergent,
                             "sequence stops knocking on a door that may still be closed");
                }
            }
            if (t >= opt_.horizon_cap)
                fail(errc::horizon_exceeded,
                     "expected_time_cascading: horizon cap reached before the tail bound cleared tol");
            if (states_.size() > (1u << 22))
                fail(errc::horizon_exceeded, "dag evaluation state space overflow");

            const std::uint32_t door = buf_.take();
            if (door == 0) {
                if (alive != 0.0)
                    fail(errc::divergent, "finite sequence ends while some door may be closed");
                return static_cast<double>(total);
            }
            check_door_index(door, d_);
            alive -= advance(door - 1);
            if (alive < 0.0) alive = 0.0;
        }
    }

private:
    std::vector<std::uint32_t> active_doors(std::uint32_t mask) const {
        std::vector<std::uint32_t> active;
        for (std::uint32_t i = 0; i < d_; ++i)
            if (!(mask & (1u << i)) && (pred_mask_[i] & ~mask) == 0) active.push_back(i);
        return active;
    }

    std::vector<std::uint32_t> counts_template(std::uint32_t mask) const {
        return std::vector<std::uint32_t>(active_doors(mask).size(), 0);
    }

    // knocks door j; returns completion mass
    double advance(std::uint32_t j) {
        std::unordered_map<DagState, double, DagStateHash> next;
        next.reserve(states_.size() * 2);
        double done = 0.0;
        for (auto& [state, m] : states_) {
            const auto active = active_doors(state.mask);
            const auto pos = std::find(active.begin(), active.end(), j);
            if (pos == active.end() || m == 0.0) {  // wasted knock: door open or gated shut
                next[state] += m;
                continue;
            }
            const std::size_t idx = static_cast<std::size_t>(pos - active.begin());
            const std::uint32_t n = state.counts[idx];
            const double h = config_.doors[j].hazard(n);
            if (const double stay = m * (1.0 - h); stay > 0.0) {
                DagState s = state;
                s.counts[idx] = n + 1;
                next[std::move(s)] += stay;
            }
            if (const double open = m * h; open > 0.0) {
                const std::uint32_t mask2 = state.mask | (1u << j);
                if (mask2 == full_mask_) {
                    done += open;
                    continue;
                }
                const auto active2 = active_doors(mask2);
                DagState s2{mask2, std::vector<std::uint32_t>(active2.size(), 0)};
                for (std::size_t a = 0; a < active2.size(); ++a) {
                    const auto prev = std::find(active.begin(), active.end(), active2[a]);
                    if (prev != active.end())
                        s2.counts[a] = state.counts[static_cast<std::size_t>(prev - active.begin())];
                }
                next[std::move(s2)] += open;
            }
        }
        states_ = std::move(next);
        return done;
    }

    double residual_bound(const GapInfo& info) {
        double worst_gap = 0.0;
        for (std::uint32_t i = 0; i < d_; ++i) {
            if (info.gaps[i] != kNoGap) {
                worst_gap = std::max(worst_gap, static_cast<double>(info.gaps[i]));
                continue;
            }
            for (const auto& [state, m] : states_)
                if (m > 0.0 && !(state.mask & (1u << i))) return -1.0;
        }
        double bound = 0.0;
        for (const auto& [state, m] : states_) {
            if (m <= 0.0) continue;
            const auto active = active_doors(state.mask);
            double need = d_ + 1;
            for (std::uint32_t i = 0; i < d_; ++i) {
                if (state.mask & (1u << i)) continue;
                const auto pos = std::find(active.begin(), active.end(), i);
                const std::uint32_t n =
                    pos == active.end()
                        ? 0
                        : state.counts[static_cast<std::size_t>(pos - active.begin())];
                need += config_.doors[i].remaining_mean(n, opt_.tol);
            }
            bound += m * worst_gap * need;
        }
        return bound;
    }

    const DoorConfiguration& config_;
    const KnockSequence& seq_;
    EvalOptions opt_;
    std::uint32_t d_;
    BufferedCursor buf_;
    std::vector<std::uint32_t> pred_mask_;
    std::uint32_t full_mask_;
    std::unordered_map<DagState, double, DagStateHash> states_;
};

}  // namespace

double expected_time_cascading(const DoorConfiguration& config, const KnockSequence& seq,
                               EvalOptions opt) {
    if (config.dependency == DependencyKind::independent)
        fail(errc::invalid_argument, "expected_time_cascading: dependency must be cascading or dag");
    if (config.doors.empty()) fail(errc::invalid_argument, "configuration has no doors");
    if (config.dependency == DependencyKind::cascading)
        return ChainEvaluator(config, seq, opt).run();
    return DagEvaluator(config, seq, opt).run();
}

double expected_time(const DoorConfiguration& config, const KnockSequence& seq, EvalOptions opt) {
    if (config.dependency == DependencyKind::independent)
        return expected_time_independent(config, seq, opt);
    return expected_time_cascading(config, seq, opt);
}

double feedback_baseline(const DoorConfiguration& config) {
    double total = 0.0;
    for (const auto& door : config.doors) total += door.mean();
    return total;
}

}  // namespace doors
