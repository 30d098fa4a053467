#include "simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>

#include "error.hpp"

namespace doors {
namespace {

// replay a fixed draw of knock counts under gated effectiveness
std::optional<TrialOutcome> replay(const std::vector<Distribution>& doors,
                                   const std::vector<std::vector<std::uint32_t>>& preds,
                                   const std::vector<std::uint64_t>& need,
                                   const KnockSequence& seq, std::uint64_t cap) {
    const std::uint32_t d = static_cast<std::uint32_t>(doors.size());
    std::vector<std::uint64_t> effective(d, 0);
    std::vector<std::uint64_t> opened_at(d, 0);
    std::vector<bool> open(d, false);
    std::uint32_t open_count = 0;

    auto cur = seq.cursor();
    for (std::uint64_t t = 1; t <= cap; ++t) {
        const std::uint32_t door = cur->next();
        if (door == 0) return std::nullopt;  // sequence exhausted before completion
        if (door > d)
            fail(errc::invalid_argument, "sequence knocks on door " + std::to_string(door) +
                                             " but only " + std::to_string(d) + " exist");
        const std::uint32_t i = door - 1;
        if (open[i]) continue;
        bool gated_open = true;
        for (std::uint32_t p : preds[i])
            if (!open[p - 1]) {
                gated_open = false;
                break;
            }
        if (!gated_open) continue;
        if (++effective[i] == need[i]) {
            open[i] = true;
            opened_at[i] = t;
            if (++open_count == d) return TrialOutcome{t, std::move(opened_at)};
        }
    }
    return std::nullopt;
}

}  // namespace

std::optional<TrialOutcome> simulate_trial(const DoorConfiguration& config,
                                           const KnockSequence& seq, CounterRng& rng,
                                           std::uint64_t cap) {
    if (cap < 1) fail(errc::invalid_argument, "simulate_trial: cap must be >= 1");
    const std::uint32_t d = config.door_count();
    std::vector<std::uint64_t> need(d);
    for (std::uint32_t i = 0; i < d; ++i)
        need[i] = config.doors[i].sample_open_count(rng.next_unit());
    return replay(config.doors, config.effective_predecessors(), need, seq, cap);
}

SimEstimate estimate_expected_time(const DoorConfiguration& config, const KnockSequence& seq,
                                   std::uint64_t trials, std::uint64_t seed, unsigned threads,
                                   std::uint64_t cap) {
    if (trials < 1) fail(errc::invalid_argument, "estimate_expected_time: trials must be >= 1");
    if (threads < 1) threads = 1;
    const auto preds = config.effective_predecessors();
    const std::uint32_t d = config.door_count();

    // fixed chunking so the reduction order never depends on scheduling
    const std::uint64_t chunk_size = 4096;
    const std::uint64_t chunks = (trials + chunk_size - 1) / chunk_size;
    std::vector<double> chunk_sum(chunks, 0.0), chunk_sq(chunks, 0.0);
    std::vector<std::uint64_t> chunk_timeouts(chunks, 0);

    auto run_chunk = [&](std::uint64_t chunk) {
        const std::uint64_t begin = chunk * chunk_size;
        const std::uint64_t end = std::min(trials, begin + chunk_size);
        double sum = 0.0, sq = 0.0;
        std::uint64_t timeouts = 0;
        std::vector<std::uint64_t> need(d);
        for (std::uint64_t trial = begin; trial < end; ++trial) {
            CounterRng rng(seed, trial);
            for (std::uint32_t i = 0; i < d; ++i)
                need[i] = config.doors[i].sample_open_count(rng.next_unit());
            auto outcome = replay(config.doors, preds, need, seq, cap);
            if (!outcome) {
                ++timeouts;
                continue;
            }
            const double v = static_cast<double>(outcome->completion_knock);
            sum += v;
            sq += v * v;
        }
        chunk_sum[chunk] = sum;
        chunk_sq[chunk] = sq;
        chunk_timeouts[chunk] = timeouts;
    };

    if (threads == 1 || chunks == 1) {
        for (std::uint64_t chunk = 0; chunk < chunks; ++chunk) run_chunk(chunk);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::uint64_t> next{0};
        for (unsigned w = 0; w < threads; ++w)
            pool.emplace_back([&] {
                for (std::uint64_t chunk = next.fetch_add(1); chunk < chunks;
                     chunk = next.fetch_add(1))
                    run_chunk(chunk);
            });
        for (auto& th : pool) th.join();
    }

    double sum = 0.0, sq = 0.0;
    std::uint64_t timeouts = 0;
    for (std::uint64_t chunk = 0; chunk < chunks; ++chunk) {
        sum += chunk_sum[chunk];
        sq += chunk_sq[chunk];
        timeouts += chunk_timeouts[chunk];
    }
    if (timeouts > 0)
        fail(errc::timeout, std::to_string(timeouts) + " of " + std::to_string(trials) +
                                " trials hit the knock cap; the sequence neglects a door");

    const double n = static_cast<double>(trials);
    const double mean = sum / n;
    const double variance = std::max(0.0, sq / n - mean * mean);
    constexpr double kZ99 = 2.5758293035489004;
    SimEstimate est;
    est.mean = mean;
    est.ci99 = trials > 1 ? kZ99 * std::sqrt(variance / n) : 0.0;
    est.trials = trials;
    est.timeouts = 0;
    return est;
}

std::vector<std::uint64_t> coupled_dominance_trial(
    const std::vector<Distribution>& doors,
    const std::vector<std::vector<std::vector<std::uint32_t>>>& edge_sets,
    const KnockSequence& seq, CounterRng& rng, std::uint64_t cap) {
    const std::uint32_t d = static_cast<std::uint32_t>(doors.size());
    std::vector<std::uint64_t> need(d);
    for (std::uint32_t i = 0; i < d; ++i) need[i] = doors[i].sample_open_count(rng.next_unit());

    std::vector<std::uint64_t> completions;
    completions.reserve(edge_sets.size());
    for (const auto& preds : edge_sets) {
        if (preds.size() != doors.size())
            fail(errc::invalid_argument, "coupled trial: edge set size mismatch");
        auto outcome = replay(doors, preds, need, seq, cap);
        if (!outcome) fail(errc::timeout, "coupled trial hit the knock cap");
        completions.push_back(outcome->completion_knock);
    }
    return completions;
}

}  // namespace doors
