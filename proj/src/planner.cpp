#include "planner.hpp"

#include <algorithm>
#include <mutex>

#include "error.hpp"

namespace doors {

DpTable::DpTable(std::vector<Distribution> doors, std::uint64_t horizon)
    : doors_(std::move(doors)) {
    if (doors_.empty()) fail(errc::invalid_argument, "dp_table: no doors");
    const std::uint32_t d = door_count();
    rows_.assign(d + 1, {1.0});
    choices_.assign(d + 1, {0});
    survival_memo_.assign(d, {1.0});
    for (std::uint32_t i = 1; i <= d; ++i) rows_[i][0] = 0.0;  // p(0) = 1: zero knocks never open
    extend_to(horizon);
}

double DpTable::survival(std::uint32_t door, std::uint64_t n) {
    auto& memo = survival_memo_[door];
    while (memo.size() <= n) memo.push_back(doors_[door].survival(memo.size()));
    return memo[n];
}

void DpTable::extend_to(std::uint64_t horizon) {
    const std::uint32_t d = door_count();
    for (std::uint64_t t = horizon_ + 1; t <= horizon; ++t) {
        rows_[0].push_back(1.0);
        choices_[0].push_back(0);
        for (std::uint32_t i = 1; i <= d; ++i) {
            double best = -1.0;
            std::uint64_t best_k = 0;
            for (std::uint64_t k = 0; k <= t; ++k) {
                const double v = rows_[i - 1][t - k] * (1.0 - survival(i - 1, k));
                if (v > best) {
                    best = v;
                    best_k = k;
                }
            }
            rows_[i].push_back(best);
            choices_[i].push_back(best_k);
        }
    }
    horizon_ = std::max(horizon_, horizon);
}

std::vector<std::uint64_t> DpTable::allocation(std::uint64_t t) const {
    if (t > horizon_) fail(errc::invalid_argument, "allocation: beyond table horizon");
    const std::uint32_t d = door_count();
    std::vector<std::uint64_t> alloc(d, 0);
    std::uint64_t rest = t;
    for (std::uint32_t i = d; i >= 1; --i) {
        alloc[i - 1] = choices_[i][rest];
        rest -= alloc[i - 1];
    }
    return alloc;
}

DpTable dp_table(const DoorConfiguration& config, std::uint64_t horizon) {
    return DpTable(config.doors, horizon);
}

namespace {

std::vector<std::uint32_t> sorted_block(const std::vector<std::uint64_t>& alloc) {
    std::vector<std::uint32_t> block;
    for (std::uint32_t i = 0; i < alloc.size(); ++i)
        block.insert(block.end(), alloc[i], i + 1);
    return block;
}

// Lazily concatenates alpha_2, alpha_4, alpha_8, ... sharing one DP table that
// grows to the largest block generated so far.
class DoublingSource final : public SequenceSource {
public:
    explicit DoublingSource(DoorConfiguration config)
        : config_(std::move(config)), table_(config_.doors, 2) {
        if (config_.doors.empty()) fail(errc::invalid_argument, "doubling_sequence: no doors");
    }

    class Cursor final : public SequenceCursor {
    public:
        explicit Cursor(const DoublingSource& src) : src_(src) {}
        std::uint32_t next() override {
            if (pos_ >= block_.size()) {
                block_ = src_.block(block_index_++);
                pos_ = 0;
            }
            return block_[pos_++];
        }

    private:
        const DoublingSource& src_;
        std::vector<std::uint32_t> block_;
        std::size_t pos_ = 0;
        std::uint32_t block_index_ = 0;
    };

    std::unique_ptr<SequenceCursor> cursor() const override {
        return std::make_unique<Cursor>(*this);
    }
    std::string name() const override { return "doubling"; }

    std::vector<std::uint32_t> block(std::uint32_t n) const {
        const std::uint64_t len = 2ull << n;  // alpha_{2^{n+1}} for n = 0, 1, ...
        std::lock_guard<std::mutex> lock(mutex_);
        table_.extend_to(len);
        return sorted_block(table_.allocation(len));
    }

private:
    DoorConfiguration config_;
    mutable std::mutex mutex_;
    mutable DpTable table_;
};

}  // namespace

KnockSequence optimal_prefix(const DoorConfiguration& config, std::uint64_t horizon) {
    DpTable table = dp_table(config, horizon);
    return KnockSequence::from_block(sorted_block(table.allocation(horizon)), {});
}

KnockSequence doubling_sequence(const DoorConfiguration& config) {
    return KnockSequence(std::make_shared<DoublingSource>(config));
}

KnockSequence a_simp(std::uint32_t d) { return KnockSequence::round_robin(d); }

KnockSequence phase_doubling(std::uint32_t d) { return KnockSequence::phase_doubling(d); }

}  // namespace doors
