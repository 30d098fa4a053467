#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "config.hpp"
#include "sequence.hpp"

namespace doors {

// A[i][t] = best probability that doors 1..i are all open after a sorted
// sequence of t knocks; choice[i][t] records the smallest maximizing number of
// knocks spent on door i. Extendable in t so doubling blocks share one table.
class DpTable {
public:
    DpTable(std::vector<Distribution> doors, std::uint64_t horizon);

    void extend_to(std::uint64_t horizon);

    double prob(std::uint32_t i, std::uint64_t t) const { return rows_[i][t]; }
    std::uint64_t choice(std::uint32_t i, std::uint64_t t) const { return choices_[i][t]; }
    std::uint64_t horizon() const { return horizon_; }
    std::uint32_t door_count() const { return static_cast<std::uint32_t>(doors_.size()); }

    // knocks per door (k_1..k_d) realizing A[d][t]
    std::vector<std::uint64_t> allocation(std::uint64_t t) const;

private:
    double survival(std::uint32_t door, std::uint64_t n);

    std::vector<Distribution> doors_;
    std::uint64_t horizon_ = 0;
    std::vector<std::vector<double>> rows_;          // rows_[i][t], i = 0..d
    std::vector<std::vector<std::uint64_t>> choices_;
    std::vector<std::vector<double>> survival_memo_;
};

DpTable dp_table(const DoorConfiguration& config, std::uint64_t horizon);

// sorted optimal finite sequence alpha_T = 1^{k_1} 2^{k_2} ... d^{k_d}
KnockSequence optimal_prefix(const DoorConfiguration& config, std::uint64_t horizon);

// alpha_2 . alpha_4 . alpha_8 ... ; near optimal for any similar configuration
KnockSequence doubling_sequence(const DoorConfiguration& config);

// (1, 2, ..., d) repeated
KnockSequence a_simp(std::uint32_t d);

// phase n knocks 2^n times on each door in order
KnockSequence phase_doubling(std::uint32_t d);

}  // namespace doors
