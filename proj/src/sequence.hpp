#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace doors {

// Streaming view of a knock sequence. Cursors are stateful and single-consumer;
// taking a fresh cursor restarts from knock 1.
class SequenceCursor {
public:
    virtual ~SequenceCursor() = default;
    // 1-based door index of the next knock, or 0 when a finite sequence is exhausted
    virtual std::uint32_t next() = 0;
};

// prefix then period repeated forever (period empty = finite sequence)
struct PeriodicShape {
    std::vector<std::uint32_t> prefix;
    std::vector<std::uint32_t> period;
};

class SequenceSource {
public:
    virtual ~SequenceSource() = default;
    virtual std::unique_ptr<SequenceCursor> cursor() const = 0;
    virtual const PeriodicShape* periodic_shape() const { return nullptr; }
    virtual std::string name() const = 0;
};

class KnockSequence {
public:
    explicit KnockSequence(std::shared_ptr<const SequenceSource> source)
        : source_(std::move(source)) {}

    // (1, 2, ..., d) repeated
    static KnockSequence round_robin(std::uint32_t d);
    // prefix then period forever; empty period means a finite sequence
    static KnockSequence from_block(std::vector<std::uint32_t> prefix,
                                    std::vector<std::uint32_t> period);
    // phases n = 0, 1, 2, ...: 2^n knocks on each of doors 1..d in order
    static KnockSequence phase_doubling(std::uint32_t d);

    std::unique_ptr<SequenceCursor> cursor() const { return source_->cursor(); }
    const PeriodicShape* periodic_shape() const { return source_->periodic_shape(); }
    bool finite() const;
    std::string name() const { return source_->name(); }

    std::vector<std::uint32_t> prefix(std::uint64_t n) const;
    std::uint32_t max_door(std::uint64_t probe_horizon = 4096) const;

private:
    std::shared_ptr<const SequenceSource> source_;
};

}  // namespace doors
