#include "sequence.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "error.hpp"

namespace doors {
namespace {

class PeriodicSource final : public SequenceSource {
public:
    PeriodicSource(std::vector<std::uint32_t> prefix, std::vector<std::uint32_t> period,
                   std::string name)
        : shape_{std::move(prefix), std::move(period)}, name_(std::move(name)) {
        for (std::uint32_t v : shape_.prefix)
            if (v == 0) fail(errc::invalid_argument, "knock sequence: door indices are 1-based");
        for (std::uint32_t v : shape_.period)
            if (v == 0) fail(errc::invalid_argument, "knock sequence: door indices are 1-based");
    }

    class Cursor final : public SequenceCursor {
    public:
        explicit Cursor(const PeriodicShape& shape) : shape_(shape) {}
        std::uint32_t next() override {
            if (pos_ < shape_.prefix.size()) return shape_.prefix[pos_++];
            if (shape_.period.empty()) return 0;
            const std::size_t i = (pos_++ - shape_.prefix.size()) % shape_.period.size();
            return shape_.period[i];
        }

    private:
        const PeriodicShape& shape_;
        std::size_t pos_ = 0;
    };

    std::unique_ptr<SequenceCursor> cursor() const override {
        return std::make_unique<Cursor>(shape_);
    }
    const PeriodicShape* periodic_shape() const override { return &shape_; }
    std::string name() const override { return name_; }

private:
    PeriodicShape shape_;
    std::string name_;
};

class PhaseDoublingSource final : public SequenceSource {
public:
    explicit PhaseDoublingSource(std::uint32_t d) : d_(d) {
        if (d == 0) fail(errc::invalid_argument, "phase_doubling: d must be >= 1");
    }

    class Cursor final : public SequenceCursor {
    public:
        explicit Cursor(std::uint32_t d) : d_(d) {}
        std::uint32_t next() override {
            const std::uint32_t door = door_;
            if (++rep_ == block_) {
                rep_ = 0;
                if (++door_ > d_) {
                    door_ = 1;
                    block_ *= 2;
                }
            }
            return door;
        }

    private:
        std::uint32_t d_;
        std::uint32_t door_ = 1;
        std::uint64_t block_ = 1;  // knocks per door in the current phase
        std::uint64_t rep_ = 0;
    };

    std::unique_ptr<SequenceCursor> cursor() const override {
        return std::make_unique<Cursor>(d_);
    }
    std::string name() const override { return "phase-doubling(" + std::to_string(d_) + ")"; }

private:
    std::uint32_t d_;
};

}  // namespace

KnockSequence KnockSequence::round_robin(std::uint32_t d) {
    if (d == 0) fail(errc::invalid_argument, "round_robin: d must be >= 1");
    std::vector<std::uint32_t> period(d);
    std::iota(period.begin(), period.end(), 1u);
    return KnockSequence(std::make_shared<PeriodicSource>(
        std::vector<std::uint32_t>{}, std::move(period), "round-robin(" + std::to_string(d) + ")"));
}

KnockSequence KnockSequence::from_block(std::vector<std::uint32_t> prefix,
                                        std::vector<std::uint32_t> period) {
    return KnockSequence(std::make_shared<PeriodicSource>(std::move(prefix), std::move(period),
                                                          "explicit"));
}

KnockSequence KnockSequence::phase_doubling(std::uint32_t d) {
    return KnockSequence(std::make_shared<PhaseDoublingSource>(d));
}

bool KnockSequence::finite() const {
    const PeriodicShape* shape = periodic_shape();
    return shape != nullptr && shape->period.empty();
}

std::vector<std::uint32_t> KnockSequence::prefix(std::uint64_t n) const {
    std::vector<std::uint32_t> out;
    out.reserve(n);
    auto cur = cursor();
    for (std::uint64_t i = 0; i < n; ++i) {
        const std::uint32_t v = cur->next();
        if (v == 0) break;
        out.push_back(v);
    }
    return out;
}

std::uint32_t KnockSequence::max_door(std::uint64_t probe_horizon) const {
    if (const PeriodicShape* shape = periodic_shape()) {
        std::uint32_t m = 0;
        for (std::uint32_t v : shape->prefix) m = std::max(m, v);
        for (std::uint32_t v : shape->period) m = std::max(m, v);
        return m;
    }
    std::uint32_t m = 0;
    auto cur = cursor();
    for (std::uint64_t i = 0; i < probe_horizon; ++i) {
        const std::uint32_t v = cur->next();
        if (v == 0) break;
        m = std::max(m, v);
    }
    return m;
}

}  // namespace doors
