#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace doors {

inline constexpr double kDefaultTol = 1e-12;

struct Geometric {
    double p;  // opening probability per knock; survival(n) = (1-p)^n
};

struct Deterministic {
    std::uint64_t k;  // opens exactly at the k-th knock
};

struct Polynomial {
    double c;  // survival(n) = min(1, c/n^a), a > 1 so the mean is finite
    double a;
};

struct Table {
    std::vector<double> values;  // survival(0..len-1); values[0] must be 1
    double tail_q;               // survival(n) = values.back() * tail_q^(n-len+1) past the table
};

// Survival function p(n) of a single door: the probability it is still closed
// after n effective knocks. Immutable once constructed; all queries are const.
class Distribution {
public:
    using Spec = std::variant<Geometric, Deterministic, Polynomial, Table>;

    static Distribution geometric(double p);
    static Distribution deterministic(std::uint64_t k);
    static Distribution polynomial(double c, double a);
    static Distribution table(std::vector<double> values, double tail_q);

    double survival(std::uint64_t n) const;

    // P(opens at knock n+1 | still closed after n knocks); requires survival(n) > 0.
    double hazard(std::uint64_t n) const;

    // sum_{m >= n} survival(m), absolute error < tol
    double tail_sum(std::uint64_t n, double tol = kDefaultTol) const;

    // expected knocks to open: sum_{n >= 0} survival(n)
    double mean(double tol = kDefaultTol) const { return tail_sum(0, tol); }

    // E[remaining knocks | still closed after n knocks] = tail_sum(n)/survival(n)
    double remaining_mean(std::uint64_t n, double tol = kDefaultTol) const;

    // Inverse-CDF sample of the opening knock count N (P(N > n) = survival(n))
    // from a uniform draw u in (0, 1].
    std::uint64_t sample_open_count(double u) const;

    // smallest n with survival(n) = 0, or UINT64_MAX if survival is positive everywhere
    std::uint64_t support_end() const;

    const Spec& spec() const { return spec_; }
    std::string describe() const;

private:
    explicit Distribution(Spec spec) : spec_(std::move(spec)) {}
    Spec spec_;
};

}  // namespace doors
