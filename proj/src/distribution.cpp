#include "distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "error.hpp"

namespace doors {
namespace {

bool finite(double v) { return std::isfinite(v); }

// sum_{n >= T} n^-a for a > 1, T >= 1. Direct terms up to a modest point, then
// the Euler-Maclaurin expansion; the first omitted correction is O(T^-(a+5)).
double power_tail(double a, std::uint64_t T) {
    const std::uint64_t N = std::max<std::uint64_t>(T, 128);
    double direct = 0.0;
    for (std::uint64_t n = T; n < N; ++n) direct += std::pow(static_cast<double>(n), -a);
    const double Nd = static_cast<double>(N);
    const double Na = std::pow(Nd, -a);
    double tail = Na * Nd / (a - 1.0);
    tail += 0.5 * Na;
    tail += a * Na / Nd / 12.0;
    tail -= a * (a + 1.0) * (a + 2.0) * Na / (Nd * Nd * Nd) / 720.0;
    return direct + tail;
}

// smallest n >= 1 with c/n^a < 1
std::uint64_t poly_threshold(double c, double a) {
    auto closed = [&](std::uint64_t n) { return c * std::pow(static_cast<double>(n), -a); };
    std::uint64_t n = static_cast<std::uint64_t>(std::floor(std::pow(c, 1.0 / a))) + 1;
    while (n > 1 && closed(n - 1) < 1.0) --n;
    while (closed(n) >= 1.0) ++n;
    return n;
}

}  // namespace

Distribution Distribution::geometric(double p) {
    if (!finite(p) || p <= 0.0 || p > 1.0)
        fail(errc::validation_failed, "geometric: p must be in (0, 1]");
    return Distribution(Geometric{p});
}

Distribution Distribution::deterministic(std::uint64_t k) {
    if (k < 1) fail(errc::validation_failed, "deterministic: k must be >= 1");
    return Distribution(Deterministic{k});
}

Distribution Distribution::polynomial(double c, double a) {
    if (!finite(c) || c <= 0.0) fail(errc::validation_failed, "polynomial: c must be positive");
    if (!finite(a) || a <= 1.0)
        fail(errc::validation_failed, "polynomial: a must be > 1 for a finite mean");
    return Distribution(Polynomial{c, a});
}

Distribution Distribution::table(std::vector<double> values, double tail_q) {
    if (values.empty()) fail(errc::validation_failed, "table: values must be non-empty");
    if (values.front() != 1.0) fail(errc::validation_failed, "table: values[0] must be 1");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!finite(values[i]) || values[i] < 0.0 || values[i] > 1.0)
            fail(errc::validation_failed, "table: values must be probabilities");
        if (i > 0 && values[i] > values[i - 1])
            fail(errc::validation_failed, "table: values must be non-increasing");
    }
    if (!finite(tail_q) || tail_q < 0.0 || tail_q >= 1.0)
        fail(errc::validation_failed, "table: tail_q must be in [0, 1); q = 1 diverges");
    return Distribution(Table{std::move(values), tail_q});
}

double Distribution::survival(std::uint64_t n) const {
    if (n == 0) return 1.0;
    return std::visit(
        [n](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Geometric>) {
                return std::pow(1.0 - d.p, static_cast<double>(n));
            } else if constexpr (std::is_same_v<T, Deterministic>) {
                return n < d.k ? 1.0 : 0.0;
            } else if constexpr (std::is_same_v<T, Polynomial>) {
                return std::min(1.0, d.c * std::pow(static_cast<double>(n), -d.a));
            } else {
                const std::uint64_t len = d.values.size();
                if (n < len) return d.values[n];
                return d.values.back() * std::pow(d.tail_q, static_cast<double>(n - len + 1));
            }
        },
        spec_);
}

double Distribution::hazard(std::uint64_t n) const {
    const double sn = survival(n);
    if (sn <= 0.0) fail(errc::invalid_argument, "hazard: survival(n) is zero");
    return std::clamp(1.0 - survival(n + 1) / sn, 0.0, 1.0);
}

double Distribution::tail_sum(std::uint64_t n, double tol) const {
    if (tol <= 0.0) fail(errc::invalid_argument, "tail_sum: tol must be positive");
    return std::visit(
        [n](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Geometric>) {
                const double q = 1.0 - d.p;
                return std::pow(q, static_cast<double>(n)) / d.p;
            } else if constexpr (std::is_same_v<T, Deterministic>) {
                return n < d.k ? static_cast<double>(d.k - n) : 0.0;
            } else if constexpr (std::is_same_v<T, Polynomial>) {
                const std::uint64_t n0 = poly_threshold(d.c, d.a);
                double ones = n < n0 ? static_cast<double>(n0 - n) : 0.0;
                return ones + d.c * power_tail(d.a, std::max(n, n0));
            } else {
                const std::uint64_t len = d.values.size();
                const double geo = d.values.back() / (1.0 - d.tail_q);
                if (n >= len)
                    return geo * std::pow(d.tail_q, static_cast<double>(n - len + 1));
                double head = 0.0;
                for (std::uint64_t m = n; m < len; ++m) head += d.values[m];
                return head + geo * d.tail_q;
            }
        },
        spec_);
}

double Distribution::remaining_mean(std::uint64_t n, double tol) const {
    const double sn = survival(n);
    if (sn <= 0.0) fail(errc::invalid_argument, "remaining_mean: survival(n) is zero");
    return tail_sum(n, tol) / sn;
}

std::uint64_t Distribution::sample_open_count(double u) const {
    if (!(u > 0.0) || u > 1.0) fail(errc::invalid_argument, "sample: u must be in (0, 1]");
    std::uint64_t n = std::visit(
        [u](const auto& d) -> std::uint64_t {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Geometric>) {
                const double q = 1.0 - d.p;
                if (q == 0.0 || u == 1.0) return 1;
                return static_cast<std::uint64_t>(
                           std::max(0.0, std::floor(std::log(u) / std::log(q)))) + 1;
            } else if constexpr (std::is_same_v<T, Deterministic>) {
                return d.k;
            } else if constexpr (std::is_same_v<T, Polynomial>) {
                const std::uint64_t n0 = poly_threshold(d.c, d.a);
                const double guess = std::pow(d.c / u, 1.0 / d.a);
                return std::max<std::uint64_t>(
                    n0, static_cast<std::uint64_t>(std::max(0.0, std::floor(guess))) + 1);
            } else {
                const std::uint64_t len = d.values.size();
                for (std::uint64_t m = 1; m < len; ++m)
                    if (d.values[m] < u) return m;
                const double last = d.values.back();
                if (d.tail_q == 0.0 || last < u || last == 0.0) return len;
                const double steps = std::floor(std::log(u / last) / std::log(d.tail_q));
                return len - 1 + static_cast<std::uint64_t>(std::max(0.0, steps)) + 1;
            }
        },
        spec_);
    // guard the closed-form inversions against rounding at the boundary
    while (survival(n) >= u) ++n;
    while (n > 1 && survival(n - 1) < u) --n;
    return n;
}

std::uint64_t Distribution::support_end() const {
    return std::visit(
        [](const auto& d) -> std::uint64_t {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Geometric>) {
                return d.p == 1.0 ? 1 : std::numeric_limits<std::uint64_t>::max();
            } else if constexpr (std::is_same_v<T, Deterministic>) {
                return d.k;
            } else if constexpr (std::is_same_v<T, Polynomial>) {
                return std::numeric_limits<std::uint64_t>::max();
            } else {
                for (std::uint64_t m = 0; m < d.values.size(); ++m)
                    if (d.values[m] == 0.0) return m;
                if (d.tail_q == 0.0) return d.values.size();
                return std::numeric_limits<std::uint64_t>::max();
            }
        },
        spec_);
}

std::string Distribution::describe() const {
    std::ostringstream os;
    std::visit(
        [&os](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Geometric>) {
                os << "geometric(p=" << d.p << ")";
            } else if constexpr (std::is_same_v<T, Deterministic>) {
                os << "deterministic(k=" << d.k << ")";
            } else if constexpr (std::is_same_v<T, Polynomial>) {
                os << "polynomial(c=" << d.c << ", a=" << d.a << ")";
            } else {
                os << "table(len=" << d.values.size() << ", tail_q=" << d.tail_q << ")";
            }
        },
        spec_);
    return os.str();
}

}  // namespace doors
