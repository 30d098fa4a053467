#include "price.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace doors {
namespace {

// 1 - (1-p)^d without cancellation when d*p is tiny
double one_minus_pow(double p, std::uint64_t d) {
    if (p >= 1.0) return 1.0;
    return -std::expm1(static_cast<double>(d) * std::log1p(-p));
}

// sum_{t >= T} t^-s for s > 1, T >= 1: direct terms to a modest point, then
// Euler-Maclaurin, whose first omitted correction is O(N^-(s+5))
double zeta_tail(double s, std::uint64_t T) {
    const std::uint64_t N = std::max<std::uint64_t>(T, 128);
    double direct = 0.0;
    for (std::uint64_t t = T; t < N; ++t) direct += std::pow(static_cast<double>(t), -s);
    const double Nd = static_cast<double>(N);
    const double Ns = std::pow(Nd, -s);
    return direct + Ns * Nd / (s - 1.0) + 0.5 * Ns + s * Ns / Nd / 12.0 -
           s * (s + 1.0) * (s + 2.0) * Ns / (Nd * Nd * Nd) / 720.0;
}

// Tail sum_{t >= T} (1 - (1 - c t^-a)^d) for a polynomial survival with
// d * c * T^-a <= 1/2: binomial expansion, each power summed with zeta_tail.
// The series alternates with geometrically decaying terms, so truncation at
// the first term below tol/8 is safe.
double poly_emax_tail(double c, double a, std::uint64_t d, std::uint64_t T, double tol) {
    double coef = 1.0;
    double sum = 0.0;
    for (std::uint64_t j = 1; j <= 512; ++j) {
        coef *= (static_cast<double>(d) - static_cast<double>(j - 1)) /
                static_cast<double>(j) * c;
        if (coef == 0.0) break;  // j exceeded d: binomial is exhausted
        const double term = coef * zeta_tail(a * static_cast<double>(j), T);
        sum += (j % 2 == 1) ? term : -term;
        if (std::abs(term) < tol / 8.0) break;
    }
    return sum;
}

}  // namespace

double expected_max_iid(const Distribution& dist, std::uint64_t d, double tol) {
    if (d < 1) fail(errc::invalid_argument, "expected_max_iid: d must be >= 1");
    if (tol <= 0.0) fail(errc::invalid_argument, "expected_max_iid: tol must be positive");

    if (const auto* poly = std::get_if<Polynomial>(&dist.spec())) {
        // direct terms while d*p(t) is large, then the analytic tail
        std::uint64_t T = 1;
        while (static_cast<double>(d) * dist.survival(T) > 0.5) ++T;
        double sum = 1.0;  // t = 0 term: every door starts closed
        for (std::uint64_t t = 1; t < T; ++t) sum += one_minus_pow(dist.survival(t), d);
        return sum + poly_emax_tail(poly->c, poly->a, d, T, tol);
    }

    // geometric-dominated tails: stop when d * tail_sum(t) < tol
    double sum = 0.0;
    std::uint64_t t = 0;
    while (true) {
        const double p = dist.survival(t);
        sum += one_minus_pow(p, d);
        ++t;
        if (p == 0.0 || static_cast<double>(d) * dist.tail_sum(t, tol) < tol) break;
    }
    return sum;
}

std::uint64_t kappa(const Distribution& dist, std::uint64_t d) {
    if (d < 1) fail(errc::invalid_argument, "kappa: d must be >= 1");
    const double threshold = 1.0 / static_cast<double>(d);
    std::uint64_t n = 0;
    while (!(dist.survival(n) < threshold)) ++n;
    return n;
}

double lm_max_bound(const Distribution& dist, std::uint64_t d, double tol) {
    const std::uint64_t k = kappa(dist, d);
    return static_cast<double>(k) + static_cast<double>(d) * dist.tail_sum(k, tol);
}

PriceReport price_report(const Distribution& dist, std::uint64_t d, double tol) {
    PriceReport report;
    report.d = d;
    report.e_single = dist.mean(tol);
    report.e_max = expected_max_iid(dist, d, tol);
    report.kappa = kappa(dist, d);
    report.lm_max_bound = lm_max_bound(dist, d, tol);
    report.price = report.e_max / report.e_single;
    return report;
}

}  // namespace doors
