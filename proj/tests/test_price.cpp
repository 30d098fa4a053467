#include <doctest.h>

#include <cmath>
#include <vector>

#include "distribution.hpp"
#include "price.hpp"

using doors::Distribution;

namespace {

// brute oracle for moderate horizons
double brute_emax(const Distribution& dist, std::uint64_t d, std::uint64_t horizon) {
    double sum = 0.0;
    for (std::uint64_t t = 0; t < horizon; ++t) {
        const double p = dist.survival(t);
        if (p >= 1.0)
            sum += 1.0;
        else
            sum += -std::expm1(static_cast<double>(d) * std::log1p(-p));
    }
    return sum;
}

}  // namespace

TEST_CASE("expected max closed forms") {
    const auto geo = Distribution::geometric(0.5);
    CHECK(doors::expected_max_iid(geo, 1) == doctest::Approx(2.0).epsilon(1e-10));
    // inclusion-exclusion: E[max] = 2 E - E[min], min of two geometrics ~ geometric(3/4)
    CHECK(doors::expected_max_iid(geo, 2) == doctest::Approx(8.0 / 3.0).epsilon(1e-10));

    const auto det = Distribution::deterministic(5);
    for (std::uint64_t d : {1ull, 3ull, 64ull})
        CHECK(doors::expected_max_iid(det, d) == doctest::Approx(5.0));
}

TEST_CASE("expected max for polynomial survival matches brute summation") {
    const auto poly = Distribution::polynomial(1.0, 2.0);
    for (std::uint64_t d : {1ull, 4ull, 64ull}) {
        // horizon long enough that the missing tail is ~ d/horizon
        const double brute = brute_emax(poly, d, 4'000'000);
        const double tail = static_cast<double>(d) / 4e6;
        const double value = doors::expected_max_iid(poly, d, 1e-10);
        CHECK(value >= brute - 1e-7);
        CHECK(value <= brute + 2 * tail + 1e-7);
    }
}

TEST_CASE("kappa examples") {
    CHECK(doors::kappa(Distribution::geometric(0.5), 8) == 4);
    CHECK(doors::kappa(Distribution::deterministic(5), 3) == 5);
    CHECK(doors::kappa(Distribution::geometric(0.5), 1) == 1);
}

TEST_CASE("lmMax bound examples") {
    CHECK(doors::lm_max_bound(Distribution::geometric(0.5), 8) ==
          doctest::Approx(5.0).epsilon(1e-12));
    CHECK(doors::lm_max_bound(Distribution::deterministic(5), 3) == doctest::Approx(5.0));
    CHECK(doors::lm_max_bound(Distribution::geometric(0.5), 1) ==
          doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("price report assembles the fields") {
    const auto report = doors::price_report(Distribution::geometric(0.5), 2);
    CHECK(report.d == 2);
    CHECK(report.e_single == doctest::Approx(2.0));
    CHECK(report.e_max == doctest::Approx(8.0 / 3.0).epsilon(1e-10));
    CHECK(report.kappa == 2);
    CHECK(report.price == doctest::Approx(4.0 / 3.0).epsilon(1e-10));
    CHECK(report.price >= 1.0 - 1e-12);
    CHECK(report.e_max >= report.e_single);

    // instant doors price at exactly 1
    const auto instant = doors::price_report(Distribution::deterministic(1), 1024);
    CHECK(instant.price == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sandwich: expected max within a constant factor of the lmMax bound") {
    const std::vector<Distribution> dists = {
        Distribution::geometric(0.6), Distribution::geometric(0.1),
        Distribution::deterministic(7), Distribution::polynomial(1.0, 2.0),
        Distribution::table({1.0, 0.5, 0.3}, 0.7),
    };
    for (const auto& dist : dists)
        for (std::uint64_t d = 1; d <= 16384; d *= 4) {
            const double ratio =
                doors::expected_max_iid(dist, d) / doors::lm_max_bound(dist, d);
            CHECK(ratio >= 1.0 / 8.0);
            CHECK(ratio <= 8.0);
        }
}

TEST_CASE("memoryless doors: price grows like log d") {
    for (double q : {0.6, 0.9}) {
        const auto dist = Distribution::geometric(1.0 - q);
        for (std::uint64_t d = 2; d <= 16384; d *= 2) {
            const auto report = doors::price_report(dist, d);
            const double band = report.price / std::log(static_cast<double>(d));
            CHECK(band >= 0.25);
            CHECK(band <= 4.0);
        }
    }
}

TEST_CASE("polynomial doors: price grows like d^(1/a)") {
    const auto dist = Distribution::polynomial(1.0, 2.0);
    for (std::uint64_t d = 4; d <= 16384; d *= 2) {
        const auto report = doors::price_report(dist, d);
        const double band = report.price / std::sqrt(static_cast<double>(d));
        CHECK(band >= 0.2);
        CHECK(band <= 5.0);
    }
}

TEST_CASE("bounded-moment survival is dominated by its polynomial envelope") {
    // p(n) <= M/n^a termwise implies the price report obeys the polynomial band
    const auto table = Distribution::table({1.0, 0.9, 0.2, 0.05}, 0.25);
    const auto envelope = Distribution::polynomial(0.9, 2.0);
    for (std::uint64_t n = 1; n <= 64; ++n)
        CHECK(table.survival(n) <= envelope.survival(n) + 1e-12);
    for (std::uint64_t d = 4; d <= 1024; d *= 4)
        CHECK(doors::expected_max_iid(table, d) <= doors::expected_max_iid(envelope, d) + 1e-9);
}

TEST_CASE("log inequality grid: 1 - q <= ln(1/q) <= (1-q)/q") {
    for (double q = 0.05; q < 1.0; q += 0.05) {
        const double l = std::log(1.0 / q);
        CHECK(1.0 - q <= l + 1e-15);
        CHECK(l <= (1.0 - q) / q + 1e-15);
    }
}
