#pragma once

#include <cstdint>

#include "distribution.hpp"

namespace doors {

struct PriceReport {
    std::uint64_t d = 0;
    double e_single = 0;       // E[X_1]
    double e_max = 0;          // E[max of d iid copies]
    std::uint64_t kappa = 0;   // min n with P(X > n) < 1/d
    double lm_max_bound = 0;   // kappa + d * sum_{n >= kappa} P(X > n)
    double price = 0;          // e_max / e_single
};

// sum_t 1 - (1 - p(t))^d, the expected maximum of d iid opening counts
double expected_max_iid(const Distribution& dist, std::uint64_t d, double tol = kDefaultTol);

std::uint64_t kappa(const Distribution& dist, std::uint64_t d);

double lm_max_bound(const Distribution& dist, std::uint64_t d, double tol = kDefaultTol);

PriceReport price_report(const Distribution& dist, std::uint64_t d, double tol = kDefaultTol);

}  // namespace doors
