#include "doors/doors.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>

#include "config.hpp"
#include "error.hpp"
#include "evaluator.hpp"
#include "planner.hpp"
#include "price.hpp"
#include "sequence.hpp"
#include "simulator.hpp"
#include "two_door.hpp"

struct doors_config {
    doors::DoorConfiguration impl;
};

struct doors_sequence {
    doors::KnockSequence impl;
};

namespace {

void set_errmsg(char** errmsg, const std::string& text) {
    if (!errmsg) return;
    *errmsg = static_cast<char*>(std::malloc(text.size() + 1));
    if (*errmsg) std::memcpy(*errmsg, text.c_str(), text.size() + 1);
}

doors_status map_errc(doors::errc code) {
    using doors::errc;
    switch (code) {
    case errc::invalid_argument: return DOORS_ERR_INVALID_ARGUMENT;
    case errc::validation_failed: return DOORS_ERR_VALIDATION;
    case errc::parse_error: return DOORS_ERR_PARSE;
    case errc::divergent: return DOORS_ERR_DIVERGENT;
    case errc::nonconvergent: return DOORS_ERR_NONCONVERGENT;
    case errc::horizon_exceeded: return DOORS_ERR_HORIZON;
    case errc::timeout: return DOORS_ERR_TIMEOUT;
    case errc::io_error: return DOORS_ERR_IO;
    }
    return DOORS_ERR_INTERNAL;
}

template <typename Fn>
doors_status guarded(char** errmsg, Fn&& fn) {
    try {
        fn();
        return DOORS_OK;
    } catch (const doors::Error& e) {
        set_errmsg(errmsg, e.what());
        return map_errc(e.code());
    } catch (const std::exception& e) {
        set_errmsg(errmsg, e.what());
        return DOORS_ERR_INTERNAL;
    } catch (...) {
        set_errmsg(errmsg, "unknown error");
        return DOORS_ERR_INTERNAL;
    }
}

doors::TwoDoorParams params_or_throw(double p1, double p2, double c) {
    return doors::make_two_door_params(p1, p2, c);
}

}  // namespace

extern "C" {

const char* doors_status_name(doors_status status) {
    switch (status) {
    case DOORS_OK: return "ok";
    case DOORS_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case DOORS_ERR_VALIDATION: return "validation_failed";
    case DOORS_ERR_PARSE: return "parse_error";
    case DOORS_ERR_DIVERGENT: return "divergent";
    case DOORS_ERR_NONCONVERGENT: return "nonconvergent";
    case DOORS_ERR_HORIZON: return "horizon_exceeded";
    case DOORS_ERR_TIMEOUT: return "timeout";
    case DOORS_ERR_IO: return "io_error";
    case DOORS_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

void doors_string_free(char* s) { std::free(s); }

const char* doors_version(void) { return "0.1.0"; }

doors_status doors_config_from_json(const char* json, doors_config** out, char** errmsg) {
    if (!json || !out) return DOORS_ERR_INVALID_ARGUMENT;
    return guarded(errmsg, [&] {
        *out = new doors_config{doors::parse_config(json)};
    });
}

doors_status doors_config_from_file(const char* path, doors_config** out, char** errmsg) {
    if (!path || !out) return DOORS_ERR_INVALID_ARGUMENT;
    return guarded(errmsg, [&] {
        *out = new doors_config{doors::load_config(path)};
    });
}

void doors_config_free(doors_config* config) { delete config; }

uint32_t doors_config_door_count(const doors_config* config) {
    return config ? config->impl.door_count() : 0;
}

doors_status doors_sequence_round_robin(uint32_t d, doors_sequence** out) {
    if (!out) return DOORS_ERR_INVALID_ARGUMENT;
    return guarded(nullptr, [&] {
        *out = new doors_sequence{doors::a_simp(d)};
    });
}

doors_status doors_sequence_phase_doubling(uint32_t d, doors_sequence** out) {
    if (!out) return DOORS_ERR_INVALID_ARGUMENT;
    return guarded(nullptr, [&] {
        *out = new doors_sequence{doors::phase_doubling(d)};
    });
}

doors_status doors_sequence_doubling(const doors_config* config, doors_sequence** out) {
    if (!config || !out) return DOORS_ERR_INVALID_ARGUMENT;
    return guarded(nullptr, [&] {
        *out = new doors_sequence{doors::doubling_sequence(config->impl)};
    });
}

doors_status doors_sequence_optimal_prefix(const doors_config* config, uint64_t horizon,
                                           doors_sequence** out) {
    if (!config || !out) return DOORS_ERR_INVALID_ARGUMENT;
    return guarded(nullptr, [&] {
        *out = new doors_sequence{doors::optimal_prefix(config->impl, horizon)};
    });
}

doors_status doors_sequence_from_knocks(const uint32_t* knocks, size_t n, int repeat,
                                        doors_sequence** out) {
    if (!out || (n > 0 && !knocks)) return DOORS_ERR_INVALID_ARGUMENT;
    return guarded(nullptr, [&] {
        std::vector<uint32_t> block(knocks, knocks + n);
        if (repeat)
            *out = new doors_sequence{doors::KnockSequence::from_block({}, std::move(block))};
        else
            *out = new doors_sequence{doors::KnockSequence::from_block(std::move(block), {})};
    });
}

void doors_sequence_free(doors_sequence* seq) { delete seq; }

doors_status doors_sequence_prefix(const doors_sequence* seq, uint64_t n, uint32_t* out,
                                   uint64_t* written) {
    if (!seq || !out) return DOORS_ERR_INVALID_ARGUMENT;
    return guarded(nullptr, [&] {
        auto prefix = seq->impl.prefix(n);
        for (std::size_t i = 0; i < prefix.size(); ++i) out[i] = prefix[i];
        if (written) *written = prefix.size();
    });
}

doors_status doors_expected_time(const doors_config* config, const doors_sequence* seq,
                                 double tol, double* out, char** errmsg) {
    if (!config || !seq || !out) return DOORS_ERR_INVALID_ARGUMENT;
    return guarded(errmsg, [&] {
        doors::EvalOptions opt;
        if (config->impl.dependency == doors::DependencyKind::independent)
            opt.tol = tol > 0.0 ? tol : 1e-12;
        else
            opt.tol = tol > 0.0 ? tol : 1e-9;
        *out = doors::expected_time(config->impl, seq->impl, opt);
    });
}

doors_status doors_survival_curve(const doors_config* config, const doors_sequence* seq,
                                  uint64_t horizon, double* out, char** errmsg) {
    if (!config || !seq || !out) return DOORS_ERR_INVALID_ARGUMENT;
    return guarded(errmsg, [&] {
        auto curve = doors::survival_curve_independent(config->impl, seq->impl, horizon);
        for (std::size_t i = 0; i < curve.values.size(); ++i) out[i] = curve.values[i];
    });
}

doors_status doors_feedback_baseline(const doors_config* config, double* out, char** errmsg) {
    if (!config || !out) return DOORS_ERR_INVALID_ARGUMENT;
    return guarded(errmsg, [&] { *out = doors::feedback_baseline(config->impl); });
}

doors_status doors_dp_success_probability(const doors_config* config, uint64_t horizon,
                                          double* out, char** errmsg) {
    if (!config || !out) return DOORS_ERR_INVALID_ARGUMENT;
    return guarded(errmsg, [&] {
        auto table = doors::dp_table(config->impl, horizon);
        *out = table.prob(table.door_count(), horizon);
    });
}

doors_status doors_two_door_solve(double p1, double p2, double c, double tol,
                                  doors_two_door_solution* out, char** errmsg) {
    if (!out) return DOORS_ERR_INVALID_ARGUMENT;
    return guarded(errmsg, [&] {
        const auto params = params_or_throw(p1, p2, c);
        const auto plan = doors::solve_semifractional(params, tol > 0.0 ? tol : 1e-12);
        const auto approx = doors::approx_value(params);
        out->z_star = plan.z_star;
        out->x = plan.x;
        out->s = plan.s;
        out->t = plan.t;
        out->value = plan.value;
        out->approx_lo = approx.lo;
        out->approx_hi = approx.hi;
        out->theta = approx.theta;
        out->psi = approx.psi;
    });
}

doors_status doors_two_door_rounded_value(double p1, double p2, double c, double tol,
                                          double* out, char** errmsg) {
    if (!out) return DOORS_ERR_INVALID_ARGUMENT;
    return guarded(errmsg, [&] {
        const auto params = params_or_throw(p1, p2, c);
        const auto plan = doors::solve_semifractional(params, 1e-12);
        *out = doors::expected_time_two_door(params, doors::round_to_integer(plan),
                                             tol > 0.0 ? tol : 1e-9);
    });
}

doors_status doors_two_door_rounded_cumulative(double p1, double p2, double c, uint64_t n,
                                               double* out, char** errmsg) {
    if (!out) return DOORS_ERR_INVALID_ARGUMENT;
    return guarded(errmsg, [&] {
        const auto params = params_or_throw(p1, p2, c);
        const auto plan = doors::solve_semifractional(params, 1e-12);
        const auto seq = doors::round_to_integer(plan);
        for (uint64_t i = 1; i <= n; ++i) out[i - 1] = seq.cumulative(i);
    });
}

doors_status doors_two_door_rounded_knocks(double p1, double p2, double c, uint64_t n,
                                           uint32_t* out, char** errmsg) {
    if (!out) return DOORS_ERR_INVALID_ARGUMENT;
    return guarded(errmsg, [&] {
        const auto params = params_or_throw(p1, p2, c);
        const auto plan = doors::solve_semifractional(params, 1e-12);
        const auto knocks = doors::round_to_integer(plan).knocks(n);
        for (std::size_t i = 0; i < knocks.size(); ++i) out[i] = knocks[i];
    });
}

doors_status doors_two_door_sequence_value(double p1, double p2, double c,
                                           const double* cumulative, size_t n,
                                           double tail_step, double tol, double* out,
                                           char** errmsg) {
    if (!out || (n > 0 && !cumulative)) return DOORS_ERR_INVALID_ARGUMENT;
    return guarded(errmsg, [&] {
        const auto params = params_or_throw(p1, p2, c);
        std::vector<double> cum(cumulative, cumulative + n);
        const auto seq = doors::TwoDoorSequence::explicit_then_affine(std::move(cum), tail_step);
        *out = doors::expected_time_two_door(params, seq, tol > 0.0 ? tol : 1e-9);
    });
}

doors_status doors_two_door_value_iteration(double p1, double p2, double c, uint64_t grid_size,
                                            double tol, doors_two_door_vi_result* out,
                                            char** errmsg) {
    if (!out) return DOORS_ERR_INVALID_ARGUMENT;
    return guarded(errmsg, [&] {
        const auto params = params_or_throw(p1, p2, c);
        const auto res =
            doors::value_iteration(params, grid_size, tol > 0.0 ? tol : 1e-10, 16);
        out->value = res.value;
        out->iterations = res.iterations;
        for (std::size_t i = 0; i < 16 && i < res.policy_prefix.size(); ++i)
            out->policy_prefix[i] = res.policy_prefix[i];
    });
}

doors_status doors_two_door_knock_ratio(double p1, double p2, double c, double time_budget,
                                        doors_knock_ratio* out, char** errmsg) {
    if (!out) return DOORS_ERR_INVALID_ARGUMENT;
    return guarded(errmsg, [&] {
        const auto params = params_or_throw(p1, p2, c);
        const auto plan = doors::solve_semifractional(params, 1e-12);
        const auto ratio = doors::knock_type_ratio(params, plan, time_budget);
        out->two_knocks = ratio.two_knocks;
        out->one_knocks = ratio.one_knocks;
        out->ratio_all = ratio.ratio_all;
        out->ratio_periodic = ratio.ratio_periodic;
    });
}

doors_status doors_price_report_compute(const doors_config* config, uint32_t door_index,
                                        uint64_t d, double tol, doors_price_report* out,
                                        char** errmsg) {
    if (!config || !out) return DOORS_ERR_INVALID_ARGUMENT;
    return guarded(errmsg, [&] {
        if (door_index < 1 || door_index > config->impl.door_count())
            doors::fail(doors::errc::invalid_argument, "price: door_index out of range");
        const auto report = doors::price_report(config->impl.doors[door_index - 1], d,
                                                tol > 0.0 ? tol : doors::kDefaultTol);
        out->d = report.d;
        out->e_single = report.e_single;
        out->e_max = report.e_max;
        out->kappa = report.kappa;
        out->lm_max_bound = report.lm_max_bound;
        out->price = report.price;
    });
}

doors_status doors_simulate(const doors_config* config, const doors_sequence* seq,
                            uint64_t trials, uint64_t seed, uint32_t threads, uint64_t cap,
                            doors_sim_estimate* out, char** errmsg) {
    if (!config || !seq || !out) return DOORS_ERR_INVALID_ARGUMENT;
    return guarded(errmsg, [&] {
        const auto est = doors::estimate_expected_time(config->impl, seq->impl, trials, seed,
                                                       threads ? threads : 1,
                                                       cap ? cap : 1'000'000);
        out->mean = est.mean;
        out->ci99 = est.ci99;
        out->trials = est.trials;
        out->timeouts = est.timeouts;
    });
}

}  // extern "C"
