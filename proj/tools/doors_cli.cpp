// doors: plan, evaluate and simulate knock sequences for dependent doors.
// All numeric work goes through the C API in doors/doors.h.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "doors/doors.h"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitNumeric = 2;

int exit_code_for(doors_status status) {
    switch (status) {
    case DOORS_OK: return 0;
    case DOORS_ERR_INVALID_ARGUMENT:
    case DOORS_ERR_VALIDATION:
    case DOORS_ERR_PARSE:
    case DOORS_ERR_IO: return kExitValidation;
    default: return kExitNumeric;
    }
}

[[noreturn]] void die(doors_status status, char* errmsg) {
    std::fprintf(stderr, "error (%s): %s\n", doors_status_name(status),
                 errmsg ? errmsg : "unspecified");
    doors_string_free(errmsg);
    std::exit(exit_code_for(status));
}

// reads the message through the pointer only after the call has returned
void check(doors_status status, char** errmsg) {
    if (status != DOORS_OK) die(status, errmsg ? *errmsg : nullptr);
}

struct ConfigHandle {
    doors_config* ptr = nullptr;
    ~ConfigHandle() { doors_config_free(ptr); }
};

struct SequenceHandle {
    doors_sequence* ptr = nullptr;
    ~SequenceHandle() { doors_sequence_free(ptr); }
};

void load_config(const std::string& path, ConfigHandle& config) {
    char* errmsg = nullptr;
    check(doors_config_from_file(path.c_str(), &config.ptr, &errmsg), &errmsg);
}

std::vector<uint32_t> parse_knock_list(const std::string& text) {
    std::vector<uint32_t> knocks;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        const std::string item = text.substr(pos, next - pos);
        try {
            const unsigned long v = std::stoul(item);
            if (v == 0) throw std::invalid_argument("zero");
            knocks.push_back(static_cast<uint32_t>(v));
        } catch (const std::exception&) {
            std::fprintf(stderr, "error (validation_failed): bad door index \"%s\"\n",
                         item.c_str());
            std::exit(kExitValidation);
        }
        pos = next + 1;
    }
    if (knocks.empty()) {
        std::fprintf(stderr, "error (validation_failed): empty knock list\n");
        std::exit(kExitValidation);
    }
    return knocks;
}

void make_sequence(const std::string& algorithm, const std::string& inline_seq, bool repeat,
                   const ConfigHandle& config, SequenceHandle& seq) {
    doors_status status = DOORS_OK;
    if (!inline_seq.empty()) {
        const auto knocks = parse_knock_list(inline_seq);
        status = doors_sequence_from_knocks(knocks.data(), knocks.size(), repeat ? 1 : 0,
                                            &seq.ptr);
    } else if (algorithm == "round-robin") {
        status = doors_sequence_round_robin(doors_config_door_count(config.ptr), &seq.ptr);
    } else if (algorithm == "doubling") {
        status = doors_sequence_doubling(config.ptr, &seq.ptr);
    } else if (algorithm == "phase-doubling") {
        status = doors_sequence_phase_doubling(doors_config_door_count(config.ptr), &seq.ptr);
    } else {
        std::fprintf(stderr, "error (validation_failed): unknown algorithm \"%s\"\n",
                     algorithm.c_str());
        std::exit(kExitValidation);
    }
    check(status, nullptr);
}

void print_knock_line(const uint32_t* knocks, uint64_t n) {
    for (uint64_t i = 0; i < n; ++i) std::printf("%s%u", i ? "," : "", knocks[i]);
    std::printf("\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dependent doors: sequence planning, evaluation and simulation"};
    app.require_subcommand(1);

    std::string config_path, algorithm = "doubling", inline_seq, format = "lines";
    bool repeat = false;
    double tol = 0.0;
    uint64_t knocks = 16, horizon = 32, trials = 100000, seed = 1, cap = 1000000;
    uint32_t threads = 1;
    double p1 = 0.5, p2 = 0.5, c = 1.0;
    uint64_t grid = 100000;
    bool run_vi = false;
    std::string d_list = "1,2,4,8,16";

    auto* plan = app.add_subcommand("plan", "emit the first N knocks of a planned sequence");
    plan->add_option("--config", config_path, "configuration file")->required();
    plan->add_option("--algorithm", algorithm, "round-robin | doubling | phase-doubling");
    plan->add_option("--knocks", knocks, "how many knocks to emit");

    auto* evaluate = app.add_subcommand("evaluate", "expected completion time of a sequence");
    evaluate->add_option("--config", config_path, "configuration file")->required();
    std::string eval_algorithm;
    evaluate->add_option("--algorithm", eval_algorithm, "named sequence to evaluate");
    evaluate->add_option("--sequence", inline_seq, "inline knock list, e.g. 1,2,1,2");
    evaluate->add_flag("--repeat", repeat, "repeat the inline list forever");
    evaluate->add_option("--tol", tol, "truncation tolerance (required for infinite sequences)");
    evaluate->add_option("--format", format, "lines | csv");
    evaluate->add_option("--horizon", horizon, "survival-curve horizon for csv output");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of completion time");
    simulate->add_option("--config", config_path, "configuration file")->required();
    std::string sim_algorithm = "round-robin";
    simulate->add_option("--algorithm", sim_algorithm, "named sequence to simulate");
    simulate->add_option("--sequence", inline_seq, "inline knock list");
    simulate->add_flag("--repeat", repeat, "repeat the inline list forever");
    simulate->add_option("--trials", trials, "number of trials");
    simulate->add_option("--seed", seed, "random seed");
    simulate->add_option("--threads", threads, "worker threads");
    simulate->add_option("--cap", cap, "per-trial knock cap");

    auto* two_door = app.add_subcommand("two-door", "two cascading memoryless doors");
    two_door->add_option("--p1", p1, "door 1 opening probability")->required();
    two_door->add_option("--p2", p2, "door 2 opening probability")->required();
    two_door->add_option("--c", c, "duration of a 2-knock");
    two_door->add_option("--tol", tol, "solver/evaluator tolerance");
    two_door->add_option("--knocks", knocks, "length of the printed knock prefix");
    two_door->add_option("--horizon", horizon, "rows in csv output");
    two_door->add_option("--format", format, "lines | csv");
    two_door->add_flag("--value-iteration", run_vi, "also run the value-iteration oracle");
    two_door->add_option("--grid", grid, "value-iteration grid size");

    auto* price = app.add_subcommand("price", "price of lacking feedback for similar doors");
    price->add_option("--config", config_path, "configuration file (door 1 is used)")->required();
    price->add_option("--d", d_list, "comma-separated door counts");
    price->add_option("--tol", tol, "tail tolerance");

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand(plan)) {
        ConfigHandle config;
        load_config(config_path, config);
        SequenceHandle seq;
        make_sequence(algorithm, "", false, config, seq);
        std::vector<uint32_t> out(knocks);
        uint64_t written = 0;
        check(doors_sequence_prefix(seq.ptr, knocks, out.data(), &written), nullptr);
        print_knock_line(out.data(), written);
        return 0;
    }

    if (app.got_subcommand(evaluate)) {
        ConfigHandle config;
        load_config(config_path, config);
        SequenceHandle seq;
        const bool infinite = inline_seq.empty() || repeat;
        if (inline_seq.empty() && eval_algorithm.empty()) {
            std::fprintf(stderr,
                         "error (validation_failed): evaluate needs --sequence or --algorithm\n");
            return kExitValidation;
        }
        if (infinite && tol <= 0.0) {
            std::fprintf(stderr,
                         "error (validation_failed): infinite sequences require --tol\n");
            return kExitValidation;
        }
        make_sequence(eval_algorithm, inline_seq, repeat, config, seq);
        if (format == "csv") {
            std::vector<double> curve(horizon + 1);
            char* errmsg = nullptr;
            check(doors_survival_curve(config.ptr, seq.ptr, horizon, curve.data(), &errmsg),
                  &errmsg);
            std::printf("t,survival\n");
            for (uint64_t t = 0; t <= horizon; ++t)
                std::printf("%" PRIu64 ",%.9g\n", t, curve[t]);
            return 0;
        }
        double value = 0.0;
        char* errmsg = nullptr;
        check(doors_expected_time(config.ptr, seq.ptr, tol, &value, &errmsg), &errmsg);
        std::printf("expected_time=%.9g\n", value);
        double baseline = 0.0;
        check(doors_feedback_baseline(config.ptr, &baseline, &errmsg), &errmsg);
        std::printf("feedback_baseline=%.9g\n", baseline);
        return 0;
    }

    if (app.got_subcommand(simulate)) {
        ConfigHandle config;
        load_config(config_path, config);
        SequenceHandle seq;
        make_sequence(sim_algorithm, inline_seq, repeat, config, seq);
        doors_sim_estimate est{};
        char* errmsg = nullptr;
        check(doors_simulate(config.ptr, seq.ptr, trials, seed, threads, cap, &est, &errmsg),
              &errmsg);
        std::printf("mean=%.9g\n", est.mean);
        std::printf("ci99=%.9g\n", est.ci99);
        std::printf("trials=%" PRIu64 "\n", est.trials);
        std::printf("timeout_rate=%.9g\n",
                    static_cast<double>(est.timeouts) / static_cast<double>(est.trials));
        return 0;
    }

    if (app.got_subcommand(two_door)) {
        doors_two_door_solution sol{};
        char* errmsg = nullptr;
        check(doors_two_door_solve(p1, p2, c, tol, &sol, &errmsg), &errmsg);
        if (format == "csv") {
            std::printf("i,pi,pi_rounded\n");
            std::vector<double> rounded(horizon);
            check(doors_two_door_rounded_cumulative(p1, p2, c, horizon, rounded.data(), &errmsg),
                  &errmsg);
            for (uint64_t i = 1; i <= horizon; ++i)
                std::printf("%" PRIu64 ",%.9g,%.9g\n", i,
                            sol.s + static_cast<double>(i - 1) * sol.t, rounded[i - 1]);
            return 0;
        }
        double rounded_value = 0.0;
        check(doors_two_door_rounded_value(p1, p2, c, tol, &rounded_value, &errmsg), &errmsg);
        std::printf("z_star=%.9g\n", sol.z_star);
        std::printf("x=%.9g\n", sol.x);
        std::printf("s=%.9g\n", sol.s);
        std::printf("t=%.9g\n", sol.t);
        std::printf("semifractional_value=%.9g\n", sol.value);
        std::printf("rounded_value=%.9g\n", rounded_value);
        std::printf("approx_lo=%.9g\n", sol.approx_lo);
        std::printf("approx_hi=%.9g\n", sol.approx_hi);
        std::printf("theta=%.9g\n", sol.theta);
        std::printf("psi=%.9g\n", sol.psi);
        std::vector<uint32_t> prefix(knocks);
        check(doors_two_door_rounded_knocks(p1, p2, c, knocks, prefix.data(), &errmsg), &errmsg);
        std::printf("prefix=");
        print_knock_line(prefix.data(), knocks);
        if (run_vi) {
            doors_two_door_vi_result vi{};
            check(doors_two_door_value_iteration(p1, p2, c, grid, tol, &vi, &errmsg), &errmsg);
            std::printf("vi_value=%.9g\n", vi.value);
            std::printf("vi_prefix=");
            print_knock_line(vi.policy_prefix, 6);
        }
        return 0;
    }

    if (app.got_subcommand(price)) {
        ConfigHandle config;
        load_config(config_path, config);
        std::printf("d,e_single,e_max,kappa,bound,price\n");
        for (uint32_t d_count : parse_knock_list(d_list)) {
            doors_price_report report{};
            char* errmsg = nullptr;
            check(doors_price_report_compute(config.ptr, 1, d_count, tol, &report, &errmsg),
                  &errmsg);
            std::printf("%" PRIu64 ",%.9g,%.9g,%" PRIu64 ",%.9g,%.9g\n", report.d,
                        report.e_single, report.e_max, report.kappa, report.lm_max_bound,
                        report.price);
        }
        return 0;
    }

    return 0;
}
