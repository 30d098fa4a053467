#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "doors/doors.h"

namespace {

const char* kTwoGeo = R"({
    "doors": [{"kind": "geometric", "p": 0.5}, {"kind": "geometric", "p": 0.5}],
    "dependency": "cascading"
})";

}  // namespace

TEST_CASE("config lifecycle and validation errors") {
    doors_config* config = nullptr;
    char* errmsg = nullptr;
    REQUIRE(doors_config_from_json(kTwoGeo, &config, &errmsg) == DOORS_OK);
    CHECK(doors_config_door_count(config) == 2);
    doors_config_free(config);

    config = nullptr;
    const auto status = doors_config_from_json(
        R"({"doors": [{"kind":"geometric","p":0.5},{"kind":"geometric","p":0.5}],
            "dependency": {"dag": [[], [2]]}})",
        &config, &errmsg);
    CHECK(status == DOORS_ERR_VALIDATION);
    REQUIRE(errmsg != nullptr);
    CHECK(std::string(errmsg).find("self/forward reference") != std::string::npos);
    doors_string_free(errmsg);
    CHECK(config == nullptr);

    errmsg = nullptr;
    CHECK(doors_config_from_file("/nonexistent/doors.json", &config, &errmsg) == DOORS_ERR_IO);
    doors_string_free(errmsg);

    CHECK(std::strcmp(doors_status_name(DOORS_ERR_DIVERGENT), "divergent") == 0);
}

TEST_CASE("sequences through the C API") {
    doors_sequence* seq = nullptr;
    REQUIRE(doors_sequence_round_robin(3, &seq) == DOORS_OK);
    uint32_t prefix[6] = {};
    uint64_t written = 0;
    REQUIRE(doors_sequence_prefix(seq, 6, prefix, &written) == DOORS_OK);
    CHECK(written == 6);
    CHECK(prefix[0] == 1);
    CHECK(prefix[5] == 3);
    doors_sequence_free(seq);

    const uint32_t block[3] = {1, 2, 1};
    REQUIRE(doors_sequence_from_knocks(block, 3, 0, &seq) == DOORS_OK);
    REQUIRE(doors_sequence_prefix(seq, 6, prefix, &written) == DOORS_OK);
    CHECK(written == 3);  // finite sequence
    doors_sequence_free(seq);

    doors_config* config = nullptr;
    REQUIRE(doors_config_from_json(kTwoGeo, &config, nullptr) == DOORS_OK);
    REQUIRE(doors_sequence_doubling(config, &seq) == DOORS_OK);
    REQUIRE(doors_sequence_prefix(seq, 6, prefix, &written) == DOORS_OK);
    CHECK(std::vector<uint32_t>(prefix, prefix + 6) ==
          std::vector<uint32_t>{1, 2, 1, 1, 2, 2});
    doors_sequence_free(seq);

    REQUIRE(doors_sequence_optimal_prefix(config, 2, &seq) == DOORS_OK);
    REQUIRE(doors_sequence_prefix(seq, 4, prefix, &written) == DOORS_OK);
    CHECK(written == 2);
    CHECK(prefix[0] == 1);
    CHECK(prefix[1] == 2);
    doors_sequence_free(seq);
    doors_config_free(config);
}

TEST_CASE("evaluation through the C API") {
    doors_config* config = nullptr;
    doors_sequence* seq = nullptr;
    char* errmsg = nullptr;
    REQUIRE(doors_config_from_json(kTwoGeo, &config, nullptr) == DOORS_OK);
    REQUIRE(doors_sequence_round_robin(2, &seq) == DOORS_OK);

    double value = 0.0;
    REQUIRE(doors_expected_time(config, seq, 1e-9, &value, &errmsg) == DOORS_OK);
    CHECK(value == doctest::Approx(6.0).epsilon(1e-7));

    double baseline = 0.0;
    REQUIRE(doors_feedback_baseline(config, &baseline, &errmsg) == DOORS_OK);
    CHECK(baseline == doctest::Approx(4.0));

    double a22 = 0.0;
    REQUIRE(doors_dp_success_probability(config, 2, &a22, &errmsg) == DOORS_OK);
    CHECK(a22 == doctest::Approx(0.25));

    // survival curve requires the independent mode
    double curve[3] = {};
    CHECK(doors_survival_curve(config, seq, 2, curve, &errmsg) == DOORS_ERR_INVALID_ARGUMENT);
    doors_string_free(errmsg);
    errmsg = nullptr;

    doors_config* ind = nullptr;
    REQUIRE(doors_config_from_json(
                R"({"doors":[{"kind":"geometric","p":0.5},{"kind":"geometric","p":0.5}],
                    "dependency":"independent"})",
                &ind, nullptr) == DOORS_OK);
    REQUIRE(doors_survival_curve(ind, seq, 2, curve, &errmsg) == DOORS_OK);
    CHECK(curve[0] == 1.0);
    CHECK(curve[2] == doctest::Approx(0.75));

    // divergence surfaces as a status code
    doors_sequence* solo = nullptr;
    REQUIRE(doors_sequence_round_robin(1, &solo) == DOORS_OK);
    CHECK(doors_expected_time(config, solo, 1e-9, &value, &errmsg) == DOORS_ERR_DIVERGENT);
    doors_string_free(errmsg);

    doors_sequence_free(solo);
    doors_sequence_free(seq);
    doors_config_free(ind);
    doors_config_free(config);
}

TEST_CASE("two-door surface") {
    doors_two_door_solution sol{};
    char* errmsg = nullptr;
    REQUIRE(doors_two_door_solve(0.5, 0.5, 1.0, 1e-12, &sol, &errmsg) == DOORS_OK);
    CHECK(sol.value == doctest::Approx(5.747141272).epsilon(1e-6));
    CHECK(sol.approx_lo <= sol.value);
    CHECK(sol.approx_hi >= sol.value);

    double rounded = 0.0;
    REQUIRE(doors_two_door_rounded_value(0.5, 0.5, 1.0, 1e-10, &rounded, &errmsg) == DOORS_OK);
    CHECK(rounded == doctest::Approx(5.831815225).epsilon(1e-6));

    uint32_t knocks[6] = {};
    REQUIRE(doors_two_door_rounded_knocks(0.5, 0.5, 1.0, 6, knocks, &errmsg) == DOORS_OK);
    CHECK(std::vector<uint32_t>(knocks, knocks + 6) ==
          std::vector<uint32_t>{1, 1, 2, 1, 2, 2});

    double cumulative[3] = {};
    REQUIRE(doors_two_door_rounded_cumulative(0.5, 0.5, 1.0, 3, cumulative, &errmsg) ==
            DOORS_OK);
    CHECK(cumulative[0] == 2.0);
    CHECK(cumulative[1] == 3.0);
    CHECK(cumulative[2] == 3.0);

    const double alternating[4] = {1, 2, 3, 4};
    double alt_value = 0.0;
    REQUIRE(doors_two_door_sequence_value(0.5, 0.5, 1.0, alternating, 4, 1.0, 1e-10,
                                          &alt_value, &errmsg) == DOORS_OK);
    CHECK(alt_value == doctest::Approx(6.0).epsilon(1e-8));

    doors_knock_ratio ratio{};
    REQUIRE(doors_two_door_knock_ratio(1e-4, 1e-4, 1.0, 1e6, &ratio, &errmsg) == DOORS_OK);
    CHECK(ratio.ratio_periodic == doctest::Approx(1.618).epsilon(1e-3));

    CHECK(doors_two_door_solve(1.5, 0.5, 1.0, 0, &sol, &errmsg) == DOORS_ERR_VALIDATION);
    doors_string_free(errmsg);
}

TEST_CASE("value iteration, price and simulation surfaces") {
    doors_two_door_vi_result vi{};
    char* errmsg = nullptr;
    REQUIRE(doors_two_door_value_iteration(0.5, 0.5, 1.0, 20000, 1e-9, &vi, &errmsg) ==
            DOORS_OK);
    CHECK(vi.value > 5.747);
    CHECK(vi.value < 5.832);
    CHECK(vi.policy_prefix[0] == 1);
    CHECK(vi.policy_prefix[2] == 2);

    doors_config* config = nullptr;
    REQUIRE(doors_config_from_json(kTwoGeo, &config, nullptr) == DOORS_OK);

    doors_price_report report{};
    REQUIRE(doors_price_report_compute(config, 1, 2, 0, &report, &errmsg) == DOORS_OK);
    CHECK(report.e_max == doctest::Approx(8.0 / 3.0).epsilon(1e-9));
    CHECK(report.kappa == 2);
    CHECK(doors_price_report_compute(config, 5, 2, 0, &report, &errmsg) ==
          DOORS_ERR_INVALID_ARGUMENT);
    doors_string_free(errmsg);

    doors_sequence* seq = nullptr;
    REQUIRE(doors_sequence_round_robin(2, &seq) == DOORS_OK);
    doors_sim_estimate est{};
    REQUIRE(doors_simulate(config, seq, 100000, 7, 2, 0, &est, &errmsg) == DOORS_OK);
    CHECK(std::abs(est.mean - 6.0) <= 3 * est.ci99 + 0.05);
    CHECK(est.trials == 100000);

    doors_sequence_free(seq);
    doors_config_free(config);

    CHECK(std::string(doors_version()) == "0.1.0");
}
