/* C API for the doors library: planning, evaluation and simulation of knock
 * sequences for stochastically dependent doors.
 *
 * Conventions:
 *   - every fallible call returns a doors_status; DOORS_OK is 0
 *   - handles are opaque and freed with the matching *_free call
 *   - when an errmsg out-parameter is supplied and an error occurs, it is set
 *     to a malloc()ed description that must be released with doors_string_free
 */
#ifndef DOORS_DOORS_H_
#define DOORS_DOORS_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum doors_status {
    DOORS_OK = 0,
    DOORS_ERR_INVALID_ARGUMENT = 1,
    DOORS_ERR_VALIDATION = 2,
    DOORS_ERR_PARSE = 3,
    DOORS_ERR_DIVERGENT = 4,
    DOORS_ERR_NONCONVERGENT = 5,
    DOORS_ERR_HORIZON = 6,
    DOORS_ERR_TIMEOUT = 7,
    DOORS_ERR_IO = 8,
    DOORS_ERR_INTERNAL = 9
} doors_status;

const char* doors_status_name(doors_status status);
void doors_string_free(char* s);
const char* doors_version(void);

/* -------- configurations -------- */

typedef struct doors_config doors_config;

/* Schema: {"doors":[{"kind":"geometric","p":0.5} | {"kind":"deterministic","k":3}
 * | {"kind":"polynomial","c":1.0,"a":2.0} | {"kind":"table","values":[...],
 * "tail_q":0.5}, ...], "dependency":"independent"|"cascading"|{"dag":[[],[1],[1,2]]}} */
doors_status doors_config_from_json(const char* json, doors_config** out, char** errmsg);
doors_status doors_config_from_file(const char* path, doors_config** out, char** errmsg);
void doors_config_free(doors_config* config);
uint32_t doors_config_door_count(const doors_config* config);

/* -------- knock sequences -------- */

typedef struct doors_sequence doors_sequence;

doors_status doors_sequence_round_robin(uint32_t d, doors_sequence** out);
doors_status doors_sequence_phase_doubling(uint32_t d, doors_sequence** out);
doors_status doors_sequence_doubling(const doors_config* config, doors_sequence** out);
/* sorted optimal finite prefix of the given length */
doors_status doors_sequence_optimal_prefix(const doors_config* config, uint64_t horizon,
                                           doors_sequence** out);
/* explicit knock list; repeated forever when repeat != 0 */
doors_status doors_sequence_from_knocks(const uint32_t* knocks, size_t n, int repeat,
                                        doors_sequence** out);
void doors_sequence_free(doors_sequence* seq);
/* writes the first n knocks; for a finite sequence shorter than n, the written
 * count is returned through written */
doors_status doors_sequence_prefix(const doors_sequence* seq, uint64_t n, uint32_t* out,
                                   uint64_t* written);

/* -------- evaluation -------- */

/* expected completion time under the config's dependency mode; tol <= 0 picks
 * the per-mode default */
doors_status doors_expected_time(const doors_config* config, const doors_sequence* seq,
                                 double tol, double* out, char** errmsg);
/* survival curve for independent configurations: out[t], t = 0..horizon */
doors_status doors_survival_curve(const doors_config* config, const doors_sequence* seq,
                                  uint64_t horizon, double* out, char** errmsg);
doors_status doors_feedback_baseline(const doors_config* config, double* out, char** errmsg);
/* best probability that a sorted sequence of `horizon` knocks opens all doors */
doors_status doors_dp_success_probability(const doors_config* config, uint64_t horizon,
                                          double* out, char** errmsg);

/* -------- two cascading memoryless doors -------- */

typedef struct doors_two_door_solution {
    double z_star;
    double x;
    double s;
    double t;
    double value;     /* optimal semi-fractional expected time */
    double approx_lo; /* closed-form bracket around value */
    double approx_hi;
    double theta;
    double psi;
} doors_two_door_solution;

doors_status doors_two_door_solve(double p1, double p2, double c, double tol,
                                  doors_two_door_solution* out, char** errmsg);
/* expected time of the rounded plan ceil(s + (i-1) t) */
doors_status doors_two_door_rounded_value(double p1, double p2, double c, double tol,
                                          double* out, char** errmsg);
/* cumulative 1-knock time before each of the first n 2-knocks of the rounded plan */
doors_status doors_two_door_rounded_cumulative(double p1, double p2, double c, uint64_t n,
                                               double* out, char** errmsg);
/* door-index listing (1s and 2s) of the rounded plan */
doors_status doors_two_door_rounded_knocks(double p1, double p2, double c, uint64_t n,
                                           uint32_t* out, char** errmsg);
/* expected time of an explicit cumulative sequence extended affinely */
doors_status doors_two_door_sequence_value(double p1, double p2, double c,
                                           const double* cumulative, size_t n,
                                           double tail_step, double tol, double* out,
                                           char** errmsg);

typedef struct doors_two_door_vi_result {
    double value;
    uint32_t policy_prefix[16];
    uint64_t iterations;
} doors_two_door_vi_result;

doors_status doors_two_door_value_iteration(double p1, double p2, double c, uint64_t grid_size,
                                            double tol, doors_two_door_vi_result* out,
                                            char** errmsg);

typedef struct doors_knock_ratio {
    uint64_t two_knocks;
    uint64_t one_knocks;
    double ratio_all;      /* 2-knocks over all 1-knocks in the budget */
    double ratio_periodic; /* excluding the opening 1-run */
} doors_knock_ratio;

doors_status doors_two_door_knock_ratio(double p1, double p2, double c, double time_budget,
                                        doors_knock_ratio* out, char** errmsg);

/* -------- price of lacking feedback -------- */

typedef struct doors_price_report {
    uint64_t d;
    double e_single;
    double e_max;
    uint64_t kappa;
    double lm_max_bound;
    double price;
} doors_price_report;

/* uses door `door_index` (1-based) of the configuration as the shared
 * fundamental distribution of d similar doors */
doors_status doors_price_report_compute(const doors_config* config, uint32_t door_index,
                                        uint64_t d, double tol, doors_price_report* out,
                                        char** errmsg);

/* -------- simulation -------- */

typedef struct doors_sim_estimate {
    double mean;
    double ci99;
    uint64_t trials;
    uint64_t timeouts;
} doors_sim_estimate;

doors_status doors_simulate(const doors_config* config, const doors_sequence* seq,
                            uint64_t trials, uint64_t seed, uint32_t threads, uint64_t cap,
                            doors_sim_estimate* out, char** errmsg);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DOORS_DOORS_H_ */
