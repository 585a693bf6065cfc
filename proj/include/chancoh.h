/* chancoh: coherence of quantum channels.
 *
 * C API over the chancoh core: channels and incoherent superchannels as
 * opaque handles, coherence measures (l1, relative entropy, trace distance,
 * modified trace distance), framework condition checks and the additivity
 * counterexample, plus JSON (de)serialization matching the CLI file formats.
 *
 * Every function returning chancoh_status sets a thread-local detail string
 * retrievable with chancoh_last_error(). Strings returned through char**
 * outputs are owned by the caller and released with chancoh_string_free().
 */
#ifndef CHANCOH_H
#define CHANCOH_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define CHANCOH_API __declspec(dllexport)
#else
#define CHANCOH_API __attribute__((visibility("default")))
#endif

typedef enum chancoh_status {
    CHANCOH_OK = 0,
    CHANCOH_ERR_INVALID_ARGUMENT = 1,
    CHANCOH_ERR_PARSE = 2,
    CHANCOH_ERR_NOT_TRACE_PRESERVING = 3,
    CHANCOH_ERR_INVALID_CHOI = 4,
    CHANCOH_ERR_DIMENSION_MISMATCH = 5,
    CHANCOH_ERR_INCOMPLETE_KRAUS = 6,
    CHANCOH_ERR_NOT_SUPERCHANNEL_OUTPUT = 7,
    CHANCOH_ERR_NORMALIZATION = 8,
    CHANCOH_ERR_INFEASIBLE_ISOMETRY = 9,
    CHANCOH_ERR_UNSUPPORTED = 10,
    CHANCOH_ERR_NOT_CONVERGED = 11,
    CHANCOH_ERR_IO = 12,
} chancoh_status;

typedef struct chancoh_channel chancoh_channel;
typedef struct chancoh_superchannel chancoh_superchannel;

typedef struct chancoh_solver_options {
    int32_t max_iterations; /* subgradient iteration cap (default 20000) */
    double step_scale;      /* diminishing step step_scale/sqrt(k) (default 0.1) */
    double tolerance;       /* stall threshold on best-value improvement (default 1e-10) */
    int32_t restarts;       /* solver starts; first is deterministic (default 1) */
    uint64_t seed;          /* seeds the random restarts (default 0) */
} chancoh_solver_options;

typedef struct chancoh_measure_result {
    double value;
    double lambda; /* scale of the modified trace measure; 1 otherwise */
    int64_t iterations;
    int32_t converged;
} chancoh_measure_result;

typedef struct chancoh_validation {
    int32_t hermitian;
    int32_t psd;
    int32_t trace_preserving; /* partial trace over the output equals identity */
    int32_t incoherent;       /* diagonal Choi matrix */
    double max_hermiticity_error;
    double min_eigenvalue;
    double max_partial_trace_error;
    double max_offdiagonal;
} chancoh_validation;

CHANCOH_API const char* chancoh_status_message(chancoh_status status);
CHANCOH_API const char* chancoh_last_error(void);
CHANCOH_API void chancoh_string_free(char* text);
CHANCOH_API void chancoh_solver_options_defaults(chancoh_solver_options* opts);

/* --- channels ----------------------------------------------------------- */

/* Channel JSON: { "dim_in": int, "dim_out": int, "kraus": [...] | "choi": [...] },
 * matrices as rows of [re, im] pairs. Exactly one of kraus/choi is present. */
CHANCOH_API chancoh_status chancoh_channel_from_json(const char* json_text, chancoh_channel** out);
CHANCOH_API chancoh_status chancoh_channel_load(const char* path, chancoh_channel** out);
CHANCOH_API chancoh_status chancoh_channel_save(const chancoh_channel* channel, const char* path);
CHANCOH_API chancoh_status chancoh_channel_to_json(const chancoh_channel* channel, char** out_json);
CHANCOH_API void chancoh_channel_free(chancoh_channel* channel);
CHANCOH_API int32_t chancoh_channel_dim_in(const chancoh_channel* channel);
CHANCOH_API int32_t chancoh_channel_dim_out(const chancoh_channel* channel);

CHANCOH_API chancoh_status chancoh_channel_dephasing(int32_t dim, chancoh_channel** out);

/* phases: dim_in*dim_out angles theta_{j,alpha} (row-major) or NULL for the
 * Fourier phases 2*pi*j*alpha/dim_out. Fails with
 * CHANCOH_ERR_NOT_TRACE_PRESERVING when the phases give no isometry. */
CHANCOH_API chancoh_status chancoh_channel_max_coherent(int32_t dim_in, int32_t dim_out,
                                                        const double* phases, chancoh_channel** out);
CHANCOH_API chancoh_status chancoh_channel_random(int32_t dim_in, int32_t dim_out, int32_t kraus_count,
                                                  uint64_t seed, chancoh_channel** out);
CHANCOH_API chancoh_status chancoh_channel_random_incoherent(int32_t dim_in, int32_t dim_out,
                                                             uint64_t seed, chancoh_channel** out);

/* Validates a channel file (either variant) without constructing a channel;
 * returns CHANCOH_OK with the report filled even when invariants fail. */
CHANCOH_API chancoh_status chancoh_validate_file(const char* path, chancoh_validation* report);
CHANCOH_API chancoh_status chancoh_validate_json(const char* json_text, chancoh_validation* report);

/* --- measures ------------------------------------------------------------ */

/* measure: "l1", "rel", "ctr" or "ctr-mod". witness_diagonal, when non-NULL
 * and the measure is iterative, receives dim_in*dim_out entries of the
 * closest incoherent Choi diagonal (witness requested for l1/rel is
 * CHANCOH_ERR_UNSUPPORTED). A non-converged solve returns
 * CHANCOH_ERR_NOT_CONVERGED with the best value still filled in. */
CHANCOH_API chancoh_status chancoh_measure(const chancoh_channel* channel, const char* measure,
                                           const chancoh_solver_options* opts,
                                           chancoh_measure_result* result, double* witness_diagonal);

/* --- superchannels ------------------------------------------------------- */

/* Superchannel JSON: { "dims_in": [a,b], "dims_out": [a2,b2], "kraus": [...],
 * "subnormalized": bool }. */
CHANCOH_API chancoh_status chancoh_superchannel_from_json(const char* json_text,
                                                          chancoh_superchannel** out);
CHANCOH_API chancoh_status chancoh_superchannel_load(const char* path, chancoh_superchannel** out);
CHANCOH_API void chancoh_superchannel_free(chancoh_superchannel* superchannel);
CHANCOH_API int32_t chancoh_superchannel_is_incoherent(const chancoh_superchannel* superchannel);

/* Deterministic application; fails with CHANCOH_ERR_NOT_SUPERCHANNEL_OUTPUT
 * when the output violates the Choi invariants on this input. */
CHANCOH_API chancoh_status chancoh_apply(const chancoh_superchannel* superchannel,
                                         const chancoh_channel* channel, chancoh_channel** out);

/* Selective application; JSON array of { "probability": p, "channel": {...} }
 * with channels in the Choi variant. */
CHANCOH_API chancoh_status chancoh_selective_apply_json(const chancoh_superchannel* superchannel,
                                                        const chancoh_channel* channel,
                                                        char** out_json);

/* --- framework harness --------------------------------------------------- */

/* condition: "C1", "C2", "C3", "B3" or "B4". Report JSON:
 * {"condition","measure","trials","violations","worst_gap","seed"}. */
CHANCOH_API chancoh_status chancoh_run_condition(const char* condition, const char* measure,
                                                 int32_t trials, int32_t dim_in, int32_t dim_out,
                                                 uint64_t seed, const chancoh_solver_options* opts,
                                                 char** report_json);

/* Report JSON: {"ctr_phi1","ctr_phi2","additive_rhs","ctr_mix_upper",
 * "ctr_mix_solved","violated","solver_converged"}. */
CHANCOH_API chancoh_status chancoh_counterexample(const chancoh_solver_options* opts,
                                                  char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* CHANCOH_H */
