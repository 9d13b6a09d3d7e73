/* epiconf: confidence-distribution inference, coverage experiments, relevant-
 * subset scans, and the betting-market simulator behind one C surface.
 *
 * Usage: create a session, fill it with the same key=value options the CLI
 * takes (keys are flag names without the leading dashes), then run a named
 * experiment and read the summary and CSV artifacts back.
 */
#ifndef EPICONF_H
#define EPICONF_H

#include <stddef.h>

#if defined(EPC_BUILDING_SHARED)
#define EPC_API __attribute__((visibility("default")))
#else
#define EPC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Library version, "major.minor.patch". */
EPC_API const char* epc_version(void);

/* Opaque experiment session: one key=value configuration plus the outputs of
 * the most recent run. Sessions are independent; a single session is not
 * thread-safe. */
typedef struct epc_session epc_session;

/* Returns a fresh session, or NULL on allocation failure. */
EPC_API epc_session* epc_session_new(void);
EPC_API void epc_session_free(epc_session* s);

/* Sets one configuration key (e.g. "model", "theta", "seed", "tol-mc-se-mult").
 * Later values override earlier ones. Returns 0; 1 if any argument is NULL. */
EPC_API int epc_session_set(epc_session* s, const char* key, const char* value);

/* Merges a key = value config text ('#' starts a comment). Returns 0, or 1 on
 * a parse error (then epc_error_message describes the offending line). */
EPC_API int epc_session_load(epc_session* s, const char* text);

/* Removes every configuration key. */
EPC_API void epc_session_clear(epc_session* s);

/* The available experiment names ("example1", "coverage", "scan", "accept",
 * "accept1" ... "accept10", ...), a fixed list in sorted-then-appended order. */
EPC_API size_t epc_experiment_count(void);
EPC_API const char* epc_experiment_name(size_t index);

/* Runs one experiment against the session's configuration. Returns the exit
 * status: 0 success, 1 configuration error, 2 acceptance assertion failure.
 * Strings returned by the accessors below remain valid until the next
 * epc_run/epc_session_load/epc_session_free on this session. */
EPC_API int epc_run(epc_session* s, const char* experiment);

/* Human-readable summary of the last run ("" before any run). */
EPC_API const char* epc_summary(const epc_session* s);

/* Message of the last failure ("" when the last call succeeded). */
EPC_API const char* epc_error_message(const epc_session* s);

/* CSV artifacts produced by the last run, e.g. ("coverage.csv", "# schema=1
 * ..."). Out-of-range indices return NULL. */
EPC_API size_t epc_output_count(const epc_session* s);
EPC_API const char* epc_output_name(const epc_session* s, size_t index);
EPC_API const char* epc_output_content(const epc_session* s, size_t index);

/* Special-function evaluator: "log_gamma", "digamma", "trigamma",
 * "reg_inc_beta", "beta_pdf", "reg_inc_gamma_p", "normal_pdf", "normal_cdf",
 * "normal_quantile", "chisq_cdf", "noncentral_chisq_cdf". Writes the value to
 * *out and returns 0; returns 1 (NaN written) on an unknown name, a wrong
 * argument count, or a domain error. */
EPC_API int epc_special(const char* name, const double* args, size_t nargs,
                        double* out);

#ifdef __cplusplus
}
#endif

#endif /* EPICONF_H */
