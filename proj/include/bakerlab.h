/* bakerlab shared-library C API.
 *
 * Opaque-handle interface over the experiment engine. All strings returned
 * through char** out-parameters are owned by the caller and must be released
 * with bakerlab_string_free(); strings returned as const char* stay owned by
 * the handle they came from.
 *
 * Status codes mirror the CLI exit codes.
 */
#ifndef BAKERLAB_H
#define BAKERLAB_H

#ifdef __cplusplus
extern "C" {
#endif

#define BAKERLAB_OK 0
#define BAKERLAB_ERR_CONFIG 2
#define BAKERLAB_ERR_COMPUTE 3

typedef struct bakerlab_experiment bakerlab_experiment;

const char* bakerlab_version(void);

/* Thread-local message for the most recent failing call. */
const char* bakerlab_last_error(void);

/* Parses and validates a JSON experiment config. Returns BAKERLAB_OK and a
 * handle, or BAKERLAB_ERR_CONFIG with *out set to NULL. */
int bakerlab_experiment_create(const char* config_json, bakerlab_experiment** out);

/* Runs the experiment. threads <= 0 picks the BAKERLAB_THREADS environment
 * value or the hardware concurrency. */
int bakerlab_experiment_run(bakerlab_experiment* exp, int threads);

/* JSON report of the finished run (NULL before a successful run). */
const char* bakerlab_experiment_report(const bakerlab_experiment* exp);

/* CSV artifacts produced by the run. */
int bakerlab_experiment_csv_count(const bakerlab_experiment* exp);
const char* bakerlab_experiment_csv_name(const bakerlab_experiment* exp, int index);
const char* bakerlab_experiment_csv_data(const bakerlab_experiment* exp, int index);

void bakerlab_experiment_destroy(bakerlab_experiment* exp);

/* Text catalog of the registered maps. Caller frees. */
int bakerlab_maps_catalog(char** out);

/* Runs the acceptance suite; *report_out gets one line per criterion.
 * Returns BAKERLAB_OK when every criterion passed, BAKERLAB_ERR_COMPUTE
 * otherwise. Caller frees *report_out. */
int bakerlab_selftest(int threads, char** report_out);

void bakerlab_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* BAKERLAB_H */
