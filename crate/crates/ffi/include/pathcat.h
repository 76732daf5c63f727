#ifndef PATHCAT_H
#define PATHCAT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PathcatStatus {
  PATHCAT_STATUS_OK = 0,
  PATHCAT_STATUS_NULL_POINTER = 1,
  PATHCAT_STATUS_INVALID_UTF8 = 2,
  PATHCAT_STATUS_INVALID_INPUT = 3,
  PATHCAT_STATUS_OUT_OF_RANGE = 4,
  PATHCAT_STATUS_BUFFER_TOO_SMALL = 5,
  PATHCAT_STATUS_PANIC = 6,
} PathcatStatus;

// A finite category.
typedef struct PathcatCategory PathcatCategory;

// A truncated path 2-category.
typedef struct PathcatPathCategory PathcatPathCategory;

// The outcome of one command-line invocation.
typedef struct PathcatReport PathcatReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread into `buf`.
//
// # Safety
// `buf` must be null or valid for `cap` bytes; `needed` must be null or valid.
enum PathcatStatus pathcat_last_error(char *buf, size_t cap, size_t *needed);

// The interval category `0 -> 1 -> ... -> n`.
//
// # Safety
// `out` must be valid for writes.
enum PathcatStatus pathcat_category_interval(size_t n, struct PathcatCategory **out);

// The coarse category on `len` distinct object names.
//
// # Safety
// `names` must point to `len` NUL-terminated strings; `out` must be valid.
enum PathcatStatus pathcat_category_coarse(const char *const *names,
                                           size_t len,
                                           struct PathcatCategory **out);

// # Safety
// `cat` and `out` must be valid.
enum PathcatStatus pathcat_category_object_count(const struct PathcatCategory *cat, size_t *out);

// # Safety
// `cat` and `out` must be valid.
enum PathcatStatus pathcat_category_arrow_count(const struct PathcatCategory *cat, size_t *out);

// # Safety
// `cat` must be null or a handle not yet freed.
void pathcat_category_free(struct PathcatCategory *cat);

// Builds the path 2-category of `cat` truncated at chain length `truncation`.
//
// # Safety
// `cat` and `out` must be valid.
enum PathcatStatus pathcat_path_category_build(const struct PathcatCategory *cat,
                                               size_t truncation,
                                               struct PathcatPathCategory **out);

// Total number of chains over all hom-categories.
//
// # Safety
// `p` and `out` must be valid.
enum PathcatStatus pathcat_path_category_chain_count(const struct PathcatPathCategory *p,
                                                     size_t *out);

// Total number of related chain pairs over all hom-categories.
//
// # Safety
// `p` and `out` must be valid.
enum PathcatStatus pathcat_path_category_relation_count(const struct PathcatPathCategory *p,
                                                        size_t *out);

// Number of chains from object `a` to object `b`.
//
// # Safety
// `p` and `out` must be valid.
enum PathcatStatus pathcat_path_category_hom_size(const struct PathcatPathCategory *p,
                                                  size_t a,
                                                  size_t b,
                                                  size_t *out);

// # Safety
// `p` must be null or a handle not yet freed.
void pathcat_path_category_free(struct PathcatPathCategory *p);

// Number of nondecreasing maps from the ordinal `{0..m-1}` to `{0..n-1}`.
//
// # Safety
// `out` must be valid.
enum PathcatStatus pathcat_delta_hom_count(size_t m, size_t n, size_t *out);

// Runs the command line `argv[0..argc]`, program name first.
//
// A report is produced for verification failures and input errors alike;
// inspect it with [`pathcat_report_exit_code`].
//
// # Safety
// `argv` must point to `argc` NUL-terminated strings; `out` must be valid.
enum PathcatStatus pathcat_run(int argc, const char *const *argv, struct PathcatReport **out);

// 0 pass, 1 verification failure, 2 input error.
//
// # Safety
// `r` and `out` must be valid.
enum PathcatStatus pathcat_report_exit_code(const struct PathcatReport *r, int *out);

// Copies the standard output text of a run.
//
// # Safety
// `r` must be valid; `buf` null or valid for `cap` bytes; `needed` null or valid.
enum PathcatStatus pathcat_report_stdout(const struct PathcatReport *r,
                                         char *buf,
                                         size_t cap,
                                         size_t *needed);

// Copies the standard error text of a run.
//
// # Safety
// `r` must be valid; `buf` null or valid for `cap` bytes; `needed` null or valid.
enum PathcatStatus pathcat_report_stderr(const struct PathcatReport *r,
                                         char *buf,
                                         size_t cap,
                                         size_t *needed);

// # Safety
// `r` must be null or a handle not yet freed.
void pathcat_report_free(struct PathcatReport *r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PATHCAT_H */
