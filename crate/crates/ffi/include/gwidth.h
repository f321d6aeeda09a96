/* C interface to the gwidth library: certified Gromov-width bounds and symplectic ball embeddings. Generated by cbindgen; do not edit by hand. */

#ifndef GWIDTH_H
#define GWIDTH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible entry point.
 */
typedef enum GwidthStatus {
  /**
   * Success; out-parameters are valid.
   */
  GWIDTH_STATUS_OK = 0,
  /**
   * An argument failed validation: bad (k, n), an unboxed or malformed
   * partition, an unknown form name, a negative flow time, an invalid
   * polytope, or a null pointer.
   */
  GWIDTH_STATUS_INVALID_ARGUMENT = 1,
  /**
   * A point lay outside the embedding's admissible domain.
   */
  GWIDTH_STATUS_DOMAIN = 2,
  /**
   * The computation produced a non-finite value or could not draw the
   * requested samples.
   */
  GWIDTH_STATUS_NUMERIC = 3,
  /**
   * A string argument was not valid UTF-8.
   */
  GWIDTH_STATUS_UTF8 = 4,
  /**
   * A panic was caught at the boundary.
   */
  GWIDTH_STATUS_PANIC = 5,
} GwidthStatus;

/**
 * Symplectic ball embedding built by the Moser flow engine. Opaque;
 * create with [`gwidth_embedding_new`], release with
 * [`gwidth_embedding_free`].
 */
typedef struct GwidthEmbedding GwidthEmbedding;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Toolkit version as a static NUL-terminated string. Do not free.
 */
const char *gwidth_version(void);

/**
 * Message for the most recent failure on the calling thread (empty string
 * if none). Valid until the next failure on this thread. Do not free.
 */
const char *gwidth_last_error(void);

/**
 * Releases a string returned through an out-parameter. Null is a no-op.
 *
 * # Safety
 * `s` must be a pointer previously returned by this library through a
 * string out-parameter, or null, and must not be used afterwards.
 */
void gwidth_string_free(char *s);

/**
 * Certified lower and upper Gromov-width bounds for Gr(k,n), as the
 * certificate JSON document (bounds, fixed-point weights, and the checked
 * hypotheses). Requires 0 < k < n <= 8.
 *
 * # Safety
 * `out_json` must be a valid pointer to writable storage for one pointer.
 */
enum GwidthStatus gwidth_width_certificate_json(uint32_t k, uint32_t n, char **out_json);

/**
 * Genus-zero three-point Gromov-Witten invariant of Gr(k,n) at degree `d`,
 * as a JSON document with the invariant (a decimal string) and the
 * degree-condition weight counts. Partitions are part arrays with
 * `len = 0` meaning the empty partition; classes must fit the k x (n-k)
 * box.
 *
 * # Safety
 * Partition pointers must each address `len` readable u32 values when the
 * corresponding `len > 0`; `out_json` must be valid writable storage for
 * one pointer.
 */
enum GwidthStatus gwidth_gw_invariant_json(uint32_t k,
                                           uint32_t n,
                                           const uint32_t *a,
                                           size_t a_len,
                                           const uint32_t *b,
                                           size_t b_len,
                                           const uint32_t *c,
                                           size_t c_len,
                                           uint64_t d,
                                           char **out_json);

/**
 * Quantum product expansion sigma_a * sigma_b in QH*(Gr(k,n)), as a JSON
 * term dump ordered by (degree, partition).
 *
 * # Safety
 * Same contract as [`gwidth_gw_invariant_json`] for the partition and out
 * pointers.
 */
enum GwidthStatus gwidth_quantum_product_json(uint32_t k,
                                              uint32_t n,
                                              const uint32_t *a,
                                              size_t a_len,
                                              const uint32_t *b,
                                              size_t b_len,
                                              char **out_json);

/**
 * Validates a Delzant polytope and reports per-vertex capacities and the
 * packing lower bound. `polytope_json` is the same document the CLI reads:
 * `{"dim": d, "facets": [{"normal": [...], "offset": "p/q"}]}`. A polytope
 * failing validation is an invalid argument; the violation (naming the
 * offending vertex) is available from [`gwidth_last_error`].
 *
 * # Safety
 * `polytope_json` must be a NUL-terminated string; `out_json` must be
 * valid writable storage for one pointer.
 */
enum GwidthStatus gwidth_toric_bounds_json(const char *polytope_json, char **out_json);

/**
 * Runs the full invariant suite. Writes whether every check passed and the
 * complete report document (command, inputs, results, named checks,
 * version). The status is OK whenever the suite ran, even with failing
 * checks; consult `out_all_pass`.
 *
 * # Safety
 * `out_all_pass` and `out_json` must be valid writable storage for one
 * bool and one pointer respectively.
 */
enum GwidthStatus gwidth_selftest_json(uint64_t seed,
                                       double tolerance,
                                       bool *out_all_pass,
                                       char **out_json);

/**
 * Builds the embedding for a named chart form at flow horizon `t_final`
 * (nonnegative). Form names are the CLI's: "standard[:m]", "cp1",
 * "radial:gauss[:amp]", "radial:bump[:amp[:lo:hi]]",
 * "annulus[:amp[:lo:hi]]". The form's contract is spot-checked; a form
 * failing it is an invalid argument.
 *
 * # Safety
 * `form_name` must be a NUL-terminated string; `out_embedding` must be
 * valid writable storage for one pointer.
 */
enum GwidthStatus gwidth_embedding_new(const char *form_name,
                                       double t_final,
                                       struct GwidthEmbedding **out_embedding);

/**
 * Real dimension of the embedding's chart (the length expected by
 * evaluate). Zero for a null handle.
 *
 * # Safety
 * `embedding` must be null or a live handle from
 * [`gwidth_embedding_new`].
 */
size_t gwidth_embedding_dim(const struct GwidthEmbedding *embedding);

/**
 * Evaluates the embedding at a chart point. `point` and `out_point` are
 * arrays of length `len`, which must equal the embedding dimension. Points
 * outside the admissible sublevel set of the moment map yield
 * `GWIDTH_STATUS_DOMAIN`.
 *
 * # Safety
 * `embedding` must be a live handle; `point` must address `len` readable
 * doubles and `out_point` `len` writable doubles.
 */
enum GwidthStatus gwidth_embedding_evaluate(const struct GwidthEmbedding *embedding,
                                            const double *point,
                                            size_t len,
                                            double *out_point);

/**
 * Draws `samples` seeded points from the admissible region and writes the
 * worst pullback residual of the embedding over them (the verification the
 * CLI's moser subcommand runs).
 *
 * # Safety
 * `embedding` must be a live handle; `out_residual` must be valid
 * writable storage for one double.
 */
enum GwidthStatus gwidth_embedding_residual(const struct GwidthEmbedding *embedding,
                                            uint64_t seed,
                                            size_t samples,
                                            double *out_residual);

/**
 * Releases an embedding handle. Null is a no-op.
 *
 * # Safety
 * `embedding` must be null or a live handle from
 * [`gwidth_embedding_new`], and must not be used afterwards.
 */
void gwidth_embedding_free(struct GwidthEmbedding *embedding);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GWIDTH_H */
