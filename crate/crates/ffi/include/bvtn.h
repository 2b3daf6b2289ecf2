#ifndef BVTN_H
#define BVTN_H

#include <stddef.h>
#include <stdint.h>

typedef enum BvtnStatus {
  BVTN_STATUS_OK = 0,
  BVTN_STATUS_NULL_POINTER = 1,
  BVTN_STATUS_BUFFER_TOO_SMALL = 2,
  BVTN_STATUS_EMPTY = 3,
  BVTN_STATUS_NON_MONOTONIC = 4,
  BVTN_STATUS_OUT_OF_RANGE = 5,
  BVTN_STATUS_DEGREE_EXCEEDS_ROWS = 6,
  BVTN_STATUS_UNDERFLOW_DETECTED = 7,
  BVTN_STATUS_DIMENSION_MISMATCH = 8,
  BVTN_STATUS_NOT_SQUARE = 9,
  BVTN_STATUS_NOT_OVERDETERMINED = 10,
  BVTN_STATUS_PRECISION_EXHAUSTED = 11,
  BVTN_STATUS_NO_CONVERGENCE = 12,
  BVTN_STATUS_INVALID_POLICY = 13,
  BVTN_STATUS_INTERNAL = 14,
} BvtnStatus;

/*
 Opaque handle to a decomposition, created by `bvtn_bd_new`.
 */
typedef struct BvtnBd BvtnBd;

/*
 Working-precision schedule; see `bvtn_policy_default`.
 */
typedef struct BvtnPolicy {
  uint32_t start_bits;
  uint32_t max_bits;
  double stabilization_rtol;
} BvtnPolicy;

/*
 The default schedule: 106 bits doubling up to 1024, relative tolerance 1e-15.
 */
struct BvtnPolicy bvtn_policy_default(void);

/*
 Message for the last failed call on this thread, or an empty string.
 Valid until the next failing call on the same thread.
 */
const char *bvtn_last_error_message(void);

/*
 Computes the decomposition for `len` strictly increasing nodes in (0, 1)
 and basis degree `degree <= len - 1`. On success `*out` receives a handle
 to release with `bvtn_bd_free`.
 */
enum BvtnStatus bvtn_bd_new(const double *nodes, size_t len, size_t degree, struct BvtnBd **out);

/*
 Wraps a packed `rows x cols` array (as returned by `bvtn_bd_entries`).
 Every entry must be positive and finite.
 */
enum BvtnStatus bvtn_bd_from_entries(const double *entries,
                                     size_t rows,
                                     size_t cols,
                                     struct BvtnBd **out);

/*
 Releases a handle. Null is ignored.
 */
void bvtn_bd_free(struct BvtnBd *bd);

/*
 Number of nodes, `l + 1`. Zero for a null handle.
 */
size_t bvtn_bd_rows(const struct BvtnBd *bd);

/*
 Number of basis functions, `n + 1`. Zero for a null handle.
 */
size_t bvtn_bd_cols(const struct BvtnBd *bd);

/*
 Copies the packed pivots and multipliers, `rows * cols` doubles.
 */
enum BvtnStatus bvtn_bd_entries(const struct BvtnBd *bd, double *out, size_t len);

/*
 Writes the Bernstein–Vandermonde matrix itself, `rows * cols` doubles.
 */
enum BvtnStatus bvtn_bd_expand(const struct BvtnBd *bd, double *out, size_t len);

/*
 Solves `A x = b` for square `A`; `b` and `x` have `rows` entries.
 */
enum BvtnStatus bvtn_bd_solve(const struct BvtnBd *bd,
                              const double *b,
                              size_t b_len,
                              double *x,
                              size_t x_len);

/*
 Eigenvalues of square `A`, descending, into `out` (`rows` doubles).
 `policy` may be null for the default; `achieved_bits` may be null.
 */
enum BvtnStatus bvtn_bd_eigenvalues(const struct BvtnBd *bd,
                                    const struct BvtnPolicy *policy,
                                    double *out,
                                    size_t len,
                                    uint32_t *achieved_bits);

/*
 Singular values of `A`, descending, into `out` (`cols` doubles).
 */
enum BvtnStatus bvtn_bd_singular_values(const struct BvtnBd *bd,
                                        const struct BvtnPolicy *policy,
                                        double *out,
                                        size_t len,
                                        uint32_t *achieved_bits);

/*
 Least-squares fit `min ‖A c - f‖₂` for `rows > cols`. `f` has `rows`
 entries and `c` receives `cols`. `residual` (`rows` doubles) and
 `residual_norm` may be null.
 */
enum BvtnStatus bvtn_bd_least_squares(const struct BvtnBd *bd,
                                      const struct BvtnPolicy *policy,
                                      const double *f,
                                      size_t f_len,
                                      double *c,
                                      size_t c_len,
                                      double *residual,
                                      size_t residual_len,
                                      double *residual_norm);

#endif /* BVTN_H */
