#ifndef TWISTFUSE_H
#define TWISTFUSE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result of every call.
 */
typedef enum TfStatus {
  TF_STATUS_OK = 0,
  TF_STATUS_NULL_POINTER = 1,
  TF_STATUS_INVALID_UTF8 = 2,
  TF_STATUS_BAD_INPUT = 3,
  TF_STATUS_CHECK_FAILED = 4,
  TF_STATUS_OUT_OF_RANGE = 5,
  TF_STATUS_PANIC = 6,
} TfStatus;

typedef struct TfDatum TfDatum;

typedef struct TfFusion TfFusion;

typedef struct TfMatrix TfMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failing call on this thread, or null. Valid until the next call.
 */
const char *tf_last_error_message(void);

/*
 # Safety
 `s` must come from this library or be null.
 */
void tf_string_free(char *s);

/*
 Cartan datum for a type such as `A3`, `A3^(1)`, `D4^(3)`.

 # Safety
 `type_name` must be a valid C string; `out` must be writable.
 */
enum TfStatus tf_datum_new(const char *type_name, struct TfDatum **out);

/*
 # Safety
 `d` must come from `tf_datum_new` or be null.
 */
void tf_datum_free(struct TfDatum *d);

/*
 Finite rank `l`.

 # Safety
 `d` must be a live handle; `out` writable.
 */
enum TfStatus tf_datum_rank(const struct TfDatum *d, uintptr_t *out);

/*
 Dual Coxeter number; zero for finite types.

 # Safety
 `d` must be a live handle; `out` writable.
 */
enum TfStatus tf_datum_hdual(const struct TfDatum *d, int64_t *out);

/*
 # Safety
 `d` must be a live handle; `out` writable.
 */
enum TfStatus tf_datum_json(const struct TfDatum *d, char **out);

/*
 Untwisted S-matrix at level `k`. `precision_bits` 0 means double precision.

 # Safety
 `type_name` a valid C string; `out` writable.
 */
enum TfStatus tf_smatrix_new(const char *type_name,
                             int64_t level,
                             uint32_t precision_bits,
                             struct TfMatrix **out);

/*
 Twisted-sector S-matrix for `twist` = `"diagram"` or `"triality"`.

 # Safety
 Valid C strings; `out` writable.
 */
enum TfStatus tf_twisted_smatrix_new(const char *type_name,
                                     const char *twist,
                                     int64_t level,
                                     uint32_t precision_bits,
                                     struct TfMatrix **out);

/*
 # Safety
 `m` from a `*_smatrix_new` call or null.
 */
void tf_matrix_free(struct TfMatrix *m);

/*
 # Safety
 `m` live; `rows`, `cols` writable.
 */
enum TfStatus tf_matrix_shape(const struct TfMatrix *m, uintptr_t *rows, uintptr_t *cols);

/*
 # Safety
 `m` live; `re`, `im` writable.
 */
enum TfStatus tf_matrix_entry(const struct TfMatrix *m,
                              uintptr_t row,
                              uintptr_t col,
                              double *re,
                              double *im);

/*
 # Safety
 `m` live; `out` writable.
 */
enum TfStatus tf_matrix_unitarity_residual(const struct TfMatrix *m, double *out);

/*
 # Safety
 `m` live; `out` writable.
 */
enum TfStatus tf_matrix_json(const struct TfMatrix *m, char **out);

/*
 Fusion engine for an untwisted algebra, level and twist (`"none"`, `"diagram"`, `"triality"`).

 # Safety
 Valid C strings; `out` writable.
 */
enum TfStatus tf_fusion_new(const char *type_name,
                            const char *twist,
                            int64_t level,
                            struct TfFusion **out);

/*
 # Safety
 `e` from `tf_fusion_new` or null.
 */
void tf_fusion_free(struct TfFusion *e);

/*
 One coefficient for a pattern such as `"1,s,s"`, checked by both methods where available.

 # Safety
 `e` live; weight pointers valid for their lengths; `out` writable.
 */
enum TfStatus tf_fusion_coefficient(const struct TfFusion *e,
                                    const char *pattern,
                                    const int64_t *w1,
                                    uintptr_t len1,
                                    const int64_t *w2,
                                    uintptr_t len2,
                                    const int64_t *w3,
                                    uintptr_t len3,
                                    int64_t *out);

/*
 Whole table for a pattern, as JSON.

 # Safety
 `e` live; `pattern` valid; `out` writable.
 */
enum TfStatus tf_fusion_table_json(const struct TfFusion *e, const char *pattern, char **out);

/*
 Library version as a static string.
 */
const char *tf_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TWISTFUSE_H */
