/*
 * rwconv C API.
 *
 * Region-wise multi-channel Winograd / Cook-Toom convolution over NHWC fp32
 * tensors, the im2row + GEMM baseline, a direct-convolution oracle and the
 * benchmark harness, exposed through opaque handles and status codes.
 *
 * Every function returning rwconv_status leaves its out-parameters untouched
 * on failure; rwconv_last_error() then describes the failure for the calling
 * thread. Handles are released with the matching *_destroy function, which
 * accepts NULL.
 */
#ifndef RWCONV_H
#define RWCONV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RWCONV_BUILDING_LIBRARY)
#    define RWCONV_API __declspec(dllexport)
#  else
#    define RWCONV_API __declspec(dllimport)
#  endif
#else
#  define RWCONV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rwconv_status {
  RWCONV_OK = 0,
  RWCONV_ERR_SIZE = 1,         /* buffer length or operand dims disagree */
  RWCONV_ERR_SHAPE = 2,        /* convolution geometry has no output */
  RWCONV_ERR_ARITY = 3,        /* wrong number of interpolation points */
  RWCONV_ERR_CONSTRUCTION = 4, /* transform set cannot be built */
  RWCONV_ERR_UNSUPPORTED = 5,  /* variant not applicable (e.g. stride != 1) */
  RWCONV_ERR_INPUT = 6,        /* malformed layer table, unknown name, bad option */
  RWCONV_ERR_IO = 7,
  RWCONV_ERR_INVALID_ARGUMENT = 8, /* NULL handle or out-pointer, index out of range */
  RWCONV_ERR_INTERNAL = 9
} rwconv_status;

typedef enum rwconv_layout { RWCONV_NHWC = 0, RWCONV_NCHW = 1 } rwconv_layout;

typedef enum rwconv_matrix_kind {
  RWCONV_MATRIX_AT = 0, /* m x t output transform */
  RWCONV_MATRIX_G = 1,  /* t x r weight transform */
  RWCONV_MATRIX_BT = 2  /* t x t input transform */
} rwconv_matrix_kind;

typedef enum rwconv_batch_role {
  RWCONV_BATCH_A = 0, /* transformed input,   R x C */
  RWCONV_BATCH_B = 1, /* transformed weights, C x M */
  RWCONV_BATCH_C = 2  /* GEMM results,        R x M */
} rwconv_batch_role;

typedef enum rwconv_report_format { RWCONV_REPORT_CSV = 0, RWCONV_REPORT_MARKDOWN = 1 } rwconv_report_format;

typedef struct rwconv_tensor rwconv_tensor;
typedef struct rwconv_transform rwconv_transform;
typedef struct rwconv_plan rwconv_plan;
typedef struct rwconv_tile_batch rwconv_tile_batch;
typedef struct rwconv_layer_table rwconv_layer_table;
typedef struct rwconv_bench_result rwconv_bench_result;

#define RWCONV_NAME_MAX 96
#define RWCONV_VARIANT_MAX 16

/* One convolution layer. Names longer than RWCONV_NAME_MAX - 1 are truncated. */
typedef struct rwconv_layer {
  char name[RWCONV_NAME_MAX];
  int32_t in_h, in_w, in_c;
  int32_t out_m;
  int32_t k_h, k_w;
  int32_t pad_t, pad_b, pad_l, pad_r;
  int32_t stride;
} rwconv_layer;

typedef struct rwconv_plan_info {
  int32_t m_h, m_w;         /* output tile */
  int32_t t_h, t_w;         /* input tile = output tile + kernel - 1 */
  int32_t out_h, out_w;
  int32_t tiles_h, tiles_w;
  uint32_t batch;
  uint64_t regions;         /* R = batch * tiles_h * tiles_w */
  uint64_t tile_area;       /* number of GEMMs = t_h * t_w */
  uint64_t macs;            /* tile_area * R * C * M */
} rwconv_plan_info;

typedef struct rwconv_bench_options {
  int32_t reps;    /* >= 1 */
  int32_t check;   /* nonzero: compare every output with the direct oracle */
  int32_t threads; /* >= 1 */
  int32_t scale;   /* channel divisor, >= 1 */
  uint64_t seed;
} rwconv_bench_options;

typedef struct rwconv_bench_record {
  char layer[RWCONV_NAME_MAX];
  char variant[RWCONV_VARIANT_MAX];
  int32_t skipped;
  char skip_reason[64];
  uint64_t t_in_ns, t_gemm_ns, t_out_ns, t_total_ns;
  uint64_t macs;
  int32_t has_error; /* max_rel_err valid */
  double max_rel_err;
  double tolerance;
  double speedup;
} rwconv_bench_record;

/* ---- errors ------------------------------------------------------------ */

RWCONV_API const char* rwconv_status_string(rwconv_status status);
/* Message for the most recent failure on this thread ("" if none). */
RWCONV_API const char* rwconv_last_error(void);
RWCONV_API const char* rwconv_version(void);

/* ---- tensors ----------------------------------------------------------- */

/* dims are logical (n, h, w, c); data holds count values in `layout` order. */
RWCONV_API rwconv_status rwconv_tensor_create(const uint32_t dims[4], rwconv_layout layout,
                                              const float* data, size_t count, rwconv_tensor** out);
RWCONV_API rwconv_status rwconv_tensor_create_filled(const uint32_t dims[4], rwconv_layout layout,
                                                     float value, rwconv_tensor** out);
RWCONV_API void rwconv_tensor_destroy(rwconv_tensor* t);
RWCONV_API rwconv_status rwconv_tensor_dims(const rwconv_tensor* t, uint32_t dims[4]);
RWCONV_API rwconv_layout rwconv_tensor_layout(const rwconv_tensor* t);
RWCONV_API size_t rwconv_tensor_count(const rwconv_tensor* t);
/* Borrowed pointer, valid until the tensor is destroyed. */
RWCONV_API const float* rwconv_tensor_data(const rwconv_tensor* t);
RWCONV_API rwconv_status rwconv_tensor_convert(const rwconv_tensor* t, rwconv_layout target,
                                               rwconv_tensor** out);
RWCONV_API rwconv_status rwconv_tensor_load(const char* path, rwconv_tensor** out);
RWCONV_API rwconv_status rwconv_tensor_save(const rwconv_tensor* t, const char* path);
/* Zero-filled rh x rw x c block (NHWC) at (row0, col0) of image n. */
RWCONV_API rwconv_status rwconv_extract_region(const rwconv_tensor* t, uint32_t n, int64_t row0,
                                               int64_t col0, uint32_t rh, uint32_t rw, float* out,
                                               size_t count);
RWCONV_API rwconv_status rwconv_conv_output_shape(const rwconv_layer* layer, int32_t* out_h,
                                                  int32_t* out_w);

/* ---- Cook-Toom transforms ---------------------------------------------- */

/* points are npoints = m + r - 2 rationals num[i] / den[i]. */
RWCONV_API rwconv_status rwconv_transform_generate(int32_t m, int32_t r, const int64_t* num,
                                                   const int64_t* den, size_t npoints,
                                                   int32_t allow_large_tiles, rwconv_transform** out);
/* Points 0, 1, -1, 2, -2, ... */
RWCONV_API rwconv_status rwconv_transform_default(int32_t m, int32_t r, int32_t allow_large_tiles,
                                                  rwconv_transform** out);
RWCONV_API void rwconv_transform_destroy(rwconv_transform* ts);
RWCONV_API rwconv_status rwconv_transform_dims(const rwconv_transform* ts, int32_t* m, int32_t* r,
                                               int32_t* t);
RWCONV_API rwconv_status rwconv_transform_entry(const rwconv_transform* ts, rwconv_matrix_kind kind,
                                                uint32_t row, uint32_t col, int64_t* num,
                                                int64_t* den);
/* Row-major fp32 copy; count must equal rows * cols of the matrix. */
RWCONV_API rwconv_status rwconv_transform_matrix_f32(const rwconv_transform* ts,
                                                     rwconv_matrix_kind kind, float* out,
                                                     size_t count);
/* Exact check over all basis pairs; *passed is 1 on success. */
RWCONV_API rwconv_status rwconv_transform_verify(const rwconv_transform* ts, int32_t* passed,
                                                 size_t* failures);
/* Writes the text dump (NUL-terminated) if capacity allows; *needed excludes the NUL. */
RWCONV_API rwconv_status rwconv_transform_dump(const rwconv_transform* ts, char* buffer,
                                               size_t capacity, size_t* needed);

/* ---- GEMM -------------------------------------------------------------- */

/* Row-major c[p x s] = a[p x q] * b[q x s] (+ c if accumulate). macs may be NULL. */
RWCONV_API rwconv_status rwconv_gemm(const float* a, const float* b, float* c, size_t p, size_t q,
                                     size_t s, int32_t accumulate, uint64_t* macs);

/* ---- Winograd engine --------------------------------------------------- */

RWCONV_API rwconv_status rwconv_plan_create(const rwconv_layer* layer, int32_t m_h, int32_t m_w,
                                            uint32_t batch, rwconv_plan** out);
RWCONV_API void rwconv_plan_destroy(rwconv_plan* plan);
RWCONV_API rwconv_status rwconv_plan_get_info(const rwconv_plan* plan, rwconv_plan_info* info);

/* weights: tensor with dims (k_h, k_w, C, M), NHWC tag (HWIO order). */
RWCONV_API rwconv_status rwconv_transform_weights(const rwconv_plan* plan,
                                                  const rwconv_tensor* weights,
                                                  rwconv_tile_batch** out);
RWCONV_API rwconv_status rwconv_transform_input(const rwconv_plan* plan, const rwconv_tensor* input,
                                                int32_t threads, rwconv_tile_batch** out);
RWCONV_API rwconv_status rwconv_batched_gemm(const rwconv_tile_batch* a, const rwconv_tile_batch* b,
                                             int32_t threads, uint64_t* macs,
                                             rwconv_tile_batch** out);
RWCONV_API rwconv_status rwconv_transform_output(const rwconv_plan* plan,
                                                 const rwconv_tile_batch* c, int32_t threads,
                                                 rwconv_tensor** out);
/* All three stages with pre-transformed weights. macs may be NULL. */
RWCONV_API rwconv_status rwconv_convolve(const rwconv_plan* plan, const rwconv_tensor* input,
                                         const rwconv_tile_batch* weights, int32_t threads,
                                         uint64_t* macs, rwconv_tensor** out);
RWCONV_API void rwconv_batch_destroy(rwconv_tile_batch* batch);
RWCONV_API rwconv_status rwconv_batch_shape(const rwconv_tile_batch* batch, size_t* count,
                                            size_t* rows, size_t* cols, rwconv_batch_role* role);
/* count * rows * cols values, matrix after matrix, each row-major. */
RWCONV_API const float* rwconv_batch_data(const rwconv_tile_batch* batch);

/* ---- reference paths --------------------------------------------------- */

RWCONV_API rwconv_status rwconv_direct_conv(const rwconv_layer* layer, const rwconv_tensor* input,
                                            const rwconv_tensor* weights, rwconv_tensor** out);
/* With out == NULL only *rows / *cols are reported. */
RWCONV_API rwconv_status rwconv_im2row(const rwconv_layer* layer, const rwconv_tensor* input,
                                       float* out, size_t count, size_t* rows, size_t* cols);
RWCONV_API rwconv_status rwconv_im2row_conv(const rwconv_layer* layer, const rwconv_tensor* input,
                                            const rwconv_tensor* weights, uint64_t* macs,
                                            rwconv_tensor** out);
/* max |candidate - reference| / max(1, max |reference|) */
RWCONV_API rwconv_status rwconv_max_relative_error(const rwconv_tensor* candidate,
                                                   const rwconv_tensor* reference, double* out);

/* ---- benchmark harness ------------------------------------------------- */

RWCONV_API rwconv_status rwconv_layer_table_builtin(const char* network, rwconv_layer_table** out);
RWCONV_API rwconv_status rwconv_layer_table_load(const char* path, rwconv_layer_table** out);
RWCONV_API rwconv_status rwconv_layer_table_parse(const char* csv_text, rwconv_layer_table** out);
RWCONV_API void rwconv_layer_table_destroy(rwconv_layer_table* table);
RWCONV_API size_t rwconv_layer_table_size(const rwconv_layer_table* table);
RWCONV_API rwconv_status rwconv_layer_table_get(const rwconv_layer_table* table, size_t index,
                                                rwconv_layer* out);
RWCONV_API int32_t rwconv_layer_is_winograd_eligible(const rwconv_layer* layer);

RWCONV_API void rwconv_bench_options_default(rwconv_bench_options* options);
/* variants may be NULL / empty: every applicable Winograd variant per layer. */
RWCONV_API rwconv_status rwconv_bench_run(const rwconv_layer_table* table,
                                          const char* const* variants, size_t nvariants,
                                          const rwconv_bench_options* options,
                                          rwconv_bench_result** out);
RWCONV_API void rwconv_bench_result_destroy(rwconv_bench_result* result);
RWCONV_API size_t rwconv_bench_result_size(const rwconv_bench_result* result);
RWCONV_API rwconv_status rwconv_bench_result_get(const rwconv_bench_result* result, size_t index,
                                                 rwconv_bench_record* out);
RWCONV_API size_t rwconv_bench_result_violations(const rwconv_bench_result* result);
/* *text is heap-allocated; release with rwconv_string_free. network may be NULL. */
RWCONV_API rwconv_status rwconv_report_emit(const rwconv_bench_result* result,
                                            rwconv_report_format format, const char* network,
                                            char** text);
RWCONV_API void rwconv_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* RWCONV_H */
