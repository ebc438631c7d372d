#ifndef WCK_H
#define WCK_H

#include <stddef.h>
#include <stdint.h>

#if defined(WCK_BUILDING_LIBRARY)
#define WCK_API __attribute__((visibility("default")))
#else
#define WCK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum wck_status {
  WCK_OK = 0,
  WCK_ERR_ARG = 1,       /* null pointer or malformed argument */
  WCK_ERR_PARSE = 2,     /* operator or polynomial text */
  WCK_ERR_KERNEL = 3,    /* P not real or q vanishes */
  WCK_ERR_TOLERANCE = 4, /* a check ran and exceeded its tolerance */
  WCK_ERR_DOMAIN = 5,    /* value outside the supported range */
  WCK_ERR_IO = 6,
  WCK_ERR_INTERNAL = 7
} wck_status;

typedef struct wck_op wck_op;
typedef struct wck_kernel wck_kernel;
typedef struct wck_grid wck_grid;
typedef struct wck_weight wck_weight;

WCK_API const char* wck_version(void);
/* Message of the last failed call on this thread; never NULL. */
WCK_API const char* wck_last_error(void);
/* Releases strings returned through char** out-parameters. */
WCK_API void wck_string_free(char* s);

/* Operators */
WCK_API wck_status wck_op_parse(const char* text, wck_op** out);
WCK_API wck_status wck_op_from_json(const char* json, wck_op** out);
WCK_API void wck_op_free(wck_op* op);
WCK_API wck_status wck_op_format(const wck_op* op, char** out);
WCK_API wck_status wck_op_to_json(const wck_op* op, char** out);
WCK_API wck_status wck_op_symbol(const wck_op* op, char** out);
WCK_API wck_status wck_op_mul(const wck_op* a, const wck_op* b, wck_op** out);
WCK_API wck_status wck_op_add(const wck_op* a, const wck_op* b, wck_op** out);
WCK_API wck_status wck_op_equal(const wck_op* a, const wck_op* b, int* out);

/* Kernels: P real, q without zeros on R^2. */
WCK_API wck_status wck_kernel_create(const char* P, const char* q, wck_kernel** out);
WCK_API void wck_kernel_free(wck_kernel* k);

/* which: "bar", "tilde" or "pushforward" (kernel ignored, may be NULL). */
WCK_API wck_status wck_transform(const wck_op* op, const wck_kernel* k, const char* which,
                                 wck_op** out);

/* Grids: N x N samples on [-L, L)^2, values interleaved (re, im), row-major. */
WCK_API wck_status wck_grid_create(int N, double L, const double* values, wck_grid** out);
WCK_API wck_status wck_grid_gaussian(int N, double L, wck_grid** out);
WCK_API void wck_grid_free(wck_grid* g);
WCK_API wck_status wck_grid_size(const wck_grid* g, int* N, double* L);
/* Copies 2 N^2 doubles into buf. */
WCK_API wck_status wck_grid_values(const wck_grid* g, double* buf, size_t len);
WCK_API wck_status wck_grid_load(const char* path, wck_grid** out);
WCK_API wck_status wck_grid_save(const wck_grid* g, const char* path);
WCK_API wck_status wck_wig(const wck_grid* w, wck_grid** out);
WCK_API wck_status wck_cohen_q(const wck_grid* w, const wck_kernel* k, wck_grid** out);
WCK_API wck_status wck_apply_op(const wck_op* op, const wck_grid* w, wck_grid** out);

/* Verification. config keys (all optional): suite, N, L, tol, backend
 * ("grid" | "exact" | "both"), P, q, op, seed. *breach is set to 1 when a
 * gating residual exceeds tol; the call still returns WCK_OK. */
WCK_API wck_status wck_verify(const char* config_json, char** report_json, int* breach);

/* Weights: ids as accepted by the registry, e.g. "gevrey:2". */
WCK_API wck_status wck_weight_create(const char* id, wck_weight** out);
WCK_API void wck_weight_free(wck_weight* w);
WCK_API wck_status wck_weight_conjugate(const wck_weight* w, double s, double* out);
WCK_API wck_status wck_weight_conjugate_table(const wck_weight* w, const double* s, size_t n,
                                              char** out);
WCK_API wck_status wck_weight_check(const wck_weight* w, double t_max, int samples, char** out);
/* Runs the randomized lemma suites; *violations receives the total count. */
WCK_API wck_status wck_weight_lemmas(const wck_weight* w, int trials, uint64_t seed, char** out,
                                     int* violations);
/* input: "gaussian", "xgaussian" or "decoy"; backend "exact", "grid" or NULL
 * (input default); format "json" or "csv". */
WCK_API wck_status wck_seminorm(const wck_weight* w, const char* input, int system, double lambda,
                                double mu, int K, const char* backend, const char* format,
                                char** out);

/* Gallery. args keys (optional): b, P, Q, R, alpha ([re, im] or text), m. */
WCK_API wck_status wck_gallery_names(char** out);
WCK_API wck_status wck_gallery_show(const char* name, const char* args_json, char** out);
WCK_API wck_status wck_gallery_op(const char* name, const char* args_json, wck_op** out);
/* params keys (optional): m_prime, rho, B, radii, random_directions,
 * derivative_order, seed. *witness is set to 1 when a violation was found. */
WCK_API wck_status wck_hypo_check(const wck_op* op, const char* params_json, char** out,
                                  int* witness);
WCK_API wck_status wck_twisted_green(double r, double* out);
WCK_API wck_status wck_green_bound(double c, double s, double r_min, double r_max, char** out);
WCK_API wck_status wck_twisted_solve(const wck_grid* f, wck_grid** out);
WCK_API wck_status wck_twisted_solve_gaussian(int N, double L, char** out, double* residual);

#ifdef __cplusplus
}
#endif

#endif
