/* C interface to the spamri reconstruction library.
 *
 * Every object is an opaque handle created by a spamri_*_create/make/read
 * call and released with the matching spamri_*_free. Functions return a
 * spamri_status; on failure spamri_last_error() describes the problem for
 * the calling thread. Output handles are only written on success.
 */
#ifndef SPAMRI_H
#define SPAMRI_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SPAMRI_API __declspec(dllexport)
#else
#define SPAMRI_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spamri_status {
  SPAMRI_OK = 0,
  SPAMRI_ERR_INVALID_ARGUMENT = 1, /* null pointer, bad enum string, small buffer */
  SPAMRI_ERR_CONFIG = 2,           /* value outside its documented domain */
  SPAMRI_ERR_SHAPE = 3,            /* grid shapes or coil counts disagree */
  SPAMRI_ERR_IO = 4,               /* missing or malformed file */
  SPAMRI_ERR_NUMERICAL = 5,        /* non-finite values, diverged iteration */
  SPAMRI_ERR_INTERNAL = 6
} spamri_status;

SPAMRI_API const char* spamri_version(void);
/* Message of the last failed call on this thread ("" if none). */
SPAMRI_API const char* spamri_last_error(void);
SPAMRI_API const char* spamri_status_name(spamri_status status);

typedef struct spamri_image spamri_image;
typedef struct spamri_coils spamri_coils;
typedef struct spamri_mask spamri_mask;
typedef struct spamri_kspace spamri_kspace;
typedef struct spamri_result spamri_result;
typedef struct spamri_report spamri_report;

/* ---- real images ---- */
/* data may be NULL for a zero image; otherwise height*width row-major values. */
SPAMRI_API spamri_status spamri_image_create(size_t height, size_t width, const double* data,
                                             spamri_image** out);
SPAMRI_API void spamri_image_free(spamri_image* img);
SPAMRI_API spamri_status spamri_image_shape(const spamri_image* img, size_t* height, size_t* width);
/* Copies height*width values into out (capacity len). */
SPAMRI_API spamri_status spamri_image_copy(const spamri_image* img, double* out, size_t len);
SPAMRI_API spamri_status spamri_image_read(const char* path, spamri_image** out);
SPAMRI_API spamri_status spamri_image_write(const spamri_image* img, const char* path);
SPAMRI_API spamri_status spamri_image_write_pgm(const spamri_image* img, const char* path);
/* kind: "shepp-logan" | "blocks" */
SPAMRI_API spamri_status spamri_phantom(const char* kind, size_t height, size_t width,
                                        spamri_image** out);

/* ---- coil sensitivities ---- */
/* kind: "ones" | "gaussian-lobes" */
SPAMRI_API spamri_status spamri_coils_make(size_t coils, size_t height, size_t width,
                                           const char* kind, spamri_coils** out);
/* data: coils*height*width interleaved (re, im) pairs, coil-major. */
SPAMRI_API spamri_status spamri_coils_create(size_t coils, size_t height, size_t width,
                                             const double* data, spamri_coils** out);
SPAMRI_API void spamri_coils_free(spamri_coils* coils);
SPAMRI_API size_t spamri_coils_count(const spamri_coils* coils);
SPAMRI_API spamri_status spamri_coils_read(const char* path, spamri_coils** out);
SPAMRI_API spamri_status spamri_coils_write(const spamri_coils* coils, const char* path);

/* ---- sampling masks ---- */
typedef struct spamri_mask_spec {
  const char* scheme; /* "uniform-random" | "variable-density-random" */
  double ratio;
  double center_fraction;
  uint64_t seed;
} spamri_mask_spec;

SPAMRI_API void spamri_mask_spec_default(spamri_mask_spec* spec);
SPAMRI_API spamri_status spamri_mask_make(const spamri_mask_spec* spec, size_t height, size_t width,
                                          spamri_mask** out);
/* keep: height*width bytes, non-zero = sampled, DFT layout. */
SPAMRI_API spamri_status spamri_mask_create(size_t height, size_t width, const uint8_t* keep,
                                            spamri_mask** out);
SPAMRI_API void spamri_mask_free(spamri_mask* mask);
SPAMRI_API size_t spamri_mask_count(const spamri_mask* mask);
SPAMRI_API spamri_status spamri_mask_copy(const spamri_mask* mask, uint8_t* out, size_t len);
/* spec may be NULL when the mask was not generated from one; the sidecar then
 * records the observed ratio and a zero center fraction. */
SPAMRI_API spamri_status spamri_mask_write(const spamri_mask* mask, const spamri_mask_spec* spec,
                                           const char* path);
SPAMRI_API spamri_status spamri_mask_read(const char* path, spamri_mask** out);
/* Sidecar fields; *scheme points to a static string. */
SPAMRI_API spamri_status spamri_mask_read_spec(const char* path, spamri_mask_spec* spec);

/* ---- k-space data ---- */
SPAMRI_API spamri_status spamri_sigma_for_snr(const spamri_image* x, const spamri_coils* coils,
                                              double snr_db, double* sigma);
/* y = S F Phi x + w, w with independent N(0, sigma^2) real and imaginary parts. */
SPAMRI_API spamri_status spamri_simulate(const spamri_image* x, const spamri_coils* coils,
                                         const spamri_mask* mask, double sigma, uint64_t seed,
                                         spamri_kspace** out);
SPAMRI_API void spamri_kspace_free(spamri_kspace* y);
SPAMRI_API double spamri_kspace_sigma(const spamri_kspace* y);
SPAMRI_API size_t spamri_kspace_coil_count(const spamri_kspace* y);
/* mask_file is stored in the sidecar relative to the k-space file. */
SPAMRI_API spamri_status spamri_kspace_write(const spamri_kspace* y, const char* path,
                                             const char* mask_file);
/* Loads the k-space file and the mask it references; mask may be NULL. */
SPAMRI_API spamri_status spamri_kspace_read(const char* path, spamri_kspace** y, spamri_mask** mask);

/* Seeds of the mask, noise and chain substreams derived from one seed. */
SPAMRI_API void spamri_derive_seeds(uint64_t seed, uint64_t* mask_seed, uint64_t* noise_seed,
                                    uint64_t* chain_seed);

/* ---- reconstruction ---- */
typedef struct spamri_sampler_config {
  double rho;
  double alpha;
  double sigma;  /* 0: use the k-space sigma */
  double lambda; /* 0: rho^2 */
  double gamma;  /* 0: rho^2 / 4 */
  size_t n_mc;
  size_t n_bi;
  uint64_t seed;
  double tau_init; /* 0: dim / TV(x0) */
  int fix_tau;
  int tv_anisotropic;
  int tv_max_iters;
  double tv_tol;
  double tau_min;
  double tau_max;
  double delta0;
  double decay;
  double dim; /* 0: number of pixels */
} spamri_sampler_config;

typedef struct spamri_admm_config {
  double reg_weight;
  double penalty;
  int max_iters;
  double tol;
  int cg_iters;
  int haar; /* 0: TV prior, 1: Haar wavelet prior */
} spamri_admm_config;

SPAMRI_API void spamri_sampler_config_default(spamri_sampler_config* cfg);
SPAMRI_API void spamri_admm_config_default(spamri_admm_config* cfg);
/* Half-decade grid from 1e-3 to 10. Returns the grid length; copies up to len values. */
SPAMRI_API size_t spamri_default_weight_grid(double* out, size_t len);

SPAMRI_API spamri_status spamri_recon_ifft(const spamri_kspace* y, const spamri_coils* coils,
                                           const spamri_mask* mask, spamri_image** out);
SPAMRI_API spamri_status spamri_recon_admm(const spamri_kspace* y, const spamri_coils* coils,
                                           const spamri_mask* mask, const spamri_admm_config* cfg,
                                           spamri_image** out);
/* Runs ADMM for each weight and keeps the lowest RMSE against truth. */
SPAMRI_API spamri_status spamri_recon_admm_search(const spamri_kspace* y, const spamri_coils* coils,
                                                  const spamri_mask* mask,
                                                  const spamri_admm_config* cfg,
                                                  const spamri_image* truth, const double* grid,
                                                  size_t grid_len, spamri_image** out,
                                                  double* best_weight);

/* Called after every sweep; a non-zero return is ignored. */
typedef int (*spamri_progress_fn)(size_t iteration, double tau, double tv_x, double misfit,
                                  void* user);

/* init may be NULL (zero-filled start); progress may be NULL. */
SPAMRI_API spamri_status spamri_recon_mcmc(const spamri_kspace* y, const spamri_coils* coils,
                                           const spamri_mask* mask,
                                           const spamri_sampler_config* cfg,
                                           const spamri_image* init, spamri_progress_fn progress,
                                           void* user, spamri_result** out);
SPAMRI_API void spamri_result_free(spamri_result* res);
SPAMRI_API spamri_status spamri_result_mmse(const spamri_result* res, spamri_image** out);
SPAMRI_API spamri_status spamri_result_std(const spamri_result* res, spamri_image** out);
SPAMRI_API size_t spamri_result_samples(const spamri_result* res);
/* Returns the trace length; copies up to len values. */
SPAMRI_API size_t spamri_result_tau_trace(const spamri_result* res, double* out, size_t len);
/* CSV: iteration,tau */
SPAMRI_API spamri_status spamri_result_write_tau_trace(const spamri_result* res, const char* path);
/* CSV: iteration,tau,tv_x,misfit */
SPAMRI_API spamri_status spamri_result_write_diagnostics(const spamri_result* res,
                                                         const char* path);

/* ---- metrics ---- */
SPAMRI_API spamri_status spamri_rmse(const spamri_image* a, const spamri_image* b, double* out);
SPAMRI_API spamri_status spamri_corrcoef(const spamri_image* u, const spamri_image* v, double* out);
SPAMRI_API spamri_status spamri_abs_error(const spamri_image* a, const spamri_image* b,
                                          spamri_image** out);

/* ---- benchmark ---- */
typedef struct spamri_benchmark_plan {
  const char* phantom;
  size_t height;
  size_t width;
  size_t coils;
  const char* coil_kind;
  double snr_db;
  const char* scheme;
  double center_fraction;
  const double* ratios;
  size_t n_ratios;
  const uint64_t* seeds;
  size_t n_seeds;
  const char* methods; /* comma separated: ifft,admm-wav,admm-tv,mcmc-tv */
  spamri_sampler_config sampler;
  spamri_admm_config admm;
  const double* weight_grid; /* NULL: default grid */
  size_t n_weights;
  int search_weights; /* 0: use admm.reg_weight */
  unsigned threads;
  const char* out_dir; /* NULL or "": no map images */
} spamri_benchmark_plan;

/* Fills in defaults; ratios, seeds and weight_grid point to static arrays. */
SPAMRI_API void spamri_benchmark_plan_default(spamri_benchmark_plan* plan);
SPAMRI_API spamri_status spamri_benchmark_run(const spamri_benchmark_plan* plan,
                                              spamri_report** out);

typedef struct spamri_report_row {
  const char* method; /* static string */
  double ratio;
  uint64_t seed;
  double rmse;
  int has_cc;
  double cc;
  double runtime_s;
  int has_weight;
  double weight;
} spamri_report_row;

SPAMRI_API spamri_status spamri_report_create(spamri_report** out);
SPAMRI_API void spamri_report_free(spamri_report* report);
SPAMRI_API spamri_status spamri_report_add_row(spamri_report* report, const spamri_report_row* row);
SPAMRI_API size_t spamri_report_row_count(const spamri_report* report);
SPAMRI_API spamri_status spamri_report_row_at(const spamri_report* report, size_t index,
                                              spamri_report_row* row);
SPAMRI_API spamri_status spamri_report_mean_rmse(const spamri_report* report, const char* method,
                                                 double ratio, double* out);
SPAMRI_API spamri_status spamri_report_mean_cc(const spamri_report* report, const char* method,
                                               double ratio, double* out);
/* CSV header method,ratio,seed,rmse,cc,runtime_s; timings blank unless with_timing.
 * *len receives the text length; buf (capacity cap) receives the NUL-terminated
 * text when cap > *len. */
SPAMRI_API spamri_status spamri_report_csv(const spamri_report* report, int with_timing, char* buf,
                                           size_t cap, size_t* len);
SPAMRI_API spamri_status spamri_report_write_csv(const spamri_report* report, int with_timing,
                                                 const char* path);

#ifdef __cplusplus
}
#endif

#endif /* SPAMRI_H */
