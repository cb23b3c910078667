// Copyright 2026 The hedgefx Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to hedgefx. All handles are opaque; every call that can fail
 * returns an hfx_status and leaves a message for hfx_last_error() on the
 * calling thread. Strings returned by accessors stay valid until the owning
 * handle is freed. */

#ifndef HEDGEFX_HEDGEFX_H_
#define HEDGEFX_HEDGEFX_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(HEDGEFX_BUILDING)
#define HFX_API __declspec(dllexport)
#else
#define HFX_API __declspec(dllimport)
#endif
#else
#define HFX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Numeric values match the CLI exit codes. */
typedef enum hfx_status {
  HFX_OK = 0,
  HFX_ERR_INTERNAL = 1,
  HFX_ERR_CONFIG = 2,
  HFX_ERR_DATA = 3,
  HFX_ERR_NUMERICAL = 4,
  HFX_ERR_INVALID_ARGUMENT = 5,
} hfx_status;

typedef struct hfx_run hfx_run;
typedef struct hfx_sweep hfx_sweep;

typedef struct hfx_run_options {
  const char* output_dir; /* NULL: HEDGEFX_OUT_DIR, then the config, then "out" */
  int fast;               /* nonzero caps bootstrap replications at 200 */
  int attribution;        /* nonzero runs the attribution stage */
  int write_outputs;      /* nonzero writes report files */
} hfx_run_options;

typedef struct hfx_report_row {
  const char* country;
  const char* residents; /* "Foreign" or "Local" */
  const char* crisis_date;
  const char* copula_family;
  const char* diagnostic; /* empty unless HE is undefined */
  double hedge_effectiveness_pct;
  double erosion_pct;
  double net_real_pct;
  double tail_dependence;
  double tail_dependence_lo;
  double tail_dependence_hi;
  double empirical_tail_dependence;
  size_t observations;
} hfx_report_row;

typedef struct hfx_sweep_row {
  const char* country;
  const char* residents;
  const char* reason;
  double tau;
  int feasible;
  double hedge_effectiveness_pct;
  double tail_dependence;
  double empirical_tail_dependence;
  double delta_hedge_effectiveness_pct;
  double delta_tail_dependence;
} hfx_sweep_row;

HFX_API const char* hfx_version(void);
HFX_API const char* hfx_last_error(void);
HFX_API void hfx_run_options_init(hfx_run_options* options);

/* Parses the config and every manifest it names without computing. */
HFX_API hfx_status hfx_validate_config(const char* config_path, size_t* episode_count);

HFX_API hfx_status hfx_run_create(const char* config_path, const hfx_run_options* options, hfx_run** out);
HFX_API void hfx_run_free(hfx_run* run);
HFX_API size_t hfx_run_report_count(const hfx_run* run);
HFX_API hfx_status hfx_run_report(const hfx_run* run, size_t index, hfx_report_row* out);
HFX_API hfx_status hfx_run_triplet(const hfx_run* run, double* tau_low, double* tau_mid, double* tau_high);
HFX_API size_t hfx_run_diagnostic_count(const hfx_run* run);
HFX_API const char* hfx_run_diagnostic(const hfx_run* run, size_t index);
HFX_API const char* hfx_run_output_dir(const hfx_run* run);
HFX_API const char* hfx_run_report_csv(const hfx_run* run);

HFX_API hfx_status hfx_sweep_create(const char* config_path, const double* taus, size_t tau_count,
                                    const hfx_run_options* options, hfx_sweep** out);
HFX_API void hfx_sweep_free(hfx_sweep* sweep);
HFX_API size_t hfx_sweep_row_count(const hfx_sweep* sweep);
HFX_API hfx_status hfx_sweep_row_at(const hfx_sweep* sweep, size_t index, hfx_sweep_row* out);
HFX_API const char* hfx_sweep_output_dir(const hfx_sweep* sweep);

/* kind: perfect_hedge, anti_hedge, clayton_coupled, independent, turkey_like.
 * theta is used by clayton_coupled only. */
HFX_API hfx_status hfx_fixture_generate(const char* kind, size_t n, uint64_t seed, double theta,
                                        const char* out_dir);

HFX_API hfx_status hfx_real_return_domestic(double r_nominal, double pi, double* out);
HFX_API hfx_status hfx_real_return_foreign(double r_nominal, double fx_prev, double fx_now, double pi,
                                           double* out);
HFX_API hfx_status hfx_hedge_effectiveness(const double* net, const double* loss, size_t n, double* out);
HFX_API hfx_status hfx_min_tail_quantile(const double* returns, size_t n, size_t min_count, double* out);
HFX_API hfx_status hfx_empirical_quantile(const double* x, size_t n, double tau, double* out);
HFX_API hfx_status hfx_check_loss(double u, double tau, double* out);
HFX_API hfx_status hfx_clayton_lower_tail(double theta, double* out);

#ifdef __cplusplus
}
#endif

#endif /* HEDGEFX_HEDGEFX_H_ */
