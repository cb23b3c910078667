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

// hedgefx command line. Links only the C API.
//
//   hedgefx run <config> [--out DIR] [--fast] [--no-attribution]
//   hedgefx sweep <config> --taus 0.10 0.15 0.20 [--out DIR] [--fast]
//   hedgefx fixture <kind> --n 75 --seed 7 --out DIR [--theta 2]
//   hedgefx validate <config>
//
// Exit codes: 0 success, 2 usage or config error, 3 data error, 4 numerical
// failure.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hedgefx/hedgefx.h"

namespace {

constexpr int kExitUsage = 2;

int exit_code(hfx_status status) {
  switch (status) {
    case HFX_OK: return 0;
    case HFX_ERR_CONFIG: return 2;
    case HFX_ERR_DATA: return 3;
    case HFX_ERR_NUMERICAL: return 4;
    // Bad values reaching the library come from input files.
    case HFX_ERR_INVALID_ARGUMENT: return 3;
    case HFX_ERR_INTERNAL: return 1;
  }
  return 1;
}

int report_failure(hfx_status status) {
  std::fprintf(stderr, "hedgefx: error: %s\n", hfx_last_error());
  return exit_code(status);
}

hfx_run_options make_options(const std::string& out, bool fast) {
  hfx_run_options o;
  hfx_run_options_init(&o);
  o.output_dir = out.empty() ? nullptr : out.c_str();
  o.fast = fast ? 1 : 0;
  return o;
}

int cmd_run(const std::string& config, const std::string& out, bool fast, bool no_attribution) {
  hfx_run_options o = make_options(out, fast);
  o.attribution = no_attribution ? 0 : 1;
  hfx_run* run = nullptr;
  if (const auto s = hfx_run_create(config.c_str(), &o, &run); s != HFX_OK) return report_failure(s);
  for (size_t i = 0; i < hfx_run_diagnostic_count(run); ++i) {
    std::fprintf(stderr, "hedgefx: note: %s\n", hfx_run_diagnostic(run, i));
  }
  std::fputs(hfx_run_report_csv(run), stdout);
  std::fprintf(stderr, "hedgefx: wrote %s\n", hfx_run_output_dir(run));
  hfx_run_free(run);
  return 0;
}

int cmd_sweep(const std::string& config, const std::vector<double>& taus, const std::string& out, bool fast) {
  const hfx_run_options o = make_options(out, fast);
  hfx_sweep* sweep = nullptr;
  if (const auto s = hfx_sweep_create(config.c_str(), taus.data(), taus.size(), &o, &sweep); s != HFX_OK) {
    return report_failure(s);
  }
  std::printf("%-16s %-8s %6s %8s %8s %8s  %s\n", "country", "resid", "tau", "HE%", "lambda", "dlambda", "status");
  for (size_t i = 0; i < hfx_sweep_row_count(sweep); ++i) {
    hfx_sweep_row r;
    hfx_sweep_row_at(sweep, i, &r);
    if (r.feasible) {
      std::printf("%-16s %-8s %6.3f %8.1f %8.4f %+8.4f  ok\n", r.country, r.residents, r.tau,
                  r.hedge_effectiveness_pct, r.tail_dependence, r.delta_tail_dependence);
    } else {
      std::printf("%-16s %-8s %6.3f %8s %8s %8s  infeasible: %s\n", r.country, r.residents, r.tau, "-", "-", "-",
                  r.reason);
    }
  }
  std::fprintf(stderr, "hedgefx: wrote %s/sweep.csv\n", hfx_sweep_output_dir(sweep));
  hfx_sweep_free(sweep);
  return 0;
}

int cmd_fixture(const std::string& kind, size_t n, std::uint64_t seed, double theta, const std::string& out) {
  const auto s = hfx_fixture_generate(kind.c_str(), n, seed, theta, out.c_str());
  if (s == HFX_ERR_INVALID_ARGUMENT) {
    std::fprintf(stderr, "hedgefx: error: %s\n", hfx_last_error());
    return kExitUsage;
  }
  if (s != HFX_OK) return report_failure(s);
  std::fprintf(stderr, "hedgefx: wrote %s fixture to %s\n", kind.c_str(), out.c_str());
  return 0;
}

int cmd_validate(const std::string& config) {
  size_t episodes = 0;
  if (const auto s = hfx_validate_config(config.c_str(), &episodes); s != HFX_OK) return report_failure(s);
  std::printf("ok: %zu episode(s)\n", episodes);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hedge effectiveness of equities against purchasing-power loss in currency crises"};
  app.set_version_flag("--version", std::string(hfx_version()));
  app.require_subcommand(1);

  std::string config, out, kind;
  bool fast = false;
  bool no_attribution = false;
  std::vector<double> taus;
  size_t n = 75;
  std::uint64_t seed = 7;
  double theta = 2.0;

  auto* run = app.add_subcommand("run", "Run the full pipeline for every episode in a config");
  run->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out, "Output directory (overrides HEDGEFX_OUT_DIR and the config)");
  run->add_flag("--fast", fast, "Cap bootstrap replications at 200");
  run->add_flag("--no-attribution", no_attribution, "Skip the attribution stage");

  auto* sweep = app.add_subcommand("sweep", "Re-run with alternative lower-tail quantiles");
  sweep->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--taus", taus, "Lower-tail quantiles")->required()->delimiter(',');
  sweep->add_option("--out", out, "Output directory");
  sweep->add_flag("--fast", fast, "Cap bootstrap replications at 200");

  auto* fixture = app.add_subcommand("fixture", "Write a synthetic episode");
  fixture->add_option("kind", kind, "perfect_hedge, anti_hedge, clayton_coupled, independent or turkey_like")
      ->required();
  fixture->add_option("--n", n, "Months in the analysis window")->capture_default_str();
  fixture->add_option("--seed", seed, "Generator seed")->capture_default_str();
  fixture->add_option("--theta", theta, "Clayton parameter (clayton_coupled)")->capture_default_str();
  fixture->add_option("--out", out, "Output directory")->required();

  auto* validate = app.add_subcommand("validate", "Check a config and its manifests without computing");
  validate->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (run->parsed()) return cmd_run(config, out, fast, no_attribution);
  if (sweep->parsed()) return cmd_sweep(config, taus, out, fast);
  if (fixture->parsed()) return cmd_fixture(kind, n, seed, theta, out);
  return cmd_validate(config);
}
