// Copyright 2026 The rcacsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Talks to the simulator exclusively through the
// C API of the shared library; JSON is used here only to assemble the
// sweep summary.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rcacsim/rcacsim.h"

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
  std::string config_path;
  std::string gains_path;
  std::string env;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  double duration = std::nan("");
  double dt = std::nan("");
};

void add_common_flags(CLI::App* cmd, CommonOptions* opts,
                      bool config_required) {
  auto* config =
      cmd->add_option("--config", opts->config_path, "Scenario config (JSON)")
          ->check(CLI::ExistingFile);
  if (config_required) config->required();
  cmd->add_option("--gains", opts->gains_path, "Gains file (JSON)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--env", opts->env, "Environment override")
      ->check(CLI::IsMember({"source", "target"}));
  cmd->add_option("--seed", opts->seed, "Seed override")
      ->each([opts](const std::string&) { opts->seed_set = true; });
  cmd->add_option("--out", opts->out_dir, "Output directory override");
  cmd->add_option("--duration", opts->duration, "Duration override (s)");
  cmd->add_option("--dt", opts->dt, "Integrator step override (s)");
}

[[noreturn]] void die(const std::string& context, rcacsim_status status) {
  std::fprintf(stderr, "error: %s: %s: %s\n", context.c_str(),
               rcacsim_status_name(status), rcacsim_last_error());
  std::exit(1);
}

void check(const std::string& context, rcacsim_status status) {
  if (status != RCACSIM_OK) die(context, status);
}

std::string take_string(char* s) {
  std::string out = s == nullptr ? "" : s;
  rcacsim_string_free(s);
  return out;
}

void set_key(rcacsim_config* cfg, const std::string& key,
             const std::string& json_value) {
  check("--set " + key, rcacsim_config_set(cfg, key.c_str(), json_value.c_str()));
}

rcacsim_config* make_config(const CommonOptions& opts, const char* mode) {
  rcacsim_config* cfg = nullptr;
  if (opts.config_path.empty()) {
    check("default config", rcacsim_config_create(&cfg));
  } else {
    check(opts.config_path, rcacsim_config_load(opts.config_path.c_str(), &cfg));
  }
  set_key(cfg, "mode", std::string("\"") + mode + "\"");
  if (!opts.env.empty()) set_key(cfg, "environment", "\"" + opts.env + "\"");
  if (opts.seed_set) set_key(cfg, "seed", std::to_string(opts.seed));
  if (std::isfinite(opts.duration)) {
    set_key(cfg, "duration", std::to_string(opts.duration));
  }
  if (std::isfinite(opts.dt)) set_key(cfg, "dt", std::to_string(opts.dt));
  if (!opts.out_dir.empty()) set_key(cfg, "output_dir", "\"" + opts.out_dir + "\"");
  if (!opts.gains_path.empty()) {
    check(opts.gains_path,
          rcacsim_config_load_gains(cfg, opts.gains_path.c_str()));
  }
  return cfg;
}

std::string config_output_dir(const rcacsim_config* cfg) {
  char* text = nullptr;
  check("config dump", rcacsim_config_dump(cfg, &text));
  const nlohmann::json j = nlohmann::json::parse(take_string(text));
  return j.value("output_dir", "out");
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
    std::exit(1);
  }
}

/// Runs one configured scenario and writes resolved_config.json,
/// telemetry.csv, gains.json and summary.json into out_dir.
/// Returns 0 on success, 2 on divergence.
int run_and_write(rcacsim_config* cfg, const fs::path& out_dir, bool quiet,
                  std::string* summary_out = nullptr) {
  fs::create_directories(out_dir);

  char* text = nullptr;
  check("config dump", rcacsim_config_dump(cfg, &text));
  write_file(out_dir / "resolved_config.json", take_string(text));

  rcacsim_result* result = nullptr;
  const rcacsim_status status = rcacsim_run(cfg, &result);
  if (status != RCACSIM_OK) die("run", status);

  check("telemetry", rcacsim_result_write_telemetry(
                         result, (out_dir / "telemetry.csv").c_str()));
  check("gains",
        rcacsim_result_write_gains(result, (out_dir / "gains.json").c_str()));
  check("summary", rcacsim_result_summary_json(result, &text));
  const std::string summary = take_string(text);
  write_file(out_dir / "summary.json", summary);
  if (summary_out != nullptr) *summary_out = summary;

  const bool diverged = rcacsim_result_diverged(result) != 0;
  if (!quiet) {
    std::fputs(summary.c_str(), stdout);
    if (diverged) {
      std::fprintf(stderr, "run diverged: %s\n", rcacsim_result_error(result));
    }
    // Status goes to stderr so stdout stays a pipeable JSON summary.
    std::fprintf(stderr, "artifacts written to %s\n", out_dir.c_str());
  }
  rcacsim_result_free(result);
  return diverged ? 2 : 0;
}

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

std::vector<SweepAxis> parse_sweep_sets(const std::vector<std::string>& sets) {
  std::vector<SweepAxis> axes;
  for (const std::string& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= s.size()) {
      std::fprintf(stderr, "error: --set expects key=v1,v2,... got '%s'\n",
                   s.c_str());
      std::exit(1);
    }
    SweepAxis axis;
    axis.key = s.substr(0, eq);
    std::string rest = s.substr(eq + 1);
    std::size_t pos = 0;
    while (true) {
      const auto comma = rest.find(',', pos);
      axis.values.push_back(rest.substr(pos, comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    axes.push_back(std::move(axis));
  }
  return axes;
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                      (c >= '0' && c <= '9') || c == '.' || c == '-' ||
                      c == '+' || c == '=' || c == '_';
    out += keep ? c : '_';
  }
  return out;
}

int cmd_oracle_check(std::uint64_t seed, double tol) {
  double max_rel_error = 0.0;
  check("oracle", rcacsim_oracle_check(seed, &max_rel_error));
  std::printf("oracle max relative error: %.3e (tolerance %.1e)\n",
              max_rel_error, tol);
  return max_rel_error < tol ? 0 : 1;
}

int cmd_sweep(const CommonOptions& opts, const std::vector<std::string>& sets,
              const char* mode, unsigned jobs) {
  const std::vector<SweepAxis> axes = parse_sweep_sets(sets);

  // Cartesian product of all axis values.
  std::vector<std::vector<std::size_t>> combos{{}};
  for (const SweepAxis& axis : axes) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& combo : combos) {
      for (std::size_t v = 0; v < axis.values.size(); ++v) {
        auto extended = combo;
        extended.push_back(v);
        next.push_back(std::move(extended));
      }
    }
    combos = std::move(next);
  }

  fs::path root = opts.out_dir;
  if (root.empty()) {
    rcacsim_config* probe = make_config(opts, mode);
    root = fs::path(config_output_dir(probe)) / "sweep";
    rcacsim_config_free(probe);
  }
  fs::create_directories(root);

  std::mutex mutex;
  nlohmann::json rows = nlohmann::json::array();
  std::atomic<std::size_t> cursor{0};
  std::atomic<int> exit_code{0};

  const auto worker = [&]() {
    while (true) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= combos.size()) return;

      std::string label = combos.size() == 1 ? "single" : "";
      rcacsim_config* cfg = make_config(opts, mode);
      for (std::size_t a = 0; a < axes.size(); ++a) {
        const std::string& value = axes[a].values[combos[i][a]];
        set_key(cfg, axes[a].key, value);
        if (!label.empty()) label += "_";
        label += sanitize(axes[a].key + "=" + value);
      }
      const fs::path dir = root / label;
      std::string summary;
      const int code = run_and_write(cfg, dir, /*quiet=*/true, &summary);
      rcacsim_config_free(cfg);

      std::lock_guard<std::mutex> lock(mutex);
      nlohmann::json row;
      row["label"] = label;
      row["dir"] = dir.string();
      row["summary"] = nlohmann::json::parse(summary);
      rows.push_back(row);
      if (code != 0) exit_code = code;
      std::printf("[%zu/%zu] %s %s\n", i + 1, combos.size(), label.c_str(),
                  code == 0 ? "ok" : "DIVERGED");
    }
  };

  std::vector<std::thread> pool;
  const unsigned n = std::max(1u, jobs);
  for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  nlohmann::json summary;
  summary["runs"] = rows;
  write_file(root / "sweep_summary.json", summary.dump(2) + "\n");
  std::printf("sweep summary written to %s\n",
              (root / "sweep_summary.json").c_str());
  return exit_code.load();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive multirotor flight-control simulator"};
  app.set_version_flag("--version", rcacsim_version());
  app.require_subcommand(1);

  CommonOptions learn_opts;
  CLI::App* learn = app.add_subcommand(
      "learn", "Run online gain adaptation and export the learned gains");
  add_common_flags(learn, &learn_opts, /*config_required=*/false);

  CommonOptions fly_opts;
  CLI::App* fly = app.add_subcommand(
      "fly", "Run a frozen-gain scenario on the source or target plant");
  add_common_flags(fly, &fly_opts, /*config_required=*/false);

  std::uint64_t oracle_seed = 90210;
  double oracle_tol = 1e-4;
  CLI::App* oracle = app.add_subcommand(
      "oracle-check",
      "Cross-check the adaptation ODEs against a least-squares solve");
  oracle->add_option("--seed", oracle_seed, "Signal seed");
  oracle->add_option("--tol", oracle_tol, "Pass/fail threshold");

  CommonOptions sweep_opts;
  std::vector<std::string> sweep_sets;
  std::string sweep_mode = "learn";
  unsigned sweep_jobs = 2;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Grid of runs over config overrides, in parallel");
  add_common_flags(sweep, &sweep_opts, /*config_required=*/false);
  sweep->add_option("--set", sweep_sets,
                    "key=v1,v2,... (repeatable; values are JSON)");
  sweep->add_option("--mode", sweep_mode, "Run mode for every grid point")
      ->check(CLI::IsMember({"learn", "fly"}));
  sweep->add_option("--jobs", sweep_jobs, "Worker threads");

  CLI11_PARSE(app, argc, argv);

  if (learn->parsed()) {
    rcacsim_config* cfg = make_config(learn_opts, "learn");
    const fs::path out = learn_opts.out_dir.empty() ? config_output_dir(cfg)
                                                    : learn_opts.out_dir;
    const int code = run_and_write(cfg, out, /*quiet=*/false);
    rcacsim_config_free(cfg);
    return code;
  }
  if (fly->parsed()) {
    rcacsim_config* cfg = make_config(fly_opts, "fly");
    const fs::path out =
        fly_opts.out_dir.empty() ? config_output_dir(cfg) : fly_opts.out_dir;
    const int code = run_and_write(cfg, out, /*quiet=*/false);
    rcacsim_config_free(cfg);
    return code;
  }
  if (oracle->parsed()) {
    return cmd_oracle_check(oracle_seed, oracle_tol);
  }
  if (sweep->parsed()) {
    return cmd_sweep(sweep_opts, sweep_sets, sweep_mode.c_str(), sweep_jobs);
  }
  return 1;
}
