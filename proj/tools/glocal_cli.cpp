// Copyright 2026 The glocal Authors
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

// Command-line front end: run, spectrum, gge, scan, validate.
//
// Exit codes: 0 success, 1 numeric failure, 2 configuration error, 3 I/O error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "glocal/glocal.hpp"

namespace {

enum ExitCode { kOk = 0, kNumeric = 1, kConfig = 2, kIo = 3 };

struct Options {
  std::string config;
  std::string output_dir;
  int threads = 1;
  bool quiet = false;
};

void report_files(const std::vector<std::string>& files, bool quiet) {
  if (quiet) return;
  for (const auto& f : files) std::cout << "wrote " << f << "\n";
}

int dispatch(const std::string& command, const Options& o) {
  using namespace glocal;
  const KeyValues kv = load_key_values(o.config);
  ExperimentConfig cfg = ExperimentConfig::from_key_values(kv);
  if (!o.output_dir.empty()) cfg.output_dir = o.output_dir;
  const std::filesystem::path dir = cfg.output_dir;
  probe_output_dir(dir);

  RunOptions run_opt;
  run_opt.threads = o.threads;
  if (!o.quiet) run_opt.log = [](const std::string& m) { std::cerr << "[glocal] " << m << "\n"; };

  if (command == "scan") {
    report_files(write_outputs(scan_report(kv, cfg, run_opt), dir), o.quiet);
    return kOk;
  }

  run_opt.log("assembling the coupled system");
  const CoupledSystem sys(cfg);
  if (command == "run") {
    report_files(write_outputs(run_experiment(sys, run_opt), dir), o.quiet);
  } else if (command == "spectrum") {
    report_files(write_outputs(spectrum_report(sys), dir), o.quiet);
  } else if (command == "gge") {
    report_files(write_outputs(gge_report(sys), dir), o.quiet);
  } else if (command == "validate") {
    const auto checks = validate_system(sys);
    RunResult r;
    bool ok = true;
    Json list = Json::array();
    for (const auto& c : checks) {
      ok = ok && c.pass;
      list.push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}});
      if (!o.quiet)
        std::printf("%-36s %s  value=%.3e  threshold=%.3e\n", c.name.c_str(), c.pass ? "PASS" : "FAIL", c.value,
                    c.threshold);
    }
    r.metadata["checks"] = list;
    r.metadata["all_pass"] = ok;
    write_outputs(r, dir);
    return ok ? kOk : kNumeric;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quench dynamics and g-local thermometry of coupled harmonic lattices"};
  app.require_subcommand(1);
  Options o;
  std::string command;
  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"run", "simulate the quench and write all diagnostics"},
           {"spectrum", "normal-mode frequencies and degeneracy report"},
           {"gge", "generalized temperatures and charge residuals"},
           {"scan", "sweep one scalar parameter and probe a single time"},
           {"validate", "check structural invariants of the configured system"}}) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", o.config, "experiment file (key = value)")->required();
    sub->add_option("--output-dir", o.output_dir, "overrides output.dir");
    sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--quiet", o.quiet, "suppress progress output");
    sub->callback([&command, name = name] { command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    return dispatch(command, o);
  } catch (const glocal::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const glocal::DimensionError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const glocal::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kIo;
  } catch (const glocal::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumeric;
  }
}
