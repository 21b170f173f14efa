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

// Configuration-driven experiment pipeline: assemble the coupled lattices,
// evolve the quench, run the diagnostics and collect tables for output.
// Nothing touches the filesystem until write_outputs, so a failure at any
// stage leaves no partial results behind.

#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

#include "glocal/config.hpp"
#include "glocal/dynamics.hpp"
#include "glocal/energetics.hpp"
#include "glocal/equilibration.hpp"
#include "glocal/gaussian.hpp"
#include "glocal/gge.hpp"
#include "glocal/lattice.hpp"
#include "glocal/thermometry.hpp"

namespace glocal {

using Json = nlohmann::ordered_json;

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

/// Column-major-ish numeric table with a header; rows are samples.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return i;
    throw ConfigError("no column `" + name + "`");
  }
  std::vector<double> column(const std::string& name) const {
    const std::size_t j = index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[j]);
    return out;
  }
  void set_column(const std::string& name, const std::vector<double>& values) {
    const std::size_t j = index(name);
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i][j] = values[i];
  }
  std::string csv() const {
    std::string out;
    for (std::size_t j = 0; j < columns.size(); ++j) out += (j ? "," : "") + columns[j];
    out += '\n';
    for (const auto& r : rows) {
      for (std::size_t j = 0; j < r.size(); ++j) out += (j ? "," : "") + detail::format_double(r[j]);
      out += '\n';
    }
    return out;
  }
};

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Results must be
/// written to per-index slots, which keeps the output order deterministic.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// The two lattices, their coupling, the product initial state and the
/// post-quench dynamics.
class CoupledSystem {
 public:
  explicit CoupledSystem(ExperimentConfig config)
      : config_(std::move(config)),
        va_(build_intra_potential(config_.lattice_a, 0)),
        vb_(build_intra_potential(config_.lattice_b, 1)),
        vint_(build_interaction_potential(config_.lattice_a, config_.lattice_b, config_.coupling)),
        total_(assemble_total(va_, vb_, vint_)),
        lambda_min_(checked_lambda_min(total_.entries)),
        model_a_(williamson_from_potential(va_.entries, config_.degeneracy_tolerance)),
        model_b_(williamson_from_potential(vb_.entries, config_.degeneracy_tolerance)),
        initial_(product_initial_state(thermal_covariance(model_a_.basis(), config_.t_a),
                                       thermal_covariance(model_b_.basis(), config_.t_b))),
        dynamics_(williamson_from_potential(total_.entries, config_.degeneracy_tolerance), initial_) {}

  const ExperimentConfig& config() const { return config_; }
  const PotentialMatrix& potential_a() const { return va_; }
  const PotentialMatrix& potential_b() const { return vb_; }
  const Matrix& interaction() const { return vint_; }
  const PotentialMatrix& total() const { return total_; }
  double lambda_min() const { return lambda_min_; }
  const MeanForceModel& model(int system) const { return system == 0 ? model_a_ : model_b_; }
  const CovarianceMatrix& initial() const { return initial_; }
  const QuenchDynamics& dynamics() const { return dynamics_; }

  int offset(int system) const { return system == 0 ? 0 : static_cast<int>(va_.size()); }

  /// Indices of a subsystem within the total system.
  SiteList total_sites(int system, const SiteList& local) const {
    SiteList out(local);
    for (int& s : out) s += offset(system);
    return out;
  }
  SiteList lattice_sites(int system) const {
    SiteList out(static_cast<std::size_t>(config_.lattice(system).sites()));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = offset(system) + static_cast<int>(i);
    return out;
  }

 private:
  static double checked_lambda_min(const Matrix& v) {
    require_stable(v);
    return validate_stability(v);
  }

  ExperimentConfig config_;
  PotentialMatrix va_, vb_;
  Matrix vint_;
  PotentialMatrix total_;
  double lambda_min_;
  MeanForceModel model_a_, model_b_;
  CovarianceMatrix initial_;
  QuenchDynamics dynamics_;
};

inline Json spectrum_summary(const NormalModeBasis& basis, double degeneracy_tol) {
  Json j;
  j["modes"] = basis.modes();
  j["omega_min"] = basis.omega.minCoeff();
  j["omega_max"] = basis.omega.maxCoeff();
  const Partition blocks = detect_degeneracies(basis.omega, degeneracy_tol);
  Json degenerate = Json::array();
  for (const auto& b : blocks)
    if (b.size() > 1) degenerate.push_back(b);
  j["degenerate_blocks"] = degenerate;
  return j;
}

inline std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

using Logger = std::function<void(const std::string&)>;

struct RunOptions {
  int threads = 1;
  Logger log = [](const std::string&) {};
};

struct RunResult {
  Table trajectory;
  std::vector<std::pair<std::string, Table>> tables;  // extra CSV files by name
  Json metadata;
  Json equilibration;
};

inline std::string time_tag(double tau) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "t%g", tau);
  return buf;
}

namespace detail {

inline const char* lattice_name(int system) { return system == 0 ? "A" : "B"; }

inline double mean_of_tail(const std::vector<double>& xs) {
  const std::size_t start = xs.size() - std::max<std::size_t>(1, xs.size() / 4);
  double s = 0.0;
  for (std::size_t i = start; i < xs.size(); ++i) s += xs[i];
  return s / static_cast<double>(xs.size() - start);
}

inline Json optional_time(const std::optional<double>& t) { return t ? Json(*t) : Json(nullptr); }

}  // namespace detail

/// Profile tables for one snapshot: sliding and growing windows in each lattice.
inline std::vector<std::pair<std::string, Table>> snapshot_profiles(const CoupledSystem& sys, double tau, int threads) {
  const ExperimentConfig& cfg = sys.config();
  const Matrix normal = sys.dynamics().normal_covariance(tau / cfg.lattice_a.omega);
  std::vector<std::pair<std::string, Table>> out;
  for (int x = 0; x < 2; ++x) {
    const LatticeSpec& spec = cfg.lattice(x);
    const CovarianceMatrix sigma_x = sys.dynamics().marginal_from_normal(normal, sys.lattice_sites(x));
    const auto emit = [&](const std::string& kind, const std::string& first, const std::vector<SiteList>& family,
                          const std::function<double(std::size_t)>& label) {
      Table t{{first, "f_max", "t_eff"}, std::vector<std::vector<double>>(family.size())};
      parallel_for(family.size(), threads, [&](std::size_t i) {
        const ThermometryReading r =
            estimate_t_eff(marginal(sigma_x, family[i]), sys.model(x), family[i], cfg.bracket());
        t.rows[i] = {label(i), r.f_max, r.t_eff};
      });
      out.emplace_back("profile_" + kind + "_" + detail::lattice_name(x) + "_" + time_tag(tau) + ".csv", std::move(t));
    };
    const auto sliding = sliding_windows(spec, cfg.profile_window);
    emit("sliding", "nu", sliding, [&](std::size_t i) { return static_cast<double>(sliding[i].front()); });
    const auto growing = growing_windows(spec, cfg.profile_growing_max);
    emit("growing", "window", growing, [&](std::size_t i) { return static_cast<double>(growing[i].size()); });
  }
  return out;
}

/// The full pipeline behind `run`.
inline RunResult run_experiment(const CoupledSystem& sys, const RunOptions& opt = {}) {
  const ExperimentConfig& cfg = sys.config();
  const QuenchDynamics& dyn = sys.dynamics();
  const TemperatureBracket bracket = cfg.bracket();
  const std::size_t n_sub = cfg.subsystems.size();
  const auto samples = static_cast<std::size_t>(cfg.samples);

  std::vector<SiteList> sub_total;
  for (const auto& s : cfg.subsystems) sub_total.push_back(sys.total_sites(s.system, s.sites));

  std::optional<GGESpec> gge;
  std::vector<CovarianceMatrix> gge_targets;
  if (cfg.gge) {
    opt.log("building the generalized Gibbs ensemble");
    gge = build_gge(dyn.basis(), sys.initial(), cfg.degeneracy_tolerance);
    const CovarianceMatrix gge_cov = gge_covariance(*gge);
    for (const auto& s : sub_total) gge_targets.push_back(marginal(gge_cov, s));
  }
  const EnergyProbe probe(dyn.basis(), sys.potential_a().entries, sys.potential_b().entries, sys.interaction());
  const SiteList sites_a = sys.lattice_sites(0);
  const SiteList sites_b = sys.lattice_sites(1);

  Table traj;
  traj.columns.push_back("t");
  for (const auto& s : cfg.subsystems)
    for (const char* c : {"_f_max", "_t_eff", "_d_min"}) traj.columns.push_back(s.name + c);
  for (const char* x : {"A", "B"})
    for (const char* c : {"_t_eff_can", "_f_global"}) traj.columns.push_back(std::string(x) + c);
  for (const char* c : {"E_A", "E_B", "E_int", "Qdot_A", "Qdot_B", "Edot_int"}) traj.columns.push_back(c);
  for (const auto& s : cfg.subsystems) traj.columns.push_back(s.name + "_d_gge");
  traj.rows.assign(samples, std::vector<double>(traj.columns.size(), kMissing));

  std::vector<int> pinned(samples, 0);
  std::vector<double> global_t(samples * 2, kMissing);
  opt.log("evolving " + std::to_string(samples) + " samples");
  parallel_for(samples, opt.threads, [&](std::size_t i) {
    const double tau = cfg.sample_tau(static_cast<int>(i));
    const Matrix normal = dyn.normal_covariance(tau / cfg.lattice_a.omega);
    std::vector<double>& row = traj.rows[i];
    std::size_t c = 0;
    row[c++] = tau;
    for (std::size_t k = 0; k < n_sub; ++k) {
      if (cfg.thermometry) {
        const SubsystemDecl& s = cfg.subsystems[k];
        const ThermometryReading r =
            estimate_t_eff(dyn.marginal_from_normal(normal, sub_total[k]), sys.model(s.system), s.sites, bracket);
        row[c] = r.f_max;
        row[c + 1] = r.t_eff;
        row[c + 2] = r.d_min;
        pinned[i] += r.pinned ? 1 : 0;
      }
      c += 3;
    }
    const EnergySplit e = probe(normal);
    for (int x = 0; x < 2; ++x) {
      if (cfg.canonical)
        row[c] = temperature_for_energy(sys.model(x).basis().omega, x == 0 ? e.a : e.b);
      if (cfg.global && i % static_cast<std::size_t>(cfg.global_stride) == 0) {
        const ThermometryReading g =
            global_thermality(dyn.marginal_from_normal(normal, x == 0 ? sites_a : sites_b), sys.model(x), bracket);
        row[c + 1] = g.f_max;
        global_t[2 * i + x] = g.t_eff;
      }
      c += 2;
    }
    if (cfg.energy) {
      row[c] = e.a;
      row[c + 1] = e.b;
      row[c + 2] = e.interaction;
    }
    c += 6;
    for (std::size_t k = 0; k < n_sub; ++k, ++c)
      if (gge) row[c] = bures_distance(dyn.marginal_from_normal(normal, sub_total[k]), gge_targets[k]);
  });

  RunResult result;
  Json& meta = result.metadata;
  Json config = Json::object();
  for (const auto& [k, v] : cfg.resolved()) config[k] = v;
  meta["config"] = config;
  meta["time_unit"] = "omega_A t";
  meta["spectrum"] = {{"A", spectrum_summary(sys.model(0).basis(), cfg.degeneracy_tolerance)},
                      {"B", spectrum_summary(sys.model(1).basis(), cfg.degeneracy_tolerance)},
                      {"total", spectrum_summary(dyn.basis(), cfg.degeneracy_tolerance)},
                      {"lambda_min", sys.lambda_min()}};
  meta["predicted_t_eq"] = predict_teq(sys.model(0).basis(), sys.model(1).basis(), cfg.t_a, cfg.t_b);

  const std::vector<double> taus = traj.column("t");
  std::vector<double> times(samples);
  for (std::size_t i = 0; i < samples; ++i) times[i] = taus[i] / cfg.lattice_a.omega;

  if (cfg.energy) {
    const std::vector<double> ea = traj.column("E_A"), eb = traj.column("E_B"), ei = traj.column("E_int");
    Json en;
    double drift = 0.0;
    const double e0 = ea[0] + eb[0] + ei[0];
    for (std::size_t i = 0; i < samples; ++i) drift = std::max(drift, std::abs(ea[i] + eb[i] + ei[i] - e0) / std::abs(e0));
    en["total_energy"] = e0;
    en["max_relative_drift"] = drift;
    if (samples >= 3) {
      const auto qa = flows(times, ea), qb = flows(times, eb), qi = flows(times, ei);
      traj.set_column("Qdot_A", qa);
      traj.set_column("Qdot_B", qb);
      traj.set_column("Edot_int", qi);
      std::size_t small_int = 0;
      for (std::size_t i = 0; i < samples; ++i)
        if (std::abs(qi[i]) < std::max(std::abs(qa[i]), std::abs(qb[i]))) ++small_int;
      en["interaction_rate_below_heat_flow_fraction"] = static_cast<double>(small_int) / static_cast<double>(samples);
      if (cfg.thermometry && cfg.ttm) {
        const auto ta = traj.column(cfg.ttm_a + "_t_eff"), tb = traj.column(cfg.ttm_b + "_t_eff");
        std::size_t backflow = 0;
        for (std::size_t i = 0; i < samples; ++i)
          if (qa[i] * (ta[i] - tb[i]) > 0.0) ++backflow;
        en["backflow_samples"] = backflow;
      }
    }
    meta["energetics"] = en;
  }

  if (cfg.thermometry) {
    Json th;
    for (const auto& s : cfg.subsystems) {
      const auto f = traj.column(s.name + "_f_max");
      const auto t = traj.column(s.name + "_t_eff");
      th[s.name] = {{"f_max_min", *std::min_element(f.begin(), f.end())},
                    {"t_eff_final_quarter_mean", detail::mean_of_tail(t)}};
    }
    th["bracket"] = {bracket.lo, bracket.hi};
    int total_pinned = 0;
    for (int p : pinned) total_pinned += p;
    th["pinned_readings"] = total_pinned;
    meta["thermometry"] = th;
  }

  if (cfg.global) {
    Json gl;
    for (int x = 0; x < 2; ++x) {
      Json series = Json::array();
      for (std::size_t i = 0; i < samples; i += static_cast<std::size_t>(cfg.global_stride))
        series.push_back({{"t", taus[i]}, {"t_argmax", global_t[2 * i + x]}});
      gl[detail::lattice_name(x)] = series;
    }
    meta["global_argmax_temperature"] = gl;
  }

  if (gge) {
    meta["gge"] = {{"beta", to_std(gge->beta)},
                   {"capped_modes", gge->capped},
                   {"charge_residual", gge->charge_residual},
                   {"degeneracy_tolerance", gge->degeneracy_tolerance}};
    Json eq = Json::object();
    eq["epsilon"] = cfg.epsilon;
    eq["sustain_window"] = cfg.sustain_window;
    eq["time_unit"] = "omega_A t";
    Json subs = Json::object();
    for (const auto& s : cfg.subsystems) {
      const auto d = traj.column(s.name + "_d_gge");
      const EquilibrationReport rep =
          detect_equilibration(d, taus, cfg.epsilon, static_cast<std::size_t>(cfg.sustain_window));
      subs[s.name] = {{"t_eq", detail::optional_time(rep.t_eq)},
                      {"t_rec", detail::optional_time(rep.t_rec)},
                      {"window_fraction", rep.window_fraction},
                      {"d_final", d.back()}};
    }
    eq["subsystems"] = subs;
    result.equilibration = eq;
  }

  if (cfg.thermometry && cfg.ttm) {
    const auto ta = traj.column(cfg.ttm_a + "_t_eff"), tb = traj.column(cfg.ttm_b + "_t_eff");
    const NormalModeBasis& ba = sys.model(0).basis();
    const NormalModeBasis& bb = sys.model(1).basis();
    const TTMDiagnosis d = ttm_consistency(
        times, ta, tb, [&](double t) { return heat_capacity(ba, t); }, [&](double t) { return heat_capacity(bb, t); });
    meta["ttm"] = {{"pair", {cfg.ttm_a, cfg.ttm_b}},
                   {"degenerate", d.degenerate},
                   {"monotone", d.monotone},
                   {"negative_j_samples", d.negative.size()}};
    if (!d.j.empty()) {
      Table t{{"t", "gap", "J", "k"}, {}};
      for (std::size_t i = 0; i < samples; ++i) t.rows.push_back({taus[i], ta[i] - tb[i], d.j[i], d.k[i]});
      result.tables.emplace_back("ttm.csv", std::move(t));
    }
  }

  for (double tau : cfg.profile_times) {
    opt.log("profiles at omega_A t = " + detail::format_double(tau));
    for (auto& p : snapshot_profiles(sys, tau, opt.threads)) result.tables.push_back(std::move(p));
  }

  meta["trajectory_columns"] = traj.columns;
  result.trajectory = std::move(traj);
  return result;
}

/// Writes every output of a run into `dir` (created if needed).
inline std::vector<std::string> write_outputs(const RunResult& r, const std::filesystem::path& dir) {
  std::vector<std::pair<std::string, std::string>> files;
  if (!r.trajectory.columns.empty()) files.emplace_back("trajectory.csv", r.trajectory.csv());
  for (const auto& [name, table] : r.tables) files.emplace_back(name, table.csv());
  if (!r.equilibration.is_null()) files.emplace_back("equilibration.json", r.equilibration.dump(2) + "\n");
  Json meta = r.metadata;
  Json names = Json::array();
  for (const auto& f : files) names.push_back(f.first);
  names.push_back("metadata.json");
  meta["files"] = names;
  files.emplace_back("metadata.json", meta.dump(2) + "\n");

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory `" + dir.string() + "`: " + ec.message());
  std::vector<std::string> written;
  for (const auto& [name, content] : files) {
    const std::filesystem::path p = dir / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    out.close();
    if (!out) throw IoError("cannot write `" + p.string() + "`");
    written.push_back(p.string());
  }
  return written;
}

/// Checks that `dir` can be written before any expensive work starts.
inline void probe_output_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  if (std::filesystem::exists(dir, ec)) {
    if (!std::filesystem::is_directory(dir, ec)) throw IoError("`" + dir.string() + "` is not a directory");
    const auto probe = dir / ".write-probe";
    std::ofstream out(probe);
    if (!out) throw IoError("output directory `" + dir.string() + "` is not writable");
    out.close();
    std::filesystem::remove(probe, ec);
    return;
  }
  const auto parent = dir.has_parent_path() ? dir.parent_path() : std::filesystem::path(".");
  if (!std::filesystem::exists(parent, ec)) return;  // create_directories will report problems later
  const auto probe = parent / (".write-probe-" + dir.filename().string());
  std::ofstream out(probe);
  if (!out) throw IoError("cannot create output directory under `" + parent.string() + "`");
  out.close();
  std::filesystem::remove(probe, ec);
}

// Subcommands other than `run` --------------------------------------------

inline RunResult spectrum_report(const CoupledSystem& sys) {
  const double tol = sys.config().degeneracy_tolerance;
  RunResult r;
  Json& m = r.metadata;
  Json config = Json::object();
  for (const auto& [k, v] : sys.config().resolved()) config[k] = v;
  m["config"] = config;
  m["spectrum"] = {{"A", spectrum_summary(sys.model(0).basis(), tol)},
                   {"B", spectrum_summary(sys.model(1).basis(), tol)},
                   {"total", spectrum_summary(sys.dynamics().basis(), tol)},
                   {"lambda_min", sys.lambda_min()}};
  Table t{{"kappa", "omega_total", "omega_A", "omega_B"}, {}};
  const Vector& wt = sys.dynamics().basis().omega;
  const Vector& wa = sys.model(0).basis().omega;
  const Vector& wb = sys.model(1).basis().omega;
  for (Eigen::Index k = 0; k < wt.size(); ++k)
    t.rows.push_back({static_cast<double>(k), wt[k], k < wa.size() ? wa[k] : kMissing, k < wb.size() ? wb[k] : kMissing});
  r.tables.emplace_back("spectrum.csv", std::move(t));
  return r;
}

inline RunResult gge_report(const CoupledSystem& sys) {
  const ExperimentConfig& cfg = sys.config();
  const GGESpec spec = build_gge(sys.dynamics().basis(), sys.initial(), cfg.degeneracy_tolerance);
  RunResult r;
  Json config = Json::object();
  for (const auto& [k, v] : cfg.resolved()) config[k] = v;
  r.metadata["config"] = config;
  Json blocks = Json::array();
  for (const auto& b : spec.basis.degeneracies)
    if (b.size() > 1) blocks.push_back(b);
  r.metadata["gge"] = {{"degenerate_blocks", blocks},
                       {"charge_residual", spec.charge_residual},
                       {"max_mode_energy", spec.mode_energy.maxCoeff()},
                       {"capped_modes", spec.capped},
                       {"degeneracy_tolerance", spec.degeneracy_tolerance}};
  Table t{{"kappa", "omega", "mode_energy", "beta"}, {}};
  for (Eigen::Index k = 0; k < spec.beta.size(); ++k)
    t.rows.push_back({static_cast<double>(k), spec.basis.omega[k], spec.mode_energy[k], spec.beta[k]});
  r.tables.emplace_back("gge.csv", std::move(t));
  return r;
}

/// Sweeps `scan.parameter` over `scan.values`, probing each system at
/// `scan.probe_time`.
inline RunResult scan_report(const KeyValues& base, const ExperimentConfig& cfg, const RunOptions& opt = {}) {
  if (cfg.scan_values.empty()) throw ConfigError("`scan.values` is empty");
  std::vector<ExperimentConfig> configs;
  for (double v : cfg.scan_values) {
    KeyValues kv = base;
    kv[cfg.scan_parameter] = detail::format_double(v);
    configs.push_back(ExperimentConfig::from_key_values(kv));
  }
  Table t{{"value"}, {}};
  for (const char* x : {"A", "B"})
    for (const char* c : {"_f_global", "_t_global"}) t.columns.push_back(std::string(x) + c);
  for (const auto& s : cfg.subsystems)
    for (const char* c : {"_f_max", "_t_eff"}) t.columns.push_back(s.name + c);
  t.rows.assign(configs.size(), std::vector<double>(t.columns.size(), kMissing));
  for (std::size_t i = 0; i < configs.size(); ++i) {
    opt.log(cfg.scan_parameter + " = " + detail::format_double(cfg.scan_values[i]));
    const CoupledSystem sys(configs[i]);
    const ExperimentConfig& c = sys.config();
    const Matrix normal = sys.dynamics().normal_covariance(cfg.scan_probe_time / c.lattice_a.omega);
    auto& row = t.rows[i];
    row[0] = cfg.scan_values[i];
    if (c.global) {
      for (int x = 0; x < 2; ++x) {
        const ThermometryReading g = global_thermality(
            sys.dynamics().marginal_from_normal(normal, sys.lattice_sites(x)), sys.model(x), c.bracket());
        row[1 + 2 * x] = g.f_max;
        row[2 + 2 * x] = g.t_eff;
      }
    }
    for (std::size_t k = 0; k < c.subsystems.size(); ++k) {
      const SubsystemDecl& s = c.subsystems[k];
      const ThermometryReading r = estimate_t_eff(
          sys.dynamics().marginal_from_normal(normal, sys.total_sites(s.system, s.sites)), sys.model(s.system), s.sites,
          c.bracket());
      row[5 + 2 * k] = r.f_max;
      row[6 + 2 * k] = r.t_eff;
    }
  }
  RunResult r;
  Json config = Json::object();
  for (const auto& [k, v] : cfg.resolved()) config[k] = v;
  r.metadata["config"] = config;
  r.metadata["scan"] = {{"parameter", cfg.scan_parameter}, {"probe_time", cfg.scan_probe_time}};
  r.tables.emplace_back("scan.csv", std::move(t));
  return r;
}

struct ValidationCheck {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

/// Structural invariants of the configured system.
inline std::vector<ValidationCheck> validate_system(const CoupledSystem& sys) {
  const ExperimentConfig& cfg = sys.config();
  const Matrix& v = sys.total().entries;
  const NormalModeBasis& basis = sys.dynamics().basis();
  std::vector<ValidationCheck> out;
  auto check = [&](std::string name, double value, double threshold) {
    out.push_back({std::move(name), value, threshold, value <= threshold});
  };
  check("potential_symmetry", (v - v.transpose()).cwiseAbs().maxCoeff(), 0.0);
  out.push_back({"lambda_min_positive", sys.lambda_min(), 0.0, sys.lambda_min() > 0.0});
  check("symplectic_S", symplectic_residual(basis.symplectic), 1e-10);
  check("williamson_residual", williamson_residual(basis, v), 1e-10 * v.norm());

  const double e0 = mean_energy(sys.initial(), v);
  const Vector nu0 = symplectic_eigenvalues(sys.initial());
  double e_drift = 0.0, nu_drift = 0.0, e_sym = 0.0;
  for (double tau : {1.0, 10.0, 100.0, cfg.t_max}) {
    const double t = tau / cfg.lattice_a.omega;
    e_sym = std::max(e_sym, symplectic_residual(propagator(basis, t)));
    const CovarianceMatrix s = sys.dynamics().covariance(t);
    e_drift = std::max(e_drift, std::abs(mean_energy(s, v) - e0) / std::abs(e0));
    Vector nu = symplectic_eigenvalues(s);
    nu_drift = std::max(nu_drift, (nu - nu0).cwiseAbs().maxCoeff());
  }
  check("symplectic_propagator", e_sym, 1e-10);
  check("energy_conservation", e_drift, 1e-10);
  check("symplectic_spectrum_preservation", nu_drift, 1e-9);

  const GGESpec gge = build_gge(basis, sys.initial(), cfg.degeneracy_tolerance);
  const double hmax = gge.mode_energy.maxCoeff();
  check("gge_pair_charge", gge.charge_residual, 1e-9 * hmax);
  const Vector h_gge = mode_energies(gge.basis, gge_covariance(gge));
  check("gge_charge_matching", ((h_gge - gge.mode_energy).array() / gge.mode_energy.array()).abs().maxCoeff(), 1e-9);

  const double t_ref = std::max(cfg.t_a, cfg.t_b);
  for (const auto& s : cfg.subsystems) {
    const CovarianceMatrix mf = sys.model(s.system).covariance(t_ref, s.sites);
    const ThermometryReading r = estimate_t_eff(mf, sys.model(s.system), s.sites, cfg.bracket());
    check("exact_marginal_recovery_" + s.name, std::abs(r.t_eff - t_ref) / t_ref, 1e-4);
  }
  return out;
}

}  // namespace glocal
