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

// Flat `key = value` experiment files with dotted section names.
//
//   lattice_a.shape = 200        # or 26x26
//   lattice_a.omega = 1.55
//   lattice_a.g_ratio = 0.16     # g / omega^2; or lattice_a.g
//   subsystem.a = A:center:2     # or A:99,100 (0-based, row-major)
//
// Unknown keys are rejected so typos cannot silently fall back to defaults.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "glocal/errors.hpp"
#include "glocal/lattice.hpp"
#include "glocal/thermometry.hpp"
#include "glocal/tolerances.hpp"

namespace glocal {

using KeyValues = std::map<std::string, std::string>;

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

/// 17 significant digits: enough to round-trip any double.
inline std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

/// Parse `key = value` lines; `#` starts a comment.
inline KeyValues parse_key_values(std::istream& in, const std::string& source = "<config>") {
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = source + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected `key = value`");
    std::string key = detail::trim(std::string_view(body).substr(0, eq));
    std::string value = detail::trim(std::string_view(body).substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError(where + ": empty key or value");
    if (kv.count(key)) throw ConfigError(where + ": duplicate key `" + key + "`");
    kv.emplace(std::move(key), std::move(value));
  }
  return kv;
}

inline KeyValues load_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file `" + path + "`");
  return parse_key_values(in, path);
}

inline double parse_double(const std::string& key, const std::string& text) {
  if (text == "inf" || text == "infinity") return std::numeric_limits<double>::infinity();
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError("`" + key + "`: not a number: `" + text + "`");
  return x;
}

inline int parse_int(const std::string& key, const std::string& text) {
  int x = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError("`" + key + "`: not an integer: `" + text + "`");
  return x;
}

inline bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "no" || text == "0") return false;
  throw ConfigError("`" + key + "`: expected true or false, got `" + text + "`");
}

inline std::vector<double> parse_double_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const std::string& item : detail::split(text, ',')) out.push_back(parse_double(key, item));
  return out;
}

/// A named set of sites inside one lattice (0 = A, 1 = B), local indices.
struct SubsystemDecl {
  std::string name;
  int system = 0;
  SiteList sites;
  std::string text;  // declaration as written, echoed in metadata
};

struct ExperimentConfig {
  LatticeSpec lattice_a;
  LatticeSpec lattice_b;
  CouplingTopology coupling;
  double t_a = 0.0;
  double t_b = 0.0;
  double t_max = 0.0;  // in units of 1 / omega_A
  int samples = 201;
  std::vector<SubsystemDecl> subsystems;
  int profile_window = 1;
  int profile_growing_max = 8;
  std::vector<double> profile_times;
  double degeneracy_tolerance = tol::kDegeneracy;
  double epsilon = 0.02;
  int sustain_window = static_cast<int>(tol::kSustainWindow);
  double bracket_lo = 1e-3;  // relative to max(T_A, T_B)
  double bracket_hi = 1e3;
  bool thermometry = true;
  bool global = true;
  int global_stride = 1;
  bool canonical = true;
  bool energy = true;
  bool gge = true;
  bool ttm = true;
  std::string ttm_a;
  std::string ttm_b;
  std::string scan_parameter = "coupling.lambda_ratio";
  std::vector<double> scan_values;
  double scan_probe_time = 0.0;
  std::string output_dir = "out";

  const LatticeSpec& lattice(int system) const { return system == 0 ? lattice_a : lattice_b; }

  /// Physical time of the i-th sample.
  double time(int i) const { return sample_tau(i) / lattice_a.omega; }
  /// omega_A * t of the i-th sample.
  double sample_tau(int i) const { return t_max * static_cast<double>(i) / static_cast<double>(samples - 1); }

  TemperatureBracket bracket() const {
    const double ref = std::max(t_a, t_b);
    return {bracket_lo * ref, bracket_hi * ref};
  }

  const SubsystemDecl* find_subsystem(const std::string& name) const {
    for (const auto& s : subsystems)
      if (s.name == name) return &s;
    return nullptr;
  }

  /// Every setting after defaults were applied, in a fixed order.
  std::vector<std::pair<std::string, std::string>> resolved() const;

  static ExperimentConfig from_key_values(const KeyValues& kv);
};

namespace detail {

class KeyReader {
 public:
  explicit KeyReader(const KeyValues& kv) : kv_(kv) {}

  const std::string* get(const std::string& key) {
    used_.push_back(key);
    const auto it = kv_.find(key);
    return it == kv_.end() ? nullptr : &it->second;
  }
  const std::string& require(const std::string& key) {
    const std::string* v = get(key);
    if (!v) throw ConfigError("missing required key `" + key + "`");
    return *v;
  }
  double number(const std::string& key, double fallback) {
    const std::string* v = get(key);
    return v ? parse_double(key, *v) : fallback;
  }
  int integer(const std::string& key, int fallback) {
    const std::string* v = get(key);
    return v ? parse_int(key, *v) : fallback;
  }
  bool flag(const std::string& key, bool fallback) {
    const std::string* v = get(key);
    return v ? parse_bool(key, *v) : fallback;
  }
  std::string text(const std::string& key, const std::string& fallback) {
    const std::string* v = get(key);
    return v ? *v : fallback;
  }
  /// Keys under `prefix.` that were never asked for.
  void mark_prefix(const std::string& prefix) {
    for (const auto& [k, v] : kv_)
      if (k.rfind(prefix, 0) == 0) used_.push_back(k);
  }
  void reject_unknown() const {
    for (const auto& [k, v] : kv_)
      if (std::find(used_.begin(), used_.end(), k) == used_.end()) throw ConfigError("unknown key `" + k + "`");
  }

 private:
  const KeyValues& kv_;
  std::vector<std::string> used_;
};

inline LatticeSpec read_lattice(KeyReader& r, const std::string& section) {
  LatticeSpec spec;
  const std::string shape = r.require(section + ".shape");
  const auto parts = split(shape, 'x');
  if (parts.size() == 1) {
    spec.dim = 1;
    spec.rows = 1;
    spec.cols = parse_int(section + ".shape", parts[0]);
  } else if (parts.size() == 2) {
    spec.dim = 2;
    spec.rows = parse_int(section + ".shape", parts[0]);
    spec.cols = parse_int(section + ".shape", parts[1]);
  } else {
    throw ConfigError("`" + section + ".shape`: expected n or RxC, got `" + shape + "`");
  }
  if (const std::string* d = r.get(section + ".dim"); d && parse_int(section + ".dim", *d) != spec.dim)
    throw ConfigError("`" + section + ".dim` disagrees with `" + section + ".shape`");
  spec.omega = parse_double(section + ".omega", r.require(section + ".omega"));
  const std::string* g = r.get(section + ".g");
  const std::string* ratio = r.get(section + ".g_ratio");
  if (g && ratio) throw ConfigError("give only one of `" + section + ".g` and `" + section + ".g_ratio`");
  if (g) spec.g = parse_double(section + ".g", *g);
  if (ratio) spec.g = parse_double(section + ".g_ratio", *ratio) * spec.omega * spec.omega;
  spec.alpha = r.number(section + ".alpha", kNearestNeighbor);
  spec.validate();
  return spec;
}

inline SubsystemDecl read_subsystem(const std::string& name, const std::string& text, const ExperimentConfig& cfg) {
  const std::string key = "subsystem." + name;
  SubsystemDecl decl{name, 0, {}, text};
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("`" + key + "`: expected A:<sites> or B:<sites>");
  const std::string which = trim(std::string_view(text).substr(0, colon));
  if (which == "A") {
    decl.system = 0;
  } else if (which == "B") {
    decl.system = 1;
  } else {
    throw ConfigError("`" + key + "`: lattice must be A or B, got `" + which + "`");
  }
  const LatticeSpec& spec = cfg.lattice(decl.system);
  const std::string rest = trim(std::string_view(text).substr(colon + 1));
  if (rest.rfind("center:", 0) == 0) {
    decl.sites = centered_window(spec, parse_int(key, rest.substr(7)));
  } else {
    for (const std::string& item : split(rest, ',')) decl.sites.push_back(parse_int(key, item));
  }
  for (std::size_t i = 0; i < decl.sites.size(); ++i) {
    const int s = decl.sites[i];
    if (s < 0 || s >= spec.sites()) throw ConfigError("`" + key + "`: site " + std::to_string(s) + " out of range");
    for (std::size_t j = 0; j < i; ++j)
      if (decl.sites[j] == s) throw ConfigError("`" + key + "`: site " + std::to_string(s) + " listed twice");
  }
  if (decl.sites.empty()) throw ConfigError("`" + key + "`: no sites");
  return decl;
}

}  // namespace detail

inline ExperimentConfig ExperimentConfig::from_key_values(const KeyValues& kv) {
  detail::KeyReader r(kv);
  ExperimentConfig c;
  c.lattice_a = detail::read_lattice(r, "lattice_a");
  c.lattice_b = detail::read_lattice(r, "lattice_b");
  if (!same_shape(c.lattice_a, c.lattice_b)) throw ConfigError("lattices A and B must have the same shape");

  const std::string kind = r.text("coupling.kind", "FB");
  if (kind == "FB") {
    c.coupling.kind = CouplingKind::FullBody;
  } else if (kind == "EE") {
    c.coupling.kind = CouplingKind::EdgeEdge;
  } else {
    throw ConfigError("`coupling.kind` must be EE or FB, got `" + kind + "`");
  }
  const std::string* lam = r.get("coupling.lambda");
  const std::string* lam_ratio = r.get("coupling.lambda_ratio");
  if (lam && lam_ratio) throw ConfigError("give only one of `coupling.lambda` and `coupling.lambda_ratio`");
  if (lam) c.coupling.lambda = parse_double("coupling.lambda", *lam);
  if (lam_ratio)
    c.coupling.lambda = parse_double("coupling.lambda_ratio", *lam_ratio) * c.lattice_a.omega * c.lattice_b.omega;
  c.coupling.edge_row = r.integer("coupling.edge_row", 0);
  if (c.coupling.edge_row < 0 || c.coupling.edge_row >= c.lattice_a.rows)
    throw ConfigError("`coupling.edge_row` outside the lattice");

  c.t_a = parse_double("initial.T_A", r.require("initial.T_A"));
  c.t_b = parse_double("initial.T_B", r.require("initial.T_B"));
  if (!(c.t_a >= 0.0) || !(c.t_b >= 0.0)) throw ConfigError("initial temperatures must be non-negative");
  if (!(std::max(c.t_a, c.t_b) > 0.0)) throw ConfigError("at least one initial temperature must be positive");

  c.t_max = parse_double("time.t_max", r.require("time.t_max"));
  c.samples = r.integer("time.samples", c.samples);
  if (!(c.t_max > 0.0) || !std::isfinite(c.t_max)) throw ConfigError("`time.t_max` must be positive");
  if (c.samples < 2) throw ConfigError("`time.samples` must be at least 2");

  std::vector<std::pair<std::string, std::string>> subs;
  for (const auto& [k, v] : kv)
    if (k.rfind("subsystem.", 0) == 0) subs.emplace_back(k.substr(10), v);
  r.mark_prefix("subsystem.");
  if (subs.empty()) subs = {{"a", "A:center:2"}, {"b", "B:center:2"}};
  for (const auto& [name, text] : subs) {
    if (name.empty()) throw ConfigError("subsystem with empty name");
    c.subsystems.push_back(detail::read_subsystem(name, text, c));
  }

  c.profile_window = r.integer("profile.window", c.profile_window);
  c.profile_growing_max = r.integer("profile.growing_max", std::min(c.profile_growing_max, c.lattice_a.cols));
  if (const std::string* t = r.get("profile.times")) c.profile_times = parse_double_list("profile.times", *t);
  if (c.profile_window < 1 || c.profile_window > c.lattice_a.cols) throw ConfigError("`profile.window` does not fit the lattice");
  if (c.profile_growing_max < 1 || c.profile_growing_max > c.lattice_a.cols)
    throw ConfigError("`profile.growing_max` does not fit the lattice");
  for (double t : c.profile_times)
    if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("`profile.times` entries must be non-negative");

  c.degeneracy_tolerance = r.number("tolerance.degeneracy", c.degeneracy_tolerance);
  c.epsilon = r.number("tolerance.epsilon", c.epsilon);
  c.sustain_window = r.integer("tolerance.sustain", c.sustain_window);
  c.bracket_lo = r.number("tolerance.bracket_lo", c.bracket_lo);
  c.bracket_hi = r.number("tolerance.bracket_hi", c.bracket_hi);
  if (!(c.degeneracy_tolerance >= 0.0)) throw ConfigError("`tolerance.degeneracy` must be non-negative");
  if (!(c.epsilon > 0.0)) throw ConfigError("`tolerance.epsilon` must be positive");
  if (c.sustain_window < 1) throw ConfigError("`tolerance.sustain` must be at least 1");
  c.bracket().validate();

  c.thermometry = r.flag("diagnostics.thermometry", c.thermometry);
  c.global = r.flag("diagnostics.global", c.global);
  c.global_stride = r.integer("diagnostics.global_stride", c.global_stride);
  c.canonical = r.flag("diagnostics.canonical", c.canonical);
  c.energy = r.flag("diagnostics.energy", c.energy);
  c.gge = r.flag("diagnostics.gge", c.gge);
  c.ttm = r.flag("diagnostics.ttm", c.ttm);
  if (c.global_stride < 1) throw ConfigError("`diagnostics.global_stride` must be at least 1");

  // TTM pair: first declared subsystem of each lattice unless named.
  for (const auto& s : c.subsystems) {
    if (s.system == 0 && c.ttm_a.empty()) c.ttm_a = s.name;
    if (s.system == 1 && c.ttm_b.empty()) c.ttm_b = s.name;
  }
  c.ttm_a = r.text("ttm.a", c.ttm_a);
  c.ttm_b = r.text("ttm.b", c.ttm_b);
  if (c.ttm) {
    const SubsystemDecl* a = c.find_subsystem(c.ttm_a);
    const SubsystemDecl* b = c.find_subsystem(c.ttm_b);
    if (!a || !b || a->system != 0 || b->system != 1)
      throw ConfigError("TTM diagnostics need `ttm.a` in lattice A and `ttm.b` in lattice B");
  }

  c.scan_parameter = r.text("scan.parameter", c.scan_parameter);
  if (const std::string* v = r.get("scan.values")) c.scan_values = parse_double_list("scan.values", *v);
  c.scan_probe_time = r.number("scan.probe_time", c.t_max);
  if (!(c.scan_probe_time >= 0.0)) throw ConfigError("`scan.probe_time` must be non-negative");

  c.output_dir = r.text("output.dir", c.output_dir);
  r.reject_unknown();
  return c;
}

inline std::vector<std::pair<std::string, std::string>> ExperimentConfig::resolved() const {
  using detail::format_double;
  std::vector<std::pair<std::string, std::string>> out;
  auto add = [&](std::string k, std::string v) { out.emplace_back(std::move(k), std::move(v)); };
  auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
  auto list = [](const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + format_double(xs[i]);
    return s;
  };
  for (int x = 0; x < 2; ++x) {
    const LatticeSpec& l = lattice(x);
    const std::string sec = x == 0 ? "lattice_a." : "lattice_b.";
    add(sec + "dim", std::to_string(l.dim));
    add(sec + "shape", l.dim == 1 ? std::to_string(l.cols) : std::to_string(l.rows) + "x" + std::to_string(l.cols));
    add(sec + "omega", format_double(l.omega));
    add(sec + "g", format_double(l.g));
    add(sec + "alpha", format_double(l.alpha));
  }
  add("coupling.kind", to_string(coupling.kind));
  add("coupling.lambda", format_double(coupling.lambda));
  add("coupling.edge_row", std::to_string(coupling.edge_row));
  add("initial.T_A", format_double(t_a));
  add("initial.T_B", format_double(t_b));
  add("time.t_max", format_double(t_max));
  add("time.samples", std::to_string(samples));
  for (const auto& s : subsystems) {
    std::string sites;
    for (std::size_t i = 0; i < s.sites.size(); ++i) sites += (i ? "," : "") + std::to_string(s.sites[i]);
    add("subsystem." + s.name, std::string(s.system == 0 ? "A:" : "B:") + sites);
  }
  add("profile.window", std::to_string(profile_window));
  add("profile.growing_max", std::to_string(profile_growing_max));
  add("profile.times", list(profile_times));
  add("tolerance.degeneracy", format_double(degeneracy_tolerance));
  add("tolerance.epsilon", format_double(epsilon));
  add("tolerance.sustain", std::to_string(sustain_window));
  add("tolerance.bracket_lo", format_double(bracket_lo));
  add("tolerance.bracket_hi", format_double(bracket_hi));
  add("diagnostics.thermometry", flag(thermometry));
  add("diagnostics.global", flag(global));
  add("diagnostics.global_stride", std::to_string(global_stride));
  add("diagnostics.canonical", flag(canonical));
  add("diagnostics.energy", flag(energy));
  add("diagnostics.gge", flag(gge));
  add("diagnostics.ttm", flag(ttm));
  add("ttm.a", ttm_a);
  add("ttm.b", ttm_b);
  add("scan.parameter", scan_parameter);
  add("scan.values", list(scan_values));
  add("scan.probe_time", format_double(scan_probe_time));
  add("output.dir", output_dir);
  return out;
}

inline ExperimentConfig load_config(const std::string& path) {
  return ExperimentConfig::from_key_values(load_key_values(path));
}

}  // namespace glocal
