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

#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "glocal/config.hpp"

namespace glocal {
namespace {

KeyValues parse(const std::string& text) {
  std::istringstream in(text);
  return parse_key_values(in, "test.conf");
}

const char* kMinimal = R"(
lattice_a.shape = 10
lattice_a.omega = 1
lattice_a.g = 0.1
lattice_b.shape = 10
lattice_b.omega = 1.2
lattice_b.g = 0.1
coupling.kind = FB
coupling.lambda = 0.05
initial.T_A = 0.2
initial.T_B = 1
time.t_max = 20
)";

ExperimentConfig minimal(const std::string& extra = "") { return ExperimentConfig::from_key_values(parse(kMinimal + extra)); }

TEST(KeyValueParser, CommentsAndWhitespace) {
  const KeyValues kv = parse("# header\n  a.b = 1 # trailing\n\nc=two words\n");
  EXPECT_EQ(kv.size(), 2u);
  EXPECT_EQ(kv.at("a.b"), "1");
  EXPECT_EQ(kv.at("c"), "two words");
}

TEST(KeyValueParser, ErrorsCarryLineNumbers) {
  try {
    parse("a = 1\nno equals sign\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("test.conf:2"), std::string::npos);
  }
  EXPECT_THROW(parse("a = 1\na = 2\n"), ConfigError);
  EXPECT_THROW(parse("a =\n"), ConfigError);
  EXPECT_THROW(parse("= 3\n"), ConfigError);
}

TEST(KeyValueParser, MissingFile) { EXPECT_THROW(load_key_values("/nonexistent/glocal.conf"), ConfigError); }

TEST(ScalarParsers, AcceptAndReject) {
  EXPECT_EQ(parse_double("k", "1.5e-3"), 1.5e-3);
  EXPECT_TRUE(std::isinf(parse_double("k", "inf")));
  EXPECT_THROW(parse_double("k", "1.5x"), ConfigError);
  EXPECT_EQ(parse_int("k", "42"), 42);
  EXPECT_THROW(parse_int("k", "4.2"), ConfigError);
  EXPECT_TRUE(parse_bool("k", "true"));
  EXPECT_FALSE(parse_bool("k", "false"));
  EXPECT_THROW(parse_bool("k", "yes please"), ConfigError);
  EXPECT_EQ(parse_double_list("k", "0, 0.5,1"), (std::vector<double>{0, 0.5, 1}));
}

TEST(ExperimentConfig, DefaultsAndRatios) {
  const ExperimentConfig c = minimal();
  EXPECT_EQ(c.samples, 201);
  ASSERT_EQ(c.subsystems.size(), 2u);
  EXPECT_EQ(c.subsystems[0].sites, (std::vector<int>{4, 5}));
  EXPECT_EQ(c.subsystems[1].system, 1);
  EXPECT_DOUBLE_EQ(c.bracket().hi, 1e3);
  const ExperimentConfig r = ExperimentConfig::from_key_values(parse(R"(
lattice_a.shape = 6
lattice_a.omega = 1.5
lattice_a.g_ratio = 0.2
lattice_b.shape = 6
lattice_b.omega = 2
lattice_b.g_ratio = 0.1
coupling.kind = EE
coupling.lambda_ratio = 0.1
initial.T_A = 0.1
initial.T_B = 1
time.t_max = 5
)"));
  EXPECT_DOUBLE_EQ(r.lattice_a.g, 0.2 * 1.5 * 1.5);
  EXPECT_DOUBLE_EQ(r.lattice_b.g, 0.1 * 4.0);
  EXPECT_DOUBLE_EQ(r.coupling.lambda, 0.1 * 3.0);
  EXPECT_EQ(r.coupling.kind, CouplingKind::EdgeEdge);
}

TEST(ExperimentConfig, TimeGridInUnitsOfOmegaA) {
  const ExperimentConfig c = minimal("time.samples = 11\nlattice_a.alpha = inf\nlattice_b.alpha = inf\n");
  EXPECT_DOUBLE_EQ(c.sample_tau(10), 20.0);
  EXPECT_DOUBLE_EQ(c.time(10), 20.0 / c.lattice_a.omega);
  EXPECT_TRUE(c.lattice_a.nearest_neighbor());
}

TEST(ExperimentConfig, SubsystemForms) {
  const ExperimentConfig c = minimal("subsystem.x = B:1,3\nsubsystem.y = A:center:3\n");
  ASSERT_EQ(c.subsystems.size(), 2u);
  EXPECT_NE(c.find_subsystem("x"), nullptr);
  EXPECT_EQ(c.find_subsystem("x")->sites, (std::vector<int>{1, 3}));
  EXPECT_EQ(c.find_subsystem("y")->sites, (std::vector<int>{3, 4, 5}));
  EXPECT_THROW(minimal("subsystem.x = C:1\n"), ConfigError);
  EXPECT_THROW(minimal("subsystem.x = A:10\n"), ConfigError);
  EXPECT_THROW(minimal("subsystem.x = A:1,1\n"), ConfigError);
}

TEST(ExperimentConfig, RejectsInvalidInput) {
  EXPECT_THROW(minimal("bogus.key = 1\n"), ConfigError);
  EXPECT_THROW(minimal("time.samples = 1\n"), ConfigError);
  EXPECT_THROW(minimal("tolerance.epsilon = 0\n"), ConfigError);
  EXPECT_THROW(minimal("tolerance.bracket_lo = 10\ntolerance.bracket_hi = 1\n"), ConfigError);
  EXPECT_THROW(minimal("coupling.lambda_ratio = 0.1\n"), ConfigError);
  EXPECT_THROW(minimal("profile.window = 11\n"), ConfigError);
  EXPECT_THROW(minimal("diagnostics.global_stride = 0\n"), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_key_values(parse("lattice_a.shape = 10\n")), ConfigError);
  const std::string shape_mismatch = std::string(kMinimal);
  EXPECT_THROW(ExperimentConfig::from_key_values(parse(
                   shape_mismatch.substr(0, shape_mismatch.find("lattice_b.shape")) + "lattice_b.shape = 12\n" +
                   shape_mismatch.substr(shape_mismatch.find("lattice_b.omega")))),
               ConfigError);
}

TEST(ExperimentConfig, SquareLatticeShape) {
  const ExperimentConfig c = minimal();
  const ExperimentConfig sq = ExperimentConfig::from_key_values(parse(R"(
lattice_a.shape = 3x4
lattice_a.omega = 1
lattice_a.g = 0.1
lattice_b.shape = 3x4
lattice_b.omega = 1
lattice_b.g = 0.1
coupling.kind = EE
coupling.lambda = 0.05
coupling.edge_row = 2
initial.T_A = 0.2
initial.T_B = 1
time.t_max = 20
)"));
  EXPECT_EQ(sq.lattice_a.dim, 2);
  EXPECT_EQ(sq.lattice_a.rows, 3);
  EXPECT_EQ(sq.lattice_a.cols, 4);
  EXPECT_EQ(sq.coupling.edge_row, 2);
  EXPECT_EQ(c.lattice_a.dim, 1);
}

TEST(ExperimentConfig, ResolvedEchoIsCompleteAndReparses) {
  const ExperimentConfig c = minimal("profile.times = 3,7\n");
  const auto echo = c.resolved();
  std::set<std::string> keys;
  std::string text;
  for (const auto& [k, v] : echo) {
    EXPECT_TRUE(keys.insert(k).second) << "duplicate echo key " << k;
    if (!v.empty()) text += k + " = " + v + "\n";  // empty lists are the parser default
  }
  for (const char* k : {"tolerance.degeneracy", "tolerance.epsilon", "tolerance.sustain", "tolerance.bracket_lo",
                        "tolerance.bracket_hi", "time.samples", "profile.window", "profile.growing_max",
                        "diagnostics.global_stride", "subsystem.a", "subsystem.b", "scan.probe_time", "output.dir"})
    EXPECT_TRUE(keys.count(k)) << k;
  // The echo is itself a valid config describing the same run.
  const ExperimentConfig again = ExperimentConfig::from_key_values(parse(text));
  EXPECT_EQ(again.resolved(), echo);
}

}  // namespace
}  // namespace glocal
