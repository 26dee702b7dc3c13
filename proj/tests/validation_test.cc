// Copyright 2026 The ubmrps Authors
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


#include "ubmrps/validation.hpp"

#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "ubmrps/error.hpp"

namespace ubmrps {
namespace {

ValidationConfig small_config() {
  ValidationConfig cfg;
  cfg.samples = 3000;
  cfg.times = {0.1, 0.5};
  cfg.integrator.step_size = 0.01;
  cfg.invariance_samples = 1000;
  cfg.panel_size = 5;
  cfg.inversion_samples = 1000;
  cfg.haar_time = 20.0;
  cfg.haar_samples = 500;
  return cfg;
}

TEST(ValidationConfigTest, Rejections) {
  ValidationConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.samples = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  EXPECT_THROW(run_validation_suite(cfg), ConfigError);
  cfg = ValidationConfig{};
  cfg.times = {};
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = ValidationConfig{};
  cfg.times = {1.0, 0.5};
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = ValidationConfig{};
  cfg.integrator.step_size = 0.1;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = ValidationConfig{};
  cfg.dim = 1;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = ValidationConfig{};
  cfg.initial = PureState::basis(3, 0);
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = ValidationConfig{};
  cfg.batteries = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(ValidationNamesTest, DefaultBattery) {
  const auto names = validation_check_names(ValidationConfig{});
  // 5 times x (6 moments + 2 cross moments + 1 observable + 2 entropies),
  // 2 invariance panels, 2 trace checks, 4 x 3 + 3 Haar checks.
  EXPECT_EQ(names.size(), 5u * 11 + 2 + 2 + 15);
  EXPECT_EQ(names.front(), "moment/j=1/p=1/t=0.1");
  EXPECT_EQ(names.back(), "haar/renyi/p=2");
}

TEST(ValidationSuiteTest, SmallRunIsConsistentAndDeterministic) {
  const ValidationConfig cfg = small_config();
  const ValidationResult a = run_validation_suite(cfg);
  const auto names = validation_check_names(cfg);
  ASSERT_EQ(a.reports.size(), names.size());
  for (size_t i = 0; i < names.size(); ++i) EXPECT_EQ(a.reports[i].name, names[i]);
  for (const auto& r : a.reports) {
    EXPECT_EQ(r.pass, std::abs(r.z_score) <= r.threshold) << r.name;
    EXPECT_TRUE(r.pass) << r.name << " z=" << r.z_score;
  }
  EXPECT_EQ(a.panel_members.size(), 10u);
  EXPECT_LT(a.stats.max_unitarity_defect, 1e-10);
  EXPECT_LT(a.max_probability_defect, 1e-12);

  const std::string ja = validation_to_json(cfg, a);
  const std::string jb = validation_to_json(cfg, run_validation_suite(cfg));
  EXPECT_EQ(ja, jb);

  const auto doc = nlohmann::json::parse(ja);
  EXPECT_EQ(doc["config"]["N"], 4);
  EXPECT_EQ(doc["config"]["M"], 3000);
  EXPECT_EQ(doc["reports"].size(), names.size());
  EXPECT_TRUE(doc["all_pass"].get<bool>());
  EXPECT_EQ(doc["reports"][0]["config"]["seed"], cfg.seed);

  ValidationConfig other = cfg;
  other.seed += 1;
  EXPECT_NE(validation_to_json(other, run_validation_suite(other)), ja);
}

TEST(ValidationSuiteTest, TinyThresholdFails) {
  ValidationConfig cfg = small_config();
  cfg.batteries = kBatteryHaar | kBatteryInversion;
  cfg.threshold = 0.1;
  const ValidationResult r = run_validation_suite(cfg);
  EXPECT_FALSE(r.all_passed());
  for (const auto& rep : r.reports) {
    EXPECT_EQ(rep.pass, std::abs(rep.z_score) <= 0.1) << rep.name;
  }
}

TEST(ValidationSuiteTest, BatterySelection) {
  ValidationConfig cfg = small_config();
  cfg.batteries = kBatteryCovariances | kBatteryHaar;
  const auto names = validation_check_names(cfg);
  EXPECT_EQ(names.size(), 2u * 2 + 15);
  EXPECT_EQ(names[0], "covariance/j=1/k=2/t=0.1");
  cfg.batteries = kBatteryInversion;
  EXPECT_EQ(validation_check_names(cfg),
            (std::vector<std::string>{"inversion/imag_trace/t=1",
                                      "trace/real/t=1"}));
}

TEST(HelpersTest, ShortestRepr) {
  EXPECT_EQ(shortest_repr(0.1), "0.1");
  EXPECT_EQ(shortest_repr(5.0), "5");
  EXPECT_EQ(shortest_repr(1.0 / 3.0), "0.3333333333333333");
  EXPECT_EQ(shortest_repr(2.5e-7), "2.5e-07");
}

TEST(HelpersTest, StabilizerFixesState) {
  Eigen::VectorXcd v(4);
  v << Complex(0.1, 0.2), Complex(0.5, -0.3), 0.4, Complex(0.0, 0.6);
  const PureState psi = PureState::normalized(v);
  RngStream rng(2, 0);
  const UnitaryMatrix s = random_stabilizer(psi, rng);
  EXPECT_LT((s.eigen() * psi.eigen() - psi.eigen()).norm(), 1e-12);
  EXPECT_GT((s.eigen() - Eigen::MatrixXcd::Identity(4, 4)).norm(), 0.1);
}

TEST(HelpersTest, DerivedSeedsDiffer) {
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
  EXPECT_NE(partner_seed(derive_seed(7, 1)), derive_seed(7, 2));
  EXPECT_EQ(default_observable(4, 3).eigen(), default_observable(4, 3).eigen());
}

}  // namespace
}  // namespace ubmrps
