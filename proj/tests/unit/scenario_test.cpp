/*
 * Copyright 2026 The coaxsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "coaxsim/error.hpp"
#include "coaxsim/report.hpp"
#include "coaxsim/runner.hpp"
#include "coaxsim/scenario.hpp"
#include "coaxsim/version.hpp"

using namespace coaxsim;

TEST_CASE("an empty document is all defaults but not runnable") {
  Scenario s = parse_scenario("");
  CHECK(s == Scenario{});
  CHECK_FALSE(s.experiment);
  CHECK_NOTHROW(s.validate());
  CHECK_THROWS_WITH_AS(s.validate_runnable(), doctest::Contains("experiment kind required"), ConfigError);
}

TEST_CASE("negative seed is a range error with its location") {
  CHECK_THROWS_WITH_AS(parse_scenario("seed: -1\n", "s.yaml"), doctest::Contains("s.yaml:1:7: seed: out of range"),
                       ConfigError);
}

TEST_CASE("unknown and malformed keys are rejected") {
  CHECK_THROWS_WITH_AS(parse_scenario("trafic: {}\n", "s.yaml"), doctest::Contains("trafic: unknown key"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_scenario("traffic:\n  read_fraction: abc\n"), doctest::Contains("traffic.read_fraction"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_scenario("traffic:\n  read_fraction: 1.5\n", "s.yaml"), doctest::Contains("s.yaml"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("experiment: dance\n"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("a: [1, 2"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("dram:\n  controller:\n    page_policy: weird\n"), ConfigError);
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.yaml"), ConfigError);
}

TEST_CASE("emitted configuration reloads to an identical scenario") {
  Scenario s;
  s.experiment = ExperimentKind::kCompare;
  s.seed = 77;
  s.dram.timing.t_rcd_ns = 14.5;
  s.dram.controller.page_policy = PagePolicy::kClosed;
  s.traffic.arrival = ArrivalProcess::kBursty;
  s.traffic.read_fraction = 0.75;
  s.distributions = {SyntheticLatencySpec::fixed(120), SyntheticLatencySpec::bimodal(90, 240, 0.8)};
  s.interfaces.push_back(InterfaceSpec{"pcie5-x12", 48, 48.0, true});
  s.format = ReportFormat::kJson;
  s.sweep_utilizations = {0.15, 0.45};
  CHECK(parse_scenario(emit_scenario(s)) == s);
  CHECK(parse_scenario(emit_scenario(Scenario{})) == Scenario{});
}

TEST_CASE("scenario files load from disk") {
  auto path = std::filesystem::temp_directory_path() / "coaxsim_scenario_test.yaml";
  {
    std::ofstream out(path);
    out << "experiment: sweep-load\nseed: 5\nsweep:\n  utilizations: [0.2, 0.4]\n";
  }
  Scenario s = load_scenario(path.string());
  CHECK(s.experiment == ExperimentKind::kSweepLoad);
  CHECK(s.seed == 5);
  CHECK(s.sweep_utilizations == std::vector<double>{0.2, 0.4});
  std::filesystem::remove(path);
}

TEST_CASE("reports embed version, seed, prng and configuration") {
  Scenario s;
  s.experiment = ExperimentKind::kPins;
  Report r = run_experiment(s);
  std::string csv = to_csv(r);
  CHECK(csv.find(std::string(kVersion)) != std::string::npos);
  CHECK(csv.find("mt19937_64") != std::string::npos);
  CHECK(csv.find("#   experiment: pins") != std::string::npos);
  std::string json = to_json(r);
  CHECK(json.find("\"schema_version\": 1") != std::string::npos);
  CHECK(json.find("\"seed\": 1") != std::string::npos);
}

TEST_CASE("sweep report has the documented columns") {
  Scenario s;
  s.experiment = ExperimentKind::kSweepLoad;
  s.sweep_utilizations = {0.1, 0.3, 0.5, 0.6};
  s.traffic.requests = 5000;
  Report r = run_experiment(s);
  CHECK(r.table.columns == std::vector<std::string>{"util", "avg_ns", "p50", "p90", "p99"});
  CHECK(r.table.rows.size() == 4);
}

TEST_CASE("variance report has four rows") {
  Scenario s;
  s.experiment = ExperimentKind::kVariance;
  s.instructions = 50000;
  Report r = run_experiment(s);
  CHECK(r.table.rows.size() == 4);
  CHECK(r.table.number(0, "relative_ipc") == 1.0);
}

TEST_CASE("identical scenario and seed give byte-identical reports") {
  for (ExperimentKind k : {ExperimentKind::kRun, ExperimentKind::kCompare, ExperimentKind::kAsymCompare,
                           ExperimentKind::kSweepLoad}) {
    Scenario s;
    s.experiment = k;
    s.traffic.requests = 4000;
    s.sweep_utilizations = {0.2, 0.5};
    Report a = run_experiment(s), b = run_experiment(s);
    CHECK(to_csv(a) == to_csv(b));
    CHECK(to_json(a) == to_json(b));
    s.seed = 2;
    if (k != ExperimentKind::kSweepLoad) CHECK(to_csv(run_experiment(s)) != to_csv(a));
  }
}
