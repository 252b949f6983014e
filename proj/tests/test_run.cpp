// Copyright 2026 The zulf Authors
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


#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "zulf/run.hpp"

using namespace zulf;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("zulf_test_run_" + name);
  fs::remove_all(p);
  return p;
}

std::string read(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("config round trip") {
  const auto c = config_from_json(R"({
    "molecule": "acetonitrile",
    "field": {"theta": 1.5707963267948966, "phi": 0, "magnitude_T": 1e-7},
    "guiding_axes": ["x", [0, 1, 1]],
    "benchmark": {"trials": 200, "seed": 99}
  })", "test");
  CHECK(c.molecule == "acetonitrile");
  REQUIRE(c.field);
  CHECK(c.field->magnitude == 1e-7);
  REQUIRE(c.guiding_axes.size() == 2);
  CHECK(c.guiding_axes[1].isApprox(Vec3(0, 1, 1).normalized()));
  CHECK(c.seed == 99);
  const auto back = config_from_json(config_to_json(c), "again");
  CHECK(config_to_json(back) == config_to_json(c));

  const auto d = config_with(c, "benchmark.noise_sigma", "0.02");
  CHECK(d.noise_sigma == 0.02);
  const auto e = config_with(c, "molecule", "formic_acid");
  CHECK(e.molecule == "formic_acid");
}

TEST_CASE("config errors carry line numbers") {
  try {
    config_from_json("{\n  \"molecule\": \"formic_acid\",\n  \"fieldd\": {}\n}", "cfg.json");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("cfg.json:3") != std::string::npos);
    CHECK(std::string(e.what()).find("fieldd") != std::string::npos);
  }
  try {
    config_from_json("{\n  \"molecule\": \n}", "bad.json");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(config_from_json("{\"field\": {\"theta\": 0}}", "x"), ParseError);
  CHECK_THROWS_AS(config_from_json("{\"guiding_axes\": [\"w\"]}", "x"), ParseError);
  CHECK_THROWS_AS(config_from_json("[]", "x"), ParseError);
  CHECK_THROWS_AS(measurements_from_json("", "empty.json"), ParseError);
}

TEST_CASE("spectrum command writes a run directory") {
  RunConfig c;
  c.molecule = "formic_acid";
  c.field = DirectionSpec{0.0, 0.0, 1e-7};
  c.output_dir = scratch("spectrum").string();
  const auto r = run_command("spectrum", c);
  CHECK(r.exit_code == ExitCode::ok);
  const fs::path dir = r.output_dir;
  for (const char* f : {"config.json", "metadata.json", "catalogue_z.json", "catalogue_z.tsv",
                        "series_z.tsv", "spectrum_z.tsv", "manifolds.json"}) {
    CHECK(fs::exists(dir / f));
  }
  const auto cat = nlohmann::json::parse(read(dir / "catalogue_z.json"));
  REQUIRE(cat["lines"].size() == 1);
  CHECK(cat["lines"][0]["frequency_Hz"].get<double>() == doctest::Approx(222.2).epsilon(2e-4));

  const auto again = config_from_json(read(dir / "config.json"), "snapshot");
  const auto r2 = run_command("spectrum", again);
  CHECK(read(dir / "catalogue_z.json") == read(fs::path(r2.output_dir) / "catalogue_z.json"));
}

TEST_CASE("acetonitrile manifold report") {
  RunConfig c;
  c.molecule = "acetonitrile";
  c.field = DirectionSpec{constants::pi / 2, 0.0, 1e-7};
  c.write_series = false;
  c.output_dir = scratch("acetonitrile").string();
  const auto r = run_command("spectrum", c);
  const auto m = nlohmann::json::parse(read(fs::path(r.output_dir) / "manifolds.json"));
  REQUIRE(m.size() == 2);
  CHECK(m[0]["single_quantum"].size() == 6);
  CHECK(m[0]["center_Hz"].get<double>() == doctest::Approx(272.5));
}

TEST_CASE("estimate command") {
  RunConfig c;
  c.synthesize = DirectionSpec{1.289, 0.047, 1.0788e-7};
  c.output_dir = scratch("estimate").string();
  const auto r = run_command("estimate", c);
  CHECK(r.exit_code == ExitCode::ok);
  const auto res = nlohmann::json::parse(read(fs::path(r.output_dir) / "result.json"));
  CHECK(res["theta"].get<double>() == doctest::Approx(1.289).epsilon(1e-3));
  CHECK(res["magnitude_T"].get<double>() == doctest::Approx(1.0788e-7).epsilon(1e-6));

  // The saved measurements reproduce the estimate.
  RunConfig m;
  m.measurement_files = {(fs::path(r.output_dir) / "measurements.json").string()};
  m.output_dir = scratch("estimate_files").string();
  const auto r2 = run_command("estimate", m);
  const auto res2 = nlohmann::json::parse(read(fs::path(r2.output_dir) / "result.json"));
  CHECK(res2["theta"].get<double>() == res["theta"].get<double>());

  c.guiding_axes = {Vec3::UnitZ()};
  c.use_phases = false;
  const auto amb = run_command("estimate", c);
  CHECK(amb.exit_code == ExitCode::ambiguous);
}

TEST_CASE("benchmark command is reproducible") {
  RunConfig c;
  c.field = DirectionSpec{1.289, 0.047, 1.0788e-7};
  c.trials = 100;
  c.output_dir = scratch("bench").string();
  const auto r = run_command("benchmark", c);
  const auto first = read(fs::path(r.output_dir) / "benchmark.json");
  const auto hist = read(fs::path(r.output_dir) / "histogram_theta.tsv");
  run_command("benchmark", c);
  CHECK(read(fs::path(r.output_dir) / "benchmark.json") == first);
  CHECK(read(fs::path(r.output_dir) / "histogram_theta.tsv") == hist);
  c.trials = 10;
  CHECK_THROWS_AS(run_command("benchmark", c), DomainError);
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ErrorKind::parse) == ExitCode::config);
  CHECK(exit_code_for(ErrorKind::domain) == ExitCode::config);
  CHECK(exit_code_for(ErrorKind::numeric) == ExitCode::numeric);
  CHECK(exit_code_for(ErrorKind::ambiguous) == ExitCode::ambiguous);
  CHECK_THROWS_AS(run_command("plot", RunConfig{}), ParseError);
}
