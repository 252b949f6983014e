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


#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zulf/error.hpp"
#include "zulf/estimator.hpp"
#include "zulf/spin_system.hpp"
#include "zulf/types.hpp"

namespace zulf {

struct DirectionSpec {
  double theta = 0.0;      // rad
  double phi = 0.0;        // rad
  double magnitude = 0.0;  // T for fields, Hz for rotations
};

/// Everything a run needs; serializes to JSON and back losslessly.
struct RunConfig {
  std::string molecule = "formic_acid";  // preset name
  std::string molecule_file;             // overrides `molecule` when set
  double gamma_c = constants::gamma_carbon13;
  double gamma_h = constants::gamma_proton;
  std::optional<DirectionSpec> field;
  std::optional<DirectionSpec> rotation;
  std::vector<Vec3> guiding_axes;  // empty: command default
  double polarizing_field = kDefaultPolarizingField;
  double temperature = kDefaultTemperature;
  std::optional<double> duration;     // s
  std::optional<double> sample_rate;  // Hz
  double merge_tolerance = 1e-6;
  double amplitude_floor = 1e-10;
  bool write_series = true;

  std::vector<std::string> measurement_files;
  std::optional<DirectionSpec> synthesize;  // estimate from simulated data
  std::vector<double> targets;              // Hz; empty: detected lines
  bool use_phases = true;
  std::optional<double> splitting;          // Hz
  double splitting_sigma = 3e-4;            // Hz
  std::vector<double> sigma_delta_table = {1e-4, 3e-4, 1e-3};
  int manifold = 0;
  Normalization normalization = Normalization::peak;
  double match_tolerance = 0.05;

  double noise_sigma = 0.01;
  int trials = 1000;
  std::uint64_t seed = 1;
  int threads = 0;
  int histogram_bins = 40;

  std::string output_dir;  // empty: $ZULF_OUTPUT_ROOT (or ./zulf-runs) / <command>_<molecule>
};

/// Parses a run configuration. Syntax and semantic errors throw ParseError
/// naming `origin` and the offending line.
RunConfig config_from_json(const std::string& text, const std::string& origin = "<config>");
std::string config_to_json(const RunConfig& config);

/// Sets one dotted key (e.g. "field.theta") from a JSON value text.
RunConfig config_with(const RunConfig& config, const std::string& key,
                      const std::string& json_value);

SpinSystem resolve_molecule(const RunConfig& config);

/// Measurement file: {"guiding_axis": "x" | [x, y, z], "lines": [{"frequency_Hz",
/// "amplitude", "phase_rad"?}, ...]} or {"measurements": [ ... ]}.
std::vector<AmplitudeVector> measurements_from_json(const std::string& text,
                                                    const std::string& origin);
std::string measurements_to_json(const std::vector<AmplitudeVector>& measurements);

std::string result_to_json(const EstimationResult& result);

enum class ExitCode { ok = 0, config = 2, ambiguous = 3, numeric = 4 };

struct RunOutcome {
  ExitCode exit_code = ExitCode::ok;
  std::string summary;  // human-readable, for stdout
  std::string output_dir;
  std::vector<std::string> warnings;
};

std::vector<std::string> command_names();

/// Executes spectrum, estimate, estimate-rotation, benchmark,
/// list-transitions or presets. Library errors propagate as zulf::Error.
RunOutcome run_command(const std::string& command, const RunConfig& config);

/// Maps an error kind to the process exit code.
ExitCode exit_code_for(ErrorKind kind);

}  // namespace zulf
