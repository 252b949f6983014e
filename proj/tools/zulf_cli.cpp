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


#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "zulf/zulf.h"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::string> molecule, molecule_file, out, normalization;
  std::optional<double> theta, phi, field, omega, sigma, splitting;
  std::optional<int> trials, threads;
  std::optional<unsigned long long> seed;
  std::vector<std::string> axes, measurements, sets;
  bool no_phases = false;
  bool no_series = false;
};

class Failure {
 public:
  explicit Failure(zulf_status s) : status(s) {}
  zulf_status status;
};

void check(zulf_status s) {
  if (s != ZULF_OK) throw Failure(s);
}

void set(zulf_config* c, const std::string& key, const nlohmann::json& value) {
  check(zulf_config_set(c, key.c_str(), value.dump().c_str()));
}

nlohmann::json current(const zulf_config* c) {
  char* text = nullptr;
  check(zulf_config_to_json(c, &text));
  auto j = nlohmann::json::parse(text);
  zulf_string_free(text);
  return j;
}

// Applies --theta/--phi/--field|--omega to one direction section.
void direction(zulf_config* c, const Overrides& o, const std::string& section,
               const std::string& magnitude_key, std::optional<double> magnitude) {
  if (!o.theta && !o.phi && !magnitude) return;
  nlohmann::json j = current(c);
  nlohmann::json* node = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = section.find('.', start);
    const auto part = section.substr(start, dot == std::string::npos ? dot : dot - start);
    if (!node->contains(part)) {
      node = nullptr;
      break;
    }
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  nlohmann::json d = node && node->is_object()
                         ? *node
                         : nlohmann::json{{"theta", 0.0}, {"phi", 0.0}, {magnitude_key, 0.0}};
  if (o.theta) d["theta"] = *o.theta;
  if (o.phi) d["phi"] = *o.phi;
  if (magnitude) d[magnitude_key] = *magnitude;
  set(c, section, d);
}

void apply(zulf_config* c, const std::string& command, const Overrides& o) {
  if (o.molecule) set(c, "molecule", *o.molecule);
  if (o.molecule_file) set(c, "molecule_file", *o.molecule_file);
  if (!o.axes.empty()) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& x : o.axes) a.push_back(x);
    set(c, "guiding_axes", a);
  }
  if (o.out) set(c, "output_dir", *o.out);
  if (o.normalization) set(c, "estimate.normalization", *o.normalization);
  if (o.sigma) set(c, "benchmark.noise_sigma", *o.sigma);
  if (o.trials) set(c, "benchmark.trials", *o.trials);
  if (o.seed) set(c, "benchmark.seed", *o.seed);
  if (o.threads) set(c, "benchmark.threads", *o.threads);
  if (o.splitting) set(c, "estimate.splitting_Hz", *o.splitting);
  if (o.no_phases) set(c, "estimate.use_phases", false);
  if (o.no_series) set(c, "acquisition.write_series", false);
  if (!o.measurements.empty()) set(c, "estimate.measurement_files", o.measurements);

  if (command == "estimate") {
    direction(c, o, "estimate.synthesize", "magnitude", o.field);
  } else if (command == "estimate-rotation") {
    direction(c, o, "estimate.synthesize", "magnitude", o.omega);
  } else if (o.omega && !o.field) {
    direction(c, o, "rotation", "omega_Hz", o.omega);
  } else {
    direction(c, o, "field", "magnitude_T", o.field);
    if (o.omega) {
      Overrides only_omega;
      direction(c, only_omega, "rotation", "omega_Hz", o.omega);
    }
  }

  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::fprintf(stderr, "zulf: --set expects key=value, got '%s'\n", kv.c_str());
      throw Failure(ZULF_ERR_PARSE);
    }
    check(zulf_config_set(c, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
  }
}

int execute(const std::string& command, const Overrides& o) {
  zulf_config* config = nullptr;
  zulf_result* result = nullptr;
  try {
    if (o.config_path.empty()) {
      check(zulf_config_new(&config));
    } else {
      check(zulf_config_load(o.config_path.c_str(), &config));
    }
    apply(config, command, o);
    check(zulf_run(command.c_str(), config, &result));
  } catch (const Failure& f) {
    std::fprintf(stderr, "zulf %s: %s\n", command.c_str(), zulf_last_error());
    zulf_config_free(config);
    return zulf_exit_code_for_status(f.status);
  }
  std::fputs(zulf_result_summary(result), stdout);
  for (size_t i = 0; i < zulf_result_warning_count(result); ++i) {
    std::fprintf(stderr, "warning: %s\n", zulf_result_warning(result, i));
  }
  const std::string dir = zulf_result_output_dir(result);
  if (!dir.empty()) std::fprintf(stderr, "outputs written to %s\n", dir.c_str());
  const int code = zulf_result_exit_code(result);
  zulf_result_free(result);
  zulf_config_free(config);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zero- to ultralow-field NMR spectra and field/rotation vector estimation"};
  app.set_version_flag("--version", zulf_version());
  app.require_subcommand(1);

  std::map<std::string, Overrides> overrides;
  const std::map<std::string, std::string> help = {
      {"spectrum", "simulate catalogues, time series and spectra for each guiding axis"},
      {"estimate", "estimate a magnetic field vector from line amplitudes"},
      {"estimate-rotation", "estimate a rotation vector from line amplitudes"},
      {"benchmark", "Monte Carlo precision of the vector estimate"},
      {"list-transitions", "print the transition catalogue"},
      {"presets", "list built-in molecules"}};

  for (size_t i = 0; i < zulf_command_count(); ++i) {
    const std::string name = zulf_command_name(i);
    auto& o = overrides[name];
    auto* sub = app.add_subcommand(name, help.count(name) ? help.at(name) : name);
    if (name == "presets") continue;
    sub->add_option("-c,--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--molecule", o.molecule, "molecule preset name");
    sub->add_option("--molecule-file", o.molecule_file, "molecule JSON file");
    sub->add_option("--theta", o.theta, "polar angle (rad)");
    sub->add_option("--phi", o.phi, "azimuthal angle (rad)");
    sub->add_option("--field", o.field, "field magnitude (T)");
    sub->add_option("--omega", o.omega, "rotation rate (Hz)");
    sub->add_option("--axes", o.axes, "guiding axes (x, y, z)")->delimiter(',');
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--set", o.sets, "override any config key, e.g. probe.temperature_K=300");
    if (name == "spectrum") {
      sub->add_flag("--no-series", o.no_series, "skip time series and spectrum files");
    }
    if (name == "estimate" || name == "estimate-rotation" || name == "benchmark") {
      sub->add_option("--normalization", o.normalization, "peak or l2");
      sub->add_flag("--no-phases", o.no_phases, "fit magnitudes only");
    }
    if (name == "estimate" || name == "estimate-rotation") {
      sub->add_option("-m,--measurement", o.measurements, "measurement JSON file");
      sub->add_option("--splitting", o.splitting, "single-quantum splitting (Hz)");
    }
    if (name == "benchmark") {
      sub->add_option("--sigma", o.sigma, "amplitude noise sigma");
      sub->add_option("--trials", o.trials, "Monte Carlo trials");
      sub->add_option("--seed", o.seed, "random seed");
      sub->add_option("--threads", o.threads, "worker threads (0 = all cores)");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  for (auto* sub : app.get_subcommands()) {
    return execute(sub->get_name(), overrides[sub->get_name()]);
  }
  return 2;
}
