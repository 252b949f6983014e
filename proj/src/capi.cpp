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


#include "zulf/zulf.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>

#include "zulf/hamiltonian.hpp"
#include "zulf/probe.hpp"
#include "zulf/run.hpp"
#include "zulf/spectrum.hpp"

struct zulf_config {
  zulf::RunConfig value;
};

struct zulf_result {
  zulf::RunOutcome value;
};

struct zulf_system {
  zulf::SpinSystem value;
};

namespace {

thread_local std::string g_last_error;

zulf_status status_of(zulf::ErrorKind kind) {
  switch (kind) {
    case zulf::ErrorKind::domain:
      return ZULF_ERR_DOMAIN;
    case zulf::ErrorKind::parse:
      return ZULF_ERR_PARSE;
    case zulf::ErrorKind::ambiguous:
      return ZULF_ERR_AMBIGUOUS;
    case zulf::ErrorKind::numeric:
      return ZULF_ERR_NUMERIC;
    case zulf::ErrorKind::io:
      return ZULF_ERR_IO;
  }
  return ZULF_ERR_INTERNAL;
}

template <class F>
zulf_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return ZULF_OK;
  } catch (const zulf::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return ZULF_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ZULF_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return ZULF_ERR_INTERNAL;
  }
}

zulf_status bad_argument(const char* what) {
  g_last_error = what;
  return ZULF_ERR_ARGUMENT;
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = zulf::command_names();
  return names;
}

}  // namespace

extern "C" {

const char* zulf_version(void) { return "0.1.0"; }

const char* zulf_last_error(void) { return g_last_error.c_str(); }

void zulf_string_free(char* s) { std::free(s); }

zulf_status zulf_config_new(zulf_config** out) {
  if (!out) return bad_argument("out is null");
  return guarded([&] { *out = new zulf_config{}; });
}

zulf_status zulf_config_from_json(const char* text, const char* origin, zulf_config** out) {
  if (!text || !out) return bad_argument("text and out must be non-null");
  return guarded([&] {
    auto cfg = std::make_unique<zulf_config>();
    cfg->value = zulf::config_from_json(text, origin ? origin : "<config>");
    *out = cfg.release();
  });
}

zulf_status zulf_config_load(const char* path, zulf_config** out) {
  if (!path || !out) return bad_argument("path and out must be non-null");
  return guarded([&] {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw zulf::Error(zulf::ErrorKind::parse, std::string("cannot read ") + path);
    std::ostringstream s;
    s << in.rdbuf();
    auto cfg = std::make_unique<zulf_config>();
    cfg->value = zulf::config_from_json(s.str(), path);
    *out = cfg.release();
  });
}

zulf_status zulf_config_set(zulf_config* config, const char* key, const char* value) {
  if (!config || !key || !value) return bad_argument("config, key and value must be non-null");
  return guarded([&] { config->value = zulf::config_with(config->value, key, value); });
}

zulf_status zulf_config_to_json(const zulf_config* config, char** out) {
  if (!config || !out) return bad_argument("config and out must be non-null");
  return guarded([&] { *out = duplicate(zulf::config_to_json(config->value)); });
}

void zulf_config_free(zulf_config* config) { delete config; }

size_t zulf_command_count(void) { return commands().size(); }

const char* zulf_command_name(size_t index) {
  return index < commands().size() ? commands()[index].c_str() : nullptr;
}

zulf_status zulf_run(const char* command, const zulf_config* config, zulf_result** out) {
  if (!command || !config || !out) return bad_argument("command, config and out must be non-null");
  return guarded([&] {
    auto r = std::make_unique<zulf_result>();
    r->value = zulf::run_command(command, config->value);
    *out = r.release();
  });
}

int zulf_result_exit_code(const zulf_result* result) {
  return result ? static_cast<int>(result->value.exit_code) : -1;
}

const char* zulf_result_summary(const zulf_result* result) {
  return result ? result->value.summary.c_str() : "";
}

const char* zulf_result_output_dir(const zulf_result* result) {
  return result ? result->value.output_dir.c_str() : "";
}

size_t zulf_result_warning_count(const zulf_result* result) {
  return result ? result->value.warnings.size() : 0;
}

const char* zulf_result_warning(const zulf_result* result, size_t index) {
  if (!result || index >= result->value.warnings.size()) return nullptr;
  return result->value.warnings[index].c_str();
}

void zulf_result_free(zulf_result* result) { delete result; }

int zulf_exit_code_for_status(zulf_status status) {
  switch (status) {
    case ZULF_OK:
      return 0;
    case ZULF_ERR_AMBIGUOUS:
      return 3;
    case ZULF_ERR_NUMERIC:
    case ZULF_ERR_INTERNAL:
      return 4;
    default:
      return 2;
  }
}

zulf_status zulf_system_preset(const char* name, zulf_system** out) {
  if (!name || !out) return bad_argument("name and out must be non-null");
  return guarded([&] { *out = new zulf_system{zulf::preset(name)}; });
}

int zulf_system_size(const zulf_system* system) { return system ? system->value.size() : 0; }

void zulf_system_free(zulf_system* system) { delete system; }

zulf_status zulf_catalogue(const zulf_system* system, const double* field_t,
                           const double* omega_hz, const double* guide, zulf_line* lines,
                           size_t capacity, size_t* count) {
  if (!system || !guide || !count) return bad_argument("system, guide and count must be non-null");
  if (capacity > 0 && !lines) return bad_argument("lines is null but capacity > 0");
  return guarded([&] {
    const auto& sys = system->value;
    std::optional<zulf::FieldVector> field;
    std::optional<zulf::RotationVector> rotation;
    if (field_t) field = zulf::FieldVector{field_t[0], field_t[1], field_t[2]};
    if (omega_hz) rotation = zulf::RotationVector{omega_hz[0], omega_hz[1], omega_hz[2]};
    const auto h = zulf::total_hamiltonian(sys, field, rotation);
    const std::vector<double> g(sys.gammas().begin(), sys.gammas().end());
    const auto obs = zulf::collective_operator(sys, g, zulf::Axis::z);
    const auto probe = zulf::thermal_probe(sys, zulf::Vec3(guide[0], guide[1], guide[2]));
    const auto cat = zulf::transition_catalogue(sys, h, probe, obs);
    *count = cat.size();
    for (size_t i = 0; i < cat.size() && i < capacity; ++i) {
      lines[i] = {cat[i].frequency, cat[i].magnitude(), cat[i].phase(), cat[i].bra, cat[i].ket};
    }
  });
}

zulf_status zulf_magnitude_from_splitting(double delta_hz, int n, int k, zulf_mode mode,
                                          double* out) {
  if (!out) return bad_argument("out is null");
  return guarded([&] {
    *out = zulf::magnitude_from_splitting(
        delta_hz, n, k, zulf::constants::gamma_proton, zulf::constants::gamma_carbon13,
        mode == ZULF_MODE_ROTATION ? zulf::EstimationMode::rotation : zulf::EstimationMode::field);
  });
}

}  // extern "C"
