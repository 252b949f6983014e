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


#include "zulf/run.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "zulf/analytic.hpp"
#include "zulf/hamiltonian.hpp"
#include "zulf/probe.hpp"
#include "zulf/spectrum.hpp"

namespace zulf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

class Reader {
 public:
  Reader(const std::string& text, std::string origin) : text_(text), origin_(std::move(origin)) {}

  json parse() const {
    try {
      return json::parse(text_);
    } catch (const json::parse_error& e) {
      throw ParseError(origin_ + ": " + e.what());
    }
  }

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    std::ostringstream msg;
    msg << origin_;
    const int line = line_of(key);
    if (line > 0) msg << ":" << line;
    msg << ": " << message;
    throw ParseError(msg.str());
  }

  void only(const json& obj, const std::string& where, std::initializer_list<const char*> keys) const {
    if (!obj.is_object()) fail(where, "'" + where + "' must be an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      bool known = false;
      for (const char* k : keys) known = known || it.key() == k;
      if (!known) fail(it.key(), "unknown key '" + it.key() + "' in " + where);
    }
  }

  double number(const json& obj, const char* key) const {
    const json& v = obj.at(key);
    if (!v.is_number()) fail(key, std::string("'") + key + "' must be a number");
    return v.get<double>();
  }

  int integer(const json& obj, const char* key) const {
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(key, std::string("'") + key + "' must be an integer");
    return v.get<int>();
  }

  bool boolean(const json& obj, const char* key) const {
    const json& v = obj.at(key);
    if (!v.is_boolean()) fail(key, std::string("'") + key + "' must be true or false");
    return v.get<bool>();
  }

  std::string string(const json& obj, const char* key) const {
    const json& v = obj.at(key);
    if (!v.is_string()) fail(key, std::string("'") + key + "' must be a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const json& obj, const char* key) const {
    const json& v = obj.at(key);
    if (!v.is_array()) fail(key, std::string("'") + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) fail(key, std::string("'") + key + "' must be an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  Vec3 axis(const json& v, const char* key) const {
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      if (s == "x") return Vec3::UnitX();
      if (s == "y") return Vec3::UnitY();
      if (s == "z") return Vec3::UnitZ();
      fail(key, "guiding axis must be \"x\", \"y\", \"z\" or a 3-vector, got \"" + s + "\"");
    }
    if (v.is_array() && v.size() == 3 && v[0].is_number() && v[1].is_number() &&
        v[2].is_number()) {
      const Vec3 a(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
      const double n = a.norm();
      if (n == 0.0) fail(key, "guiding axis has zero norm");
      if (std::abs(n - 1.0) <= 4 * std::numeric_limits<double>::epsilon()) return a;
      return a / n;
    }
    fail(key, "guiding axis must be \"x\", \"y\", \"z\" or a 3-vector");
  }

  DirectionSpec direction(const json& obj, const char* key, const char* magnitude_key) const {
    only(obj, key, {"theta", "phi", magnitude_key});
    for (const char* k : {"theta", "phi", magnitude_key}) {
      if (!obj.contains(k)) fail(key, std::string("'") + key + "' needs '" + k + "'");
    }
    DirectionSpec d{number(obj, "theta"), number(obj, "phi"), number(obj, magnitude_key)};
    if (d.magnitude < 0.0) fail(magnitude_key, std::string("'") + magnitude_key + "' must be >= 0");
    return d;
  }

 private:
  int line_of(const std::string& key) const {
    const std::string needle = "\"" + key + "\"";
    const auto pos = text_.find(needle);
    if (pos == std::string::npos) return 0;
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<long>(pos), '\n'));
  }

  const std::string& text_;
  std::string origin_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

json axis_json(const Vec3& a) {
  if (a == Vec3::UnitX()) return "x";
  if (a == Vec3::UnitY()) return "y";
  if (a == Vec3::UnitZ()) return "z";
  return json::array({a.x(), a.y(), a.z()});
}

std::string axis_tag(const Vec3& a, std::size_t index) {
  const json j = axis_json(a);
  return j.is_string() ? j.get<std::string>() : "g" + std::to_string(index);
}

json label_json(const StateLabel& s) { return {{"f", s.f}, {"m_f", s.m}, {"k", s.k}}; }

json line_json(const TransitionLine& l) {
  json j = {{"frequency_Hz", l.frequency}, {"magnitude", l.magnitude()},
            {"phase_rad", l.phase()},      {"bra", l.bra},
            {"ket", l.ket},                {"pairs", l.pairs}};
  if (l.label) {
    j["lower"] = label_json(l.label->lower);
    j["upper"] = label_json(l.label->upper);
  }
  return j;
}

std::ostringstream numeric_stream() {
  std::ostringstream s;
  s << std::setprecision(17);
  return s;
}

json report_json(const SplittingReport& r) {
  auto lines = [](const std::vector<AnalyticLine>& v) {
    json a = json::array();
    for (const auto& l : v) {
      a.push_back({{"frequency_Hz", l.frequency},
                   {"lower", label_json(l.label.lower)},
                   {"upper", label_json(l.label.upper)}});
    }
    return a;
  };
  return {{"n", r.n},
          {"k", r.k},
          {"center_Hz", r.center},
          {"multiplicity", r.multiplicity},
          {"delta_zq_Hz", r.delta_zq},
          {"delta_sq_Hz", r.delta_sq},
          {"regime_ratio", r.regime_ratio},
          {"regime_warning", r.regime_warning},
          {"zero_quantum", lines(r.zero_quantum)},
          {"single_quantum", lines(r.single_quantum)}};
}

fs::path output_dir(const RunConfig& config, const std::string& command,
                    const SpinSystem& system) {
  fs::path dir;
  if (!config.output_dir.empty()) {
    dir = config.output_dir;
  } else {
    const char* root = std::getenv("ZULF_OUTPUT_ROOT");
    dir = fs::path(root && *root ? root : "zulf-runs") / (command + "_" + system.name());
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

void write_snapshot(const fs::path& dir, const RunConfig& config, const std::string& command) {
  write_file(dir / "config.json", config_to_json(config) + "\n");
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::ostringstream stamp;
  stamp << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
  const json meta = {{"tool", "zulf"}, {"version", kVersion}, {"command", command},
                     {"created_utc", stamp.str()}};
  write_file(dir / "metadata.json", meta.dump(2) + "\n");
}

std::optional<FieldVector> field_of(const RunConfig& c) {
  if (!c.field) return std::nullopt;
  return FieldVector{c.field->theta, c.field->phi, c.field->magnitude};
}

std::optional<RotationVector> rotation_of(const RunConfig& c) {
  if (!c.rotation) return std::nullopt;
  return RotationVector{c.rotation->theta, c.rotation->phi, c.rotation->magnitude};
}

std::vector<Vec3> axes_or(const RunConfig& c, std::vector<Vec3> fallback) {
  return c.guiding_axes.empty() ? fallback : c.guiding_axes;
}

struct Simulated {
  Vec3 axis;
  std::vector<TransitionLine> lines;
};

std::vector<Simulated> simulate(const RunConfig& config, const SpinSystem& system) {
  const Hamiltonian h = total_hamiltonian(system, field_of(config), rotation_of(config));
  const std::vector<double> g(system.gammas().begin(), system.gammas().end());
  const SpinOperator obs = collective_operator(system, g, Axis::z);
  CatalogueOptions opt;
  opt.merge_tolerance = config.merge_tolerance;
  opt.amplitude_floor = config.amplitude_floor;
  std::vector<Simulated> out;
  for (const auto& axis : axes_or(config, {Vec3::UnitZ()})) {
    const ProbeState probe =
        thermal_probe(system, axis, config.polarizing_field, config.temperature);
    out.push_back({axis, transition_catalogue(system, h, probe, obs, opt)});
  }
  return out;
}

std::string line_table(const std::vector<TransitionLine>& lines) {
  auto s = numeric_stream();
  s << "frequency_Hz\tmagnitude\tphase_rad\tbra\tket\tlower(f,m_f,k)\tupper(f,m_f,k)\n";
  for (const auto& l : lines) {
    s << l.frequency << '\t' << l.magnitude() << '\t' << l.phase() << '\t' << l.bra << '\t'
      << l.ket;
    if (l.label) {
      s << "\t(" << l.label->lower.f << "," << l.label->lower.m << "," << l.label->lower.k << ")\t("
        << l.label->upper.f << "," << l.label->upper.m << "," << l.label->upper.k << ")";
    } else {
      s << "\t-\t-";
    }
    s << '\n';
  }
  return s.str();
}

RunOutcome cmd_presets() {
  json out = json::array();
  for (const auto& name : preset_names()) {
    const SpinSystem s = preset(name);
    out.push_back({{"name", name},
                   {"protons", s.size() - 1},
                   {"J_Hz", s.coupling(0, 1)},
                   {"tau_coh_s", s.coherence_time()}});
  }
  RunOutcome r;
  r.summary = out.dump(2) + "\n";
  return r;
}

RunOutcome cmd_list(const RunConfig& config) {
  const SpinSystem system = resolve_molecule(config);
  RunOutcome r;
  std::ostringstream s;
  for (const auto& sim : simulate(config, system)) {
    s << "# guiding axis " << axis_json(sim.axis).dump() << ", " << sim.lines.size() << " lines\n";
    s << line_table(sim.lines);
  }
  r.summary = s.str();
  return r;
}

RunOutcome cmd_spectrum(const RunConfig& config) {
  const SpinSystem system = resolve_molecule(config);
  const auto sims = simulate(config, system);
  const fs::path dir = output_dir(config, "spectrum", system);
  write_snapshot(dir, config, "spectrum");
  write_file(dir / "molecule.json", molecule_to_json_text(system) + "\n");

  RunOutcome r;
  r.output_dir = dir.string();
  std::ostringstream summary;
  summary << std::setprecision(10);
  for (std::size_t i = 0; i < sims.size(); ++i) {
    const auto& sim = sims[i];
    const std::string tag = axis_tag(sim.axis, i);
    std::optional<Acquisition> acq;
    if (config.duration || config.sample_rate) {
      const Acquisition d = default_acquisition(sim.lines, system.coherence_time());
      acq = Acquisition{config.duration.value_or(d.duration), config.sample_rate.value_or(d.sample_rate)};
    }
    const Spectrum spec = make_spectrum(sim.lines, system.coherence_time(), acq);
    json cat = {{"guiding_axis", axis_json(sim.axis)},
                {"linewidth_Hz", spec.linewidth},
                {"duration_s", spec.acquisition.duration},
                {"sample_rate_Hz", spec.acquisition.sample_rate},
                {"lines", json::array()}};
    for (const auto& l : sim.lines) cat["lines"].push_back(line_json(l));
    write_file(dir / ("catalogue_" + tag + ".json"), cat.dump(2) + "\n");
    write_file(dir / ("catalogue_" + tag + ".tsv"), line_table(sim.lines));

    if (config.write_series) {
      const TimeSeries series = time_signal(sim.lines, system.coherence_time(),
                                            spec.acquisition.duration, spec.acquisition.sample_rate);
      auto ts = numeric_stream();
      ts << "t_s\tsignal\n";
      for (std::size_t k = 0; k < series.values.size(); ++k) {
        ts << series.time(k) << '\t' << series.values[k] << '\n';
      }
      write_file(dir / ("series_" + tag + ".tsv"), ts.str());
      const FourierSpectrum f = fourier_spectrum(series);
      auto fsx = numeric_stream();
      fsx << "frequency_Hz\tmagnitude\treal\timag\n";
      for (std::size_t k = 0; k < f.values.size(); ++k) {
        fsx << f.frequencies[k] << '\t' << std::abs(f.values[k]) << '\t' << f.values[k].real()
            << '\t' << f.values[k].imag() << '\n';
      }
      write_file(dir / ("spectrum_" + tag + ".tsv"), fsx.str());
    }
    summary << "guiding axis " << axis_json(sim.axis).dump() << ": " << sim.lines.size()
            << " lines\n";
    for (const auto& l : sim.lines) {
      summary << "  " << l.frequency << " Hz  magnitude " << l.magnitude() << '\n';
    }
  }

  const int n = star_satellite_count(system);
  const bool field_only = config.field && !config.rotation;
  const bool rotation_only = config.rotation && !config.field;
  if (n >= 1 && (field_only || rotation_only || (!config.field && !config.rotation))) {
    json manifolds = json::array();
    const double J = system.coupling(0, 1);
    for (int k = 0; k <= max_manifold(n); ++k) {
      const SplittingReport rep =
          rotation_only ? rotation_lines(n, k, J, config.rotation->magnitude)
                        : zeeman_lines(n, k, J, field_only ? config.field->magnitude : 0.0,
                                       system.gamma(1), system.gamma(0));
      if (rep.regime_warning) {
        r.warnings.push_back("manifold k=" + std::to_string(k) +
                             " outside the strong-coupling regime; analytic lines are approximate");
      }
      manifolds.push_back(report_json(rep));
    }
    write_file(dir / "manifolds.json", manifolds.dump(2) + "\n");
  }
  r.summary = summary.str();
  return r;
}

struct Prepared {
  std::vector<AmplitudeVector> measurements;
  EstimationMode mode;
};

double infer_splitting(const std::vector<AmplitudeVector>& ms) {
  double delta = 0.0;
  std::size_t best = 0;
  for (const auto& m : ms) {
    double top = 0.0;
    for (double a : m.magnitudes) top = std::max(top, a);
    std::vector<double> f;
    for (std::size_t t = 0; t < m.magnitudes.size(); ++t) {
      if (m.magnitudes[t] > 1e-6 * top) f.push_back(m.frequencies[t]);
    }
    if (f.size() < 2) continue;
    const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
    if (f.size() > best || (f.size() == best && *hi - *lo > delta)) {
      best = f.size();
      delta = *hi - *lo;
    }
  }
  if (best < 2) throw DomainError("cannot infer the splitting: no measurement has two lines");
  return delta;
}

RunOutcome cmd_estimate(const RunConfig& config, EstimationMode mode) {
  const SpinSystem system = resolve_molecule(config);
  const std::string command = mode == EstimationMode::field ? "estimate" : "estimate-rotation";
  RunOutcome r;

  std::vector<AmplitudeVector> ms;
  if (!config.measurement_files.empty()) {
    for (const auto& path : config.measurement_files) {
      auto part = measurements_from_json(read_file(path), path);
      ms.insert(ms.end(), part.begin(), part.end());
    }
  } else if (config.synthesize) {
    const auto& s = *config.synthesize;
    const auto axes = axes_or(config, {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()});
    const auto targets = config.targets.empty()
                             ? default_targets(system, s.magnitude, mode)
                             : config.targets;
    SynthesisOptions opt;
    opt.polarizing_field = config.polarizing_field;
    opt.temperature = config.temperature;
    opt.tolerance = config.match_tolerance;
    ms = synthesize_measurements(system, s.theta, s.phi, s.magnitude, mode, axes, targets, opt);
  } else {
    throw ParseError(command + " needs estimate.measurement_files or estimate.synthesize");
  }
  if (!config.use_phases) {
    for (auto& m : ms) m.phases.reset();
  }

  double delta = 0.0;
  if (config.splitting) {
    delta = *config.splitting;
  } else {
    delta = infer_splitting(ms);
    if (mode == EstimationMode::field && star_satellite_count(system) != 1) {
      r.warnings.push_back("splitting inferred from the outermost lines; set estimate.splitting_Hz "
                           "to the inner single-quantum doublet for n > 1");
    }
  }
  const int n = star_satellite_count(system);
  if (mode == EstimationMode::field && n < 1) {
    throw DomainError("the splitting law needs a 13CH_n star molecule");
  }
  const int nn = std::max(n, 1);
  EstimatorOptions opt;
  opt.normalization = config.normalization;
  opt.match_tolerance = config.match_tolerance;
  opt.magnitude_sigma = magnitude_from_splitting(config.splitting_sigma, nn, config.manifold,
                                                 system.gamma(std::min(1, system.size() - 1)),
                                                 system.gamma(0), mode);
  const double magnitude = magnitude_from_splitting(
      delta, nn, config.manifold, system.gamma(std::min(1, system.size() - 1)), system.gamma(0),
      mode);
  const EstimationResult result =
      mode == EstimationMode::field ? orientation_estimate(ms, system, magnitude, mode, opt)
                                    : rotation_estimate(ms, system, delta, opt);

  const fs::path dir = output_dir(config, command, system);
  r.output_dir = dir.string();
  write_snapshot(dir, config, command);
  write_file(dir / "measurements.json", measurements_to_json(ms) + "\n");
  json res = json::parse(result_to_json(result));
  res["splitting_Hz"] = delta;
  write_file(dir / "result.json", res.dump(2) + "\n");

  r.warnings.insert(r.warnings.end(), result.warnings.begin(), result.warnings.end());
  std::ostringstream s;
  s << std::setprecision(10) << "theta " << result.theta << " rad\nphi " << result.phi
    << " rad\n"
    << (mode == EstimationMode::field ? "B " : "Omega ") << result.magnitude
    << (mode == EstimationMode::field ? " T" : " Hz") << " (+- " << result.magnitude_sigma
    << ")\nresidual " << result.residual << "\ncandidates " << result.ambiguity_set.size()
    << (result.ambiguous ? " (ambiguous)" : "") << '\n';
  r.summary = s.str();
  if (result.ambiguous) r.exit_code = ExitCode::ambiguous;
  return r;
}

RunOutcome cmd_benchmark(const RunConfig& config) {
  const SpinSystem system = resolve_molecule(config);
  MonteCarloConfig mc;
  if (config.field) {
    mc.mode = EstimationMode::field;
    mc.theta = config.field->theta;
    mc.phi = config.field->phi;
    mc.magnitude = config.field->magnitude;
  } else if (config.rotation) {
    mc.mode = EstimationMode::rotation;
    mc.theta = config.rotation->theta;
    mc.phi = config.rotation->phi;
    mc.magnitude = config.rotation->magnitude;
  } else {
    throw ParseError("benchmark needs a field or rotation section");
  }
  mc.axes = axes_or(config, {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()});
  mc.targets = config.targets;
  mc.noise_sigma = config.noise_sigma;
  mc.trials = config.trials;
  mc.seed = config.seed;
  mc.use_phases = config.use_phases;
  mc.threads = config.threads;
  mc.histogram_bins = config.histogram_bins;
  mc.estimator.normalization = config.normalization;
  mc.estimator.match_tolerance = config.match_tolerance;
  const MonteCarloResult res = monte_carlo_precision(system, mc);

  const int n = std::max(star_satellite_count(system), 1);
  const auto table = splitting_propagation(config.sigma_delta_table, n, config.manifold,
                                           system.gamma(std::min(1, system.size() - 1)),
                                           system.gamma(0), mc.mode);

  const fs::path dir = output_dir(config, "benchmark", system);
  write_snapshot(dir, config, "benchmark");
  auto hist = [](const Histogram& h) {
    auto s = numeric_stream();
    s << "bin_low\tbin_high\tcount\n";
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
      s << h.low + b * h.bin_width() << '\t' << h.low + (b + 1) * h.bin_width() << '\t'
        << h.counts[b] << '\n';
    }
    return s.str();
  };
  write_file(dir / "histogram_theta.tsv", hist(res.theta_histogram));
  write_file(dir / "histogram_phi.tsv", hist(res.phi_histogram));
  auto dev = numeric_stream();
  dev << "dtheta_rad\tdphi_rad\n";
  for (std::size_t i = 0; i < res.theta_deviation.size(); ++i) {
    dev << res.theta_deviation[i] << '\t' << res.phi_deviation[i] << '\n';
  }
  write_file(dir / "deviations.tsv", dev.str());
  auto prop = numeric_stream();
  prop << "sigma_delta_Hz\tsigma_" << (mc.mode == EstimationMode::field ? "B_T" : "Omega_Hz")
       << '\n';
  for (const auto& row : table) prop << row.sigma_delta << '\t' << row.sigma_magnitude << '\n';
  write_file(dir / "splitting_propagation.tsv", prop.str());

  json out = {{"mode", mode_name(mc.mode)},
              {"trials", res.trials},
              {"failures", res.failures},
              {"ambiguous_trials", res.ambiguous},
              {"noise_sigma", mc.noise_sigma},
              {"seed", mc.seed},
              {"normalization", normalization_name(mc.estimator.normalization)},
              {"sigma_theta_rad", res.sigma_theta},
              {"sigma_phi_rad", res.sigma_phi},
              {"mean_theta_deviation_rad", res.mean_theta},
              {"mean_phi_deviation_rad", res.mean_phi},
              {"splitting_propagation", json::array()}};
  for (const auto& row : table) {
    out["splitting_propagation"].push_back(
        {{"sigma_delta_Hz", row.sigma_delta}, {"sigma_magnitude", row.sigma_magnitude}});
  }
  write_file(dir / "benchmark.json", out.dump(2) + "\n");

  RunOutcome r;
  r.output_dir = dir.string();
  r.warnings = res.failure_messages;
  std::ostringstream s;
  s << std::setprecision(6) << "trials " << res.trials << " (failures " << res.failures
    << ")\nsigma_theta " << res.sigma_theta << " rad\nsigma_phi " << res.sigma_phi << " rad\n";
  for (const auto& row : table) {
    s << "sigma_delta " << row.sigma_delta << " Hz -> sigma "
      << (mc.mode == EstimationMode::field ? "B " : "Omega ") << row.sigma_magnitude << '\n';
  }
  r.summary = s.str();
  return r;
}

}  // namespace

RunConfig config_from_json(const std::string& text, const std::string& origin) {
  const Reader rd(text, origin);
  const json j = rd.parse();
  if (!j.is_object()) throw ParseError(origin + ": configuration must be a JSON object");
  rd.only(j, "configuration",
          {"molecule", "molecule_file", "constants", "field", "rotation", "guiding_axes", "probe",
           "acquisition", "catalogue", "estimate", "benchmark", "output_dir"});
  RunConfig c;
  if (j.contains("molecule")) c.molecule = rd.string(j, "molecule");
  if (j.contains("molecule_file")) c.molecule_file = rd.string(j, "molecule_file");
  if (j.contains("constants")) {
    const json& k = j["constants"];
    rd.only(k, "constants", {"gamma_c", "gamma_h"});
    if (k.contains("gamma_c")) c.gamma_c = rd.number(k, "gamma_c");
    if (k.contains("gamma_h")) c.gamma_h = rd.number(k, "gamma_h");
  }
  if (j.contains("field") && !j["field"].is_null()) {
    c.field = rd.direction(j["field"], "field", "magnitude_T");
  }
  if (j.contains("rotation") && !j["rotation"].is_null()) {
    c.rotation = rd.direction(j["rotation"], "rotation", "omega_Hz");
  }
  if (j.contains("guiding_axes")) {
    const json& a = j["guiding_axes"];
    if (!a.is_array()) rd.fail("guiding_axes", "'guiding_axes' must be an array");
    for (const auto& x : a) c.guiding_axes.push_back(rd.axis(x, "guiding_axes"));
  }
  if (j.contains("probe")) {
    const json& p = j["probe"];
    rd.only(p, "probe", {"polarizing_field_T", "temperature_K"});
    if (p.contains("polarizing_field_T")) c.polarizing_field = rd.number(p, "polarizing_field_T");
    if (p.contains("temperature_K")) c.temperature = rd.number(p, "temperature_K");
    if (c.polarizing_field < 0.0) rd.fail("polarizing_field_T", "polarizing field must be >= 0");
    if (c.temperature <= 0.0) rd.fail("temperature_K", "temperature must be positive");
  }
  if (j.contains("acquisition")) {
    const json& a = j["acquisition"];
    rd.only(a, "acquisition", {"duration_s", "sample_rate_Hz", "write_series"});
    if (a.contains("duration_s")) c.duration = rd.number(a, "duration_s");
    if (a.contains("sample_rate_Hz")) c.sample_rate = rd.number(a, "sample_rate_Hz");
    if (a.contains("write_series")) c.write_series = rd.boolean(a, "write_series");
  }
  if (j.contains("catalogue")) {
    const json& a = j["catalogue"];
    rd.only(a, "catalogue", {"merge_tolerance_Hz", "amplitude_floor"});
    if (a.contains("merge_tolerance_Hz")) c.merge_tolerance = rd.number(a, "merge_tolerance_Hz");
    if (a.contains("amplitude_floor")) c.amplitude_floor = rd.number(a, "amplitude_floor");
  }
  if (j.contains("estimate")) {
    const json& e = j["estimate"];
    rd.only(e, "estimate",
            {"measurement_files", "synthesize", "targets_Hz", "use_phases", "splitting_Hz",
             "splitting_sigma_Hz", "manifold", "normalization", "match_tolerance_Hz"});
    if (e.contains("measurement_files")) {
      const json& f = e["measurement_files"];
      if (!f.is_array()) rd.fail("measurement_files", "'measurement_files' must be an array");
      for (const auto& x : f) {
        if (!x.is_string()) rd.fail("measurement_files", "measurement file names must be strings");
        c.measurement_files.push_back(x.get<std::string>());
      }
    }
    if (e.contains("synthesize") && !e["synthesize"].is_null()) {
      c.synthesize = rd.direction(e["synthesize"], "synthesize", "magnitude");
    }
    if (e.contains("targets_Hz")) c.targets = rd.numbers(e, "targets_Hz");
    if (e.contains("use_phases")) c.use_phases = rd.boolean(e, "use_phases");
    if (e.contains("splitting_Hz") && !e["splitting_Hz"].is_null()) {
      c.splitting = rd.number(e, "splitting_Hz");
    }
    if (e.contains("splitting_sigma_Hz")) c.splitting_sigma = rd.number(e, "splitting_sigma_Hz");
    if (e.contains("manifold")) c.manifold = rd.integer(e, "manifold");
    if (e.contains("normalization")) {
      const auto n = rd.string(e, "normalization");
      if (n == "peak") {
        c.normalization = Normalization::peak;
      } else if (n == "l2") {
        c.normalization = Normalization::l2;
      } else {
        rd.fail("normalization", "normalization must be \"peak\" or \"l2\"");
      }
    }
    if (e.contains("match_tolerance_Hz")) c.match_tolerance = rd.number(e, "match_tolerance_Hz");
  }
  if (j.contains("benchmark")) {
    const json& b = j["benchmark"];
    rd.only(b, "benchmark",
            {"noise_sigma", "trials", "seed", "threads", "histogram_bins", "sigma_delta_Hz"});
    if (b.contains("noise_sigma")) c.noise_sigma = rd.number(b, "noise_sigma");
    if (b.contains("trials")) c.trials = rd.integer(b, "trials");
    if (b.contains("seed")) {
      if (!b["seed"].is_number_unsigned()) rd.fail("seed", "'seed' must be a non-negative integer");
      c.seed = b["seed"].get<std::uint64_t>();
    }
    if (b.contains("threads")) c.threads = rd.integer(b, "threads");
    if (b.contains("histogram_bins")) c.histogram_bins = rd.integer(b, "histogram_bins");
    if (b.contains("sigma_delta_Hz")) c.sigma_delta_table = rd.numbers(b, "sigma_delta_Hz");
  }
  if (j.contains("output_dir")) c.output_dir = rd.string(j, "output_dir");
  return c;
}

std::string config_to_json(const RunConfig& c) {
  json j;
  j["molecule"] = c.molecule;
  if (!c.molecule_file.empty()) j["molecule_file"] = c.molecule_file;
  j["constants"] = {{"gamma_c", c.gamma_c}, {"gamma_h", c.gamma_h}};
  if (c.field) {
    j["field"] = {{"theta", c.field->theta}, {"phi", c.field->phi}, {"magnitude_T", c.field->magnitude}};
  }
  if (c.rotation) {
    j["rotation"] = {{"theta", c.rotation->theta},
                     {"phi", c.rotation->phi},
                     {"omega_Hz", c.rotation->magnitude}};
  }
  j["guiding_axes"] = json::array();
  for (const auto& a : c.guiding_axes) j["guiding_axes"].push_back(axis_json(a));
  j["probe"] = {{"polarizing_field_T", c.polarizing_field}, {"temperature_K", c.temperature}};
  j["acquisition"] = {{"write_series", c.write_series}};
  if (c.duration) j["acquisition"]["duration_s"] = *c.duration;
  if (c.sample_rate) j["acquisition"]["sample_rate_Hz"] = *c.sample_rate;
  j["catalogue"] = {{"merge_tolerance_Hz", c.merge_tolerance},
                    {"amplitude_floor", c.amplitude_floor}};
  json e = {{"measurement_files", c.measurement_files},
            {"targets_Hz", c.targets},
            {"use_phases", c.use_phases},
            {"splitting_sigma_Hz", c.splitting_sigma},
            {"manifold", c.manifold},
            {"normalization", normalization_name(c.normalization)},
            {"match_tolerance_Hz", c.match_tolerance}};
  if (c.synthesize) {
    e["synthesize"] = {{"theta", c.synthesize->theta},
                       {"phi", c.synthesize->phi},
                       {"magnitude", c.synthesize->magnitude}};
  }
  if (c.splitting) e["splitting_Hz"] = *c.splitting;
  j["estimate"] = e;
  j["benchmark"] = {{"noise_sigma", c.noise_sigma},   {"trials", c.trials},
                    {"seed", c.seed},                 {"threads", c.threads},
                    {"histogram_bins", c.histogram_bins}, {"sigma_delta_Hz", c.sigma_delta_table}};
  j["output_dir"] = c.output_dir;
  return j.dump(2);
}

RunConfig config_with(const RunConfig& config, const std::string& key,
                      const std::string& json_value) {
  json j = json::parse(config_to_json(config));
  json value;
  try {
    value = json::parse(json_value);
  } catch (const json::parse_error&) {
    value = json_value;  // bare strings need no quotes
  }
  if (key.empty() || key.front() == '.' || key.back() == '.') {
    throw ParseError("invalid configuration key '" + key + "'");
  }
  json* node = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (dot == std::string::npos) {
      (*node)[part] = value;
      break;
    }
    node = &(*node)[part];
    if (!node->is_object() && !node->is_null()) {
      throw ParseError("configuration key '" + key + "' does not name an object path");
    }
    start = dot + 1;
  }
  return config_from_json(j.dump(2), "option --" + key);
}

SpinSystem resolve_molecule(const RunConfig& config) {
  if (!config.molecule_file.empty()) return molecule_from_json_text(read_file(config.molecule_file));
  return preset(config.molecule, config.gamma_c, config.gamma_h);
}

std::vector<AmplitudeVector> measurements_from_json(const std::string& text,
                                                    const std::string& origin) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    throw ParseError(origin + ": measurement file is empty");
  }
  const Reader rd(text, origin);
  const json j = rd.parse();
  std::vector<json> items;
  if (j.is_object() && j.contains("measurements")) {
    rd.only(j, "measurement file", {"measurements"});
    if (!j["measurements"].is_array()) rd.fail("measurements", "'measurements' must be an array");
    for (const auto& m : j["measurements"]) items.push_back(m);
  } else {
    items.push_back(j);
  }
  std::vector<AmplitudeVector> out;
  for (const auto& m : items) {
    rd.only(m, "measurement", {"guiding_axis", "lines"});
    if (!m.contains("guiding_axis")) rd.fail("lines", "measurement needs 'guiding_axis'");
    if (!m.contains("lines") || !m["lines"].is_array() || m["lines"].empty()) {
      rd.fail("lines", "measurement needs a non-empty 'lines' array");
    }
    AmplitudeVector v;
    v.guiding_axis = rd.axis(m["guiding_axis"], "guiding_axis");
    std::vector<double> phases;
    bool all_phases = true;
    for (const auto& l : m["lines"]) {
      rd.only(l, "line", {"frequency_Hz", "amplitude", "phase_rad"});
      if (!l.contains("frequency_Hz") || !l.contains("amplitude")) {
        rd.fail("lines", "each line needs 'frequency_Hz' and 'amplitude'");
      }
      v.frequencies.push_back(rd.number(l, "frequency_Hz"));
      const double a = rd.number(l, "amplitude");
      if (a < 0.0) rd.fail("amplitude", "amplitudes must be >= 0");
      v.magnitudes.push_back(a);
      if (l.contains("phase_rad")) {
        phases.push_back(rd.number(l, "phase_rad"));
      } else {
        all_phases = false;
      }
    }
    if (all_phases) v.phases = phases;
    out.push_back(std::move(v));
  }
  return out;
}

std::string measurements_to_json(const std::vector<AmplitudeVector>& measurements) {
  json arr = json::array();
  for (const auto& m : measurements) {
    json lines = json::array();
    for (std::size_t t = 0; t < m.frequencies.size(); ++t) {
      json l = {{"frequency_Hz", m.frequencies[t]}, {"amplitude", m.magnitudes[t]}};
      if (m.phases) l["phase_rad"] = (*m.phases)[t];
      lines.push_back(l);
    }
    arr.push_back({{"guiding_axis", axis_json(m.guiding_axis)}, {"lines", lines}});
  }
  return json{{"measurements", arr}}.dump(2);
}

std::string result_to_json(const EstimationResult& r) {
  json set = json::array();
  for (const auto& c : r.ambiguity_set) {
    json e = {{"theta", c.theta}, {"phi", c.phi}, {"residual", c.residual}};
    if (c.phase_residual >= 0.0) e["phase_residual"] = c.phase_residual;
    set.push_back(e);
  }
  const auto& d = r.diagnostics;
  json j = {{"mode", mode_name(r.mode)},
            {"theta", r.theta},
            {"phi", r.phi},
            {r.mode == EstimationMode::field ? "magnitude_T" : "omega_Hz", r.magnitude},
            {"magnitude_sigma", r.magnitude_sigma},
            {"residual", r.residual},
            {"ambiguous", r.ambiguous},
            {"phi_undetermined", r.phi_undetermined},
            {"ambiguity_set", set},
            {"warnings", r.warnings},
            {"diagnostics",
             {{"grid_points", d.grid_points},
              {"local_minima", d.local_minima},
              {"refinements", d.refinements},
              {"simplex_iterations", d.iterations},
              {"best_grid_cell", {d.best_grid_theta, d.best_grid_phi}},
              {"axes_used", d.axes_used}}}};
  return j.dump(2);
}

std::vector<std::string> command_names() {
  return {"spectrum", "estimate", "estimate-rotation", "benchmark", "list-transitions", "presets"};
}

RunOutcome run_command(const std::string& command, const RunConfig& config) {
  if (command == "spectrum") return cmd_spectrum(config);
  if (command == "estimate") return cmd_estimate(config, EstimationMode::field);
  if (command == "estimate-rotation") return cmd_estimate(config, EstimationMode::rotation);
  if (command == "benchmark") return cmd_benchmark(config);
  if (command == "list-transitions") return cmd_list(config);
  if (command == "presets") return cmd_presets();
  throw ParseError("unknown command '" + command + "'");
}

ExitCode exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ambiguous:
      return ExitCode::ambiguous;
    case ErrorKind::numeric:
      return ExitCode::numeric;
    default:
      return ExitCode::config;
  }
}

}  // namespace zulf
