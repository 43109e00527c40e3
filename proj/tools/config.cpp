// Copyright 2026 The qdimer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "qdimer/errors.hpp"

namespace qdimer::cli {

using nlohmann::json;

namespace {

class Reader {
 public:
  Reader(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) throw ConfigError(label() + " must be an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return obj_.contains(key);
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return obj_.at(key);
  }

  double number(const std::string& key, double fallback, double lo, double hi, bool open_lo = false) {
    if (!has(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_number()) throw ConfigError(name(key) + " must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x) || x < lo || x > hi || (open_lo && x == lo)) {
      throw ConfigError(name(key) + " out of range");
    }
    return x;
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback, std::int64_t lo, std::int64_t hi) {
    if (!has(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_number_integer()) throw ConfigError(name(key) + " must be an integer");
    if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(hi)) {
      throw ConfigError(name(key) + " out of range");
    }
    const std::int64_t x = v.get<std::int64_t>();
    if (x < lo || x > hi) throw ConfigError(name(key) + " out of range");
    return x;
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_boolean()) throw ConfigError(name(key) + " must be true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_string()) throw ConfigError(name(key) + " must be a string");
    return v.get<std::string>();
  }

  Reader object(const std::string& key) { return Reader(raw(key), name(key)); }

  void finish() const {
    for (const auto& item : obj_.items()) {
      if (!seen_.count(item.key())) throw ConfigError("unknown key '" + name(item.key()) + "'");
    }
  }

  std::string name(const std::string& key) const { return where_.empty() ? key : where_ + "." + key; }

 private:
  std::string label() const { return where_.empty() ? "configuration" : "'" + where_ + "'"; }

  const json& obj_;
  std::string where_;
  std::set<std::string> seen_;
};

Vec3 vec3(const json& v, const std::string& name) {
  if (!v.is_array() || v.size() != 3) throw ConfigError(name + " must be an array of three numbers");
  Vec3 out{};
  for (std::size_t k = 0; k < 3; ++k) {
    if (!v[k].is_number() || !std::isfinite(v[k].get<double>())) throw ConfigError(name + " must be an array of three numbers");
    out[k] = v[k].get<double>();
  }
  return out;
}

std::filesystem::path resolve(const std::string& p, const std::filesystem::path& base) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) path = base / path;
  return path;
}

// Wraps library validation errors as configuration errors.
template <typename F>
auto checked(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const InvalidArgument& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

void parse_model(Reader r, RunConfig& c) {
  const bool shortcut = r.has("J");
  const bool any_axis = r.has("Jxx") || r.has("Jyy") || r.has("Jzz");
  if (shortcut && any_axis) throw ConfigError("model.J cannot be combined with Jxx/Jyy/Jzz");
  const double big = 1e6;
  if (any_axis) {
    if (!(r.has("Jxx") && r.has("Jyy") && r.has("Jzz"))) throw ConfigError("model needs all of Jxx, Jyy, Jzz");
    c.model.jxx = r.number("Jxx", 0.0, -big, big);
    c.model.jyy = r.number("Jyy", 0.0, -big, big);
    c.model.jzz = r.number("Jzz", 0.0, -big, big);
  } else {
    const double j = r.number("J", 1.0, -big, big);
    c.model.jxx = c.model.jyy = c.model.jzz = j;
  }
  c.model.h = r.number("h", 1.0, -big, big);
  r.finish();
  checked("model", [&] { c.model.validate(); return 0; });
}

void parse_evolution(Reader r, RunConfig& c) {
  c.evolution.method = checked("evolution.method", [&] { return qdimer::parse_evolution(r.string("method", "reff")); });
  c.evolution.dt = r.number("dt", 0.3, 0.0, 1e3, true);
  c.evolution.n_steps = static_cast<int>(r.integer("n_steps", 100, 1, 100000));
  c.evolution.initial_state = r.string("initial_state", "ground");
  if (c.evolution.initial_state != "ground") {
    checked("evolution.initial_state", [&] { return parse_dimer_state(c.evolution.initial_state); });
  }
  r.finish();
}

void parse_estimator(Reader r, RunConfig& c) {
  EstimatorConfig& e = c.estimator.config;
  c.estimator.enabled = r.boolean("enabled", true);
  e.scheme = checked("estimator.scheme", [&] { return parse_scheme(r.string("scheme", "direct")); });
  e.shots = static_cast<std::uint64_t>(r.integer("shots", 8000, 1, std::int64_t{1} << 40));
  e.exact_expectation = r.boolean("exact_expectation", false);
  e.mitigation = r.boolean("mitigation", true);
  e.calibration_shots = static_cast<std::uint64_t>(r.integer("calibration_shots", 8000, 1, std::int64_t{1} << 40));
  if (r.has("noise")) {
    Reader n = r.object("noise");
    e.noise.p1 = n.number("p1", e.noise.p1, 0.0, 1.0);
    e.noise.p2 = n.number("p2", e.noise.p2, 0.0, 1.0);
    e.noise.readout_flip = n.number("readout_flip", e.noise.readout_flip, 0.0, 0.5);
    n.finish();
  }
  r.finish();
}

void parse_reff(Reader r, RunConfig& c, const std::filesystem::path& base) {
  OptimizerConfig& o = c.reff.optimizer;
  o.training_states = static_cast<int>(r.integer("training_states", o.training_states, 1, 10000));
  o.max_iterations = static_cast<int>(r.integer("max_iterations", o.max_iterations, 0, 100000000));
  o.epsilon = r.number("epsilon", o.epsilon, 0.0, 1.0, true);
  o.n_targ = static_cast<int>(r.integer("n_targ", o.n_targ, 1, 1000000));
  if (r.has("cost_threshold")) {
    const json& v = r.raw("cost_threshold");
    if (v.is_null()) {
      o.cost_threshold.reset();
    } else {
      o.cost_threshold = r.number("cost_threshold", 0.0, 0.0, 1.0);
    }
  }
  o.initial_step = r.number("initial_step", o.initial_step, 0.0, 1e3, true);
  o.step_growth = r.number("step_growth", o.step_growth, 1.0, 10.0);
  o.init_range = r.number("init_range", o.init_range, 0.0, 10.0);
  if (r.has("params_file") && !r.raw("params_file").is_null()) {
    const auto p = resolve(r.string("params_file", ""), base);
    if (!std::filesystem::exists(p)) throw ConfigError("reff.params_file '" + p.string() + "' does not exist");
    c.reff.params_file = p;
  }
  r.finish();
  if (o.epsilon >= 1.0) throw ConfigError("reff.epsilon must lie in (0, 1)");
}

void parse_spectra(Reader r, RunConfig& c) {
  SpectraBlock& s = c.spectra;
  if (r.has("series")) {
    const json& v = r.raw("series");
    if (v.is_string()) {
      const auto preset = v.get<std::string>();
      if (preset == "same_site") {
        s.series = same_site_keys();
      } else if (preset == "diagonal") {
        s.series = diagonal_keys();
      } else if (preset == "all") {
        s.series = all_keys();
      } else {
        throw ConfigError("spectra.series preset must be same_site, diagonal or all");
      }
    } else if (v.is_array() && !v.empty()) {
      s.series.clear();
      std::set<SeriesKey> unique;
      for (const json& item : v) {
        if (!item.is_string()) throw ConfigError("spectra.series entries must be strings like \"xx_1_1\"");
        const SeriesKey key = checked("spectra.series", [&] { return SeriesKey::parse(item.get<std::string>()); });
        if (!unique.insert(key).second) throw ConfigError("spectra.series lists " + key.name() + " twice");
        s.series.push_back(key);
      }
    } else {
      throw ConfigError("spectra.series must be a preset name or a non-empty array");
    }
  }
  if (r.has("q")) s.q = vec3(r.raw("q"), "spectra.q");
  if (r.has("q_hat")) {
    const json& v = r.raw("q_hat");
    if (v.is_null() || (v.is_string() && v.get<std::string>() == "isotropic")) {
      s.q_hat.reset();
    } else {
      s.q_hat = vec3(v, "spectra.q_hat");
      const Vec3& u = *s.q_hat;
      if (std::abs(std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]) - 1.0) > 1e-9) {
        throw ConfigError("spectra.q_hat must be a unit vector");
      }
    }
  }
  if (r.has("pairs")) {
    const json& v = r.raw("pairs");
    if (!v.is_array()) throw ConfigError("spectra.pairs must be an array of [i, j] pairs");
    s.pairs.clear();
    for (const json& p : v) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer()) {
        throw ConfigError("spectra.pairs entries must be [i, j] with integer sites");
      }
      const int i = p[0].get<int>(), j = p[1].get<int>();
      if (i < 1 || i > 2 || j < 1 || j > 2) throw ConfigError("spectra.pairs sites must be 1 or 2");
      s.pairs.emplace_back(i - 1, j - 1);
    }
  }
  s.options.window = r.boolean("window", false);
  s.options.zero_pad = static_cast<int>(r.integer("zero_pad", 1, 1, 64));
  r.finish();
}

void parse_output(Reader r, RunConfig& c, const std::filesystem::path& base) {
  if (r.has("directory")) c.output.directory = resolve(r.string("directory", ""), base);
  if (r.has("format")) c.output.format = parse_format(r.string("format", "csv"));
  r.finish();
}

void parse_experiment(Reader r, RunConfig& c, const std::filesystem::path& base) {
  ExperimentBlock e;
  if (!r.has("path")) throw ConfigError("experiment.path is required");
  e.path = resolve(r.string("path", ""), base);
  if (!std::filesystem::exists(e.path)) throw ConfigError("experiment.path '" + e.path.string() + "' does not exist");
  e.energy_scale = r.number("energy_scale", 1.0, 0.0, 1e12, true);
  if (r.has("middle_window")) {
    const json& v = r.raw("middle_window");
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw ConfigError("experiment.middle_window must be [low, high]");
    }
    const double lo = v[0].get<double>(), hi = v[1].get<double>();
    if (!(lo < hi)) throw ConfigError("experiment.middle_window needs low < high");
    e.middle_window = std::make_pair(lo, hi);
  }
  r.finish();
  c.experiment = e;
}

json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

}  // namespace

RunConfig::RunConfig() {
  estimator.config.noise = {0.001, 0.007, 0.01};
  reff.optimizer.cost_threshold = 1e-12;
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::kCsv;
  if (name == "json") return Format::kJson;
  throw ConfigError("output format must be csv or json, got '" + name + "'");
}

std::string format_name(Format f) { return f == Format::kCsv ? "csv" : "json"; }

RunConfig parse_config(const json& doc, const std::filesystem::path& base) {
  RunConfig c;
  Reader top(doc, "");
  if (top.has("model")) parse_model(top.object("model"), c);
  if (top.has("evolution")) parse_evolution(top.object("evolution"), c);
  if (top.has("estimator")) parse_estimator(top.object("estimator"), c);
  if (top.has("reff")) parse_reff(top.object("reff"), c, base);
  if (top.has("spectra")) parse_spectra(top.object("spectra"), c);
  if (top.has("output")) parse_output(top.object("output"), c, base);
  if (top.has("experiment")) parse_experiment(top.object("experiment"), c, base);
  c.seed = static_cast<std::uint64_t>(top.integer("seed", 42, 0, std::numeric_limits<std::int64_t>::max()));
  c.threads = static_cast<int>(top.integer("threads", 1, 0, 1024));
  top.finish();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  json doc;
  try {
    doc = json::parse(text.str());
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc, path.parent_path());
}

json RunConfig::to_json() const {
  json j;
  j["model"] = {{"Jxx", model.jxx}, {"Jyy", model.jyy}, {"Jzz", model.jzz}, {"h", model.h}};
  j["evolution"] = {{"method", evolution_name(evolution.method)},
                    {"dt", evolution.dt},
                    {"n_steps", evolution.n_steps},
                    {"initial_state", evolution.initial_state}};
  const EstimatorConfig& e = estimator.config;
  j["estimator"] = {{"enabled", estimator.enabled},
                    {"scheme", scheme_name(e.scheme)},
                    {"shots", e.shots},
                    {"exact_expectation", e.exact_expectation},
                    {"mitigation", e.mitigation},
                    {"calibration_shots", e.calibration_shots},
                    {"noise", {{"p1", e.noise.p1}, {"p2", e.noise.p2}, {"readout_flip", e.noise.readout_flip}}}};
  const OptimizerConfig& o = reff.optimizer;
  j["reff"] = {{"training_states", o.training_states},
               {"max_iterations", o.max_iterations},
               {"epsilon", o.epsilon},
               {"n_targ", o.n_targ},
               {"cost_threshold", o.cost_threshold ? json(*o.cost_threshold) : json(nullptr)},
               {"initial_step", o.initial_step},
               {"step_growth", o.step_growth},
               {"init_range", o.init_range},
               {"params_file", reff.params_file ? json(reff.params_file->filename().generic_string()) : json(nullptr)}};
  json series = json::array();
  for (const SeriesKey& k : spectra.series) series.push_back(k.name());
  json pairs = json::array();
  for (const auto& [i, jj] : spectra.pairs) pairs.push_back({i + 1, jj + 1});
  j["spectra"] = {{"series", series},
                  {"q", vec_json(spectra.q)},
                  {"q_hat", spectra.q_hat ? vec_json(*spectra.q_hat) : json("isotropic")},
                  {"pairs", pairs},
                  {"window", spectra.options.window},
                  {"zero_pad", spectra.options.zero_pad}};
  j["output"] = {{"format", format_name(output.format)}};
  if (experiment) {
    j["experiment"] = {{"path", experiment->path.filename().generic_string()},
                       {"energy_scale", experiment->energy_scale},
                       {"middle_window", experiment->middle_window
                                             ? json::array({experiment->middle_window->first, experiment->middle_window->second})
                                             : json(nullptr)}};
  }
  j["seed"] = seed;
  return j;
}

}  // namespace qdimer::cli
