#include "symor/config.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

#include "symor/io.hpp"

namespace symor {

namespace {

using nlohmann::json;

void only_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& item : obj.items())
    if (!allowed.count(item.key())) throw ConfigError("unknown key '" + item.key() + "' in " + where);
}

double get_number(const json& obj, const char* key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  return v.get<double>();
}

long long get_integer(const json& obj, const char* key, long long fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + " must be an integer");
  return v.get<long long>();
}

std::pair<double, double> get_range(const json& obj, const char* key, std::pair<double, double> fallback,
                                    const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError(where + "." + key + " must be a two-element numeric array");
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

double RunConfig::frequency() const { return forcing_frequency ? *forcing_frequency : 1.0 / (t_end - t0); }

ForcingProfile RunConfig::forcing() const {
  return ForcingProfile(forcing_kind, forcing_amplitude, frequency() * lattice.constants.time_scale());
}

TimeGrid RunConfig::grid() const {
  const double ts = lattice.constants.time_scale();
  return TimeGrid{t0 / ts, t_end / ts, nt};
}

DesignSpec RunConfig::design_spec() const {
  DesignSpec d;
  d.training_per_axis = training_per_axis;
  d.num_test = num_test;
  d.seed = seed;
  d.grid = grid();
  d.sweep = sweep;
  return d;
}

ExperimentDesign RunConfig::design() const { return make_design(design_spec(), lattice.domain, full_dim()); }

LinearHamiltonianSystem RunConfig::build(const LameParameters& mu) const {
  return build_cantilever_lattice(lattice, mu, forcing());
}

void validate(const RunConfig& c) {
  if (c.lattice.nx < 2 || c.lattice.ny < 1) throw ConfigError("model.nx must be >= 2 and model.ny >= 1");
  if (!(c.lattice.length > 0.0)) throw ConfigError("model.length must be positive");
  const auto& k = c.lattice.constants;
  if (!(k.density > 0 && k.lambda_ref > 0 && k.mu_ref > 0 && k.length_ref > 0 && k.gravity_ref > 0))
    throw ConfigError("model.constants must be positive");
  const auto& d = c.lattice.domain;
  if (!(d.lambda_min <= d.lambda_max && d.mu_min <= d.mu_max && d.lambda_min > 0 && d.mu_min > 0))
    throw ConfigError("parameter ranges must be positive and ordered");
  if (!std::isfinite(c.forcing_amplitude)) throw ConfigError("model.forcing.amplitude must be finite");
  if (c.forcing_frequency && !(*c.forcing_frequency > 0.0)) throw ConfigError("model.forcing.frequency_hz must be positive");
  if (c.training_per_axis < 1) throw ConfigError("design.training_per_axis must be >= 1");
  if (c.num_test < 0) throw ConfigError("design.num_test must be >= 0");
  if (c.nt < 2) throw ConfigError("design.nt must be >= 2");
  if (!(c.t_end > c.t0)) throw ConfigError("design.t_end must exceed design.t0");
  for (Index s : c.sweep)
    if (s <= 0 || s % 2 != 0 || s > c.full_dim())
      throw ConfigError("design.sweep entry " + std::to_string(s) + " must be even and within (0, " +
                        std::to_string(c.full_dim()) + "]");
  if (c.methods.empty()) throw ConfigError("methods must not be empty");
  if (c.jobs < 1) throw ConfigError("jobs must be >= 1");
  c.forcing();
}

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  only_keys(root, {"model", "design", "methods", "output", "jobs", "tolerances"}, "config");

  if (root.contains("model")) {
    const auto& m = root.at("model");
    only_keys(m, {"nx", "ny", "length", "constants", "lambda_range", "mu_range", "forcing"}, "model");
    c.lattice.nx = static_cast<int>(get_integer(m, "nx", c.lattice.nx, "model"));
    c.lattice.ny = static_cast<int>(get_integer(m, "ny", c.lattice.ny, "model"));
    c.lattice.length = get_number(m, "length", c.lattice.length, "model");
    if (m.contains("constants")) {
      const auto& k = m.at("constants");
      only_keys(k, {"density", "lambda_ref", "mu_ref", "length_ref", "gravity_ref"}, "model.constants");
      auto& mc = c.lattice.constants;
      mc.density = get_number(k, "density", mc.density, "model.constants");
      mc.lambda_ref = get_number(k, "lambda_ref", mc.lambda_ref, "model.constants");
      mc.mu_ref = get_number(k, "mu_ref", mc.mu_ref, "model.constants");
      mc.length_ref = get_number(k, "length_ref", mc.length_ref, "model.constants");
      mc.gravity_ref = get_number(k, "gravity_ref", mc.gravity_ref, "model.constants");
    }
    auto& d = c.lattice.domain;
    std::tie(d.lambda_min, d.lambda_max) = get_range(m, "lambda_range", {d.lambda_min, d.lambda_max}, "model");
    std::tie(d.mu_min, d.mu_max) = get_range(m, "mu_range", {d.mu_min, d.mu_max}, "model");
    if (m.contains("forcing")) {
      const auto& f = m.at("forcing");
      only_keys(f, {"kind", "amplitude", "frequency_hz"}, "model.forcing");
      if (f.contains("kind")) {
        if (!f.at("kind").is_string()) throw ConfigError("model.forcing.kind must be a string");
        c.forcing_kind = forcing_kind_from_string(f.at("kind").get<std::string>());
      }
      c.forcing_amplitude = get_number(f, "amplitude", c.forcing_amplitude, "model.forcing");
      if (f.contains("frequency_hz") && !f.at("frequency_hz").is_null())
        c.forcing_frequency = get_number(f, "frequency_hz", 0.0, "model.forcing");
    }
  }

  if (root.contains("design")) {
    const auto& d = root.at("design");
    only_keys(d, {"training_per_axis", "num_test", "seed", "t0", "t_end", "nt", "sweep"}, "design");
    c.training_per_axis = static_cast<int>(get_integer(d, "training_per_axis", c.training_per_axis, "design"));
    c.num_test = static_cast<int>(get_integer(d, "num_test", c.num_test, "design"));
    if (d.contains("seed")) {
      if (!d.at("seed").is_number_unsigned()) throw ConfigError("design.seed must be a non-negative integer");
      c.seed = d.at("seed").get<std::uint64_t>();
    }
    c.t0 = get_number(d, "t0", c.t0, "design");
    c.t_end = get_number(d, "t_end", c.t_end, "design");
    c.nt = static_cast<Index>(get_integer(d, "nt", c.nt, "design"));
    if (d.contains("sweep")) {
      const auto& s = d.at("sweep");
      if (!s.is_array()) throw ConfigError("design.sweep must be an array of integers");
      c.sweep.clear();
      for (const auto& v : s) {
        if (!v.is_number_integer()) throw ConfigError("design.sweep must be an array of integers");
        c.sweep.push_back(v.get<Index>());
      }
    }
  }

  if (root.contains("methods")) {
    const auto& ms = root.at("methods");
    if (!ms.is_array()) throw ConfigError("methods must be an array of names");
    c.methods.clear();
    for (const auto& v : ms) {
      if (!v.is_string()) throw ConfigError("methods must be an array of names");
      c.methods.push_back(basis_method_from_string(v.get<std::string>()));
    }
  }
  if (root.contains("output")) {
    if (!root.at("output").is_string()) throw ConfigError("output must be a path string");
    c.output = root.at("output").get<std::string>();
  }
  c.jobs = static_cast<int>(get_integer(root, "jobs", c.jobs, "config"));

  if (root.contains("tolerances")) {
    const auto& t = root.at("tolerances");
    only_keys(t, {"rank", "level", "isotropy", "reconstruction", "structure", "gap", "drop", "preservation"},
              "tolerances");
    auto& s = c.basis.svd_like;
    s.rank_tolerance = get_number(t, "rank", s.rank_tolerance, "tolerances");
    s.level_tolerance = get_number(t, "level", s.level_tolerance, "tolerances");
    s.isotropy_tolerance = get_number(t, "isotropy", s.isotropy_tolerance, "tolerances");
    s.reconstruction_tolerance = get_number(t, "reconstruction", s.reconstruction_tolerance, "tolerances");
    s.structure_tolerance = get_number(t, "structure", s.structure_tolerance, "tolerances");
    c.basis.gap_tolerance = get_number(t, "gap", c.basis.gap_tolerance, "tolerances");
    c.basis.drop_tolerance = get_number(t, "drop", c.basis.drop_tolerance, "tolerances");
    c.preservation_tolerance = get_number(t, "preservation", c.preservation_tolerance, "tolerances");
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const IoError&) {
    throw IoError("cannot read config file '" + path.string() + "'");
  }
  return parse_config(text);
}

std::string resolved_config_json(const RunConfig& c) {
  json root;
  const auto& k = c.lattice.constants;
  const auto& d = c.lattice.domain;
  root["model"] = {
      {"nx", c.lattice.nx},
      {"ny", c.lattice.ny},
      {"length", c.lattice.length},
      {"constants",
       {{"density", k.density},
        {"lambda_ref", k.lambda_ref},
        {"mu_ref", k.mu_ref},
        {"length_ref", k.length_ref},
        {"gravity_ref", k.gravity_ref}}},
      {"lambda_range", {d.lambda_min, d.lambda_max}},
      {"mu_range", {d.mu_min, d.mu_max}},
      {"forcing",
       {{"kind", std::string(to_string(c.forcing_kind))},
        {"amplitude", c.forcing_amplitude},
        {"frequency_hz", c.frequency()}}},
  };
  root["design"] = {
      {"training_per_axis", c.training_per_axis},
      {"num_test", c.num_test},
      {"seed", c.seed},
      {"t0", c.t0},
      {"t_end", c.t_end},
      {"nt", c.nt},
      {"sweep", c.sweep},
  };
  json methods = json::array();
  for (auto m : c.methods) methods.push_back(std::string(to_string(m)));
  root["methods"] = methods;
  root["output"] = c.output.string();
  root["jobs"] = c.jobs;
  const auto& s = c.basis.svd_like;
  root["tolerances"] = {
      {"rank", s.rank_tolerance},
      {"level", s.level_tolerance},
      {"isotropy", s.isotropy_tolerance},
      {"reconstruction", s.reconstruction_tolerance},
      {"structure", s.structure_tolerance},
      {"gap", c.basis.gap_tolerance},
      {"drop", c.basis.drop_tolerance},
      {"preservation", c.preservation_tolerance},
  };
  return root.dump(2) + "\n";
}

}  // namespace symor
