#include "inext/config_io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

namespace inext {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

}  // namespace

json to_json(const SimConfig& c) {
  const auto& p = c.physical;
  const auto& n = c.numerical;
  return json{
      {"schema_version", c.schema_version},
      {"name", c.name},
      {"physical",
       {{"D", p.D}, {"L", p.L}, {"beta", p.beta}, {"U", p.U}, {"k0", p.k0}, {"k2", p.k2},
        {"sigma", p.sigma}, {"iota", p.iota}, {"p0", p.p0}}},
      {"numerical",
       {{"N", n.N}, {"t_end", n.t_end}, {"dt_init", n.dt_init}, {"dt_min", n.dt_min},
        {"rel_tol", n.rel_tol}, {"abs_tol", n.abs_tol}, {"integrator", to_string(n.integrator)},
        {"sample_dt", n.sample_dt}, {"blowup_guard", n.blowup_guard},
        {"quad_rule", to_string(n.quad_rule)}, {"quad_points", n.quad_points}}},
      {"initial", {{"preset", to_string(c.initial.preset)}, {"a", c.initial.a}, {"scale", c.initial.scale}}},
      {"output",
       {{"stride", c.output.stride}, {"trajectory_csv", c.output.trajectory_csv},
        {"summary_json", c.output.summary_json}, {"manifest_json", c.output.manifest_json}}},
  };
}

SimConfig config_from_json(const json& j) {
  check_keys(j, "config", {"schema_version", "name", "physical", "numerical", "initial", "output"});
  SimConfig c;
  read(j, "schema_version", c.schema_version, "config");
  if (c.schema_version != kConfigSchemaVersion)
    throw ConfigError("config: unsupported schema_version " + std::to_string(c.schema_version));
  read(j, "name", c.name, "config");

  if (auto it = j.find("physical"); it != j.end()) {
    const json& o = *it;
    check_keys(o, "physical", {"D", "L", "beta", "U", "k0", "k2", "sigma", "iota", "p0"});
    auto& p = c.physical;
    read(o, "D", p.D, "physical");
    read(o, "L", p.L, "physical");
    read(o, "beta", p.beta, "physical");
    read(o, "U", p.U, "physical");
    read(o, "k0", p.k0, "physical");
    read(o, "k2", p.k2, "physical");
    read(o, "sigma", p.sigma, "physical");
    read(o, "iota", p.iota, "physical");
    read(o, "p0", p.p0, "physical");
  }
  if (auto it = j.find("numerical"); it != j.end()) {
    const json& o = *it;
    check_keys(o, "numerical",
               {"N", "t_end", "dt_init", "dt_min", "rel_tol", "abs_tol", "integrator", "sample_dt",
                "blowup_guard", "quad_rule", "quad_points"});
    auto& n = c.numerical;
    read(o, "N", n.N, "numerical");
    read(o, "t_end", n.t_end, "numerical");
    read(o, "dt_init", n.dt_init, "numerical");
    read(o, "dt_min", n.dt_min, "numerical");
    read(o, "rel_tol", n.rel_tol, "numerical");
    read(o, "abs_tol", n.abs_tol, "numerical");
    read(o, "sample_dt", n.sample_dt, "numerical");
    read(o, "blowup_guard", n.blowup_guard, "numerical");
    read(o, "quad_points", n.quad_points, "numerical");
    std::string s;
    try {
      if (o.contains("integrator")) {
        read(o, "integrator", s, "numerical");
        n.integrator = integrator_from_string(s);
      }
      if (o.contains("quad_rule")) {
        read(o, "quad_rule", s, "numerical");
        n.quad_rule = quadrature_rule_from_string(s);
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("numerical: ") + e.what());
    }
  }
  if (auto it = j.find("initial"); it != j.end()) {
    const json& o = *it;
    check_keys(o, "initial", {"preset", "a", "scale"});
    if (o.contains("preset")) {
      std::string s;
      read(o, "preset", s, "initial");
      try {
        c.initial.preset = initial_preset_from_string(s);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("initial: ") + e.what());
      }
    }
    read(o, "a", c.initial.a, "initial");
    read(o, "scale", c.initial.scale, "initial");
  }
  if (auto it = j.find("output"); it != j.end()) {
    const json& o = *it;
    check_keys(o, "output", {"stride", "trajectory_csv", "summary_json", "manifest_json"});
    read(o, "stride", c.output.stride, "output");
    read(o, "trajectory_csv", c.output.trajectory_csv, "output");
    read(o, "summary_json", c.output.summary_json, "output");
    read(o, "manifest_json", c.output.manifest_json, "output");
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

SimConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return config_from_json(j);
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const SimConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

FlutterParams flutter_params(const SimConfig& cfg) {
  FlutterParams f;
  f.D = cfg.physical.D;
  f.L = cfg.physical.L;
  f.beta = cfg.physical.beta;
  f.k0 = cfg.physical.k0;
  f.U = cfg.physical.U;
  f.N = cfg.numerical.N;
  return f;
}

}  // namespace inext
