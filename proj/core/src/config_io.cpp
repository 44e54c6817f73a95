#include "pmlwave/config_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "pmlwave/damping.hpp"
#include "pmlwave/errors.hpp"

namespace pmlwave {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& where,
                         const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("config: unknown key '" + it.key() + "' in " + where);
}

double as_number(const json& v, const std::string& name) {
  if (!v.is_number())
    throw ConfigError("config: key '" + name + "' must be a number");
  return v.get<double>();
}

std::string as_string(const json& v, const std::string& name) {
  if (!v.is_string())
    throw ConfigError("config: key '" + name + "' must be a string");
  return v.get<std::string>();
}

/// Per-axis value given either as one number (applied to every axis) or as
/// an array with one entry per axis.
std::vector<double> as_axis_values(const json& v, int dim,
                                   const std::string& name) {
  std::vector<double> out;
  if (v.is_number()) {
    out.assign(dim, v.get<double>());
    return out;
  }
  if (v.is_array()) {
    if (static_cast<int>(v.size()) != dim)
      throw ConfigError("config: key '" + name + "' must have " +
                        std::to_string(dim) + " entries (one per axis)");
    for (const auto& e : v) out.push_back(as_number(e, name));
    return out;
  }
  throw ConfigError("config: key '" + name +
                    "' must be a number or an array of numbers");
}

double analytic_c_max(const SimulationConfig& cfg) {
  return cfg.medium_kind == SimulationConfig::MediumKind::layered ? 1.5 : cfg.c;
}

} // namespace

SimulationConfig parse_config_text(const std::string& text) {
  const bool blank =
      std::all_of(text.begin(), text.end(),
                  [](unsigned char ch) { return std::isspace(ch) != 0; });
  if (blank)
    throw ConfigError(
        "config: empty file; required keys: schema_version, and either "
        "'preset' or 'grid' with dim, a, L, dx");

  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: not valid JSON: ") + e.what());
  }
  if (!doc.is_object())
    throw ConfigError("config: top level must be a JSON object");

  reject_unknown_keys(doc, "the config",
                      {"schema_version", "preset", "grid", "zeta_bar",
                       "reflection", "medium", "source", "initial", "dt",
                       "safety", "t_end", "snapshot_times", "output_dir"});

  if (!doc.contains("schema_version"))
    throw ConfigError("config: missing required key 'schema_version'");
  if (!doc["schema_version"].is_number_integer() ||
      doc["schema_version"].get<int>() != 1)
    throw ConfigError(
        "config: unsupported schema_version (this build reads version 1)");

  SimulationConfig cfg;
  bool have_preset = false;
  int dim = 0;
  std::vector<double> ga, gL, gdx;

  if (doc.contains("preset")) {
    cfg = preset_config(as_string(doc["preset"], "preset"));
    have_preset = true;
    dim = cfg.grid.dim;
    for (int m = 0; m < dim; ++m) {
      ga.push_back(cfg.grid.a[m]);
      gL.push_back(cfg.grid.L[m]);
      gdx.push_back(cfg.grid.dx[m]);
    }
  }

  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    if (!g.is_object())
      throw ConfigError("config: key 'grid' must be an object");
    reject_unknown_keys(g, "grid", {"dim", "a", "L", "dx"});
    if (g.contains("dim")) {
      if (!g["dim"].is_number_integer())
        throw ConfigError("config: key 'grid.dim' must be an integer");
      dim = g["dim"].get<int>();
      if (dim != 2 && dim != 3)
        throw ConfigError("config: grid.dim must be 2 or 3");
    }
    if (dim == 0)
      throw ConfigError("config: missing required key 'grid.dim'");
    if (g.contains("a")) ga = as_axis_values(g["a"], dim, "grid.a");
    if (g.contains("L")) gL = as_axis_values(g["L"], dim, "grid.L");
    if (g.contains("dx")) gdx = as_axis_values(g["dx"], dim, "grid.dx");
  }

  if (!have_preset) {
    std::vector<std::string> missing;
    if (!doc.contains("grid")) {
      missing = {"grid.dim", "grid.a", "grid.L", "grid.dx"};
    } else {
      if (dim == 0) missing.push_back("grid.dim");
      if (ga.empty()) missing.push_back("grid.a");
      if (gL.empty()) missing.push_back("grid.L");
      if (gdx.empty()) missing.push_back("grid.dx");
    }
    if (!missing.empty()) {
      std::ostringstream msg;
      msg << "config: missing required keys:";
      for (std::size_t i = 0; i < missing.size(); ++i)
        msg << (i ? ", " : " ") << missing[i];
      throw ConfigError(msg.str());
    }
  }

  cfg.grid = build_grid(dim, ga, gL, gdx);

  if (doc.contains("medium")) {
    const json& m = doc["medium"];
    if (!m.is_object())
      throw ConfigError("config: key 'medium' must be an object");
    reject_unknown_keys(m, "medium", {"kind", "c", "b"});
    if (m.contains("kind")) {
      const std::string kind = as_string(m["kind"], "medium.kind");
      if (kind == "constant")
        cfg.medium_kind = SimulationConfig::MediumKind::constant;
      else if (kind == "layered")
        cfg.medium_kind = SimulationConfig::MediumKind::layered;
      else
        throw ConfigError("config: medium.kind '" + kind +
                          "' is not one of: constant, layered");
    }
    if (m.contains("c")) cfg.c = as_number(m["c"], "medium.c");
    if (m.contains("b")) cfg.b = as_number(m["b"], "medium.b");
  }

  if (doc.contains("zeta_bar") && doc.contains("reflection"))
    throw ConfigError(
        "config: give either 'zeta_bar' or 'reflection', not both");
  if (doc.contains("zeta_bar")) {
    const std::vector<double> z = as_axis_values(doc["zeta_bar"], dim, "zeta_bar");
    for (int m = 0; m < dim; ++m) cfg.zeta_bar[m] = z[m];
  } else if (doc.contains("reflection")) {
    const double R = as_number(doc["reflection"], "reflection");
    for (int m = 0; m < dim; ++m)
      cfg.zeta_bar[m] = zeta_bar_from_reflection(R, analytic_c_max(cfg), gL[m]);
  }

  if (doc.contains("source")) {
    const json& s = doc["source"];
    if (s.is_null()) {
      cfg.source.reset();
    } else {
      if (!s.is_object())
        throw ConfigError("config: key 'source' must be an object or null");
      reject_unknown_keys(s, "source", {"location", "f0"});
      SourceTerm src = cfg.source.value_or(SourceTerm{});
      if (s.contains("location")) {
        const std::vector<double> loc =
            as_axis_values(s["location"], dim, "source.location");
        for (int m = 0; m < dim; ++m) src.location[m] = loc[m];
      }
      if (s.contains("f0")) src.f0 = as_number(s["f0"], "source.f0");
      cfg.source = src;
    }
  }

  if (doc.contains("initial")) {
    const std::string kind = as_string(doc["initial"], "initial");
    if (kind == "zero")
      cfg.initial.kind = InitialCondition::Kind::zero;
    else if (kind == "bump2d")
      cfg.initial.kind = InitialCondition::Kind::bump2d;
    else
      throw ConfigError("config: initial '" + kind +
                        "' is not one of: zero, bump2d");
  }

  if (doc.contains("dt")) cfg.dt = as_number(doc["dt"], "dt");
  if (doc.contains("safety")) cfg.safety = as_number(doc["safety"], "safety");
  if (doc.contains("t_end")) cfg.t_end = as_number(doc["t_end"], "t_end");
  if (doc.contains("snapshot_times")) {
    if (!doc["snapshot_times"].is_array())
      throw ConfigError("config: key 'snapshot_times' must be an array");
    cfg.snapshot_times.clear();
    for (const auto& t : doc["snapshot_times"])
      cfg.snapshot_times.push_back(as_number(t, "snapshot_times"));
  }
  if (doc.contains("output_dir"))
    cfg.output_dir = as_string(doc["output_dir"], "output_dir");

  validate_config(cfg);
  return cfg;
}

SimulationConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string config_to_json(const SimulationConfig& cfg) {
  json doc;
  doc["schema_version"] = 1;
  doc["grid"]["dim"] = cfg.grid.dim;
  for (int m = 0; m < cfg.grid.dim; ++m) {
    doc["grid"]["a"].push_back(cfg.grid.a[m]);
    doc["grid"]["L"].push_back(cfg.grid.L[m]);
    doc["grid"]["dx"].push_back(cfg.grid.dx[m]);
  }
  for (int m = 0; m < cfg.grid.dim; ++m)
    doc["zeta_bar"].push_back(cfg.zeta_bar[m]);
  doc["medium"]["kind"] =
      cfg.medium_kind == SimulationConfig::MediumKind::layered ? "layered"
                                                               : "constant";
  doc["medium"]["c"] = cfg.c;
  doc["medium"]["b"] = cfg.b;
  if (cfg.source) {
    for (int m = 0; m < cfg.grid.dim; ++m)
      doc["source"]["location"].push_back(cfg.source->location[m]);
    doc["source"]["f0"] = cfg.source->f0;
  }
  doc["initial"] =
      cfg.initial.kind == InitialCondition::Kind::bump2d ? "bump2d" : "zero";
  if (cfg.dt) doc["dt"] = *cfg.dt;
  doc["safety"] = cfg.safety;
  doc["t_end"] = cfg.t_end;
  doc["snapshot_times"] = cfg.snapshot_times;
  doc["output_dir"] = cfg.output_dir;
  return doc.dump(2);
}

} // namespace pmlwave
