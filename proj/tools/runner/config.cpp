#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace uhj::cli {
namespace {

using nlohmann::json;

void allow_keys(const json& j, const std::string& where,
                std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(where, "expected an object");
  for (const auto& [key, _] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(),
                     [&](const char* k) { return key == k; })) {
      throw ConfigError(where, "unknown key '" + key + "'");
    }
  }
}

std::string join_path(const std::string& where, const std::string& key) {
  return where.empty() ? key : where + "." + key;
}

double real(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(where, "expected a finite number");
  return v;
}

double positive(const json& j, const std::string& where) {
  const double v = real(j, where);
  if (v <= 0.0) throw ConfigError(where, "must be positive");
  return v;
}

std::size_t count(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw ConfigError(where, "expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where, "expected a string");
  return j.get<std::string>();
}

std::vector<double> reals(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(real(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<std::string> texts(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(text(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::map<std::string, double> real_map(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where, "expected an object of numbers");
  std::map<std::string, double> out;
  for (const auto& [key, value] : j.items()) {
    out[key] = real(value, join_path(where, key));
  }
  return out;
}

InlineModel parse_inline(const json& j, const std::string& where) {
  allow_keys(j, where, {"base", "fiber", "parameters", "bivector", "hamiltonian"});
  InlineModel m;
  if (!j.contains("base") || !j.contains("fiber")) {
    throw ConfigError(where, "inline model needs 'base' and 'fiber'");
  }
  m.base = texts(j["base"], join_path(where, "base"));
  m.fiber = texts(j["fiber"], join_path(where, "fiber"));
  if (m.base.empty()) throw ConfigError(join_path(where, "base"), "must not be empty");
  if (j.contains("parameters")) {
    m.parameters = real_map(j["parameters"], join_path(where, "parameters"));
  }
  if (j.contains("bivector")) {
    const std::string bw = join_path(where, "bivector");
    if (!j["bivector"].is_object()) throw ConfigError(bw, "expected an object");
    for (const auto& [key, value] : j["bivector"].items()) {
      m.bivector[key] = text(value, join_path(bw, key));
    }
  }
  if (!j.contains("hamiltonian")) {
    throw ConfigError(where, "inline model needs 'hamiltonian'");
  }
  m.hamiltonian = text(j["hamiltonian"], join_path(where, "hamiltonian"));
  return m;
}

ModelSpec parse_model(const json& j) {
  const std::string where = "model";
  if (j.is_string()) {
    ModelSpec m;
    m.name = j.get<std::string>();
    return m;
  }
  allow_keys(j, where, {"name", "params", "hamiltonian", "inline"});
  ModelSpec m;
  if (j.contains("inline")) {
    if (j.contains("name") || j.contains("params") || j.contains("hamiltonian")) {
      throw ConfigError(where, "'inline' excludes 'name', 'params' and 'hamiltonian'");
    }
    m.inline_model = parse_inline(j["inline"], "model.inline");
    return m;
  }
  if (!j.contains("name")) throw ConfigError(where, "needs 'name' or 'inline'");
  m.name = text(j["name"], "model.name");
  if (j.contains("params")) m.params = real_map(j["params"], "model.params");
  if (j.contains("hamiltonian")) {
    m.hamiltonian = text(j["hamiltonian"], "model.hamiltonian");
  }
  return m;
}

DomainSpec parse_domain(const json& j) {
  allow_keys(j, "domain", {"lo", "hi", "counts"});
  DomainSpec d;
  if (!j.contains("lo") || !j.contains("hi")) {
    throw ConfigError("domain", "needs 'lo' and 'hi'");
  }
  d.lo = reals(j["lo"], "domain.lo");
  d.hi = reals(j["hi"], "domain.hi");
  if (d.lo.empty() || d.lo.size() != d.hi.size()) {
    throw ConfigError("domain", "'lo' and 'hi' must be non-empty and of equal length");
  }
  for (std::size_t i = 0; i < d.lo.size(); ++i) {
    if (!(d.lo[i] <= d.hi[i])) {
      throw ConfigError("domain", "lo[" + std::to_string(i) + "] exceeds hi[" +
                                      std::to_string(i) + "]");
    }
  }
  if (j.contains("counts")) {
    const json& c = j["counts"];
    if (c.is_number()) {
      d.counts.assign(d.lo.size(), count(c, "domain.counts"));
    } else if (c.is_array()) {
      for (std::size_t i = 0; i < c.size(); ++i) {
        d.counts.push_back(count(c[i], "domain.counts[" + std::to_string(i) + "]"));
      }
    } else {
      throw ConfigError("domain.counts", "expected an integer or an array");
    }
  } else {
    d.counts.assign(d.lo.size(), 11);
  }
  if (d.counts.size() != d.lo.size()) {
    throw ConfigError("domain.counts", "one count per axis expected");
  }
  for (std::size_t c : d.counts) {
    if (c < 2) throw ConfigError("domain.counts", "grid counts must be at least 2");
  }
  return d;
}

FlowConfig parse_flow(const json& j) {
  allow_keys(j, "flow", {"x0", "t1", "steps"});
  FlowConfig f;
  if (!j.contains("x0")) throw ConfigError("flow", "needs 'x0'");
  f.x0 = reals(j["x0"], "flow.x0");
  if (j.contains("t1")) f.t1 = positive(j["t1"], "flow.t1");
  if (j.contains("steps")) f.steps = count(j["steps"], "flow.steps");
  if (f.steps < 1) throw ConfigError("flow.steps", "must be at least 1");
  return f;
}

Tolerances parse_tolerances(const json& j) {
  allow_keys(j, "tolerances", {"rank_tol", "residual_tol", "defect_tol", "flow_tol"});
  Tolerances t;
  if (j.contains("rank_tol")) t.rank_tol = positive(j["rank_tol"], "tolerances.rank_tol");
  if (j.contains("residual_tol")) {
    t.residual_tol = positive(j["residual_tol"], "tolerances.residual_tol");
  }
  if (j.contains("defect_tol")) t.defect_tol = positive(j["defect_tol"], "tolerances.defect_tol");
  if (j.contains("flow_tol")) t.flow_tol = positive(j["flow_tol"], "tolerances.flow_tol");
  return t;
}

std::string position_of(const std::string& content, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < content.size(); ++i) {
    if (content[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> checks = {"flow", "hj", "lagrangian", "rank"};
  return checks;
}

ExperimentConfig parse_config(const json& j) {
  allow_keys(j, "", {"version", "name", "model", "section", "domain", "flow",
                     "checks", "tolerances"});
  ExperimentConfig c;
  if (j.contains("version")) {
    if (!j["version"].is_number_integer() || j["version"].get<int>() != 1) {
      throw ConfigError("version", "only version 1 is supported");
    }
  }
  if (j.contains("name")) c.name = text(j["name"], "name");
  if (!j.contains("model")) throw ConfigError("", "missing 'model'");
  c.model = parse_model(j["model"]);
  if (j.contains("section")) {
    const json& s = j["section"];
    if (s.is_object()) {
      allow_keys(s, "section", {"components", "parameters"});
      if (!s.contains("components")) throw ConfigError("section", "needs 'components'");
      c.section = texts(s["components"], "section.components");
      if (s.contains("parameters")) {
        c.section_parameters = real_map(s["parameters"], "section.parameters");
      }
    } else {
      c.section = texts(s, "section");
    }
  }
  if (j.contains("domain")) c.domain = parse_domain(j["domain"]);
  if (j.contains("flow")) c.flow = parse_flow(j["flow"]);
  if (j.contains("checks")) {
    c.checks = texts(j["checks"], "checks");
    std::set<std::string> seen;
    for (const auto& name : c.checks) {
      const auto& known = known_checks();
      if (std::find(known.begin(), known.end(), name) == known.end()) {
        throw ConfigError("checks", "unknown check '" + name + "'");
      }
      if (!seen.insert(name).second) {
        throw ConfigError("checks", "check '" + name + "' listed twice");
      }
    }
    std::sort(c.checks.begin(), c.checks.end());
  }
  if (j.contains("tolerances")) c.tolerances = parse_tolerances(j["tolerances"]);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();
  json j;
  try {
    j = json::parse(content);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + position_of(content, e.byte),
                      "invalid JSON");
  }
  try {
    return parse_config(j);
  } catch (const ConfigError& e) {
    throw ConfigError(path, e.what());
  }
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["version"] = 1;
  if (!c.name.empty()) j["name"] = c.name;
  json model;
  if (c.model.inline_model) {
    const InlineModel& m = *c.model.inline_model;
    json in;
    in["base"] = m.base;
    in["fiber"] = m.fiber;
    if (!m.parameters.empty()) in["parameters"] = m.parameters;
    in["bivector"] = json::object();
    for (const auto& [k, v] : m.bivector) in["bivector"][k] = v;
    in["hamiltonian"] = m.hamiltonian;
    model["inline"] = in;
  } else {
    model["name"] = c.model.name;
    if (!c.model.params.empty()) model["params"] = c.model.params;
    if (!c.model.hamiltonian.empty()) model["hamiltonian"] = c.model.hamiltonian;
  }
  j["model"] = model;
  if (!c.section.empty()) {
    j["section"] = {{"components", c.section}};
    if (!c.section_parameters.empty()) {
      j["section"]["parameters"] = c.section_parameters;
    }
  }
  if (c.domain) {
    j["domain"] = {{"lo", c.domain->lo}, {"hi", c.domain->hi},
                   {"counts", c.domain->counts}};
  }
  if (c.flow) {
    j["flow"] = {{"x0", c.flow->x0}, {"t1", c.flow->t1}, {"steps", c.flow->steps}};
  }
  j["checks"] = c.checks;
  j["tolerances"] = {{"rank_tol", c.tolerances.rank_tol},
                     {"residual_tol", c.tolerances.residual_tol},
                     {"defect_tol", c.tolerances.defect_tol},
                     {"flow_tol", c.tolerances.flow_tol}};
  return j;
}

}  // namespace uhj::cli
