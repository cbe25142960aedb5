#include "runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "uhj/canonical.hpp"
#include "uhj/errors.hpp"
#include "uhj/expr.hpp"
#include "uhj/extended.hpp"
#include "uhj/flow.hpp"
#include "uhj/geometry.hpp"
#include "uhj/nonholonomic.hpp"

namespace uhj::cli {
namespace {

using nlohmann::json;

json to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vector to_vector(const std::vector<double>& v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

expr::Expr parse_at(const std::string& text, std::vector<std::string> names,
                    const std::string& where) {
  try {
    return expr::Expr::parse(text, std::move(names));
  } catch (const InputError& e) {
    throw ConfigError(where, e.what());
  }
}

ModelInstance inline_instance(const InlineModel& m) {
  std::vector<std::string> names = m.base;
  names.insert(names.end(), m.fiber.begin(), m.fiber.end());
  FiberedChart chart = [&] {
    try {
      return FiberedChart(m.base, m.fiber);
    } catch (const InputError& e) {
      throw ConfigError("model.inline", e.what());
    }
  }();
  std::vector<std::string> declared = names;
  Vector tail(static_cast<Eigen::Index>(m.parameters.size()));
  Eigen::Index k = 0;
  for (const auto& [name, value] : m.parameters) {
    if (std::find(names.begin(), names.end(), name) != names.end()) {
      throw ConfigError("model.inline.parameters",
                        "parameter '" + name + "' shadows a coordinate");
    }
    declared.push_back(name);
    tail(k++) = value;
  }

  struct Entry {
    Eigen::Index row;
    Eigen::Index col;
    std::function<double(const Vector&)> f;
  };
  std::vector<Entry> entries;
  for (const auto& [key, text] : m.bivector) {
    const std::string where = "model.inline.bivector." + key;
    const auto comma = key.find(',');
    if (comma == std::string::npos) {
      throw ConfigError(where, "key must be 'a,b' with two coordinate names");
    }
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(' '));
      s.erase(s.find_last_not_of(' ') + 1);
      return s;
    };
    const auto a = chart.index_of(trim(key.substr(0, comma)));
    const auto b = chart.index_of(trim(key.substr(comma + 1)));
    if (!a || !b) throw ConfigError(where, "unknown coordinate in key");
    if (*a >= *b) {
      throw ConfigError(where,
                        "only the strict upper triangle may be given (first "
                        "name must precede the second in chart order)");
    }
    entries.push_back({static_cast<Eigen::Index>(*a), static_cast<Eigen::Index>(*b),
                       expr::bind(parse_at(text, declared, where), tail)});
  }
  const auto n = static_cast<Eigen::Index>(chart.dim());
  FiberedBivector bivector(chart, [entries, n](const Vector& z) {
    Matrix l = Matrix::Zero(n, n);
    for (const auto& e : entries) {
      const double v = e.f(z);
      l(e.row, e.col) = v;
      l(e.col, e.row) = -v;
    }
    return l;
  });
  ScalarField h = expr::scalar_field(
      parse_at(m.hamiltonian, declared, "model.inline.hamiltonian"), tail);

  ModelInstance out{"inline",
                    ModelFamily::kCanonical,
                    m.parameters,
                    std::move(bivector),
                    std::move(h),
                    false,
                    std::nullopt,
                    nullptr,
                    nullptr,
                    nullptr};
  return out;
}

bool extended(const ModelInstance& m) { return m.energy_index.has_value(); }

std::vector<std::size_t> comparison_indices(const ModelInstance& m) {
  std::vector<std::size_t> out;
  if (!m.energy_index) return out;
  for (std::size_t i = 0; i < m.bivector.chart().dim(); ++i) {
    if (i != *m.energy_index) out.push_back(i);
  }
  return out;
}

void require_section(const Experiment& e, const std::string& check) {
  if (!e.section) throw ConfigError("section", "check '" + check + "' needs a section");
  if (!e.grid) throw ConfigError("domain", "check '" + check + "' needs a domain");
}

json lagrangian_check(const Experiment& e, const Tolerances& tol, bool& passed) {
  require_section(e, "lagrangian");
  const Section& s = *e.section;
  const FiberedBivector& l = e.model.bivector;
  json records = json::array();
  std::size_t failures = 0;
  std::size_t disagreements = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < e.grid->size(); ++i) {
    const Vector x = e.grid->point(i);
    json r;
    r["index"] = i;
    r["x"] = to_json(x);
    const double residual = max_abs(lagrangian_residual(l, s, x));
    const SubspaceCheck sub =
        subspace_lagrangian_check(l, s.point(x), graph_tangent(s, x));
    const bool ok = residual <= tol.residual_tol;
    r["residual"] = residual;
    r["subspace_defect"] = sub.defect;
    r["subspace_holds"] = sub.holds;
    r["agree"] = ok == sub.holds;
    if (e.model.family == ModelFamily::kCanonical && e.family != "inline") {
      r["closed_form_residual"] = closed_form_check(s, x);
    }
    if (e.model.nonholonomic) {
      r["nh_section_residual"] =
          nh_section_check(*e.model.nonholonomic, one_form_of(*e.model.nonholonomic, s), x);
    }
    if (e.model.forced) {
      r["forced_section_residual"] = forced_section_check(*e.model.forced, s, x);
    }
    r["passed"] = ok;
    if (!ok) ++failures;
    if (ok != sub.holds) ++disagreements;
    worst = std::max(worst, residual);
    records.push_back(std::move(r));
  }
  passed = failures == 0;
  return {{"check", "lagrangian"},
          {"passed", passed},
          {"summary",
           {{"points", e.grid->size()},
            {"failures", failures},
            {"subspace_disagreements", disagreements},
            {"max_residual", worst}}},
          {"records", std::move(records)}};
}

json hj_check(const Experiment& e, const Tolerances& tol, bool& passed) {
  require_section(e, "hj");
  const Section& s = *e.section;
  const FiberedBivector& l = e.model.bivector;
  const ScalarField& h = e.model.hamiltonian;
  EquivalenceOptions opt;
  opt.residual_tol = tol.residual_tol;
  opt.defect_tol = tol.defect_tol;
  json records = json::array();
  std::size_t failures = 0;
  std::size_t inconsistent = 0;
  for (std::size_t i = 0; i < e.grid->size(); ++i) {
    const Vector x = e.grid->point(i);
    json r;
    r["index"] = i;
    r["x"] = to_json(x);
    bool ok = false;
    if (extended(e.model)) {
      const double residual = max_abs(lagrangian_residual(l, s, x));
      const ExtendedHJResult hj = tdep_hj_check(l, h, s, x, 0);
      const double related =
          extended_relatedness_defect(l, h, s, x, *e.model.energy_index);
      const bool hyp = residual <= opt.residual_tol;
      const bool hj_ok = hj.holds(opt.defect_tol);
      const bool rel_ok = related <= opt.relatedness_tol();
      r["lagrangian_residual"] = residual;
      r["hj_defect"] = hj.residual;
      r["multiplier"] = hj.multiplier;
      r["intersection_dim"] = hj.intersection_dim;
      r["relatedness_defect"] = related;
      r["hypothesis_holds"] = hyp;
      r["hj_holds"] = hj_ok;
      r["related_holds"] = rel_ok;
      r["consistent"] = !hyp || hj_ok == rel_ok;
      if (hyp && hj_ok != rel_ok) ++inconsistent;
      ok = hyp && hj_ok && rel_ok;
    } else {
      const HJVerdict v = theorem_verdict(l, h, s, x, opt);
      r["lagrangian_residual"] = v.lagrangian_residual;
      r["hj_defect"] = v.hj_defect;
      r["intersection_dim"] = v.intersection_dim;
      r["relatedness_defect"] = v.relatedness_defect;
      r["hypothesis_holds"] = v.hypothesis_holds;
      r["hj_holds"] = v.hj_holds;
      r["related_holds"] = v.related_holds;
      r["consistent"] = v.consistent();
      if (!v.consistent()) ++inconsistent;
      if (e.model.transitive) {
        r["dh_on_base_norm"] = dh_closed_on_base(h, s, x).norm();
      }
      if (e.model.nonholonomic) {
        r["nh_hj_defect"] = nh_hj_check(*e.model.nonholonomic,
                                        one_form_of(*e.model.nonholonomic, s), x);
      }
      ok = v.hypothesis_holds && v.hj_holds && v.related_holds;
    }
    r["passed"] = ok;
    if (!ok) ++failures;
    records.push_back(std::move(r));
  }
  passed = failures == 0;
  return {{"check", "hj"},
          {"passed", passed},
          {"summary",
           {{"points", e.grid->size()},
            {"failures", failures},
            {"equivalence_violations", inconsistent},
            {"relatedness_factor", opt.relatedness_factor}}},
          {"records", std::move(records)}};
}

json rank_check(const Experiment& e, const Tolerances& tol, bool& passed) {
  if (!e.grid) throw ConfigError("domain", "check 'rank' needs a domain");
  const FiberedBivector& l = e.model.bivector;
  const std::size_t dim = l.chart().dim();
  if (!e.section && e.grid->dim() != dim) {
    throw ConfigError("domain", "without a section the domain must cover all " +
                                    std::to_string(dim) + " coordinates");
  }
  json records = json::array();
  std::vector<Vector> points;
  std::size_t lemma_failures = 0;
  for (std::size_t i = 0; i < e.grid->size(); ++i) {
    const Vector x = e.grid->point(i);
    const Vector p = e.section ? e.section->point(x) : x;
    const std::size_t r = rank(l.components(p), tol.rank_tol);
    const SubspaceCheck lemma = lemma_check(l, p, tol.rank_tol);
    if (!lemma.holds) ++lemma_failures;
    points.push_back(p);
    records.push_back({{"index", i},
                       {"point", to_json(p)},
                       {"rank", r},
                       {"lemma_defect", lemma.defect},
                       {"lemma_holds", lemma.holds}});
  }
  const RankStats stats = rank_scan(l, points, tol.rank_tol);
  passed = lemma_failures == 0;
  return {{"check", "rank"},
          {"passed", passed},
          {"summary",
           {{"points", stats.samples},
            {"total_dim", dim},
            {"min_rank", stats.min_rank},
            {"max_rank", stats.max_rank},
            {"constant_rank", stats.constant()},
            {"lemma_failures", lemma_failures}}},
          {"records", std::move(records)}};
}

json flow_check(const Experiment& e, const ExperimentConfig& config,
                const RunOptions& options, bool& passed) {
  if (!e.section) throw ConfigError("section", "check 'flow' needs a section");
  if (!config.flow) throw ConfigError("flow", "check 'flow' needs a flow block");
  const FlowConfig& f = *config.flow;
  if (f.x0.size() != e.section->chart().n_base()) {
    throw ConfigError("flow.x0", "expected " +
                                     std::to_string(e.section->chart().n_base()) +
                                     " base coordinates");
  }
  const auto indices = comparison_indices(e.model);
  const LiftComparison c = lift_and_compare(e.model.bivector, e.model.hamiltonian,
                                            *e.section, to_vector(f.x0), f.t1,
                                            f.steps, indices);
  json files = json::array();
  if (options.csv_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(*options.csv_dir);
    const std::string stem = config.name.empty() ? "flow" : config.name;
    auto dump = [&](const Trajectory& t, const std::vector<std::string>& names,
                    const std::string& leg) {
      const fs::path path = fs::path(*options.csv_dir) / (stem + "-" + leg + ".csv");
      std::ofstream out(path);
      if (!out) throw ConfigError("--csv-dir", "cannot write " + path.string());
      write_csv(out, t, names);
      files.push_back(path.string());
    };
    dump(c.base, e.section->chart().base_names(), "base");
    dump(c.lifted, e.section->chart().names(), "lifted");
    dump(c.upstairs, e.section->chart().names(), "upstairs");
  }
  passed = c.max_error <= config.tolerances.flow_tol;
  json compared = json::array();
  for (std::size_t i : indices) compared.push_back(e.section->chart().names()[i]);
  return {{"check", "flow"},
          {"passed", passed},
          {"summary",
           {{"max_error", c.max_error},
            {"exited", c.exited},
            {"exit_time", c.exit_time},
            {"steps", f.steps},
            {"t1", f.t1},
            {"compared_coordinates", compared},
            {"final_lifted", to_json(c.lifted.states.back())},
            {"final_upstairs", to_json(c.upstairs.states.back())}}},
          {"csv", files}};
}

json config_echo(const ExperimentConfig& c) { return to_json(c); }

}  // namespace

Experiment build_experiment(const ExperimentConfig& config) {
  Experiment e{"", ModelInstance{"", ModelFamily::kCanonical, {},
                                 FiberedBivector::zero(FiberedChart({"x"}, {})),
                                 ScalarField::constant(0.0), false, std::nullopt,
                                 nullptr, nullptr, nullptr},
               std::nullopt, std::nullopt};
  std::map<std::string, double> params;
  if (config.model.inline_model) {
    e.model = inline_instance(*config.model.inline_model);
    e.family = "inline";
    params = config.model.inline_model->parameters;
  } else {
    try {
      e.model = make_model(config.model.name, config.model.params,
                           config.model.hamiltonian);
    } catch (const InputError& err) {
      throw ConfigError("model", err.what());
    }
    e.family = family_name(e.model.family);
    params = e.model.params;
  }
  const FiberedChart& chart = e.model.bivector.chart();

  if (!config.section.empty()) {
    if (config.section.size() != chart.n_fiber()) {
      throw ConfigError("section.components",
                        "expected " + std::to_string(chart.n_fiber()) +
                            " components (one per fiber coordinate)");
    }
    std::vector<std::string> declared = chart.base_names();
    std::vector<double> tail;
    for (const auto& [name, value] : params) {
      declared.push_back(name);
      tail.push_back(value);
    }
    for (const auto& [name, value] : config.section_parameters) {
      if (std::find(declared.begin(), declared.end(), name) != declared.end()) {
        throw ConfigError("section.parameters",
                          "'" + name + "' clashes with a coordinate or model parameter");
      }
      declared.push_back(name);
      tail.push_back(value);
    }
    std::vector<std::function<double(const Vector&)>> parts;
    for (std::size_t a = 0; a < config.section.size(); ++a) {
      parts.push_back(expr::bind(
          parse_at(config.section[a], declared,
                   "section.components[" + std::to_string(a) + "]"),
          to_vector(tail)));
    }
    e.section = Section(chart, [parts](const Vector& x) {
      Vector y(static_cast<Eigen::Index>(parts.size()));
      for (std::size_t a = 0; a < parts.size(); ++a) {
        y(static_cast<Eigen::Index>(a)) = parts[a](x);
      }
      return y;
    });
  }

  if (config.domain) {
    const std::size_t want = e.section ? chart.n_base() : chart.dim();
    if (config.domain->lo.size() != want) {
      throw ConfigError("domain", "expected " + std::to_string(want) +
                                      " axes (" +
                                      (e.section ? "base" : "total space") + ")");
    }
    e.grid = BoxGrid(to_vector(config.domain->lo), to_vector(config.domain->hi),
                     config.domain->counts);
  }
  return e;
}

ExperimentConfig apply_overrides(ExperimentConfig config, const RunOptions& options) {
  if (options.tol) {
    if (!(*options.tol > 0.0)) throw ConfigError("--tol", "must be positive");
    config.tolerances.defect_tol = *options.tol;
  }
  if (options.grid && config.domain) {
    if (*options.grid < 2) throw ConfigError("--grid", "must be at least 2");
    std::fill(config.domain->counts.begin(), config.domain->counts.end(), *options.grid);
  }
  return config;
}

RunResult run_checks(const ExperimentConfig& raw, std::vector<std::string> checks,
                     const RunOptions& options) {
  if (checks.empty()) throw ConfigError("checks", "no checks requested");
  std::sort(checks.begin(), checks.end());
  checks.erase(std::unique(checks.begin(), checks.end()), checks.end());
  const ExperimentConfig config = apply_overrides(raw, options);
  const Experiment e = build_experiment(config);

  json results = json::array();
  bool all = true;
  for (const auto& name : checks) {
    bool passed = false;
    json r;
    try {
      if (name == "lagrangian") {
        r = lagrangian_check(e, config.tolerances, passed);
      } else if (name == "hj") {
        r = hj_check(e, config.tolerances, passed);
      } else if (name == "rank") {
        r = rank_check(e, config.tolerances, passed);
      } else if (name == "flow") {
        r = flow_check(e, config, options, passed);
      } else {
        throw ConfigError("checks", "unknown check '" + name + "'");
      }
    } catch (const IntegrationError& err) {
      r = {{"check", name}, {"passed", false}, {"error", err.what()},
           {"failure_time", err.time()}};
      passed = false;
    } catch (const DomainError& err) {
      r = {{"check", name}, {"passed", false}, {"error", err.what()}};
      passed = false;
    } catch (const InputError& err) {
      throw ConfigError(name, err.what());
    }
    all = all && passed;
    results.push_back(std::move(r));
  }
  json report;
  report["toolkit"] = "uhj";
  report["version"] = kToolkitVersion;
  report["model"] = {{"name", e.model.name}, {"family", e.family},
                     {"dim", e.model.bivector.chart().dim()},
                     {"coordinates", e.model.bivector.chart().names()}};
  report["config"] = config_echo(config);
  report["checks"] = std::move(results);
  report["passed"] = all;
  return {std::move(report), all};
}

RunResult cross_check(const ExperimentConfig& raw, const RunOptions& options) {
  const ExperimentConfig config = apply_overrides(raw, options);
  const Experiment e = build_experiment(config);
  if (!config.domain) throw ConfigError("domain", "cross-check needs a domain");
  const FiberedChart& chart = e.model.bivector.chart();
  if (config.domain->lo.size() != chart.n_base()) {
    throw ConfigError("domain", "cross-check samples the base: expected " +
                                    std::to_string(chart.n_base()) + " axes");
  }
  const auto nb = static_cast<Eigen::Index>(chart.n_base());
  const auto nf = static_cast<Eigen::Index>(chart.n_fiber());
  const Vector lo = to_vector(config.domain->lo);
  const Vector hi = to_vector(config.domain->hi);

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> frac(0.0, 1.0);

  std::size_t disagreements = 0;
  std::size_t lagrangian = 0;
  std::size_t skipped = 0;
  for (std::size_t k = 0; k < options.samples; ++k) {
    Vector x(nb);
    for (Eigen::Index i = 0; i < nb; ++i) x(i) = lo(i) + frac(rng) * (hi(i) - lo(i));
    Vector b(nf);
    for (Eigen::Index a = 0; a < nf; ++a) b(a) = unit(rng);
    Matrix a(nf, nb);
    for (Eigen::Index r = 0; r < nf; ++r) {
      for (Eigen::Index c = 0; c < nb; ++c) a(r, c) = unit(rng);
    }
    // Every other sample symmetrizes the square block so that graphs of
    // closed forms show up in canonical charts.
    if (k % 2 == 0 && nf == nb) a = 0.5 * (a + a.transpose()).eval();
    const Vector x0 = x;
    Section s(chart, [a, b, x0](const Vector& z) { return Vector(b + a * (z - x0)); },
              [a](const Vector&) { return a; });
    try {
      const double residual = max_abs(lagrangian_residual(e.model.bivector, s, x));
      const SubspaceCheck sub = subspace_lagrangian_check(
          e.model.bivector, s.point(x), graph_tangent(s, x));
      const bool ok = residual <= config.tolerances.residual_tol;
      if (ok) ++lagrangian;
      if (ok != sub.holds) ++disagreements;
    } catch (const DomainError&) {
      ++skipped;
    }
  }
  const bool passed = disagreements == 0;
  json report;
  report["toolkit"] = "uhj";
  report["version"] = kToolkitVersion;
  report["config"] = config_echo(config);
  report["checks"] = json::array(
      {{{"check", "cross-check"},
        {"passed", passed},
        {"summary",
         {{"samples", options.samples},
          {"seed", options.seed},
          {"lagrangian_samples", lagrangian},
          {"skipped", skipped},
          {"disagreements", disagreements}}}}});
  report["passed"] = passed;
  return {std::move(report), passed};
}

json list_models() {
  json out = json::array();
  for (const auto& info : model_catalog()) {
    json params = json::array();
    for (const auto& p : info.params) {
      params.push_back({{"name", p.name}, {"default", p.default_value},
                        {"description", p.description}});
    }
    json entry = {{"name", info.name},
                  {"family", family_name(info.family)},
                  {"description", info.description},
                  {"params", params},
                  {"needs_hamiltonian", info.needs_hamiltonian}};
    try {
      const ModelInstance m = make_model(info.name, {},
                                         info.needs_hamiltonian ? "0" : "");
      entry["coordinates"] = m.bivector.chart().names();
      entry["base"] = m.bivector.chart().base_names();
    } catch (const InputError&) {
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace uhj::cli
