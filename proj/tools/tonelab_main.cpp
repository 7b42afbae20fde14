// tonelab command-line tool. Every subcommand is turned into a one-task
// scenario and goes through the same validation and run path as scenario files.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tonelab/emit.hpp"
#include "tonelab/numeric_format.hpp"
#include "tonelab/scenario.hpp"

namespace {

using nlohmann::json;
using namespace tonelab;

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitValidation = 2;
constexpr int kExitTaskError = 3;

struct CommonFlags {
  std::string config;
  std::string out;
  std::string format = "table";
  std::optional<int> grid;
  std::optional<double> tol;
  std::optional<double> horizon;
  bool timing = false;
};

struct ModelFlags {
  std::optional<int> n;
  std::optional<std::string> f;
  std::optional<std::string> psi;
  std::optional<int> m;
  std::optional<double> fiber_volume;
};

void add_common(CLI::App* sub, CommonFlags& c) {
  sub->add_option("--config", c.config, "Scenario JSON file; its model is used unless overridden");
  sub->add_option("--out", c.out, "Output path (default: standard output)");
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"table", "csv", "json"}));
  sub->add_option("--grid", c.grid, "Coarse grid size (the fine grid doubles it)");
  sub->add_option("--tol", c.tol, "Tolerance of the task (eigensolver, sweep stop, or residual)");
  sub->add_option("--horizon", c.horizon, "Horizon T for certificates, comparisons and Brooks growth");
  sub->add_flag("--timing", c.timing, "Include wall time in the output");
}

void add_model(CLI::App* sub, ModelFlags& m) {
  sub->add_option("--n", m.n, "Base dimension");
  sub->add_option("--f", m.f, "Base warp: builtin name or expression in t");
  sub->add_option("--psi", m.psi, "Fiber warp: builtin name or expression in t");
  sub->add_option("--m", m.m, "Fiber dimension");
  sub->add_option("--fiber-volume", m.fiber_volume, "Volume of the unit fiber");
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("--config", "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("--config", std::string("'") + path + "' is not valid JSON: " + e.what());
  }
}

json model_json(const CommonFlags& c, const ModelFlags& m) {
  json model = json::object();
  if (!c.config.empty()) {
    json cfg = read_json_file(c.config);
    if (cfg.contains("model")) model = cfg["model"];
  }
  if (m.n) model["n"] = *m.n;
  if (m.f) model["f"] = *m.f;
  if (m.psi) model["psi"] = *m.psi;
  if (m.m) model["m"] = *m.m;
  if (m.fiber_volume) model["unit_fiber_volume"] = *m.fiber_volume;
  return model;
}

template <class T>
void put(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

int run_and_emit(const json& scenario_json, const CommonFlags& c) {
  const ScenarioSpec spec = scenario_from_json(scenario_json);
  RunOptions ro;
  ro.timing = c.timing;
  const RunRecord rec = run_scenario(spec, ro);
  try {
    emit(rec, parse_output_format(c.format), c.out);
  } catch (const std::runtime_error& e) {
    std::cerr << "tonelab: " << e.what() << '\n';
    return kExitIo;
  }
  for (const auto& r : rec.results)
    if (!r.ok) std::cerr << "tonelab: task '" << r.label << "' failed: " << r.error << '\n';
  return rec.all_ok() ? kExitOk : kExitTaskError;
}

json single_task(const std::string& name, const json& model, json task) {
  return {{"name", name}, {"model", model}, {"tasks", json::array({std::move(task)})}};
}

// Applies --grid/--tol/--horizon to every task of a scenario where they fit.
void override_tasks(json& scenario, const CommonFlags& c) {
  if (!scenario.contains("tasks") || !scenario["tasks"].is_array()) return;
  for (auto& t : scenario["tasks"]) {
    const std::string type = t.value("task", "");
    if (c.grid && (type == "tone" || type == "ess")) t["grid"] = *c.grid;
    if (c.tol) {
      if (type == "tone") t["tol"] = *c.tol;
      if (type == "ess") t["stop_tol"] = *c.tol;
      if (type == "compare" || type == "verify") t["tolerance"] = *c.tol;
    }
    if (c.horizon) {
      if (type == "certify" || type == "compare") t["horizon"] = *c.horizon;
      if (type == "brooks") t["r_max"] = *c.horizon;
    }
  }
}

int parse_profile_command(const std::string& src, const std::vector<double>& at, const CommonFlags& c) {
  Profile p = [&] {
    try {
      return resolve_profile(src);
    } catch (const ParseError& e) {
      std::cerr << "tonelab: " << e.what() << "\n  " << src << "\n  " << std::string(e.position(), ' ') << "^\n";
      throw ValidationError("expr", "parse failed");
    }
  }();
  json j = {{"source", p.source()},
            {"expr", to_string(p.expr())},
            {"d1", to_string(p.d1_expr())},
            {"d2", to_string(p.d2_expr())},
            {"constant", p.is_constant()}};
  json values = json::array();
  for (double t : at) {
    json v = {{"t", t}};
    try {
      v["value"] = p.value(t);
      v["d1"] = p.d1(t);
      v["d2"] = p.d2(t);
    } catch (const DomainError& e) {
      v["error"] = e.what();
    }
    values.push_back(v);
  }
  j["values"] = values;

  std::ostringstream os;
  const std::string fmt = c.format;
  auto cell = [](const json& v) { return v.is_number() ? format_double(v.get<double>()) : std::string(); };
  if (fmt == "json") {
    os << j.dump(2) << '\n';
  } else if (fmt == "csv") {
    os << "t,value,d1,d2\n";
    for (const auto& v : values)
      os << cell(v["t"]) << ',' << cell(v.value("value", json())) << ',' << cell(v.value("d1", json())) << ','
         << cell(v.value("d2", json())) << '\n';
  } else {
    os << "expr: " << j["expr"].get<std::string>() << "\nd1:   " << j["d1"].get<std::string>()
       << "\nd2:   " << j["d2"].get<std::string>() << '\n';
    for (const auto& v : values) {
      os << "  t=" << cell(v["t"]);
      if (v.contains("error"))
        os << "  error: " << v["error"].get<std::string>();
      else
        os << "  value=" << cell(v["value"]) << "  d1=" << cell(v["d1"]) << "  d2=" << cell(v["d2"]);
      os << '\n';
    }
  }
  if (c.out.empty() || c.out == "-") {
    std::cout << os.str();
  } else {
    std::ofstream out(c.out);
    if (!(out << os.str())) {
      std::cerr << "tonelab: cannot write '" << c.out << "'\n";
      return kExitIo;
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tonelab: fundamental tones and essential spectra of warped products"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("tonelab ") + "0.1.0");

  CommonFlags common;
  ModelFlags model;

  // tone
  auto* tone = app.add_subcommand("tone", "Fundamental tone of a ball or annulus");
  add_common(tone, common);
  add_model(tone, model);
  std::optional<double> a, b;
  std::optional<std::string> inner, space;
  std::optional<int> fiber_mode, angular_mode;
  bool check_modes = false;
  tone->add_option("--a", a, "Inner radius (0 for a ball)");
  tone->add_option("--b", b, "Outer radius")->required();
  tone->add_option("--inner", inner, "Inner boundary")->check(CLI::IsMember({"pole", "dirichlet"}));
  tone->add_option("--space", space, "base or total")->check(CLI::IsMember({"base", "total"}));
  tone->add_option("--fiber-mode", fiber_mode, "Fiber mode index j");
  tone->add_option("--angular-mode", angular_mode, "Angular degree k");
  tone->add_flag("--check-modes", check_modes, "Also solve the next mode and compare");

  // ess
  auto* ess = app.add_subcommand("ess", "Bottom of the essential spectrum from exterior sweeps");
  add_common(ess, common);
  add_model(ess, model);
  std::vector<double> R;
  std::optional<double> L0, threshold;
  std::optional<int> max_cuts;
  bool transfer = false;
  ess->add_option("--R", R, "Exterior radii, increasing (comma separated)")->delimiter(',')->required();
  ess->add_option("--L0", L0, "First truncation length");
  ess->add_option("--max-cuts", max_cuts, "Number of truncations per radius");
  ess->add_option("--threshold", threshold, "Divergence threshold for a discrete verdict");
  ess->add_option("--space", space, "base or total")->check(CLI::IsMember({"base", "total"}));
  ess->add_flag("--transfer", transfer, "Also report the transfer to the total space");

  // certify
  auto* cert = app.add_subcommand("certify", "Discreteness certificate from h, l or radial curvature");
  add_common(cert, common);
  add_model(cert, model);
  std::optional<std::string> mode, G;
  std::optional<double> R_star;
  std::optional<int> samples;
  cert->add_option("--mode", mode, "Driving function")->check(CLI::IsMember({"h", "l", "radial"}));
  cert->add_option("--R-star", R_star, "Start of the tested tail (default horizon/2)");
  cert->add_option("--G", G, "Curvature comparison function (radial mode)");
  cert->add_option("--samples", samples, "Tail samples");

  // compare
  auto* cmp = app.add_subcommand("compare", "Laplacian comparison against the Jacobi solution J'' = G J");
  add_common(cmp, common);
  add_model(cmp, model);
  std::optional<double> step;
  cmp->add_option("--G", G, "Comparison function G(t)")->required();
  cmp->add_option("--step", step, "RK4 step");
  cmp->add_option("--samples", samples, "Sample count on (0, T]");

  // verify-identities
  auto* ver = app.add_subcommand("verify-identities", "Check the submersion identities on the model");
  add_common(ver, common);
  add_model(ver, model);
  std::vector<std::string> checks;
  std::optional<std::string> field, phi;
  std::optional<double> from, to;
  ver->add_option("--checks", checks, "divergence, laplacian-lift, grad-average, sign")->delimiter(',');
  ver->add_option("--field", field, "Radial field coefficient a(t)");
  ver->add_option("--phi", phi, "Test function phi(t)");
  ver->add_option("--from", from, "Start of the sampled range");
  ver->add_option("--to", to, "End of the sampled range");
  ver->add_option("--samples", samples, "Sample count");

  // brooks
  auto* brk = app.add_subcommand("brooks", "Brooks volume-growth diagnostic");
  add_common(brk, common);
  add_model(brk, model);
  brk->add_option("--space", space, "base or total")->check(CLI::IsMember({"base", "total"}));
  brk->add_option("--samples", samples, "Quadrature samples");

  // scenario
  auto* scen = app.add_subcommand("scenario", "Run a builtin scenario or a scenario file");
  add_common(scen, common);
  std::string scenario_ref;
  bool list = false;
  scen->add_option("name", scenario_ref, "Builtin name or path to a JSON scenario");
  scen->add_flag("--list", list, "List builtin scenarios");

  // parse-profile
  auto* pp = app.add_subcommand("parse-profile", "Parse an expression and print it with its derivatives");
  add_common(pp, common);
  std::string expr;
  std::vector<double> at;
  pp->add_option("expr", expr, "Expression in t, or a builtin profile name")->required();
  pp->add_option("--at", at, "Evaluation points (comma separated)")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (pp->parsed()) return parse_profile_command(expr, at, common);

    if (scen->parsed()) {
      if (list) {
        for (const auto& n : builtin_scenario_names()) {
          std::cout << n << "  " << builtin_scenario(n).description << '\n';
        }
        return kExitOk;
      }
      if (scenario_ref.empty()) throw ValidationError("name", "give a builtin name or a scenario file");
      json s;
      const auto names = builtin_scenario_names();
      if (std::find(names.begin(), names.end(), scenario_ref) != names.end())
        s = scenario_to_json(builtin_scenario(scenario_ref));
      else
        s = read_json_file(scenario_ref);
      override_tasks(s, common);
      return run_and_emit(s, common);
    }

    const json m = model_json(common, model);
    json t;
    std::string name;
    if (tone->parsed()) {
      name = "tone";
      json domain = {{"b", *b}};
      put(domain, "a", a);
      put(domain, "inner", inner);
      t = {{"task", "tone"}, {"domain", domain}};
      put(t, "space", space);
      put(t, "fiber_mode", fiber_mode);
      put(t, "angular_mode", angular_mode);
      if (check_modes) t["check_modes"] = true;
    } else if (ess->parsed()) {
      name = "ess";
      t = {{"task", "ess"}, {"R", R}};
      put(t, "space", space);
      put(t, "L0", L0);
      put(t, "max_cuts", max_cuts);
      put(t, "threshold", threshold);
      if (transfer) t["transfer"] = true;
    } else if (cert->parsed()) {
      name = "certify";
      t = {{"task", "certify"}};
      put(t, "mode", mode);
      put(t, "R_star", R_star);
      put(t, "G", G);
      put(t, "samples", samples);
    } else if (cmp->parsed()) {
      name = "compare";
      t = {{"task", "compare"}};
      put(t, "G", G);
      put(t, "step", step);
      put(t, "samples", samples);
    } else if (ver->parsed()) {
      name = "verify-identities";
      t = {{"task", "verify"}};
      if (!checks.empty()) t["checks"] = checks;
      put(t, "field", field);
      put(t, "phi", phi);
      put(t, "from", from);
      put(t, "to", to);
      put(t, "samples", samples);
    } else if (brk->parsed()) {
      name = "brooks";
      t = {{"task", "brooks"}};
      put(t, "space", space);
      put(t, "samples", samples);
    }
    json s = single_task(name, m, t);
    override_tasks(s, common);
    return run_and_emit(s, common);
  } catch (const ValidationError& e) {
    std::cerr << "tonelab: invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "tonelab: " << e.what() << '\n';
    return kExitTaskError;
  }
}
