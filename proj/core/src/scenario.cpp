#include "tonelab/scenario.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <set>

#include "tonelab/comparison.hpp"
#include "tonelab/numeric_format.hpp"

namespace tonelab {

using nlohmann::json;

ValidationError::ValidationError(const std::string& path, const std::string& what)
    : std::invalid_argument(path.empty() ? what : path + ": " + what), path_(path) {}

namespace {

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

template <class T>
json opt(const std::optional<T>& v) {
  if (!v) return nullptr;
  if constexpr (std::is_same_v<T, double>) return num(*v);
  else return json(*v);
}

std::string space_name(Space s) { return s == Space::total ? "total" : "base"; }

// ---------------------------------------------------------------------------
// Reading with field paths

class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ValidationError(path_, "expected an object");
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }
  const json& raw(const std::string& key) const { return j_.at(key); }

  void allow(std::initializer_list<const char*> keys) const {
    std::set<std::string> ok(keys.begin(), keys.end());
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!ok.count(it.key())) throw ValidationError(at(it.key()), "unknown field");
  }

  double number(const std::string& key, double def) const {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_number()) throw ValidationError(at(key), "expected a number");
    return v.get<double>();
  }
  double number(const std::string& key) const {
    if (!has(key)) throw ValidationError(at(key), "required field is missing");
    return number(key, 0.0);
  }
  int integer(const std::string& key, int def) const {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_number_integer()) throw ValidationError(at(key), "expected an integer");
    return v.get<int>();
  }
  bool boolean(const std::string& key, bool def) const {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ValidationError(at(key), "expected true or false");
    return v.get<bool>();
  }
  std::string text(const std::string& key, const std::string& def) const {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ValidationError(at(key), "expected a string");
    return v.get<std::string>();
  }
  std::vector<double> numbers(const std::string& key) const {
    std::vector<double> out;
    if (!has(key)) return out;
    const json& v = j_.at(key);
    if (!v.is_array()) throw ValidationError(at(key), "expected an array of numbers");
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw ValidationError(at(key) + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }
  std::vector<std::string> strings(const std::string& key, std::vector<std::string> def) const {
    if (!has(key)) return def;
    const json& v = j_.at(key);
    if (!v.is_array()) throw ValidationError(at(key), "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_string()) throw ValidationError(at(key) + "[" + std::to_string(i) + "]", "expected a string");
      out.push_back(v[i].get<std::string>());
    }
    return out;
  }

 private:
  const json& j_;
  std::string path_;
};

void require(bool cond, const std::string& path, const std::string& what) {
  if (!cond) throw ValidationError(path, what);
}

void require_profile(const std::string& src, const std::string& path) {
  try {
    (void)resolve_profile(src);
  } catch (const std::exception& e) {
    throw ValidationError(path, e.what());
  }
}

Space read_space(const Reader& r) {
  const std::string s = r.text("space", "base");
  if (s == "base") return Space::base;
  if (s == "total") return Space::total;
  throw ValidationError(r.at("space"), "expected \"base\" or \"total\"");
}

int read_grid(const Reader& r, int def) {
  const int g = r.integer("grid", def);
  require(g >= 8 && g <= (1 << 20), r.at("grid"), "grid must lie in [8, 1048576]");
  return g;
}

RadialDomain read_domain(const Reader& parent) {
  require(parent.has("domain"), parent.at("domain"), "required field is missing");
  Reader r(parent.raw("domain"), parent.at("domain"));
  r.allow({"a", "b", "inner"});
  const double a = r.number("a", 0.0);
  const double b = r.number("b");
  const std::string inner = r.text("inner", a == 0.0 ? "pole" : "dirichlet");
  require(a >= 0.0, r.at("a"), "must be nonnegative");
  require(std::isfinite(b) && b > a, r.at("b"), "must be finite and exceed a");
  RadialDomain d;
  if (inner == "pole") {
    require(a == 0.0, r.at("inner"), "a pole boundary needs a = 0");
    d = RadialDomain::ball(b);
  } else if (inner == "dirichlet") {
    d = RadialDomain::annulus(a, b);
  } else {
    throw ValidationError(r.at("inner"), "expected \"pole\" or \"dirichlet\"");
  }
  return d;
}

ModelSpec read_model(const json& j) {
  Reader r(j, "model");
  r.allow({"n", "f", "psi", "m", "unit_fiber_volume", "fiber_modes"});
  ModelSpec m;
  m.n = r.integer("n", 2);
  require(m.n >= 2, r.at("n"), "dimension must be at least 2");
  m.f = r.text("f", "hyperbolic");
  require_profile(m.f, r.at("f"));
  if (r.has("psi")) {
    m.psi = r.text("psi", "1");
    require_profile(*m.psi, r.at("psi"));
  }
  m.m = r.integer("m", 1);
  require(m.m >= 1, r.at("m"), "fiber dimension must be at least 1");
  m.unit_fiber_volume = r.number("unit_fiber_volume", 0.0);
  require(m.unit_fiber_volume >= 0.0, r.at("unit_fiber_volume"), "must be positive (or 0 for the sphere)");
  m.fiber_modes = r.numbers("fiber_modes");
  return m;
}

TaskSpec read_task(const json& j, const std::string& path, std::size_t index) {
  Reader r(j, path);
  require(r.has("task"), r.at("task"), "required field is missing");
  const std::string type = r.text("task", "");
  TaskSpec t;
  t.label = r.text("label", type + "-" + std::to_string(index + 1));

  if (type == "tone") {
    r.allow({"task", "label", "space", "domain", "grid", "tol", "fiber_mode", "angular_mode", "check_modes"});
    ToneTask p;
    p.space = read_space(r);
    p.domain = read_domain(r);
    p.grid = read_grid(r, p.grid);
    p.tol = r.number("tol", p.tol);
    require(p.tol > 0.0 && p.tol < 1e-2, r.at("tol"), "tolerance must lie in (0, 1e-2)");
    p.fiber_mode = r.integer("fiber_mode", 0);
    require(p.fiber_mode >= 0, r.at("fiber_mode"), "must be nonnegative");
    p.angular_mode = r.integer("angular_mode", 0);
    require(p.angular_mode >= 0, r.at("angular_mode"), "must be nonnegative");
    p.check_modes = r.boolean("check_modes", false);
    t.params = p;
  } else if (type == "ess") {
    r.allow({"task", "label", "space", "R", "L0", "max_cuts", "stop_tol", "threshold", "grid", "fiber_mode",
             "transfer"});
    EssTask p;
    p.space = read_space(r);
    p.R = r.numbers("R");
    require(!p.R.empty(), r.at("R"), "needs at least one radius");
    for (std::size_t i = 0; i < p.R.size(); ++i) {
      require(p.R[i] > 0.0 && std::isfinite(p.R[i]), r.at("R") + "[" + std::to_string(i) + "]", "must be positive");
      require(i == 0 || p.R[i] > p.R[i - 1], r.at("R") + "[" + std::to_string(i) + "]", "radii must increase");
    }
    p.policy.L0 = r.number("L0", p.policy.L0);
    require(p.policy.L0 > 0.0, r.at("L0"), "must be positive");
    p.policy.max_cuts = r.integer("max_cuts", p.policy.max_cuts);
    require(p.policy.max_cuts >= 2 && p.policy.max_cuts <= 16, r.at("max_cuts"), "must lie in [2, 16]");
    p.policy.stop_tol = r.number("stop_tol", p.policy.stop_tol);
    require(p.policy.stop_tol > 0.0, r.at("stop_tol"), "must be positive");
    p.policy.threshold = r.number("threshold", p.policy.threshold);
    require(p.policy.threshold > 0.0, r.at("threshold"), "must be positive");
    p.policy.grid = read_grid(r, p.policy.grid);
    p.policy.fiber_mode = r.integer("fiber_mode", 0);
    require(p.policy.fiber_mode >= 0, r.at("fiber_mode"), "must be nonnegative");
    p.transfer = r.boolean("transfer", false);
    t.params = p;
  } else if (type == "certify") {
    r.allow({"task", "label", "mode", "horizon", "R_star", "G", "samples"});
    CertifyTask p;
    p.mode = r.text("mode", "h");
    require(p.mode == "h" || p.mode == "l" || p.mode == "radial", r.at("mode"), "expected h, l or radial");
    p.horizon = r.number("horizon", p.horizon);
    require(p.horizon > 0.0 && std::isfinite(p.horizon), r.at("horizon"), "must be positive");
    if (r.has("R_star")) {
      p.R_star = r.number("R_star");
      require(*p.R_star > 0.0 && *p.R_star < p.horizon, r.at("R_star"), "must lie in (0, horizon)");
    }
    p.G = r.text("G", p.G);
    require_profile(p.G, r.at("G"));
    p.samples = r.integer("samples", p.samples);
    require(p.samples >= 3, r.at("samples"), "needs at least 3 samples");
    t.params = p;
  } else if (type == "compare") {
    r.allow({"task", "label", "G", "horizon", "step", "tolerance", "samples"});
    CompareTask p;
    p.G = r.text("G", p.G);
    require_profile(p.G, r.at("G"));
    p.horizon = r.number("horizon", p.horizon);
    require(p.horizon > 0.0 && std::isfinite(p.horizon), r.at("horizon"), "must be positive");
    p.step = r.number("step", p.step);
    require(p.step > 0.0 && p.step <= p.horizon, r.at("step"), "must lie in (0, horizon]");
    p.tolerance = r.number("tolerance", p.tolerance);
    require(p.tolerance > 0.0, r.at("tolerance"), "must be positive");
    p.samples = r.integer("samples", p.samples);
    require(p.samples >= 2, r.at("samples"), "needs at least 2 samples");
    t.params = p;
  } else if (type == "verify") {
    r.allow({"task", "label", "checks", "field", "phi", "from", "to", "samples", "tolerance"});
    VerifyTask p;
    p.checks = r.strings("checks", p.checks);
    for (std::size_t i = 0; i < p.checks.size(); ++i) {
      const auto& c = p.checks[i];
      require(c == "divergence" || c == "laplacian-lift" || c == "grad-average" || c == "sign",
              r.at("checks") + "[" + std::to_string(i) + "]",
              "expected divergence, laplacian-lift, grad-average or sign");
    }
    p.field = r.text("field", p.field);
    require_profile(p.field, r.at("field"));
    p.phi = r.text("phi", p.phi);
    require_profile(p.phi, r.at("phi"));
    p.options.from = r.number("from", p.options.from);
    p.options.to = r.number("to", p.options.to);
    require(p.options.from > 0.0, r.at("from"), "must be positive");
    require(p.options.to > p.options.from, r.at("to"), "must exceed from");
    p.options.samples = r.integer("samples", p.options.samples);
    require(p.options.samples >= 2, r.at("samples"), "needs at least 2 samples");
    p.options.tolerance = r.number("tolerance", p.options.tolerance);
    require(p.options.tolerance > 0.0, r.at("tolerance"), "must be positive");
    t.params = p;
  } else if (type == "brooks") {
    r.allow({"task", "label", "space", "r_max", "samples"});
    BrooksTask p;
    p.space = read_space(r);
    p.r_max = r.number("r_max", p.r_max);
    require(p.r_max > 1.0 && std::isfinite(p.r_max), r.at("r_max"), "must exceed 1");
    p.samples = r.integer("samples", p.samples);
    require(p.samples >= 100, r.at("samples"), "needs at least 100 samples");
    t.params = p;
  } else {
    throw ValidationError(r.at("task"), "unknown task '" + type + "'");
  }
  return t;
}

json domain_json(const RadialDomain& d) {
  return {{"a", d.a},
          {"b", num(d.b)},
          {"inner", d.inner == InnerBoundary::pole_regular ? "pole" : "dirichlet"}};
}

struct TaskWriter {
  json& j;
  void operator()(const ToneTask& p) const {
    j["space"] = space_name(p.space);
    j["domain"] = domain_json(p.domain);
    j["grid"] = p.grid;
    j["tol"] = p.tol;
    j["fiber_mode"] = p.fiber_mode;
    j["angular_mode"] = p.angular_mode;
    j["check_modes"] = p.check_modes;
  }
  void operator()(const EssTask& p) const {
    j["space"] = space_name(p.space);
    j["R"] = p.R;
    j["L0"] = p.policy.L0;
    j["max_cuts"] = p.policy.max_cuts;
    j["stop_tol"] = p.policy.stop_tol;
    j["threshold"] = p.policy.threshold;
    j["grid"] = p.policy.grid;
    j["fiber_mode"] = p.policy.fiber_mode;
    j["transfer"] = p.transfer;
  }
  void operator()(const CertifyTask& p) const {
    j["mode"] = p.mode;
    j["horizon"] = p.horizon;
    j["R_star"] = opt(p.R_star);
    j["G"] = p.G;
    j["samples"] = p.samples;
  }
  void operator()(const CompareTask& p) const {
    j["G"] = p.G;
    j["horizon"] = p.horizon;
    j["step"] = p.step;
    j["tolerance"] = p.tolerance;
    j["samples"] = p.samples;
  }
  void operator()(const VerifyTask& p) const {
    j["checks"] = p.checks;
    j["field"] = p.field;
    j["phi"] = p.phi;
    j["from"] = p.options.from;
    j["to"] = p.options.to;
    j["samples"] = p.options.samples;
    j["tolerance"] = p.options.tolerance;
  }
  void operator()(const BrooksTask& p) const {
    j["space"] = space_name(p.space);
    j["r_max"] = p.r_max;
    j["samples"] = p.samples;
  }
};

}  // namespace

std::string task_type(const TaskParams& p) {
  static const char* names[] = {"tone", "ess", "certify", "compare", "verify", "brooks"};
  return names[p.index()];
}

ScenarioSpec scenario_from_json(const json& j) {
  Reader r(j, "");
  r.allow({"name", "description", "model", "tasks"});
  ScenarioSpec s;
  s.name = r.text("name", "custom");
  s.description = r.text("description", "");
  require(r.has("model"), "model", "required field is missing");
  s.model = read_model(r.raw("model"));
  require(r.has("tasks") && r.raw("tasks").is_array(), "tasks", "expected an array of tasks");
  const json& tasks = r.raw("tasks");
  require(!tasks.empty(), "tasks", "needs at least one task");
  for (std::size_t i = 0; i < tasks.size(); ++i)
    s.tasks.push_back(read_task(tasks[i], "tasks[" + std::to_string(i) + "]", i));
  return s;
}

json scenario_to_json(const ScenarioSpec& spec) {
  json model = {{"n", spec.model.n},
                {"f", spec.model.f},
                {"psi", opt(spec.model.psi)},
                {"m", spec.model.m},
                {"unit_fiber_volume", spec.model.unit_fiber_volume},
                {"fiber_modes", spec.model.fiber_modes}};
  json tasks = json::array();
  for (const auto& t : spec.tasks) {
    json jt = {{"task", task_type(t.params)}, {"label", t.label}};
    std::visit(TaskWriter{jt}, t.params);
    tasks.push_back(std::move(jt));
  }
  return {{"name", spec.name}, {"description", spec.description}, {"model", model}, {"tasks", tasks}};
}

SubmersionModel build_model(const ModelSpec& spec) {
  auto profile = [](const std::string& src, const std::string& path) {
    try {
      return resolve_profile(src);
    } catch (const std::exception& e) {
      throw ValidationError(path, e.what());
    }
  };
  try {
    BaseModel base(spec.n, profile(spec.f, "model.f"));
    std::optional<FiberModel> fiber;
    if (spec.psi) {
      Profile psi = profile(*spec.psi, "model.psi");
      const double vol = spec.unit_fiber_volume > 0.0 ? spec.unit_fiber_volume : unit_sphere_volume(spec.m);
      if (spec.m == 1 && spec.fiber_modes.empty() && spec.unit_fiber_volume == 0.0) {
        fiber = FiberModel::circle(psi);
      } else {
        std::vector<double> modes = spec.fiber_modes;
        if (modes.empty())
          for (int k = 0; k < 5; ++k) modes.push_back(double(k) * (k + spec.m - 1));
        fiber = FiberModel(spec.m, psi, vol, modes);
      }
    }
    return SubmersionModel{std::move(base), std::move(fiber)};
  } catch (const ModelError& e) {
    throw ValidationError("model", e.what());
  }
}

// ---------------------------------------------------------------------------
// Builtin scenarios

std::vector<std::string> builtin_scenario_names() {
  return {"hyperbolic", "hyperbolic4", "sl2r", "baider", "euclidean", "donnelly_li"};
}

namespace {

TaskSpec tone_ball(std::string label, double R, Space space = Space::base) {
  ToneTask t;
  t.space = space;
  t.domain = RadialDomain::ball(R);
  return {std::move(label), t};
}

TaskSpec ess(std::string label, std::vector<double> R, Space space = Space::base, double L0 = 8.0,
             bool transfer = false) {
  EssTask t;
  t.space = space;
  t.R = std::move(R);
  t.policy.L0 = L0;
  t.transfer = transfer;
  return {std::move(label), t};
}

TaskSpec certify(std::string label, std::string mode, double horizon, std::optional<double> R_star,
                 std::string G = "1") {
  CertifyTask t;
  t.mode = std::move(mode);
  t.horizon = horizon;
  t.R_star = R_star;
  t.G = std::move(G);
  return {std::move(label), t};
}

TaskSpec brooks(std::string label, Space space, double r_max) {
  BrooksTask t;
  t.space = space;
  t.r_max = r_max;
  return {std::move(label), t};
}

}  // namespace

ScenarioSpec builtin_scenario(const std::string& name) {
  ScenarioSpec s;
  s.name = name;
  if (name == "hyperbolic" || name == "hyperbolic4") {
    const bool four = name == "hyperbolic4";
    s.description = four ? "hyperbolic plane of curvature -4; spectrum [1, inf)"
                         : "hyperbolic plane of curvature -1; spectrum [1/4, inf)";
    s.model.f = four ? "hyperbolic:-4" : "hyperbolic";
    s.tasks = {tone_ball("ball-16", 16.0), ess("ess", {1, 2, 4, 8}), certify("h-certificate", "h", 20.0, 2.0),
               brooks("brooks", Space::base, 30.0)};
  } else if (name == "sl2r") {
    s.description = "hyperbolic base with constant circle fibers; bottom 1/4 transfers with equality";
    s.model.f = "hyperbolic";
    s.model.psi = "2";
    s.tasks = {tone_ball("ball-16-base", 16.0), tone_ball("ball-16-total", 16.0, Space::total),
               ess("ess-transfer", {1, 2, 4, 8}, Space::base, 8.0, true)};
  } else if (name == "baider") {
    s.description = "discrete base t exp(t^2) with fibers exp(t - t^2); the total space is not discrete";
    s.model.f = "baider_base";
    s.model.psi = "baider_fiber";
    VerifyTask v;
    s.tasks = {ess("ess-base", {4, 8, 16, 24, 32, 36}, Space::base, 8.0, true),
               ess("ess-total", {4, 6, 8, 10}, Space::total, 32.0),
               certify("h-certificate", "h", 20.0, 2.0),
               brooks("brooks-total", Space::total, 30.0),
               {"identities", v}};
  } else if (name == "euclidean") {
    s.description = "Euclidean plane; unit-disk tone j01^2 and spectrum [0, inf)";
    s.model.f = "euclidean";
    s.tasks = {tone_ball("unit-disk", 1.0), ess("ess", {1, 2, 4, 8}), certify("h-certificate", "h", 20.0, 2.0),
               brooks("brooks", Space::base, 30.0)};
  } else if (name == "donnelly_li") {
    s.description = "base t exp(t^2) with trivial circle fibers; discreteness transfers to the total space";
    s.model.f = "baider_base";
    s.model.psi = "1";
    CompareTask c;
    c.G = "4*t^2+6";
    c.horizon = 10.0;
    s.tasks = {certify("h-certificate", "h", 20.0, 2.0),
               certify("radial-certificate", "radial", 20.0, 2.0, "4*t^2+6"),
               {"comparison", c},
               ess("ess-transfer", {2, 8, 16, 24, 32, 36}, Space::base, 8.0, true)};
  } else {
    throw ValidationError("scenario", "unknown builtin scenario '" + name + "'");
  }
  return s;
}

// ---------------------------------------------------------------------------
// Result serialization

json to_json(const ToneResult& r) {
  json j = {{"domain", domain_json(r.domain)},
            {"mode", {{"angular", r.mode.angular}, {"fiber", r.mode.fiber}}},
            {"lambda", num(r.lambda)},
            {"err", num(r.error_estimate)},
            {"lambda_coarse", num(r.lambda_coarse)},
            {"lambda_fine", num(r.lambda_fine)},
            {"grids", {r.grids.first, r.grids.second}}};
  j["next_mode_lambda"] = opt(r.next_mode_lambda);
  j["mode_check_passed"] = opt(r.mode_check_passed);
  return j;
}

json to_json(const EssEstimate& e) {
  json points = json::array();
  for (const auto& p : e.points) {
    json cuts = json::array();
    for (const auto& c : p.cuts) cuts.push_back({{"R_cut", c.R_cut}, {"lambda", num(c.lambda)}, {"err", num(c.err)}});
    points.push_back({{"R", p.R},
                      {"lambda", num(p.lambda)},
                      {"err", num(p.err)},
                      {"converged_at", p.converged_at},
                      {"above_threshold", p.above_threshold},
                      {"cuts", cuts}});
  }
  return {{"space", space_name(e.space)},
          {"verdict", std::string(to_string(e.verdict))},
          {"bottom", opt(e.bottom)},
          {"bottom_err", num(e.bottom_err)},
          {"budget_exhausted", e.budget_exhausted},
          {"monotone_in_R", e.monotone_in_R},
          {"eigensolves", e.eigensolves},
          {"policy",
           {{"L0", e.policy.L0},
            {"max_cuts", e.policy.max_cuts},
            {"stop_tol", e.policy.stop_tol},
            {"threshold", e.policy.threshold},
            {"grid", e.policy.grid},
            {"fiber_mode", e.policy.fiber_mode}}},
          {"points", points}};
}

json to_json(const Certificate& c) {
  json witness_t = json::array(), witness_v = json::array();
  for (double t : c.witness_t) witness_t.push_back(num(t));
  for (double v : c.witness_value) witness_v.push_back(num(v));
  return {{"kind", std::string(to_string(c.kind))},
          {"verdict", std::string(to_string(c.verdict))},
          {"bound", opt(c.bound)},
          {"sense", std::string(to_string(c.sense))},
          {"R_star", num(c.R_star)},
          {"horizon", num(c.horizon)},
          {"inf_driving", num(c.inf_driving)},
          {"sup_driving", num(c.sup_driving)},
          {"growth",
           {{"monotone_increasing", c.growth.monotone_increasing},
            {"first_half_growth", num(c.growth.first_half_growth)},
            {"second_half_growth", num(c.growth.second_half_growth)},
            {"ratio", num(c.growth.ratio)},
            {"unbounded_to_horizon", c.growth.unbounded_to_horizon}}},
          {"witness", {{"t", witness_t}, {"value", witness_v}}},
          {"note", c.note}};
}

json to_json(const ComparisonReport& r) {
  return {{"hypothesis_met", r.hypothesis_met},
          {"hypothesis_max_violation", num(r.hypothesis_max_violation)},
          {"hypothesis_argmax", num(r.hypothesis_argmax)},
          {"max_violation", num(r.max_violation)},
          {"argmax_t", num(r.argmax_t)},
          {"max_abs_difference", num(r.max_abs_difference)},
          {"samples", r.samples},
          {"tolerance", r.tolerance},
          {"pass", r.pass}};
}

json to_json(const ResidualReport& r) {
  return {{"check", r.check},
          {"max_residual", num(r.max_residual)},
          {"argmax_t", num(r.argmax_t)},
          {"samples", r.samples},
          {"tolerance", r.tolerance},
          {"pass", r.pass},
          {"fd_discrepancy", num(r.fd_discrepancy)}};
}

json to_json(const SignResolution& s) {
  return {{"sign", s.sign},
          {"degenerate", s.degenerate},
          {"separated", s.separated},
          {"plus", to_json(s.plus)},
          {"minus", to_json(s.minus)}};
}

json to_json(const TransferReport& t) {
  return {{"kind", std::string(to_string(t.kind))},
          {"total_discrete", t.total_discrete},
          {"value", opt(t.value)},
          {"upper", opt(t.upper)},
          {"inf_volume", num(t.inf_volume)},
          {"sup_volume", num(t.sup_volume)},
          {"degenerate", t.degenerate},
          {"statement", t.statement}};
}

json to_json(const BrooksReport& b) {
  json tail = json::array();
  const std::size_t n = b.tail_r.size();
  const std::size_t k = std::min<std::size_t>(21, n);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = k > 1 ? i * (n - 1) / (k - 1) : 0;
    tail.push_back({{"r", num(b.tail_r[j])}, {"mu_hat", num(b.tail_mu_hat[j])}});
  }
  return {{"space", space_name(b.space)},
          {"r_max", b.r_max},
          {"reached_r", num(b.reached_r)},
          {"truncated", b.truncated},
          {"angular_constant", num(b.angular_constant)},
          {"log_volume_rmax", num(b.log_volume_rmax)},
          {"mu_estimate", num(b.mu_estimate)},
          {"slope_increment", num(b.slope_increment)},
          {"mu_finite", b.mu_finite},
          {"volume_diverges", b.volume_diverges},
          {"nonempty_essential_spectrum", b.nonempty_essential_spectrum},
          {"upper_bound", opt(b.upper_bound)},
          {"bracket_constant", opt(b.bracket_constant)},
          {"tail", tail}};
}

// ---------------------------------------------------------------------------
// Running

namespace {

struct TaskRunner {
  const SubmersionModel& model;

  json operator()(const ToneTask& p) const {
    ToneOptions o;
    o.grid = p.grid;
    o.tol = p.tol;
    o.check_modes = p.check_modes;
    if (p.angular_mode == 0 && p.space == Space::base) return to_json(fundamental_tone(model.base, p.domain, o));
    if (p.angular_mode == 0) return to_json(total_space_tone(model, p.domain, p.fiber_mode, o));
    o.check_modes = false;
    const ToneMode mode{p.angular_mode, p.fiber_mode};
    const RadialProblem prob =
        p.space == Space::base ? base_problem(model.base, p.angular_mode) : total_space_problem(model, mode);
    return to_json(solve_tone(prob, p.domain, o, mode));
  }
  json operator()(const EssTask& p) const {
    const EssEstimate e = ess_bottom_estimate(model, p.space, p.R, p.policy);
    json j = to_json(e);
    if (p.transfer) j["transfer"] = to_json(submersion_transfer(e, model));
    return j;
  }
  json operator()(const CertifyTask& p) const {
    CertificateOptions o;
    o.R_star = p.R_star;
    o.samples = p.samples;
    if (p.mode == "radial") return to_json(radial_discreteness_certificate(model, resolve_profile(p.G), p.horizon, o));
    return to_json(discreteness_certificate(model, p.horizon, p.mode == "l" ? DrivingMode::l : DrivingMode::h, o));
  }
  json operator()(const CompareTask& p) const {
    ComparisonOptions o;
    o.step = p.step;
    o.tolerance = p.tolerance;
    o.samples = p.samples;
    return to_json(comparison_check(model.base, resolve_profile(p.G), p.horizon, o));
  }
  json operator()(const VerifyTask& p) const {
    json checks = json::array();
    json j;
    const Profile field = resolve_profile(p.field);
    const Profile phi = resolve_profile(p.phi);
    for (const auto& c : p.checks) {
      if (c == "divergence") checks.push_back(to_json(check_divergence_identity(model, field, p.options)));
      if (c == "laplacian-lift") checks.push_back(to_json(check_laplacian_lift(model, phi, p.options)));
      if (c == "grad-average") checks.push_back(to_json(check_grad_average(model, phi, p.options)));
      if (c == "sign") j["sign"] = to_json(resolve_sign_convention(model, p.options));
    }
    j["checks"] = checks;
    return j;
  }
  json operator()(const BrooksTask& p) const {
    BrooksOptions o;
    o.samples = p.samples;
    const BrooksReport b = brooks_growth(model, p.space, p.r_max, o);
    json j = to_json(b);
    j["certificate"] = to_json(brooks_certificate(b));
    return j;
  }
};

json versions() {
  return {{"tonelab", TONELAB_VERSION},
          {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
}

}  // namespace

bool RunRecord::all_ok() const {
  return std::all_of(results.begin(), results.end(), [](const TaskResult& r) { return r.ok; });
}

RunRecord run_scenario(const ScenarioSpec& spec, const RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const SubmersionModel model = build_model(spec.model);
  RunRecord rec;
  rec.scenario = scenario_to_json(spec);
  rec.versions = versions();
  for (const auto& task : spec.tasks) {
    TaskResult r;
    r.label = task.label;
    r.task = task_type(task.params);
    try {
      r.data = std::visit(TaskRunner{model}, task.params);
    } catch (const std::exception& e) {
      r.ok = false;
      r.error = e.what();
      r.data = nullptr;
    }
    rec.results.push_back(std::move(r));
  }
  if (opts.timing)
    rec.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

json record_to_json(const RunRecord& r) {
  json results = json::array();
  for (const auto& t : r.results) {
    json jt = {{"label", t.label}, {"task", t.task}, {"ok", t.ok}, {"data", t.data}};
    if (!t.ok) jt["error"] = t.error;
    results.push_back(std::move(jt));
  }
  json j = {{"scenario", r.scenario}, {"results", results}, {"versions", r.versions}, {"seed", nullptr}};
  if (r.wall_time_s) j["wall_time_s"] = *r.wall_time_s;
  return j;
}

RunRecord record_from_json(const json& j) {
  Reader top(j, "");
  top.allow({"scenario", "results", "versions", "seed", "wall_time_s"});
  RunRecord r;
  require(top.has("scenario"), "scenario", "required field is missing");
  r.scenario = top.raw("scenario");
  r.versions = top.has("versions") ? top.raw("versions") : json(nullptr);
  if (top.has("wall_time_s")) r.wall_time_s = top.number("wall_time_s");
  require(top.has("results") && top.raw("results").is_array(), "results", "expected an array");
  const json& results = top.raw("results");
  for (std::size_t i = 0; i < results.size(); ++i) {
    Reader rr(results[i], "results[" + std::to_string(i) + "]");
    rr.allow({"label", "task", "ok", "data", "error"});
    TaskResult t;
    t.label = rr.text("label", "");
    t.task = rr.text("task", "");
    t.ok = rr.boolean("ok", true);
    t.error = rr.text("error", "");
    t.data = results[i].contains("data") ? results[i].at("data") : json(nullptr);
    r.results.push_back(std::move(t));
  }
  return r;
}

}  // namespace tonelab
