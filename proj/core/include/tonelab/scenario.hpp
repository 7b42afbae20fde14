#pragma once

// Scenario runner: a JSON-compatible description of a model plus a list of
// tasks, executed into a RunRecord whose results are plain JSON values.

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "tonelab/bounds.hpp"
#include "tonelab/comparison.hpp"
#include "tonelab/identities.hpp"
#include "tonelab/spectrum.hpp"

namespace tonelab {

/// Malformed or out-of-range scenario input; path() names the offending
/// field, e.g. "tasks[1].R".
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(const std::string& path, const std::string& what);
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct ModelSpec {
  int n = 2;
  std::string f = "hyperbolic";
  /// Absent means the base manifold alone.
  std::optional<std::string> psi;
  int m = 1;
  double unit_fiber_volume = 0.0;  // 0 selects the unit sphere S^m volume
  std::vector<double> fiber_modes;  // empty selects the circle spectrum (m = 1)
};

struct ToneTask {
  Space space = Space::base;
  RadialDomain domain = RadialDomain::ball(1.0);
  int grid = 4096;
  double tol = 1e-10;
  int fiber_mode = 0;
  int angular_mode = 0;
  bool check_modes = false;
};

struct EssTask {
  Space space = Space::base;
  std::vector<double> R;
  EssPolicy policy;
  bool transfer = false;  // also run the base-to-total transfer
};

struct CertifyTask {
  std::string mode = "h";  // h | l | radial
  double horizon = 20.0;
  std::optional<double> R_star;
  std::string G = "1";  // radial mode only
  int samples = 2000;
};

struct CompareTask {
  std::string G = "1";
  double horizon = 20.0;
  double step = 1e-3;
  double tolerance = 1e-6;
  int samples = 2000;
};

struct VerifyTask {
  std::vector<std::string> checks{"divergence", "laplacian-lift", "grad-average", "sign"};
  std::string field = "1";  // a(t) for the divergence identity
  std::string phi = "t";    // phi(t) for the lift and average identities
  IdentityOptions options;
};

struct BrooksTask {
  Space space = Space::base;
  double r_max = 30.0;
  int samples = 20000;
};

using TaskParams = std::variant<ToneTask, EssTask, CertifyTask, CompareTask, VerifyTask, BrooksTask>;

struct TaskSpec {
  std::string label;
  TaskParams params;
};

/// "tone", "ess", "certify", "compare", "verify" or "brooks".
std::string task_type(const TaskParams& p);

struct ScenarioSpec {
  std::string name;
  std::string description;
  ModelSpec model;
  std::vector<TaskSpec> tasks;
};

/// Parses and validates; throws ValidationError with a field path.
ScenarioSpec scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const ScenarioSpec& spec);

/// Builds (and validates) the model; throws ValidationError on "model.*".
SubmersionModel build_model(const ModelSpec& spec);

/// hyperbolic, hyperbolic4, sl2r, baider, euclidean, donnelly_li.
std::vector<std::string> builtin_scenario_names();
ScenarioSpec builtin_scenario(const std::string& name);

struct TaskResult {
  std::string label;
  std::string task;
  bool ok = true;
  std::string error;
  nlohmann::json data;

  bool operator==(const TaskResult&) const = default;
};

struct RunRecord {
  nlohmann::json scenario;  // echo of the spec
  std::vector<TaskResult> results;
  nlohmann::json versions;
  /// Excluded from output unless timing was requested, so that repeated
  /// runs serialize identically.
  std::optional<double> wall_time_s;

  bool all_ok() const;
  bool operator==(const RunRecord&) const = default;
};

struct RunOptions {
  bool timing = false;
};

/// Runs every task in order. Task failures are recorded per result; model
/// validation failures throw ValidationError.
RunRecord run_scenario(const ScenarioSpec& spec, const RunOptions& opts = {});

nlohmann::json record_to_json(const RunRecord& r);
RunRecord record_from_json(const nlohmann::json& j);

// JSON forms of the module results, shared with the command-line tool.
nlohmann::json to_json(const ToneResult& r);
nlohmann::json to_json(const EssEstimate& e);
nlohmann::json to_json(const Certificate& c);
nlohmann::json to_json(const ComparisonReport& r);
nlohmann::json to_json(const ResidualReport& r);
nlohmann::json to_json(const SignResolution& s);
nlohmann::json to_json(const TransferReport& t);
nlohmann::json to_json(const BrooksReport& b);

}  // namespace tonelab
