#pragma once

// Lower bounds for fundamental tones from radial test fields X = a(t) d/dt,
// and the fiber-volume transfer inequality between base and total-space tones.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tonelab/models.hpp"
#include "tonelab/sampling.hpp"
#include "tonelab/tone.hpp"

namespace tonelab {

enum class Space { base, total };

/// d/dt log w for the chosen space: (n-1) f'/f, plus m psi'/psi on the total space.
double log_weight_derivative(const SubmersionModel& model, Space space, double t);

/// Coefficient a(t) of a radial field, either symbolic or sampled on nodes.
class RadialField {
 public:
  static RadialField symbolic(Profile a);
  /// Samples a(t_i) and a'(t_i); values between nodes are linear interpolants.
  static RadialField sampled(std::vector<double> t, std::vector<double> a, std::vector<double> da);

  bool is_sampled() const { return !nodes_.empty(); }
  double value(double t) const;
  double derivative(double t) const;
  /// Closed interval on which the field is defined (whole line for symbolic).
  double lower() const;
  double upper() const;
  const std::vector<double>& nodes() const { return nodes_; }

 private:
  std::optional<Profile> expr_;
  std::vector<double> nodes_, a_, da_;
};

struct BoundOptions {
  int samples = 10000;
  double exterior_span = 40.0;  // exterior domains are sampled on [R, R + span]
};

enum class BoundStatus { ok, hypothesis_failed };

struct BoundReport {
  BoundStatus status = BoundStatus::ok;
  std::optional<double> bound;
  // divergence_bound witnesses
  std::optional<ExtremumEstimate> inf_divergence;
  std::optional<ExtremumEstimate> sup_field;
  // logderivative_bound witness
  std::optional<ExtremumEstimate> inf_combined;
  int samples = 0;
  double sample_from = 0.0;
  double sample_to = 0.0;
  std::string note;
};

/// (1/4) (inf div X / sup |X|)^2, provided inf div X > 0 and sup |X| < inf.
BoundReport divergence_bound(const SubmersionModel& model, Space space, const RadialDomain& domain,
                             const RadialField& field, const BoundOptions& opts = {});

/// inf (div X - |X|^2). Sampled fields are evaluated on their own nodes.
BoundReport logderivative_bound(const SubmersionModel& model, Space space, const RadialDomain& domain,
                                const RadialField& field, const BoundOptions& opts = {});

/// Same bound for an arbitrary radial problem given log w' directly; used for
/// weights that are not of model form (e.g. w = 1 on an interval).
BoundReport logderivative_bound(const std::function<double(double)>& log_weight_derivative,
                                const RadialDomain& domain, const RadialField& field,
                                const BoundOptions& opts = {});

/// a = -u'/u from the tone's eigenfunction, kept where u > cutoff * max u.
/// a' is taken from u directly (a' = -u''/u + a^2) with central differences.
RadialField eigenfield_from_tone(const ToneResult& tone, double cutoff = 0.05);

struct VolumeRatioReport {
  double inf_volume = 0.0;
  double sup_volume = 0.0;
  double lhs = 0.0;  // inf vol * lambda(total)
  double rhs = 0.0;  // sup vol * lambda(base)
  double tolerance = 0.0;
  double slack = 0.0;  // rhs - lhs
  bool pass = false;
};

/// [inf vol F] lambda*(lifted) <= [sup vol F] lambda*(Omega), within the
/// tones' combined error estimates.
VolumeRatioReport volume_ratio_check(const SubmersionModel& model, const RadialDomain& domain,
                                     const ToneResult& base_tone, const ToneResult& total_tone,
                                     int samples = 10000);

}  // namespace tonelab
