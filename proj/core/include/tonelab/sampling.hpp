#pragma once

// Sampled extrema with right-end trend analysis, and the tail growth test
// used by the discreteness certificates.

#include <span>
#include <vector>

namespace tonelab {

/// count points from a to b inclusive.
std::vector<double> linspace(double a, double b, int count);

enum class TailTrend { none, flat, decreasing, increasing };

struct ExtremumEstimate {
  double value = 0.0;    // estimate used downstream
  double sampled = 0.0;  // plain sampled extremum
  double at = 0.0;       // abscissa of the sampled extremum
  TailTrend trend = TailTrend::none;
  bool trend_limit_used = false;
};

/// Infimum of sampled values. When extend_right is set (exterior domains),
/// a monotone decreasing tail (last 10% of samples) is extrapolated to its
/// limit: a power law L + C t^-p is fitted to three tail points, with a
/// geometric fit when the decay is faster than any power. Decay slower than
/// every power yields -infinity.
ExtremumEstimate infimum(std::span<const double> t, std::span<const double> v, bool extend_right);
ExtremumEstimate supremum(std::span<const double> t, std::span<const double> v, bool extend_right);

struct GrowthAssessment {
  bool monotone_increasing = false;
  double first_half_growth = 0.0;
  double second_half_growth = 0.0;
  /// second_half_growth / first_half_growth
  double ratio = 0.0;
  bool unbounded_to_horizon = false;
};

/// A tail counts as growing without bound up to the horizon when it is
/// nondecreasing and its second-half increase is at least min_ratio times its
/// first-half increase (saturating profiles such as 1 - 1/t give about 0.5).
GrowthAssessment assess_growth(std::span<const double> t, std::span<const double> v, double min_ratio = 0.6);

}  // namespace tonelab
