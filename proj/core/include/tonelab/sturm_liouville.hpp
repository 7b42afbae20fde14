#pragma once

// Weighted radial eigenproblem  -(w u')'/w + V u = lambda u  on [a, b],
// discretized by a second-order flux scheme into a symmetric tridiagonal
// matrix, and its smallest eigenpair.

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace tonelab {

class AssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class InnerBoundary { dirichlet, pole_regular };

struct RadialDomain {
  double a = 0.0;
  double b = 1.0;  // +infinity marks an exterior domain [a, inf)
  InnerBoundary inner = InnerBoundary::dirichlet;

  static RadialDomain ball(double radius) { return {0.0, radius, InnerBoundary::pole_regular}; }
  static RadialDomain annulus(double a, double b) { return {a, b, InnerBoundary::dirichlet}; }
  static RadialDomain exterior(double radius);

  bool is_exterior() const;
  bool contains(const RadialDomain& other) const;
  /// Throws std::invalid_argument unless b > a >= 0 and pole_regular has a = 0.
  void validate() const;
};

/// Uniform grid of interior nodes. Dirichlet grids put nodes at a + i*h
/// (i = 1..N, h = (b-a)/(N+1)). Pole grids are staggered: nodes at
/// (i - 1/2) h with h = (b-a)/(N+1/2), so that b is the ghost node N+1 and
/// the first cell face sits on the pole.
class Grid {
 public:
  static constexpr int min_nodes = 3;

  Grid(const RadialDomain& domain, int interior_nodes);

  const RadialDomain& domain() const { return domain_; }
  int size() const { return n_; }
  double spacing() const { return h_; }
  double node(int i) const;  // i in [0, size)
  double face(int k) const;  // k in [0, size]; face k lies between nodes k-1 and k
  std::vector<double> nodes() const;

 private:
  RadialDomain domain_;
  int n_;
  double h_;
};

/// Radial problem data. The log weight is kept as a sum of terms so that
/// ratios w(s)/w(t) are formed term by term; a constant factor in w then
/// cancels exactly rather than to rounding.
struct RadialProblem {
  std::vector<std::function<double(double)>> log_weight_terms;
  std::function<double(double)> potential;  // empty means V = 0

  double log_weight(double t) const;
  double log_weight_difference(double s, double t) const;          // log w(s) - log w(t)
  double log_weight_midratio(double s, double t0, double t1) const;  // log w(s) - (log w(t0) + log w(t1))/2
};

/// The pencil A u = lambda W u with W = diag(w(t_i)), stored in its
/// symmetrized form S = W^(-1/2) A W^(-1/2) together with log w(t_i).
class TridiagonalSystem {
 public:
  TridiagonalSystem(std::vector<double> diag, std::vector<double> offdiag,
                    std::vector<double> log_weight, std::optional<Grid> grid = std::nullopt);

  /// Builds from raw stiffness (diag, offdiag) and mass entries.
  static TridiagonalSystem from_pencil(std::span<const double> diag, std::span<const double> offdiag,
                                       std::span<const double> weight);

  int size() const { return static_cast<int>(diag_.size()); }
  const std::vector<double>& diag() const { return diag_; }
  const std::vector<double>& offdiag() const { return offdiag_; }
  const std::vector<double>& log_weight() const { return log_weight_; }
  const std::optional<Grid>& grid() const { return grid_; }

  /// Mass entries w(t_i); may overflow for steep weights.
  std::vector<double> weights() const;
  /// Stiffness entries of A, scaled by exp(-log_scale).
  std::vector<double> stiffness_diag(double log_scale = 0.0) const;
  std::vector<double> stiffness_offdiag(double log_scale = 0.0) const;

  double gershgorin_upper() const;

 private:
  std::vector<double> diag_;
  std::vector<double> offdiag_;
  std::vector<double> log_weight_;
  std::optional<Grid> grid_;
};

TridiagonalSystem assemble(const RadialProblem& problem, const Grid& grid);

/// Number of eigenvalues strictly below lambda.
int sturm_count(const TridiagonalSystem& sys, double lambda);

struct Eigenpair {
  double lambda = 0.0;
  /// Eigenfunction in the original variables, positive, max |u| = 1.
  std::vector<double> u;
  bool one_signed = false;
  int bisection_steps = 0;
  int inverse_iterations = 0;
};

struct EigenOptions {
  double tol = 1e-10;  // relative, on lambda
  int max_sweeps = 200;
};

Eigenpair smallest_eigenpair(const TridiagonalSystem& sys, const EigenOptions& opts = {});

}  // namespace tonelab
