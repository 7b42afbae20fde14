#pragma once

// Fundamental tones of rotationally invariant domains in the base and of
// their lifts to the total space, with Richardson error control.

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tonelab/models.hpp"
#include "tonelab/sturm_liouville.hpp"

namespace tonelab {

struct ToneMode {
  int angular = 0;  // spherical-harmonic degree k on S^(n-1)
  int fiber = 0;    // index j into the fiber spectrum
};

struct ToneOptions {
  int grid = 4096;         // coarse grid; the fine grid doubles it
  bool richardson = true;  // if false only the coarse grid is solved
  double tol = 1e-10;
  bool check_modes = false;  // also solve the next mode and compare
};

struct ToneResult {
  double lambda = 0.0;          // extrapolated value
  double error_estimate = 0.0;  // |lambda(N) - lambda(2N)| / 3
  double lambda_coarse = 0.0;
  double lambda_fine = 0.0;
  std::pair<int, int> grids{0, 0};
  RadialDomain domain;
  ToneMode mode;
  /// Eigenfunction of the finest solve, on that grid's nodes.
  std::vector<double> nodes;
  std::vector<double> eigenfunction;
  std::optional<double> next_mode_lambda;
  std::optional<bool> mode_check_passed;
};

/// Log-weight (n-1) log f and potential k(k+n-2)/f^2.
RadialProblem base_problem(const BaseModel& base, int angular_mode = 0);
/// Log-weight (n-1) log f + m log psi and potential mu_j/psi^2 (+ angular term).
RadialProblem total_space_problem(const SubmersionModel& model, ToneMode mode = {});

ToneResult solve_tone(const RadialProblem& problem, const RadialDomain& domain, const ToneOptions& opts = {},
                      ToneMode label = {});

/// lambda*(Omega) for the rotationally invariant domain Omega of the base.
ToneResult fundamental_tone(const BaseModel& base, const RadialDomain& domain, const ToneOptions& opts = {});

/// lambda for pi^(-1)(Omega) at fiber mode j; j = 0 is the fundamental tone.
ToneResult total_space_tone(const SubmersionModel& model, const RadialDomain& domain, int fiber_mode = 0,
                            const ToneOptions& opts = {});

/// Discrete Rayleigh quotient on the grid nodes, with Dirichlet zeros (or the
/// zero-flux pole) implied at the ends: gradient term on cell faces, mass and
/// potential terms by the trapezoid rule.
double rayleigh_quotient(const RadialProblem& problem, const Grid& grid, std::span<const double> u);

}  // namespace tonelab
