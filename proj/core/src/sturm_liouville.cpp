#include "tonelab/sturm_liouville.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "tonelab/numeric_format.hpp"

namespace tonelab {

RadialDomain RadialDomain::exterior(double radius) {
  return {radius, std::numeric_limits<double>::infinity(), InnerBoundary::dirichlet};
}

bool RadialDomain::is_exterior() const { return std::isinf(b); }

bool RadialDomain::contains(const RadialDomain& other) const {
  return a <= other.a && other.b <= b;
}

void RadialDomain::validate() const {
  if (!(a >= 0.0) || !std::isfinite(a)) throw std::invalid_argument("domain needs a >= 0");
  if (!(b > a)) throw std::invalid_argument("domain needs b > a");
  if (inner == InnerBoundary::pole_regular && a != 0.0)
    throw std::invalid_argument("pole-regular inner boundary needs a = 0");
}

Grid::Grid(const RadialDomain& domain, int interior_nodes) : domain_(domain), n_(interior_nodes) {
  domain_.validate();
  if (domain_.is_exterior()) throw std::invalid_argument("grids need a bounded domain");
  if (n_ < min_nodes) throw std::invalid_argument("grid needs at least 3 interior nodes");
  const double len = domain_.b - domain_.a;
  h_ = domain_.inner == InnerBoundary::pole_regular ? len / (n_ + 0.5) : len / (n_ + 1);
}

double Grid::node(int i) const {
  if (domain_.inner == InnerBoundary::pole_regular) return domain_.a + (i + 0.5) * h_;
  return domain_.a + (i + 1) * h_;
}

double Grid::face(int k) const {
  if (domain_.inner == InnerBoundary::pole_regular) return domain_.a + k * h_;
  return domain_.a + (k + 0.5) * h_;
}

std::vector<double> Grid::nodes() const {
  std::vector<double> t(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) t[static_cast<std::size_t>(i)] = node(i);
  return t;
}

double RadialProblem::log_weight(double t) const {
  double s = 0.0;
  for (const auto& term : log_weight_terms) s += term(t);
  return s;
}

double RadialProblem::log_weight_difference(double s, double t) const {
  double d = 0.0;
  for (const auto& term : log_weight_terms) d += term(s) - term(t);
  return d;
}

double RadialProblem::log_weight_midratio(double s, double t0, double t1) const {
  double d = 0.0;
  for (const auto& term : log_weight_terms) d += term(s) - 0.5 * (term(t0) + term(t1));
  return d;
}

// ---------------------------------------------------------------------------

TridiagonalSystem::TridiagonalSystem(std::vector<double> diag, std::vector<double> offdiag,
                                     std::vector<double> log_weight, std::optional<Grid> grid)
    : diag_(std::move(diag)),
      offdiag_(std::move(offdiag)),
      log_weight_(std::move(log_weight)),
      grid_(std::move(grid)) {
  if (diag_.empty()) throw AssemblyError("empty tridiagonal system");
  if (offdiag_.size() + 1 != diag_.size() || log_weight_.size() != diag_.size())
    throw AssemblyError("tridiagonal system size mismatch");
}

TridiagonalSystem TridiagonalSystem::from_pencil(std::span<const double> diag,
                                                 std::span<const double> offdiag,
                                                 std::span<const double> weight) {
  const std::size_t n = diag.size();
  if (offdiag.size() + 1 != n || weight.size() != n) throw AssemblyError("pencil size mismatch");
  std::vector<double> d(n), e(n - 1), lw(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(weight[i] > 0.0)) throw AssemblyError("nonpositive mass entry");
    lw[i] = std::log(weight[i]);
    d[i] = diag[i] / weight[i];
  }
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = offdiag[i] / std::sqrt(weight[i] * weight[i + 1]);
  return TridiagonalSystem(std::move(d), std::move(e), std::move(lw));
}

std::vector<double> TridiagonalSystem::weights() const {
  std::vector<double> w(log_weight_.size());
  std::transform(log_weight_.begin(), log_weight_.end(), w.begin(), [](double l) { return std::exp(l); });
  return w;
}

std::vector<double> TridiagonalSystem::stiffness_diag(double log_scale) const {
  std::vector<double> a(diag_.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = diag_[i] * std::exp(log_weight_[i] - log_scale);
  return a;
}

std::vector<double> TridiagonalSystem::stiffness_offdiag(double log_scale) const {
  std::vector<double> a(offdiag_.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    a[i] = offdiag_[i] * std::exp(0.5 * (log_weight_[i] + log_weight_[i + 1]) - log_scale);
  return a;
}

double TridiagonalSystem::gershgorin_upper() const {
  double hi = -std::numeric_limits<double>::infinity();
  const std::size_t n = diag_.size();
  for (std::size_t i = 0; i < n; ++i) {
    double r = diag_[i];
    if (i > 0) r += std::fabs(offdiag_[i - 1]);
    if (i + 1 < n) r += std::fabs(offdiag_[i]);
    hi = std::max(hi, r);
  }
  return hi;
}

// ---------------------------------------------------------------------------

TridiagonalSystem assemble(const RadialProblem& problem, const Grid& grid) {
  const int n = grid.size();
  const double h2 = grid.spacing() * grid.spacing();
  const bool pole = grid.domain().inner == InnerBoundary::pole_regular;

  std::vector<double> diag(static_cast<std::size_t>(n), 0.0);
  std::vector<double> off(static_cast<std::size_t>(n - 1), 0.0);
  std::vector<double> lw(static_cast<std::size_t>(n));

  auto finite_or_throw = [](double x, double t, const char* what) {
    if (!std::isfinite(x))
      throw AssemblyError(std::string(what) + " is not positive and finite at t=" + format_double(t));
    return x;
  };

  try {
    for (int i = 0; i < n; ++i) {
      const double t = grid.node(i);
      lw[static_cast<std::size_t>(i)] = finite_or_throw(problem.log_weight(t), t, "weight");
    }
    for (int k = 0; k <= n; ++k) {
      if (k == 0 && pole) continue;  // zero flux through the pole
      const double s = grid.face(k);
      if (k > 0) {
        const double t = grid.node(k - 1);
        diag[static_cast<std::size_t>(k - 1)] +=
            std::exp(finite_or_throw(problem.log_weight_difference(s, t), s, "face weight")) / h2;
      }
      if (k < n) {
        const double t = grid.node(k);
        diag[static_cast<std::size_t>(k)] +=
            std::exp(finite_or_throw(problem.log_weight_difference(s, t), s, "face weight")) / h2;
      }
      if (k > 0 && k < n) {
        const double r = problem.log_weight_midratio(s, grid.node(k - 1), grid.node(k));
        off[static_cast<std::size_t>(k - 1)] = -std::exp(finite_or_throw(r, s, "face weight")) / h2;
      }
    }
    if (problem.potential) {
      for (int i = 0; i < n; ++i) {
        const double t = grid.node(i);
        const double v = problem.potential(t);
        if (!(v >= 0.0) || !std::isfinite(v))
          throw AssemblyError("potential must be finite and nonnegative, got " + format_double(v) +
                              " at t=" + format_double(t));
        diag[static_cast<std::size_t>(i)] += v;
      }
    }
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const AssemblyError*>(&e)) throw;
    throw AssemblyError(std::string("weight evaluation failed: ") + e.what());
  }
  return TridiagonalSystem(std::move(diag), std::move(off), std::move(lw), grid);
}

// ---------------------------------------------------------------------------

int sturm_count(const TridiagonalSystem& sys, double lambda) {
  const auto& d = sys.diag();
  const auto& e = sys.offdiag();
  double emax = 1.0;
  for (double x : e) emax = std::max(emax, x * x);
  const double pivmin = std::numeric_limits<double>::min() * emax;

  int count = 0;
  double q = d[0] - lambda;
  if (std::fabs(q) < pivmin) q = -pivmin;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < d.size(); ++i) {
    q = d[i] - lambda - e[i - 1] * e[i - 1] / q;
    if (std::fabs(q) < pivmin) q = -pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

namespace {

// Solves (S - shift I) x = rhs for a symmetric tridiagonal S that is positive
// definite after the shift; no pivoting needed.
void solve_shifted(const TridiagonalSystem& sys, double shift, std::vector<double>& x,
                   std::vector<double>& scratch) {
  const auto& d = sys.diag();
  const auto& e = sys.offdiag();
  const std::size_t n = d.size();
  scratch.resize(n);
  double piv = d[0] - shift;
  if (piv == 0.0) piv = std::numeric_limits<double>::min();
  scratch[0] = piv;
  for (std::size_t i = 1; i < n; ++i) {
    const double l = e[i - 1] / scratch[i - 1];
    x[i] -= l * x[i - 1];
    piv = d[i] - shift - l * e[i - 1];
    if (piv == 0.0) piv = std::numeric_limits<double>::min();
    scratch[i] = piv;
  }
  x[n - 1] /= scratch[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (x[i] - e[i] * x[i + 1]) / scratch[i];
}

double normalize_inf(std::vector<double>& x) {
  double big = 0.0;
  double sign = 1.0;
  for (double v : x) {
    if (std::fabs(v) > big) {
      big = std::fabs(v);
      sign = v < 0.0 ? -1.0 : 1.0;
    }
  }
  if (big == 0.0 || !std::isfinite(big)) return big;
  for (double& v : x) v *= sign / big;
  return big;
}

}  // namespace

Eigenpair smallest_eigenpair(const TridiagonalSystem& sys, const EigenOptions& opts) {
  if (!(opts.tol > 0.0)) throw std::invalid_argument("eigen tolerance must be positive");
  const int n = sys.size();
  Eigenpair out;

  double hi = sys.gershgorin_upper();
  double lo = 0.0;
  if (sturm_count(sys, lo) > 0) {
    lo = -hi;
    for (std::size_t i = 0; i < sys.diag().size(); ++i) {
      double r = sys.diag()[i];
      if (i > 0) r -= std::fabs(sys.offdiag()[i - 1]);
      if (i + 1 < sys.diag().size()) r -= std::fabs(sys.offdiag()[i]);
      lo = std::min(lo, r);
    }
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int it = 0; it < 2000; ++it) {
    const double width = hi - lo;
    const double scale = std::max(std::fabs(lo), std::fabs(hi));
    if (width <= std::max(opts.tol, 4.0 * eps) * scale || width <= std::numeric_limits<double>::min()) break;
    const double mid = lo + 0.5 * width;
    if (sturm_count(sys, mid) >= 1) {
      hi = mid;
    } else {
      lo = mid;
    }
    ++out.bisection_steps;
  }
  out.lambda = 0.5 * (lo + hi);

  // Inverse iteration from strictly below the eigenvalue keeps S - shift
  // positive definite.
  const double shift = lo - 0.5 * (hi - lo);
  std::vector<double> x(static_cast<std::size_t>(n), 1.0);
  std::vector<double> prev, scratch;
  bool converged = false;
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> unif(0.5, 1.5);
  for (int attempt = 0; attempt < 2 && !converged; ++attempt) {
    if (attempt == 1) {
      for (double& v : x) v = unif(rng);
    }
    normalize_inf(x);
    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
      prev = x;
      solve_shifted(sys, shift, x, scratch);
      ++out.inverse_iterations;
      const double growth = normalize_inf(x);
      if (!(growth > 0.0) || !std::isfinite(growth)) break;
      double diff = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) diff = std::max(diff, std::fabs(x[i] - prev[i]));
      if (diff <= 1e-13) {
        converged = true;
        break;
      }
    }
  }
  if (!converged)
    throw ConvergenceError("inverse iteration did not converge in " +
                           std::to_string(out.inverse_iterations) + " sweeps");

  out.one_signed = std::none_of(x.begin(), x.end(), [](double v) { return v < 0.0; });

  // Back to the original variables: u = W^(-1/2) v, scaled in log space.
  const auto& lw = sys.log_weight();
  std::vector<double> logu(x.size());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) {
    logu[i] = x[i] == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(std::fabs(x[i])) - 0.5 * lw[i];
    top = std::max(top, logu[i]);
  }
  out.u.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double mag = std::exp(logu[i] - top);
    out.u[i] = x[i] < 0.0 ? -mag : mag;
  }
  return out;
}

}  // namespace tonelab
