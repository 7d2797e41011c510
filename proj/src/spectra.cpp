#include "kgdelta/spectra.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "kgdelta/errors.hpp"

namespace kgdelta::spectra {

namespace {

using discretization::DiscreteOperator;
using discretization::Grid;
using model::WaveSpec;

double op_scale(const DiscreteOperator& op) {
  double s = 0.0;
  for (double d : op.diag) s = std::max(s, std::abs(d));
  for (double e : op.off) s = std::max(s, std::abs(e));
  return s > 0.0 ? s : 1.0;
}

/// Gershgorin bounds for a symmetric tridiagonal operator.
std::pair<double, double> gershgorin(const DiscreteOperator& op) {
  const std::size_t n = op.diag.size();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t j = 0; j < n; ++j) {
    double r = 0.0;
    if (j > 0) r += std::abs(op.off[j - 1]);
    if (j + 1 < n) r += std::abs(op.off[j]);
    lo = std::min(lo, op.diag[j] - r);
    hi = std::max(hi, op.diag[j] + r);
  }
  return {lo, hi};
}

/// Solve (op − shift) x = b by the Thomas algorithm with pivot flooring, for
/// inverse iteration on nearly singular shifts.
void shifted_solve(const DiscreteOperator& op, double shift,
                   std::vector<double>& x) {
  const std::size_t n = op.diag.size();
  const double floor_abs = 1e-16 * op_scale(op);
  std::vector<double> d(n);
  for (std::size_t j = 0; j < n; ++j) d[j] = op.diag[j] - shift;
  for (std::size_t i = 1; i < n; ++i) {
    double piv = d[i - 1];
    if (std::abs(piv) < floor_abs) piv = piv >= 0.0 ? floor_abs : -floor_abs;
    const double m = op.off[i - 1] / piv;
    d[i] -= m * op.off[i - 1];
    x[i] -= m * x[i - 1];
  }
  double piv = d[n - 1];
  if (std::abs(piv) < floor_abs) piv = piv >= 0.0 ? floor_abs : -floor_abs;
  x[n - 1] /= piv;
  for (std::size_t i = n - 1; i-- > 0;) {
    double p = d[i];
    if (std::abs(p) < floor_abs) p = p >= 0.0 ? floor_abs : -floor_abs;
    x[i] = (x[i] - op.off[i] * x[i + 1]) / p;
  }
}

void normalize(std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  s = std::sqrt(s);
  if (s > 0.0)
    for (double& v : x) v /= s;
}

}  // namespace

int inertia_count(const DiscreteOperator& op, double shift, int* perturbed) {
  const std::size_t n = op.diag.size();
  const double tiny = 1e-13 * op_scale(op);
  int count = 0;
  int bumps = 0;
  double d = op.diag[0] - shift;
  if (d == 0.0) {
    d = tiny;
    ++bumps;
  }
  if (d < 0.0) ++count;
  for (std::size_t i = 1; i < n; ++i) {
    d = (op.diag[i] - shift) - op.off[i - 1] * op.off[i - 1] / d;
    if (d == 0.0) {
      d = tiny;
      ++bumps;
    }
    if (d < 0.0) ++count;
  }
  if (perturbed) *perturbed = bumps;
  return count;
}

std::vector<double> eig_bisect(const DiscreteOperator& op, int k, double tol) {
  if (k < 1) throw DomainError("eig_bisect requires k >= 1");
  const int n = static_cast<int>(op.diag.size());
  k = std::min(k, n);
  auto [glo, ghi] = gershgorin(op);
  std::vector<double> eigs(k);
  for (int j = 0; j < k; ++j) {
    double lo = glo, hi = ghi;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;  // hit float granularity
      if (inertia_count(op, mid) >= j + 1)
        hi = mid;
      else
        lo = mid;
    }
    eigs[j] = 0.5 * (lo + hi);
  }
  return eigs;
}

std::vector<double> eigenvector(const DiscreteOperator& op, double eigenvalue) {
  const std::size_t n = op.diag.size();
  std::vector<double> x(n);
  // Deterministic pseudo-random start vector: avoids accidental exact
  // orthogonality to the target mode (an all-ones start is orthogonal to
  // every odd mode on a symmetric grid).
  std::uint64_t s = 0x9e3779b97f4a7c15ull;
  for (std::size_t j = 0; j < n; ++j) {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    x[j] = static_cast<double>(s >> 11) / 9007199254740992.0 - 0.5;
  }
  normalize(x);
  for (int it = 0; it < 5; ++it) {
    shifted_solve(op, eigenvalue, x);
    normalize(x);
  }
  return x;
}

SpectrumReport spectrum_below(const DiscreteOperator& op, double cutoff,
                              double zero_tol, double ess_edge,
                              int max_count) {
  SpectrumReport rep;
  rep.ess_edge = ess_edge;
  const int below = inertia_count(op, cutoff);
  const int k = std::min(below, max_count);
  if (k > 0) rep.eigenvalues_below = eig_bisect(op, k);
  for (double lam : rep.eigenvalues_below) {
    if (lam < -zero_tol) ++rep.negative_count;
    if (std::abs(lam) < zero_tol)
      rep.zero_modes.emplace_back(lam, eigenvector(op, lam));
  }
  return rep;
}

double eps_negative(const Grid& grid) {
  return 1e-8 * 2.0 / (grid.h * grid.h);
}

double default_zero_tol(const Grid& grid, const WaveSpec& spec) {
  const double k2 = spec.params.m * spec.params.m - spec.omega * spec.omega;
  const double kappa = std::sqrt(k2);
  return 10.0 * grid.h * grid.h * k2 + 50.0 * std::exp(-kappa * grid.L) +
         1e-13 / (grid.h * grid.h);
}

std::pair<int, int> count_negative_Lpm(const Grid& grid,
                                       const WaveSpec& spec) {
  const double shift = -eps_negative(grid);
  const int np = inertia_count(discretization::build_L_plus(grid, spec), shift);
  const int nm = inertia_count(discretization::build_L_minus(grid, spec), shift);
  return {np, nm};
}

namespace {

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    ab += a[j] * b[j];
    aa += a[j] * a[j];
    bb += b[j] * b[j];
  }
  return std::abs(ab) / std::sqrt(aa * bb);
}

}  // namespace

KernelCheck kernel_check(const Grid& grid, const WaveSpec& spec) {
  model::require_admissible(spec);
  KernelCheck out;
  out.zero_tol = default_zero_tol(grid, spec);
  out.l_plus_kernel_expected = spec.beta == 0.0;

  const auto l_minus = discretization::build_L_minus(grid, spec);
  out.l_minus_eigenvalue = eig_bisect(l_minus, 1)[0];
  const auto ground = eigenvector(l_minus, out.l_minus_eigenvalue);
  std::vector<double> phi_s(grid.interior());
  for (int j = 0; j < grid.interior(); ++j)
    phi_s[j] = model::phi(spec, grid.x[j]);
  out.l_minus_correlation = correlation(ground, phi_s);

  const auto l_plus = discretization::build_L_plus(grid, spec);
  const int n_neg = inertia_count(l_plus, -eps_negative(grid));
  const auto eigs = eig_bisect(l_plus, n_neg + 2);
  double best = std::numeric_limits<double>::infinity();
  for (double lam : eigs) best = std::min(best, std::abs(lam));
  out.l_plus_min_abs_eigenvalue = best;
  if (out.l_plus_kernel_expected) {
    double nearest = eigs[0];
    for (double lam : eigs)
      if (std::abs(lam) < std::abs(nearest)) nearest = lam;
    const auto mode = eigenvector(l_plus, nearest);
    std::vector<double> dphi(grid.interior());
    for (int j = 0; j < grid.interior(); ++j)
      dphi[j] = model::phi_prime(spec, grid.x[j]);
    out.l_plus_correlation = correlation(mode, dphi);
  }
  return out;
}

double lambda_map(double lam, double omega) {
  if (lam == 1.0)
    throw PoleAtOne("the reduction map has a pole at 1");
  return lam + lam * omega * omega / (1.0 - lam);
}

double lambda_inverse(double mu, double omega, Branch branch) {
  const double s = 1.0 + omega * omega + mu;
  const double disc = s * s - 4.0 * mu;
  // disc = (mu - (1 - omega²))² + 4·omega²·mu ≥ 0 for mu ≥ 0; it vanishes
  // only at the degenerate point omega = 0, mu = 1 where both branches meet.
  if (disc < 0.0)
    throw DomainError("reduction-map inverse: negative discriminant");
  const double sq = std::sqrt(disc);
  double lo, hi;
  if (s >= 0.0) {
    hi = 0.5 * (s + sq);
    lo = mu / hi;
  } else {
    lo = 0.5 * (s - sq);
    hi = mu / lo;
  }
  return branch == Branch::Minus ? lo : hi;
}

EssEdges ess_spectrum_edges(const WaveSpec& spec) {
  const double k2 = spec.params.m * spec.params.m - spec.omega * spec.omega;
  EssEdges e;
  e.sigma1 = lambda_inverse(k2, spec.omega, Branch::Minus);
  e.sigma2 = lambda_inverse(k2, spec.omega, Branch::Plus);
  return e;
}

int full_block_counts(const Grid& grid, const WaveSpec& spec) {
  const auto [np, nm] = count_negative_Lpm(grid, spec);
  return np + nm;
}

BlockCrossCheck dense_block_crosscheck(const Grid& grid,
                                       const WaveSpec& spec) {
  model::require_admissible(spec);
  const int n = grid.interior();
  const auto lp = discretization::build_L_plus(grid, spec);
  const auto lm = discretization::build_L_minus(grid, spec);
  const double om = spec.omega;
  const double om2 = om * om;

  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(4 * n, 4 * n);
  for (int j = 0; j < n; ++j) {
    M(j, j) = lp.diag[j] + om2;
    M(n + j, n + j) = lm.diag[j] + om2;
    M(2 * n + j, 2 * n + j) = 1.0;
    M(3 * n + j, 3 * n + j) = 1.0;
    if (j + 1 < n) {
      M(j, j + 1) = M(j + 1, j) = lp.off[j];
      M(n + j, n + j + 1) = M(n + j + 1, n + j) = lm.off[j];
    }
    M(j, 3 * n + j) = M(3 * n + j, j) = -om;
    M(n + j, 2 * n + j) = M(2 * n + j, n + j) = om;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M,
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw SolverFailed("dense eigensolve of the block operator failed");

  BlockCrossCheck out;
  const double eps = eps_negative(grid);
  std::vector<double> block_neg;
  for (int j = 0; j < 4 * n; ++j)
    if (solver.eigenvalues()[j] < -eps) block_neg.push_back(solver.eigenvalues()[j]);
  out.n_block_negative = static_cast<int>(block_neg.size());
  out.n_plus = inertia_count(lp, -eps);
  out.n_minus = inertia_count(lm, -eps);

  std::vector<double> targets;
  if (out.n_plus > 0)
    for (double t : eig_bisect(lp, out.n_plus, 1e-12)) targets.push_back(t);
  if (out.n_minus > 0)
    for (double t : eig_bisect(lm, out.n_minus, 1e-12)) targets.push_back(t);
  for (double mu : block_neg) {
    const double mapped = lambda_map(mu, om);
    double best = std::numeric_limits<double>::infinity();
    for (double t : targets) best = std::min(best, std::abs(mapped - t));
    out.max_map_distance = std::max(out.max_map_distance, best);
  }
  return out;
}

DiscreteOperator build_L_plus_radial(const Grid& grid, const WaveSpec& spec) {
  model::require_admissible(spec);
  const int half = grid.N / 2;  // nodes j·h, j = 0..half−1; Dirichlet at L
  const double inv_h2 = 1.0 / (grid.h * grid.h);
  const double k2 = spec.params.m * spec.params.m - spec.omega * spec.omega;
  const double pm1 = spec.params.p - 1.0;
  DiscreteOperator op;
  op.kind = "plus-block-radial";
  op.diag.resize(half);
  op.off.assign(half - 1, -inv_h2);
  for (int j = 0; j < half; ++j) {
    const double ph = model::phi(spec, j * grid.h);
    op.diag[j] = 2.0 * inv_h2 + k2 - spec.params.p * std::pow(ph, pm1);
  }
  op.diag[0] += spec.beta / grid.h;
  op.off[0] = -std::sqrt(2.0) * inv_h2;
  return op;
}

int count_negative_radial(const Grid& grid, const WaveSpec& spec) {
  return inertia_count(build_L_plus_radial(grid, spec), -eps_negative(grid));
}

}  // namespace kgdelta::spectra
