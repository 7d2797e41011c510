#pragma once

#include <utility>
#include <vector>

#include "kgdelta/discretization.hpp"
#include "kgdelta/model.hpp"

namespace kgdelta::spectra {

/// Census of the discrete spectrum of a symmetric tridiagonal operator below
/// a cutoff, with kernel candidates resolved to eigenpairs.
struct SpectrumReport {
  std::vector<double> eigenvalues_below;  ///< sorted ascending, all < cutoff
  int negative_count = 0;                 ///< eigenvalues < -zero_tol
  std::vector<std::pair<double, std::vector<double>>> zero_modes;
  double ess_edge = 0.0;
};

/// Number of eigenvalues of `op` strictly below `shift`, via the Sturm
/// sequence of the shifted tridiagonal matrix. Vanishing pivots are perturbed
/// internally; `perturbed` (if given) receives the number of such events.
int inertia_count(const discretization::DiscreteOperator& op, double shift,
                  int* perturbed = nullptr);

/// The k smallest eigenvalues, each located by inertia bisection between
/// Gershgorin bounds to absolute tolerance `tol`.
std::vector<double> eig_bisect(const discretization::DiscreteOperator& op,
                               int k, double tol = 1e-10);

/// Normalized eigenvector for a previously located eigenvalue, by inverse
/// iteration with pivot flooring.
std::vector<double> eigenvector(const discretization::DiscreteOperator& op,
                                double eigenvalue);

SpectrumReport spectrum_below(const discretization::DiscreteOperator& op,
                              double cutoff, double zero_tol, double ess_edge,
                              int max_count = 12);

/// Shift magnitude used to separate "negative" from "discretized kernel".
double eps_negative(const discretization::Grid& grid);

/// Tolerance below which a computed eigenvalue counts as a kernel candidate:
/// covers the O(h²) consistency error, the e^{−κL} domain-truncation shift,
/// and the eigensolver floor.
double default_zero_tol(const discretization::Grid& grid,
                        const model::WaveSpec& spec);

/// Negative-eigenvalue counts (n_plus, n_minus) of the two linearization
/// blocks at shift −eps_negative.
std::pair<int, int> count_negative_Lpm(const discretization::Grid& grid,
                                       const model::WaveSpec& spec);

/// Kernel diagnostics for both blocks: the minus block always carries the
/// sampled wave in its kernel; the plus block has a kernel (the translation
/// mode) exactly when the interface strength vanishes.
struct KernelCheck {
  double zero_tol = 0.0;
  double l_minus_eigenvalue = 0.0;       ///< smallest eigenvalue of the minus block
  double l_minus_correlation = 0.0;      ///< |cos| against the sampled profile
  double l_plus_min_abs_eigenvalue = 0.0;
  double l_plus_correlation = 0.0;       ///< against the profile derivative (beta = 0 only)
  bool l_plus_kernel_expected = false;   ///< beta == 0
};
KernelCheck kernel_check(const discretization::Grid& grid,
                         const model::WaveSpec& spec);

/// The scalar reduction map lam + lam·omega²/(1 − lam).
double lambda_map(double lam, double omega);

enum class Branch { Minus, Plus };

/// Inverse of lambda_map on the requested branch: the smaller (Minus) or
/// larger (Plus) root of lam² − (1 + omega² + mu)·lam + mu = 0.
double lambda_inverse(double mu, double omega, Branch branch);

struct EssEdges {
  double sigma1 = 0.0;  ///< in (0, 1)
  double one = 1.0;
  double sigma2 = 0.0;  ///< > 1
};
EssEdges ess_spectrum_edges(const model::WaveSpec& spec);

/// Negative count of the full linearized block operator, via the reduction
/// n_plus + n_minus.
int full_block_counts(const discretization::Grid& grid,
                      const model::WaveSpec& spec);

/// Dense cross-check of the block reduction on a small grid: assembles the
/// 4-block symmetric matrix, counts its negative eigenvalues, and measures
/// how far the reduction map sends each of them from the block spectra.
struct BlockCrossCheck {
  int n_block_negative = 0;
  int n_plus = 0;
  int n_minus = 0;
  double max_map_distance = 0.0;
};
BlockCrossCheck dense_block_crosscheck(const discretization::Grid& grid,
                                       const model::WaveSpec& spec);

/// Plus block restricted to even functions: half-line nodes x_j = j·h with
/// the full interface coefficient on the first diagonal entry and a √2
/// first off-diagonal (the orthonormal even-subspace restriction).
discretization::DiscreteOperator build_L_plus_radial(
    const discretization::Grid& grid, const model::WaveSpec& spec);

/// Negative count of the plus block on the even subspace.
int count_negative_radial(const discretization::Grid& grid,
                          const model::WaveSpec& spec);

}  // namespace kgdelta::spectra
