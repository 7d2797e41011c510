#pragma once

#include <cstddef>

namespace kgdelta::kernels {

/// Instruction set used by the hot array kernels. The scalar variants are the
/// reference implementation; vector variants must match them (pointwise ops
/// bit-exactly, reductions to reassociation accuracy).
enum class Isa { scalar, avx2 };

/// Active instruction set. Defaults to the best supported one, or to the
/// value of the KGDELTA_ISA environment variable ("scalar" / "avx2") if set.
Isa active_isa();

/// Force an instruction set. Throws DomainError if unsupported on this host.
void set_isa(Isa isa);

bool isa_supported(Isa isa);

/// y[i] += a * x[i]
void axpy(std::size_t n, double a, const double* x, double* y);

/// sum_i x[i] * y[i]
double dot(std::size_t n, const double* x, const double* y);

/// sum_i x[i]^2
double sum_sq(std::size_t n, const double* x);

/// Squared forward differences against zero boundary values:
/// x[0]^2 + sum_{i<n-1} (x[i+1]-x[i])^2 + x[n-1]^2.
double cell_diff_sq(std::size_t n, const double* x);

/// v += c * |u|^{pm1} * u on a split complex field (re/im arrays),
/// |u| = sqrt(ur^2 + ui^2). pm1 = p - 1 >= 0.
void nonlinear_kick(std::size_t n, double c, double pm1, const double* ur,
                    const double* ui, double* vr, double* vi);

/// out[j] = (u[j-1] - 2 u[j] + u[j+1]) * inv_h2 - m2 * u[j] with u[-1] =
/// u[n] = 0.  out must not alias u.
void lap_combine(std::size_t n, double inv_h2, double m2, const double* u,
                 double* out);

}  // namespace kgdelta::kernels
