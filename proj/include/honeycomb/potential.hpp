#pragma once

// Honeycomb lattice potentials stored as dual-lattice Fourier coefficients.
// V(x) = sum_m V_m exp(i (m1 k1 + m2 k2).x) with V_m = amplitude * shape_m.

#include "honeycomb/lattice.hpp"

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

namespace honeycomb {

using cplx = std::complex<double>;

struct FourierPotential {
  double amplitude = 1.0;
  std::map<IndexPair, cplx> shape;

  cplx coefficient(IndexPair m) const;
  /// All (m, V_m) with nonzero shape entries.
  std::map<IndexPair, cplx> coefficients() const;
  /// max |m|_inf over stored coefficients (0 for the zero potential).
  int cutoff() const;
  bool is_zero() const;
  /// Pointwise value V(x); the imaginary part is returned untouched.
  cplx value(const Vec2& x, const DualBasis& dual) const;
  /// Upper bound sum_m |V_m| on |V(x)|.
  double sup_bound() const;
};

/// V = eps [cos(k1.x) + cos(k2.x) + cos((k1+k2).x)]; throws DomainError for eps = 0.
FourierPotential three_cosine_potential(double eps, const DualBasis& dual);

FourierPotential zero_potential();

struct SymmetryReport {
  bool real = false;
  bool even = false;
  bool r_invariant = false;
  double residual_real = 0.0;
  double residual_even = 0.0;
  double residual_r = 0.0;

  bool honeycomb() const { return real && even && r_invariant; }
};

SymmetryReport symmetry_report(const FourierPotential& V, double tol = 1e-12);

/// |Omega| V_{(1,1)}: the integral of exp(-i(k1+k2).y) V(y) over one cell.
cplx v11_coefficient(const FourierPotential& V, const LatticeBasis& direct);

/// Samples of V on the N x N grid x_ij = (i/N) v1 + (j/N) v2 of one cell,
/// row-major in (i, j). Requires N >= 2 cutoff + 2.
struct CellGrid {
  int n = 0;
  std::vector<double> values;
  double at(int i, int j) const { return values[static_cast<std::size_t>(i) * n + j]; }
};

CellGrid evaluate_grid(const FourierPotential& V, int n);

/// Stable 64-bit hash of amplitude and shape coefficients.
std::uint64_t potential_hash(const FourierPotential& V);

}  // namespace honeycomb
