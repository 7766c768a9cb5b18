#pragma once

// Exact spectral propagator for the effective Dirac system
//   d_T alpha1 = -conj(lambda) (d_X1 + i d_X2) alpha2
//   d_T alpha2 = -lambda       (d_X1 - i d_X2) alpha1
// on a periodic envelope grid.

#include "honeycomb/lattice.hpp"
#include "honeycomb/potential.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace honeycomb {

using Mat2c = Eigen::Matrix2cd;

/// Periodic grid on the torus spanned by a1, a2 with n1 x n2 points
/// X_ij = (i/n1) a1 + (j/n2) a2. Fourier mode (j1, j2) has wave vector
/// j1 b1 + j2 b2 with b_i . a_j = 2 pi delta_ij.
struct EnvelopeGrid {
  Vec2 a1;
  Vec2 a2;
  int n1 = 0;
  int n2 = 0;

  static EnvelopeGrid square(double side, int n);

  std::size_t size() const { return static_cast<std::size_t>(n1) * n2; }
  double area() const { return std::abs(a1(0) * a2(1) - a1(1) * a2(0)); }
  Vec2 point(int i, int j) const;
  /// Point with fractional coordinates wrapped to [-1/2, 1/2).
  Vec2 centered_point(int i, int j) const;
  std::pair<Vec2, Vec2> reciprocal() const;
  /// Wave vector of storage index (i, j).
  Vec2 mode(int i, int j) const;
};

struct EnvelopePair {
  EnvelopeGrid grid;
  std::vector<cplx> alpha1;  // row-major samples on grid
  std::vector<cplx> alpha2;
  cplx lambda_sharp{};
};

/// exp(-i Omega(Xi) T) with Omega = [[0, conj(l)(xi1 + i xi2)], [l (xi1 - i xi2), 0]],
/// in closed form.
Mat2c dirac_symbol(const Vec2& xi, cplx lambda_sharp);
Mat2c dirac_step_matrix(const Vec2& xi, cplx lambda_sharp, double T);

/// Fraction of spectral mass beyond 0.8 Nyquist.
double spectral_tail_mass(const EnvelopePair& env);

struct DiracPropagation {
  EnvelopePair env;
  double tail_mass = 0.0;
  bool tail_warning = false;  // tail_mass >= 1e-10
};

/// Forward transform, per-mode 2x2 exponential, inverse transform. T = 0 returns
/// the input fields unchanged.
DiracPropagation dirac_propagate(const EnvelopePair& env, double T);

struct DerivativeNorm {
  int order_x1 = 0;
  int order_x2 = 0;
  double norm = 0.0;  // ||d^a (alpha1, alpha2)||_{L2(torus)}
};

/// Spectral L2 norms of every mixed derivative of total order <= s.
std::vector<DerivativeNorm> conserved_norms(const EnvelopePair& env, int s);

/// Samples f on the grid (row-major).
std::vector<cplx> sample_envelope(const EnvelopeGrid& grid, const std::function<cplx(const Vec2&)>& f);

/// Built-in initial envelopes: "gaussian" (alpha1 = exp(-|X|^2/2), alpha2 = 0)
/// and "gaussian-pair" (adds alpha2 = 0.5 exp(-|X - (1, 0)|^2/2) i).
EnvelopePair envelope_preset(const std::string& name, const EnvelopeGrid& grid, cplx lambda_sharp);

/// Forward-normalized Fourier coefficients (FFT / count).
std::vector<cplx> envelope_spectrum(const EnvelopeGrid& grid, const std::vector<cplx>& field);
std::vector<cplx> envelope_synthesize(const EnvelopeGrid& grid, std::vector<cplx> spectrum);

}  // namespace honeycomb
