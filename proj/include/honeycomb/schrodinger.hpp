#pragma once

// Time-dependent Schroedinger evolution i d_t psi = (-Laplacian + V) psi on a
// periodic supercell of n1 x n2 unit cells.
//
// Fields are stored demodulated: psi(x) = exp(i k_c.x) u(x) with u periodic on
// the supercell and k_c the supercell's center quasi-momentum (K by default).
// The Fourier mode g = (g1, g2) of u carries the momentum
//   k_c + (g1/n1) k1 + (g2/n2) k2,
// and splitting g_i = n_i m_i + r_i (r_i signed in [-n_i/2, n_i/2)) assigns it
// to plane-wave index m of the fiber r.

#include "honeycomb/bloch.hpp"
#include "honeycomb/dirac_env.hpp"
#include "honeycomb/dirac_point.hpp"
#include "honeycomb/lattice.hpp"
#include "honeycomb/potential.hpp"

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

namespace honeycomb {

class Supercell {
 public:
  Supercell(const HoneycombLattice& lattice, int n1, int n2, int p, const Vec2& center);
  /// Centered at K.
  Supercell(const HoneycombLattice& lattice, int n1, int n2, int p);

  const HoneycombLattice& lattice() const { return lattice_; }
  int n1() const { return n1_; }
  int n2() const { return n2_; }
  int p() const { return p_; }
  const Vec2& center() const { return center_; }

  int grid1() const { return n1_ * p_; }
  int grid2() const { return n2_ * p_; }
  std::size_t size() const { return static_cast<std::size_t>(grid1()) * grid2(); }
  std::size_t fiber_count() const { return static_cast<std::size_t>(n1_) * n2_; }
  double area() const;

  /// Grid point (i/p) v1 + (j/p) v2.
  Vec2 point(int i, int j) const;
  /// Quasi-momentum of fiber with signed offsets (r1, r2).
  Vec2 fiber_momentum(int r1, int r2) const;
  /// Physical momentum of the signed mode g.
  Vec2 mode_momentum(int g1, int g2) const;
  /// Storage position of plane-wave index m in fiber (r1, r2), or -1 when the
  /// mode does not fit on the grid.
  long mode_position(int r1, int r2, IndexPair m) const;
  /// Largest cutoff whose hexagon fits on the grid for every fiber.
  int max_cutoff() const { return (p_ - 1) / 2; }

  /// Envelope torus (delta n1 v1, delta n2 v2) sampled at the n1 x n2 cell
  /// corners; its Fourier mode j coincides with fiber j.
  EnvelopeGrid envelope_grid(double delta) const;

 private:
  HoneycombLattice lattice_;
  int n1_;
  int n2_;
  int p_;
  Vec2 center_;
};

/// Supercell with n cells per side (n even) such that the envelope torus
/// delta n v covers an X-domain of the given side length.
Supercell supercell_for_envelope(const HoneycombLattice& lattice, double delta, double side_X, int p,
                                 const Vec2& center);

struct SupercellField {
  std::vector<cplx> u;  // demodulated samples, row-major grid1 x grid2
};

/// Forward-normalized spectrum of u (FFT / size).
std::vector<cplx> field_spectrum(const Supercell& cell, const SupercellField& field);
SupercellField field_from_spectrum(const Supercell& cell, std::vector<cplx> spectrum);
/// ||psi||^2_{L2(supercell)} from the spectrum.
double spectrum_norm2(const Supercell& cell, const std::vector<cplx>& spectrum);
double field_norm2(const Supercell& cell, const SupercellField& field);
/// ||d_xj psi||^2 for j = 1, 2 from the spectrum.
std::array<double, 2> spectrum_gradient_norm2(const Supercell& cell, const std::vector<cplx>& spectrum);
/// |psi|^2 at grid points (modulation drops out).
std::vector<double> field_density(const SupercellField& field);

// --- wave packets ---------------------------------------------------------

/// One slowly varying envelope multiplying one periodic profile.
struct PacketTerm {
  const std::vector<cplx>* envelope_spectrum = nullptr;  // on the supercell's envelope grid
  const Eigen::VectorXcd* profile = nullptr;             // plane-wave coefficients
};

/// Spectrum of delta sum_j alpha_j(delta x) p_j(x) restricted to fiber (r1, r2):
/// entry m of the returned vector is delta |Omega|^{-1/2} sum_j alpha_hat_j(r) c_j(m).
Eigen::VectorXcd packet_fiber(const Supercell& cell, const PlaneWaveBasis& basis, double delta,
                              const std::vector<PacketTerm>& terms, int r1, int r2);

/// Full spectrum of the packet, built fiber by fiber from packet_fiber.
std::vector<cplx> packet_spectrum(const Supercell& cell, const PlaneWaveBasis& basis, double delta,
                                  const std::vector<PacketTerm>& terms);

/// Fraction of envelope mass in the outer band of the torus (|fractional
/// coordinate| > 0.4).
double envelope_exterior_mass(const EnvelopeGrid& grid, const std::vector<const std::vector<cplx>*>& fields);

struct WavePacket {
  Supercell cell;
  double delta = 0.0;
  std::string envelope;
  int cutoff = 0;
  double mu_star = 0.0;
  cplx lambda_sharp{};
  std::vector<cplx> spectrum;  // exact packet spectrum
  SupercellField field;        // synthesized samples
  double exterior_mass = 0.0;
};

/// psi0 = delta (alpha10(delta x) Phi1(x) + alpha20(delta x) Phi2(x)). The
/// envelope grid must be cell.envelope_grid(delta). Throws DomainError when
/// delta is outside (0, 1) or the envelope mass near the torus boundary
/// exceeds 1e-8 (unless check_truncation is false).
WavePacket build_wavepacket(const EnvelopePair& envelopes, const DiracPointData& dp, double delta,
                            const Supercell& cell, const std::string& envelope_name = "custom",
                            bool check_truncation = true);

// --- Bloch analysis / synthesis ------------------------------------------

struct BlochFiber {
  int r1 = 0;
  int r2 = 0;
  Vec2 k = Vec2::Zero();
  Eigen::VectorXd mu;          // band energies, ascending
  Eigen::MatrixXd vectors;     // basis.size() x nbands, real (H(k) is real symmetric)
  Eigen::VectorXcd coeffs;     // f_b(k), Plancherel-normalized
};

struct BlochCoefficients {
  int cutoff = 0;
  int nbands = 0;
  double norm2 = 0.0;             // ||psi||^2 of the analyzed field
  double captured_norm2 = 0.0;    // sum |f|^2
  double dropped_norm2 = 0.0;     // mass of skipped fibers
  double plancherel_residual = 0.0;
  std::vector<BlochFiber> fibers; // kept fibers in storage order

  /// Map from fiber (r1, r2) to position in fibers, -1 if skipped.
  std::vector<int> fiber_index;
};

struct BlochOptions {
  int nbands = 0;               // 0: every band of the basis
  double fiber_tolerance = 0.0; // skip fibers with relative mass <= tolerance
};

/// f_b(k) = <Phi_b(.; k), psi> per admissible k. Throws NumericalError when the
/// Plancherel residual exceeds 1e-3 (insufficient bands or cutoff).
BlochCoefficients bloch_transform(const Supercell& cell, const std::vector<cplx>& spectrum,
                                  const FourierPotential& V, int cutoff, const BlochOptions& options = {});
BlochCoefficients bloch_transform(const Supercell& cell, const SupercellField& field,
                                  const FourierPotential& V, int cutoff, const BlochOptions& options = {});

/// Multiplies every coefficient by exp(-i mu_b(k) t).
BlochCoefficients bloch_propagate(const BlochCoefficients& coeffs, double t);
/// Plane-wave coefficients of the fiber after evolving for time t.
Eigen::VectorXcd fiber_spectrum(const BlochFiber& fiber, double area, double t = 0.0);
/// Spectrum of the field synthesized after evolving for time t (no copy of the
/// band data is made).
std::vector<cplx> bloch_synthesize_spectrum(const Supercell& cell, const BlochCoefficients& coeffs,
                                            double t = 0.0);
SupercellField bloch_synthesize(const Supercell& cell, const BlochCoefficients& coeffs);
/// Exact-in-time evolution: propagate then synthesize.
SupercellField bloch_evolve(const Supercell& cell, const BlochCoefficients& coeffs, double t);

// --- split-step ----------------------------------------------------------

struct SplitStepReport {
  SupercellField field;
  long steps = 0;
  double dt = 0.0;
  double cfl = 0.0;          // dt * max |k_c + G|^2 on the grid
  double norm_drift = 0.0;   // relative
};

/// Strang splitting: half kinetic, full potential, half kinetic per step.
/// Throws NumericalError when the relative norm drift exceeds 1e-8.
SplitStepReport split_step_evolve(const Supercell& cell, const SupercellField& psi, const FourierPotential& V,
                                  double t, double dt);

/// Relative L2 difference ||a - b|| / ||b||.
double relative_difference(const SupercellField& a, const SupercellField& b);

}  // namespace honeycomb
