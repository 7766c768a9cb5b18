#pragma once

// Dirac points at the vertex K: detection of the (tau, tau_bar) degenerate
// pair, the Dirac velocity lambda_sharp and the local cone structure.

#include "honeycomb/bloch.hpp"
#include "honeycomb/lattice.hpp"
#include "honeycomb/potential.hpp"

#include <optional>
#include <vector>

namespace honeycomb {

struct ConeSample {
  double radius = 0.0;  // |kappa|
  double angle = 0.0;
  double mu_plus = 0.0;
  double mu_minus = 0.0;
  double e_plus = 0.0;   // (mu_+ - mu_*)/(s |kappa|) - 1
  double e_minus = 0.0;  // (mu_- - mu_*)/(-s |kappa|) - 1
};

struct LambdaSharpEstimates {
  cplx inner_product{};                 // authoritative
  double cone_fit = 0.0;                // fitted slope, 0 until a cone fit ran
  std::optional<cplx> fourier_sum{};    // 3|Omega| sum_m c(m)^2 (1,i).(K + m.k), unrestricted
};

struct DiracPointData {
  double mu_star = 0.0;
  int b1 = 0;       // lower band of the crossing (1-based)
  int cutoff = 0;   // plane-wave cutoff M used
  Eigen::VectorXcd phi1;  // tau sector, gauge: largest coefficient real positive
  Eigen::VectorXcd phi2;  // conjugate-inversion image of phi1, tau_bar sector
  cplx lambda_sharp{};
  LambdaSharpEstimates estimates;
  std::vector<ConeSample> cone_residuals;

  double degeneracy_gap = 0.0;   // |mu_{b1+1}(K) - mu_{b1}(K)|
  double isolation_gap = 0.0;    // distance from mu_* to the nearest third eigenvalue
  double tolerance = 0.0;        // absolute degeneracy tolerance used
  double residual = 0.0;         // max ||H(K) Phi_j - mu_* Phi_j||
};

/// Default degeneracy tolerance: 1e-7 (1 + |mu|), loosened x10 below M = 12.
double default_degeneracy_tolerance(double mu, int cutoff);

/// Solves at K, finds the lowest doubly degenerate (tau, tau_bar) pair among
/// the first search_bands bands and fixes the gauge. Throws NotADiracPoint or
/// SymmetryViolation. rel_tol overrides the default relative tolerance.
DiracPointData detect(const FourierPotential& V, const HoneycombLattice& lattice, int cutoff,
                      std::optional<double> rel_tol = std::nullopt, int search_bands = 8);

struct LambdaSharpInnerProduct {
  cplx lambda_sharp{};         // -2i <Phi2, d_x1 Phi1>
  cplx zeta_y{};               // 2i <Phi2, d_x2 Phi1>, should equal i lambda_sharp
  cplx pairing_lhs{};          // 2i <Phi1, d_x1 Phi2>
  cplx pairing_rhs{};          // conj(2i <Phi2, d_x1 Phi1>)
  double cross_residual = 0.0; // |zeta_y - i lambda_sharp|
  double self_term = 0.0;      // max_a,j |<Phi_a, d_xj Phi_a>|
};

/// Throws SymmetryViolation if the zeta = (0,1) identity fails beyond 1e-10 (1 + |lambda|).
LambdaSharpInnerProduct lambda_sharp_inner_product(const Eigen::VectorXcd& phi1, const Eigen::VectorXcd& phi2,
                                                   const PlaneWaveBasis& basis, const DualBasis& dual);

cplx lambda_sharp_fourier_sum(const Eigen::VectorXcd& phi1, const PlaneWaveBasis& basis,
                              const HoneycombLattice& lattice);

struct ConeFit {
  double slope = 0.0;          // s in (mu_+ - mu_-)/2 = s |kappa| + O(|kappa|^3), angle averaged
  double quadratic = 0.0;      // angle-averaged (mu_+ + mu_- - 2 mu_*)/(2 |kappa|^2) on the smallest ring
  double fit_residual = 0.0;   // relative misfit of the ring slopes within 4x the smallest radius
  double isotropy_spread = 0.0;  // (max - min)/mean of per-angle slopes
  std::vector<double> angle_slopes;
  std::vector<ConeSample> samples;
  std::vector<double> ring_max_e;   // max |E_+-| per ring, rings ascending
  double lipschitz_constant = 0.0;  // max |E_+-| / |kappa|
  double validity_radius = 0.0;     // first ring with max |E| > 0.1, or the largest ring tested
  bool validity_bounded = false;    // true if such a ring was found
};

/// Samples mu_+- on rings around K (first sample angle 0). The ring slope is
/// the angle average of (mu_+ - mu_-)/(2 |kappa|); s + d |kappa|^2 is fitted
/// over the two smallest rings. nangles should be a multiple of 3 so the
/// trigonal warping averages out. Radii are in absolute units; default rings
/// are {0.0025, 0.005, 0.01, 0.02} q.
ConeFit cone_slope_fit(const FourierPotential& V, const HoneycombLattice& lattice, int cutoff, int b1,
                       double mu_star, std::vector<double> radii = {}, int nangles = 12);

struct ExpansionResidual {
  Vec2 kappa = Vec2::Zero();
  cplx alpha_expected{};         // conj(lambda)/|lambda| (k1 + i k2)/|kappa|
  std::array<cplx, 2> plus{};    // (<p1, p_+>, <p2, p_+>) after the phase fix
  std::array<cplx, 2> minus{};
  double coefficient_error = 0.0;  // max over +- of the deviation from (alpha, +-1)/sqrt2
  double out_of_span = 0.0;        // max over +- of 1 - |a1|^2 - |a2|^2
  double span_mass = 1.0;          // min over +-
};

/// Throws NumericalError if the projection onto span{p1, p2} is below 0.5.
ExpansionResidual eigenvector_expansion_residual(const FourierPotential& V, const HoneycombLattice& lattice,
                                                 const DiracPointData& dp, const Vec2& kappa);

/// Total change of arg(alpha) measured from the p_+ projections on a circle
/// of the given radius around K (nangles samples, unwrapped).
double alpha_winding(const FourierPotential& V, const HoneycombLattice& lattice, const DiracPointData& dp,
                     double radius, int nangles = 24);

/// detect + inner-product lambda_sharp + Fourier sum + cone fit.
DiracPointData characterize_dirac_point(const FourierPotential& V, const HoneycombLattice& lattice, int cutoff,
                                        std::optional<double> rel_tol = std::nullopt);

}  // namespace honeycomb
