#pragma once

// Experiments: effective Dirac dynamics error and its scaling in delta, the
// ballistic and effective-mass regimes away from Dirac points, and the
// empirical Lipschitz quotient of band functions.

#include "honeycomb/dirac_env.hpp"
#include "honeycomb/dirac_point.hpp"
#include "honeycomb/lattice.hpp"
#include "honeycomb/potential.hpp"
#include "honeycomb/schrodinger.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace honeycomb {

struct EffectiveDynamicsNorms {
  double t = 0.0;
  double eta = 0.0;          // ||eta||_{L2}
  double relative = 0.0;     // ||eta|| / ||psi0||
  double grad_x1 = 0.0;      // ||d_x1 eta|| / ||psi0||
  double grad_x2 = 0.0;
  double psi_norm = 0.0;     // ||psi(t)||
};

/// eta = exp(i mu_* t) psi(t) - delta sum_j alpha_j(delta x, delta t) Phi_j(x),
/// with psi given by its supercell spectrum and env_T the Dirac-propagated
/// envelopes at T = delta t. Throws ConfigError when env_T was propagated with
/// a different lambda_sharp than dp carries.
EffectiveDynamicsNorms effective_dynamics_error(const Supercell& cell, const std::vector<cplx>& psi_spectrum,
                                                const EnvelopePair& env_T, const DiracPointData& dp, double delta,
                                                double t, double psi0_norm);

struct ScalingConfig {
  std::vector<double> deltas{0.5, 0.25, 0.125};
  double rho = 1.0;
  double eps1 = 1.0;
  std::string envelope = "gaussian";
  int cutoff = 5;        // plane-wave cutoff of the evolution
  int p = 12;            // grid points per cell
  int samples = 32;      // log-spaced sample times besides t = 0
  double time_cap = std::numeric_limits<double>::infinity();
  double margin = 6.0;   // envelope radius kept clear of the torus boundary (X units)
  double fiber_tolerance = 1e-24;
};

struct ScalingRow {
  double delta = 0.0;
  double t_theory = 0.0;   // rho delta^{-2 + eps1}
  double t_final = 0.0;    // min(t_theory, cap)
  bool capped = false;
  double sup_eta = 0.0;
  double sup_relative = 0.0;
  double sup_relative_gradient = 0.0;
  double t0_error = 0.0;
  double max_norm_drift = 0.0;
  double plancherel_residual = 0.0;
  double envelope_tail = 0.0;
  int cells = 0;
  int grid = 0;
  std::size_t fibers_kept = 0;
  double runtime = 0.0;
  std::vector<EffectiveDynamicsNorms> samples;
};

struct SimulationReport {
  std::string kind;
  std::uint64_t config_hash = 0;
  std::uint64_t potential_hash = 0;
  int cutoff = 0;
  int p = 0;
  double rho = 0.0;
  double eps1 = 0.0;
  double mu_star = 0.0;
  cplx lambda_sharp{};
  std::vector<ScalingRow> rows;   // delta descending
  std::optional<double> tau_star;
  bool monotone = false;
  bool pass = false;
  std::vector<std::string> diagnostics;
};

/// Runs one exact Bloch evolution per delta and records the sup over sampled
/// times of the relative effective-dynamics error.
SimulationReport scaling_study(const FourierPotential& V, const HoneycombLattice& lattice,
                               const ScalingConfig& config, std::uint64_t config_hash = 0);

/// Least-squares slope of log(error) against log(delta).
double fit_exponent(const std::vector<double>& deltas, const std::vector<double>& errors);

// --- packet moments -----------------------------------------------------

struct PacketMoments {
  Vec2 center = Vec2::Zero();
  Mat2 covariance = Mat2::Zero();
  double norm2 = 0.0;
};

/// Center and covariance of |psi|^2 from its lowest Fourier correlations
/// along b1, b2 and b1 + b2 (circular moments, exact for Gaussian packets).
/// phase_reference unwraps the center against a previous estimate.
PacketMoments packet_moments(const Supercell& cell, const std::vector<cplx>& spectrum,
                             const std::optional<Vec2>& previous_center = std::nullopt);
/// Same moments for |alpha|^2 on an envelope grid, in X units.
PacketMoments envelope_moments(const EnvelopeGrid& grid, const std::vector<cplx>& spectrum);

// --- ballistic regime ------------------------------------------------------

struct BallisticConfig {
  Vec2 ktilde = Vec2::Zero();
  int band = 1;
  double delta = 0.125;
  double t_final = 0.0;   // 0: 1/delta
  int cutoff = 5;
  int p = 12;
  int samples = 9;
  double margin = 6.0;
};

struct BallisticReport {
  Vec2 ktilde = Vec2::Zero();
  int band = 0;
  double delta = 0.0;
  double t_final = 0.0;
  Vec2 group_velocity = Vec2::Zero();
  Vec2 measured_velocity = Vec2::Zero();
  double velocity_deviation = 0.0;    // |v_meas - v_fd| / |v_fd|
  double drift = 0.0;                 // |center(t_final) - center(0)|
  double envelope_width = 0.0;        // sqrt(trace covariance / 2) at t = 0
  double width_change = 0.0;          // relative change of sqrt(trace covariance)
  double contamination = 0.0;         // mass outside the band
  std::vector<double> times;
  std::vector<Vec2> centers;
  int cells = 0;
};

/// Throws NumericalError when more than 1% of the mass sits outside the band.
BallisticReport ballistic_experiment(const FourierPotential& V, const HoneycombLattice& lattice,
                                     const BallisticConfig& config);

// --- effective-mass regime -------------------------------------------------

struct EffectiveMassConfig {
  Vec2 ktilde = Vec2::Zero();
  int band = 1;
  double delta = 0.125;
  double tau_final = 0.5;   // homogenized time; t = tau / delta^2
  int cutoff = 5;
  int p = 12;
  int samples = 5;
  double margin = 6.0;
};

struct EffectiveMassReport {
  Vec2 ktilde = Vec2::Zero();
  int band = 0;
  double delta = 0.0;
  double t_final = 0.0;
  Mat2 a_eff = Mat2::Zero();
  double isotropy_offdiag = 0.0;      // |A12| / trace
  double field_deviation = 0.0;       // relative L2 gap to the homogenized field at t_final
  double variance_growth_deviation = 0.0;  // max over sampled t of |dVar - dVar_pred| / dVar_pred
  double eccentricity = 0.0;          // 1 - lambda_min / lambda_max of the covariance at t_final
  std::vector<double> times;
  std::vector<double> variance_measured;   // trace of covariance
  std::vector<double> variance_predicted;
  int cells = 0;
};

/// Throws NumericalError when ktilde is not a critical point or the Hessian is
/// degenerate (pick another band edge).
EffectiveMassReport effective_mass_experiment(const FourierPotential& V, const HoneycombLattice& lattice,
                                              const EffectiveMassConfig& config);

// --- Lipschitz quotient ----------------------------------------------------

struct LipschitzConfig {
  int cutoff = 8;
  long npairs = 10000;
  int nbands = 4;
  double radius_cap = 1e-2;    // in units of q
  double radius_floor = 1e-5;  // in units of q, never below 1e-8
  std::uint64_t seed = 1;
};

struct LipschitzReport {
  int cutoff = 0;
  long npairs = 0;
  std::vector<double> max_quotient;  // per band
  double overall_max = 0.0;
  Vec2 argmax_k1 = Vec2::Zero();
  Vec2 argmax_k2 = Vec2::Zero();
};

/// The (k1, k2) pairs sampled by lipschitz_check.
std::pair<std::vector<Vec2>, std::vector<Vec2>> lipschitz_pairs(const LipschitzConfig& config, const DualBasis& dual);

/// Q_b = |mu_b(k1) - mu_b(k2)| / ((|mu_b(k1)| + 1) |k1 - k2|) over random near
/// pairs with k1 uniform in the zone. The pair sequence depends only on the
/// seed, so a larger npairs extends a smaller run.
LipschitzReport lipschitz_check(const FourierPotential& V, const HoneycombLattice& lattice,
                                const LipschitzConfig& config);

/// The b-th smallest |k + m.k|^2 over the basis: band energies of V = 0.
Eigen::VectorXd free_band_energies(const Vec2& k, int nbands, int cutoff, const DualBasis& dual);

}  // namespace honeycomb
