#pragma once

// Plane-wave Galerkin discretization of the Floquet-Bloch problem
//   H(k) p = mu(k) p,  H(k) = -(grad + i k)^2 + V,
// acting on Lambda-periodic p(x) = |Omega|^{-1/2} sum_m c_m exp(i m.k x).

#include "honeycomb/lattice.hpp"
#include "honeycomb/potential.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <vector>

namespace honeycomb {

using HermitianMatrix = Eigen::MatrixXcd;

/// Index set {|m1| <= M, |m2| <= M, |m1 - m2 + 1| <= M}: the square of
/// half-width M intersected with its images under the K-centered rotation, so
/// the rotation acts on it as an exact permutation. Canonical order is
/// row-major by m1 then m2.
class PlaneWaveBasis {
 public:
  explicit PlaneWaveBasis(int cutoff);

  int cutoff() const { return cutoff_; }
  int size() const { return static_cast<int>(indices_.size()); }
  const std::vector<IndexPair>& indices() const { return indices_; }
  IndexPair index(int i) const { return indices_[static_cast<std::size_t>(i)]; }
  /// Position of m in the canonical order, or -1 if m is not in the basis.
  int position(IndexPair m) const;
  bool contains(IndexPair m) const { return position(m) >= 0; }

 private:
  int cutoff_;
  std::vector<IndexPair> indices_;
  std::vector<int> lookup_;  // (2M+1)^2 square -> position or -1
};

struct BlochEigenpair {
  double mu = 0.0;
  Eigen::VectorXcd coeffs;  // unit l2 norm <=> unit L2(Omega) norm
  QuasiMomentum k;
  int band = 0;  // 1-based
};

/// Entry (m, n) = |m.k + k|^2 delta_mn + V_{m-n}. Throws DomainError when the
/// basis cutoff is below the potential cutoff.
HermitianMatrix assemble_hamiltonian(const FourierPotential& V, const QuasiMomentum& k,
                                     const PlaneWaveBasis& basis, const DualBasis& dual);

/// Lowest nbands eigenpairs in ascending order. Residuals and orthonormality
/// are checked; failures raise NumericalError with diagnostics.
std::vector<BlochEigenpair> solve_bands(const HermitianMatrix& H, int nbands,
                                        const QuasiMomentum& k = {});

/// Eigenvalues only (no vectors), ascending, lowest nbands.
Eigen::VectorXd band_energies(const FourierPotential& V, const Vec2& k, int nbands,
                              const PlaneWaveBasis& basis, const DualBasis& dual);

struct BandStructure {
  std::vector<Vec2> kpoints;
  int nbands = 0;
  int cutoff = 0;
  Eigen::MatrixXd mu;  // kpoints.size() x nbands
  /// Optional eigenvectors per k (columns ordered by band).
  std::vector<Eigen::MatrixXcd> vectors;

  double at(std::size_t ik, int band) const { return mu(static_cast<Eigen::Index>(ik), band - 1); }
};

/// Uniform n x n grid K + (i/n - 1/2) k1 + (j/n - 1/2) k2 reduced into B_h.
std::vector<Vec2> bz_grid(int n, const DualBasis& dual);

/// Per-k solves, parallel over k with results stored by grid index.
BandStructure band_grid(const FourierPotential& V, const std::vector<Vec2>& kgrid, int nbands,
                        int cutoff, const DualBasis& dual, bool keep_vectors = false);

// --- symmetry decomposition at K -------------------------------------------

enum class Sigma { One, Tau, TauBar };

const char* to_string(Sigma s);
/// 1, tau = exp(2 pi i/3), conj(tau).
cplx sigma_value(Sigma s);

/// Coefficient action of (R f)(x) = f(R* x) on K-pseudo-periodic functions:
/// (R c)(m') = c(m) with R (K + m.k) = K + m'.k.
class RotationOperator {
 public:
  explicit RotationOperator(const PlaneWaveBasis& basis);
  Eigen::VectorXcd apply(const Eigen::VectorXcd& c) const;
  /// P_sigma = (I + conj(sigma) R + conj(sigma)^2 R^2) / 3.
  Eigen::VectorXcd project(Sigma s, const Eigen::VectorXcd& c) const;
  Eigen::MatrixXcd projector_matrix(Sigma s) const;
  Eigen::MatrixXcd matrix() const;

 private:
  std::vector<int> image_;  // position(m) -> position(m')
};

struct LabeledEigenpair {
  BlochEigenpair pair;
  Sigma sigma = Sigma::One;
  double purity = 0.0;  // ||P_sigma v||
  int cluster = 0;      // eigenvalue cluster id (ascending)
};

/// Labels eigenvectors at k = K by their rotation eigenvalue. Degenerate
/// clusters (|mu - mu'| < cluster_tol (1 + |mu|)) are re-diagonalized inside
/// each P_sigma block before labeling. Throws SymmetryViolation when a state
/// cannot be resolved into a pure sector.
std::vector<LabeledEigenpair> symmetry_decompose_at_K(const std::vector<BlochEigenpair>& pairs,
                                                      const PlaneWaveBasis& basis,
                                                      const DualBasis& dual,
                                                      double cluster_tol = 1e-8);

// --- finite-difference band derivatives -------------------------------------

struct GroupVelocity {
  Vec2 velocity = Vec2::Zero();
  Vec2 richardson = Vec2::Zero();  // estimate at h/2
  double step = 0.0;
};

/// Central difference of mu_b with step h (default 1e-4 q). Throws
/// NumericalError near degeneracies or when the h/2 estimate disagrees.
GroupVelocity group_velocity(const FourierPotential& V, const Vec2& k, int band, int cutoff,
                             const DualBasis& dual, std::optional<double> h = std::nullopt);

struct EffectiveMass {
  Mat2 a_eff = Mat2::Zero();  // half the Hessian of mu_b
  Vec2 gradient = Vec2::Zero();
  double symmetry_residual = 0.0;
  bool not_critical = false;  // |grad mu| above tolerance at k
};

EffectiveMass effective_mass_tensor(const FourierPotential& V, const Vec2& k, int band, int cutoff,
                                    const DualBasis& dual, std::optional<double> h = std::nullopt);

}  // namespace honeycomb
