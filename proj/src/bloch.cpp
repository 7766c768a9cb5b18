#include "honeycomb/bloch.hpp"

#include "honeycomb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace honeycomb {

PlaneWaveBasis::PlaneWaveBasis(int cutoff) : cutoff_(cutoff) {
  if (cutoff < 0) throw DomainError("plane-wave cutoff must be nonnegative");
  const int w = 2 * cutoff + 1;
  lookup_.assign(static_cast<std::size_t>(w) * w, -1);
  for (int m1 = -cutoff; m1 <= cutoff; ++m1) {
    for (int m2 = -cutoff; m2 <= cutoff; ++m2) {
      if (std::abs(m1 - m2 + 1) > cutoff) continue;
      lookup_[static_cast<std::size_t>(m1 + cutoff) * w + (m2 + cutoff)] = static_cast<int>(indices_.size());
      indices_.push_back({m1, m2});
    }
  }
}

int PlaneWaveBasis::position(IndexPair m) const {
  if (std::abs(m.m1) > cutoff_ || std::abs(m.m2) > cutoff_) return -1;
  const int w = 2 * cutoff_ + 1;
  return lookup_[static_cast<std::size_t>(m.m1 + cutoff_) * w + (m.m2 + cutoff_)];
}

HermitianMatrix assemble_hamiltonian(const FourierPotential& V, const QuasiMomentum& k,
                                     const PlaneWaveBasis& basis, const DualBasis& dual) {
  if (basis.cutoff() < V.cutoff()) {
    throw DomainError("plane-wave cutoff " + std::to_string(basis.cutoff()) +
                      " is below the potential cutoff " + std::to_string(V.cutoff()));
  }
  const int D = basis.size();
  HermitianMatrix H = HermitianMatrix::Zero(D, D);
  const auto coeffs = V.coefficients();
  for (int i = 0; i < D; ++i) {
    const IndexPair m = basis.index(i);
    H(i, i) += (dual.vector(m) + k.k).squaredNorm();
    for (const auto& [g, vg] : coeffs) {
      const int j = basis.position(m - g);  // V_{m-n} with n = m - g
      if (j >= 0) H(i, j) += vg;
    }
  }
  return H;
}

namespace {

void check_eigenpairs(const HermitianMatrix& H, const std::vector<BlochEigenpair>& pairs) {
  for (const auto& p : pairs) {
    const double res = (H * p.coeffs - p.mu * p.coeffs).norm();
    if (!(res < 1e-9 * std::max(1.0, std::abs(p.mu)))) {
      std::ostringstream os;
      os << "eigen residual " << res << " at band " << p.band << " (mu = " << p.mu << ", D = " << H.rows()
         << ")";
      throw NumericalError(os.str());
    }
  }
}

}  // namespace

std::vector<BlochEigenpair> solve_bands(const HermitianMatrix& H, int nbands, const QuasiMomentum& k) {
  const int D = static_cast<int>(H.rows());
  if (nbands < 1 || nbands > D) {
    throw DomainError("requested " + std::to_string(nbands) + " bands from a basis of size " + std::to_string(D));
  }
  Eigen::VectorXd evals;
  Eigen::MatrixXcd evecs;
  if (H.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.real());
    if (es.info() != Eigen::Success) throw NumericalError("real symmetric eigensolver did not converge");
    evals = es.eigenvalues();
    evecs = es.eigenvectors().cast<cplx>();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
    evals = es.eigenvalues();
    evecs = es.eigenvectors();
  }
  std::vector<BlochEigenpair> out;
  out.reserve(static_cast<std::size_t>(nbands));
  for (int b = 0; b < nbands; ++b) {
    out.push_back({evals(b), evecs.col(b), k, b + 1});
  }
  check_eigenpairs(H, out);
  return out;
}

Eigen::VectorXd band_energies(const FourierPotential& V, const Vec2& k, int nbands,
                              const PlaneWaveBasis& basis, const DualBasis& dual) {
  const HermitianMatrix H = assemble_hamiltonian(V, {k, false}, basis, dual);
  if (nbands < 1 || nbands > H.rows()) throw DomainError("band count out of range");
  Eigen::VectorXd evals;
  if (H.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.real(), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("real symmetric eigensolver did not converge");
    evals = es.eigenvalues();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver did not converge");
    evals = es.eigenvalues();
  }
  return evals.head(nbands);
}

std::vector<Vec2> bz_grid(int n, const DualBasis& dual) {
  if (n < 1) throw DomainError("k-grid needs at least one point per side");
  const Vec2 K = vertex_K(dual).first.k;
  std::vector<Vec2> grid;
  grid.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Vec2 k = K + (static_cast<double>(i) / n - 0.5) * dual.k1 + (static_cast<double>(j) / n - 0.5) * dual.k2;
      grid.push_back(reduce_to_bz(k, dual).k);
    }
  }
  return grid;
}

BandStructure band_grid(const FourierPotential& V, const std::vector<Vec2>& kgrid, int nbands, int cutoff,
                        const DualBasis& dual, bool keep_vectors) {
  const PlaneWaveBasis basis(cutoff);
  BandStructure bs;
  bs.kpoints = kgrid;
  bs.nbands = nbands;
  bs.cutoff = cutoff;
  bs.mu.resize(static_cast<Eigen::Index>(kgrid.size()), nbands);
  if (keep_vectors) bs.vectors.resize(kgrid.size());

  const long nk = static_cast<long>(kgrid.size());
  std::vector<std::string> errors(kgrid.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < nk; ++i) {
    try {
      const auto idx = static_cast<std::size_t>(i);
      if (keep_vectors) {
        const auto pairs = solve_bands(assemble_hamiltonian(V, {kgrid[idx], true}, basis, dual), nbands,
                                       {kgrid[idx], true});
        Eigen::MatrixXcd vecs(basis.size(), nbands);
        for (int b = 0; b < nbands; ++b) {
          bs.mu(i, b) = pairs[static_cast<std::size_t>(b)].mu;
          vecs.col(b) = pairs[static_cast<std::size_t>(b)].coeffs;
        }
        bs.vectors[idx] = std::move(vecs);
      } else {
        bs.mu.row(i) = band_energies(V, kgrid[idx], nbands, basis, dual).transpose();
      }
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(i)] = e.what();
    }
  }
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i].empty()) throw NumericalError("band_grid failed at k index " + std::to_string(i) + ": " + errors[i]);
  }
  return bs;
}

// --- symmetry ---------------------------------------------------------------

const char* to_string(Sigma s) {
  switch (s) {
    case Sigma::One: return "1";
    case Sigma::Tau: return "tau";
    case Sigma::TauBar: return "tau_bar";
  }
  return "?";
}

cplx sigma_value(Sigma s) {
  const cplx tau = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
  switch (s) {
    case Sigma::One: return 1.0;
    case Sigma::Tau: return tau;
    case Sigma::TauBar: return std::conj(tau);
  }
  return 1.0;
}

RotationOperator::RotationOperator(const PlaneWaveBasis& basis) {
  image_.resize(static_cast<std::size_t>(basis.size()));
  for (int i = 0; i < basis.size(); ++i) {
    const int j = basis.position(index_rotation(basis.index(i)).first);
    if (j < 0) throw InternalError("plane-wave basis is not closed under the rotation");
    image_[static_cast<std::size_t>(i)] = j;
  }
}

Eigen::VectorXcd RotationOperator::apply(const Eigen::VectorXcd& c) const {
  Eigen::VectorXcd out(c.size());
  for (std::size_t i = 0; i < image_.size(); ++i) out(image_[i]) = c(static_cast<Eigen::Index>(i));
  return out;
}

Eigen::VectorXcd RotationOperator::project(Sigma s, const Eigen::VectorXcd& c) const {
  const cplx w = std::conj(sigma_value(s));
  const Eigen::VectorXcd rc = apply(c);
  const Eigen::VectorXcd rrc = apply(rc);
  return (c + w * rc + w * w * rrc) / 3.0;
}

Eigen::MatrixXcd RotationOperator::matrix() const {
  const auto D = static_cast<Eigen::Index>(image_.size());
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(D, D);
  for (std::size_t i = 0; i < image_.size(); ++i) P(image_[i], static_cast<Eigen::Index>(i)) = 1.0;
  return P;
}

Eigen::MatrixXcd RotationOperator::projector_matrix(Sigma s) const {
  const Eigen::MatrixXcd R = matrix();
  const cplx w = std::conj(sigma_value(s));
  const auto D = R.rows();
  return (Eigen::MatrixXcd::Identity(D, D) + w * R + w * w * R * R) / 3.0;
}

std::vector<LabeledEigenpair> symmetry_decompose_at_K(const std::vector<BlochEigenpair>& pairs,
                                                      const PlaneWaveBasis& basis, const DualBasis& dual,
                                                      double cluster_tol) {
  const Vec2 K = vertex_K(dual).first.k;
  for (const auto& p : pairs) {
    if ((p.k.k - K).norm() > 1e-14 * dual.q) throw DomainError("symmetry decomposition requires k = K");
  }
  const RotationOperator rot(basis);
  constexpr std::array<Sigma, 3> sectors{Sigma::One, Sigma::Tau, Sigma::TauBar};

  std::vector<LabeledEigenpair> out;
  std::size_t start = 0;
  int cluster = 0;
  while (start < pairs.size()) {
    std::size_t end = start + 1;
    while (end < pairs.size() &&
           std::abs(pairs[end].mu - pairs[start].mu) < cluster_tol * (1.0 + std::abs(pairs[start].mu))) {
      ++end;
    }
    const auto n = static_cast<Eigen::Index>(end - start);
    if (n == 1) {
      const auto& p = pairs[start];
      LabeledEigenpair best{p, Sigma::One, -1.0, cluster};
      for (Sigma s : sectors) {
        const double w = rot.project(s, p.coeffs).norm();
        if (w > best.purity) {
          best.sigma = s;
          best.purity = w;
        }
      }
      if (best.purity < 1.0 - 1e-8) {
        std::ostringstream os;
        os << "band " << p.band << " is not a rotation eigenvector (purity " << best.purity << ")";
        throw SymmetryViolation(os.str());
      }
      out.push_back(best);
    } else {
      // Re-diagonalize the cluster inside each sector: Q^* P_sigma Q has
      // eigenvalue 1 on the sigma-pure combinations.
      Eigen::MatrixXcd Q(basis.size(), n);
      double mu_mean = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        Q.col(j) = pairs[start + static_cast<std::size_t>(j)].coeffs;
        mu_mean += pairs[start + static_cast<std::size_t>(j)].mu;
      }
      mu_mean /= static_cast<double>(n);
      std::vector<LabeledEigenpair> found;
      for (Sigma s : sectors) {
        Eigen::MatrixXcd PQ(basis.size(), n);
        for (Eigen::Index j = 0; j < n; ++j) PQ.col(j) = rot.project(s, Q.col(j));
        Eigen::MatrixXcd B = Q.adjoint() * PQ;
        B = 0.5 * (B + B.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(B);
        for (Eigen::Index j = 0; j < n; ++j) {
          if (es.eigenvalues()(j) > 0.5) {
            Eigen::VectorXcd v = Q * es.eigenvectors().col(j);
            v.normalize();
            const double purity = rot.project(s, v).norm();
            BlochEigenpair bp{mu_mean, v, pairs[start].k, 0};
            found.push_back({bp, s, purity, cluster});
          }
        }
      }
      if (static_cast<Eigen::Index>(found.size()) != n) {
        std::ostringstream os;
        os << "cluster at mu = " << mu_mean << " of size " << n << " resolved into " << found.size()
           << " pure states";
        throw SymmetryViolation(os.str());
      }
      for (Eigen::Index j = 0; j < n; ++j) {
        const auto& orig = pairs[start + static_cast<std::size_t>(j)];
        auto& f = found[static_cast<std::size_t>(j)];
        f.pair.band = orig.band;
        f.pair.mu = orig.mu;
        if (f.purity < 1.0 - 1e-8) {
          std::ostringstream os;
          os << "cluster state purity " << f.purity << " below 1 - 1e-8";
          throw SymmetryViolation(os.str());
        }
        out.push_back(f);
      }
    }
    start = end;
    ++cluster;
  }
  return out;
}

// --- derivatives ------------------------------------------------------------

namespace {

double band_value(const FourierPotential& V, const Vec2& k, int band, const PlaneWaveBasis& basis,
                  const DualBasis& dual) {
  return band_energies(V, k, band, basis, dual)(band - 1);
}

Vec2 central_gradient(const FourierPotential& V, const Vec2& k, int band, const PlaneWaveBasis& basis,
                      const DualBasis& dual, double h) {
  Vec2 g;
  for (int d = 0; d < 2; ++d) {
    const Vec2 e = Vec2::Unit(d) * h;
    g(d) = (band_value(V, k + e, band, basis, dual) - band_value(V, k - e, band, basis, dual)) / (2.0 * h);
  }
  return g;
}

}  // namespace

GroupVelocity group_velocity(const FourierPotential& V, const Vec2& k, int band, int cutoff,
                             const DualBasis& dual, std::optional<double> h) {
  if (band < 1) throw DomainError("band index is 1-based");
  const double step = h.value_or(1e-4 * dual.q);
  const PlaneWaveBasis basis(cutoff);
  const Eigen::VectorXd mu = band_energies(V, k, band + 1, basis, dual);
  GroupVelocity gv;
  gv.step = step;
  gv.velocity = central_gradient(V, k, band, basis, dual, step);
  const double slope = gv.velocity.norm() + dual.q;
  double gap = mu(band) - mu(band - 1);
  if (band > 1) gap = std::min(gap, mu(band - 1) - mu(band - 2));
  if (gap < 10.0 * step * slope) {
    std::ostringstream os;
    os << "band " << band << " is nearly degenerate at k (gap " << gap
       << "); finite differences are unreliable here, use cone_slope_fit";
    throw NumericalError(os.str());
  }
  gv.richardson = central_gradient(V, k, band, basis, dual, step / 2.0);
  const double diff = (gv.velocity - gv.richardson).norm();
  if (diff > 1e-5 * std::max(gv.velocity.norm(), 1.0)) {
    std::ostringstream os;
    os << "group velocity not converged in step: |v(h) - v(h/2)| = " << diff;
    throw NumericalError(os.str());
  }
  return gv;
}

EffectiveMass effective_mass_tensor(const FourierPotential& V, const Vec2& k, int band, int cutoff,
                                    const DualBasis& dual, std::optional<double> h) {
  if (band < 1) throw DomainError("band index is 1-based");
  const double s = h.value_or(1e-3 * dual.q);
  const PlaneWaveBasis basis(cutoff);
  auto mu = [&](double dx, double dy) { return band_value(V, k + Vec2(dx, dy), band, basis, dual); };
  const double m0 = mu(0, 0);
  const double mxp = mu(s, 0), mxm = mu(-s, 0), myp = mu(0, s), mym = mu(0, -s);
  const double hxx = (mxp - 2.0 * m0 + mxm) / (s * s);
  const double hyy = (myp - 2.0 * m0 + mym) / (s * s);
  const double hxy = (mu(s, s) - mu(s, -s) - mu(-s, s) + mu(-s, -s)) / (4.0 * s * s);
  const double hyx = (mu(s, s) - mu(-s, s) - mu(s, -s) + mu(-s, -s)) / (4.0 * s * s);

  EffectiveMass em;
  em.gradient = Vec2((mxp - mxm) / (2.0 * s), (myp - mym) / (2.0 * s));
  em.a_eff << 0.5 * hxx, 0.5 * hxy, 0.5 * hyx, 0.5 * hyy;
  em.symmetry_residual = std::abs(hxy - hyx);
  // critical-point tolerance relative to the curvature scale over one step
  em.not_critical = em.gradient.norm() > 1e-6 * std::max(1.0, std::abs(hxx) + std::abs(hyy)) * dual.q;
  return em;
}

}  // namespace honeycomb
