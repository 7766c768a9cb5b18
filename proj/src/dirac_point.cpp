#include "honeycomb/dirac_point.hpp"

#include "honeycomb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace honeycomb {

double default_degeneracy_tolerance(double mu, int cutoff) {
  const double rel = cutoff < 12 ? 1e-6 : 1e-7;
  return rel * (1.0 + std::abs(mu));
}

namespace {

// Multiply by a unit phase so the first coefficient of (near-)maximal modulus
// is real and positive.
void fix_gauge(Eigen::VectorXcd& v) {
  const double vmax = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= vmax * (1.0 - 1e-10)) {
      v *= std::conj(v(i)) / std::abs(v(i));
      v(i) = std::abs(v(i));
      return;
    }
  }
}

Eigen::VectorXcd conjugate_inversion(const Eigen::VectorXcd& c, const PlaneWaveBasis& basis,
                                     const DualBasis& dual) {
  const IndexAffineMap iota = conjugate_inversion_map(dual);
  Eigen::VectorXcd out(c.size());
  for (int i = 0; i < basis.size(); ++i) {
    const int j = basis.position(iota(basis.index(i)));
    if (j < 0) throw InternalError("basis not closed under conjugate inversion");
    out(i) = std::conj(c(j));
  }
  return out;
}

// <a, d_xj b> for K-pseudo-periodic coefficient vectors: d_xj has symbol i (K + m.k)_j.
cplx derivative_inner(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, int j, const PlaneWaveBasis& basis,
                      const DualBasis& dual) {
  const Vec2 K = vertex_K(dual).first.k;
  cplx s{};
  for (int i = 0; i < basis.size(); ++i) {
    const double p = (K + dual.vector(basis.index(i)))(j);
    s += std::conj(a(i)) * cplx(0.0, p) * b(i);
  }
  return s;
}

}  // namespace

DiracPointData detect(const FourierPotential& V, const HoneycombLattice& lattice, int cutoff,
                      std::optional<double> rel_tol, int search_bands) {
  const DualBasis& dual = lattice.dual;
  const PlaneWaveBasis basis(cutoff);
  const QuasiMomentum K = vertex_K(dual).first;
  const HermitianMatrix H = assemble_hamiltonian(V, K, basis, dual);
  const int nb = std::min(search_bands + 1, basis.size());
  const auto pairs = solve_bands(H, nb, K);

  auto tol_at = [&](double mu) {
    return rel_tol ? *rel_tol * (1.0 + std::abs(mu)) : default_degeneracy_tolerance(mu, cutoff);
  };

  int lowest_cluster_mult = 1;
  bool seen_cluster = false;
  std::size_t i = 0;
  while (i + 1 < pairs.size()) {
    const double tol = tol_at(pairs[i].mu);
    std::size_t j = i + 1;
    while (j < pairs.size() && std::abs(pairs[j].mu - pairs[i].mu) < tol) ++j;
    const std::size_t mult = j - i;
    if (mult > 1 && !seen_cluster) {
      lowest_cluster_mult = static_cast<int>(mult);
      seen_cluster = true;
    }
    const bool room_above = j < pairs.size();
    if (mult == 2 && room_above) {
      const double mu = 0.5 * (pairs[i].mu + pairs[i + 1].mu);
      double isolation = pairs[j].mu - mu;
      if (i > 0) isolation = std::min(isolation, mu - pairs[i - 1].mu);
      if (isolation >= 1e3 * tol) {
        // label the pair; a sigma = 1 member means this is not a Dirac pair
        const std::vector<BlochEigenpair> cluster{pairs[i], pairs[i + 1]};
        const auto labeled = symmetry_decompose_at_K(cluster, basis, dual, 2.0 * tol / (1.0 + std::abs(mu)));
        const auto tau = std::find_if(labeled.begin(), labeled.end(),
                                      [](const LabeledEigenpair& l) { return l.sigma == Sigma::Tau; });
        const auto taubar = std::find_if(labeled.begin(), labeled.end(),
                                         [](const LabeledEigenpair& l) { return l.sigma == Sigma::TauBar; });
        if (tau != labeled.end() && taubar != labeled.end()) {
          DiracPointData dp;
          dp.mu_star = mu;
          dp.b1 = pairs[i].band;
          dp.cutoff = cutoff;
          dp.tolerance = tol;
          dp.degeneracy_gap = std::abs(pairs[i + 1].mu - pairs[i].mu);
          dp.isolation_gap = isolation;
          dp.phi1 = tau->pair.coeffs;
          fix_gauge(dp.phi1);
          dp.phi2 = conjugate_inversion(dp.phi1, basis, dual);

          const RotationOperator rot(basis);
          const double p2 = rot.project(Sigma::TauBar, dp.phi2).norm();
          if (p2 < 1.0 - 1e-8) {
            throw SymmetryViolation("conjugate-inversion image of Phi1 is not in the tau_bar sector");
          }
          const double overlap = std::abs(dp.phi1.dot(dp.phi2));
          if (overlap > 1e-10) throw SymmetryViolation("Phi1 and Phi2 are not orthogonal");
          dp.residual = std::max((H * dp.phi1 - mu * dp.phi1).norm(), (H * dp.phi2 - mu * dp.phi2).norm());
          if (dp.residual > 1e-8 * (1.0 + std::abs(mu))) {
            throw NumericalError("Dirac pair residual too large: " + std::to_string(dp.residual));
          }
          const auto ip = lambda_sharp_inner_product(dp.phi1, dp.phi2, basis, dual);
          dp.lambda_sharp = ip.lambda_sharp;
          dp.estimates.inner_product = ip.lambda_sharp;
          dp.estimates.fourier_sum = lambda_sharp_fourier_sum(dp.phi1, basis, lattice);
          if (std::abs(dp.lambda_sharp) < 1e-10) {
            throw NotADiracPoint("degenerate pair found but lambda_sharp vanishes", 2);
          }
          return dp;
        }
      }
    }
    i = j;
  }
  std::ostringstream os;
  os << "no isolated (tau, tau_bar) pair among the lowest " << search_bands
     << " bands at K; lowest degenerate cluster has multiplicity " << lowest_cluster_mult
     << " (the amplitude may be exceptional or the tolerance too tight)";
  throw NotADiracPoint(os.str(), lowest_cluster_mult);
}

LambdaSharpInnerProduct lambda_sharp_inner_product(const Eigen::VectorXcd& phi1, const Eigen::VectorXcd& phi2,
                                                   const PlaneWaveBasis& basis, const DualBasis& dual) {
  const cplx I(0.0, 1.0);
  LambdaSharpInnerProduct r;
  r.lambda_sharp = -2.0 * I * derivative_inner(phi2, phi1, 0, basis, dual);
  r.zeta_y = 2.0 * I * derivative_inner(phi2, phi1, 1, basis, dual);
  r.pairing_lhs = 2.0 * I * derivative_inner(phi1, phi2, 0, basis, dual);
  r.pairing_rhs = std::conj(2.0 * I * derivative_inner(phi2, phi1, 0, basis, dual));
  r.cross_residual = std::abs(r.zeta_y - I * r.lambda_sharp);
  for (const auto* v : {&phi1, &phi2}) {
    for (int j = 0; j < 2; ++j) r.self_term = std::max(r.self_term, std::abs(derivative_inner(*v, *v, j, basis, dual)));
  }
  if (r.cross_residual > 1e-10 * (1.0 + std::abs(r.lambda_sharp))) {
    std::ostringstream os;
    os << "zeta = (0,1) identity fails: |2i<Phi2, d2 Phi1> - i lambda| = " << r.cross_residual;
    throw SymmetryViolation(os.str());
  }
  return r;
}

cplx lambda_sharp_fourier_sum(const Eigen::VectorXcd& phi1, const PlaneWaveBasis& basis,
                              const HoneycombLattice& lattice) {
  const DualBasis& dual = lattice.dual;
  const Vec2 K = vertex_K(dual).first.k;
  cplx s{};
  for (int i = 0; i < basis.size(); ++i) {
    const Vec2 km = K + dual.vector(basis.index(i));
    s += phi1(i) * phi1(i) * cplx(km(0), km(1));
  }
  // coefficients of the L2(Omega)-normalized function are phi1 / sqrt|Omega|
  return 3.0 * s;
}

ConeFit cone_slope_fit(const FourierPotential& V, const HoneycombLattice& lattice, int cutoff, int b1,
                       double mu_star, std::vector<double> radii, int nangles) {
  const DualBasis& dual = lattice.dual;
  if (radii.empty()) radii = {0.0025 * dual.q, 0.005 * dual.q, 0.01 * dual.q, 0.02 * dual.q};
  std::sort(radii.begin(), radii.end());
  if (radii.size() < 2 || radii.front() <= 0.0) throw DomainError("cone fit needs at least two positive radii");
  if (nangles < 1) throw DomainError("cone fit needs at least one angle");
  const PlaneWaveBasis basis(cutoff);
  const Vec2 K = vertex_K(dual).first.k;

  ConeFit fit;
  const std::size_t nr = radii.size();
  const auto na = static_cast<std::size_t>(nangles);
  fit.samples.resize(nr * na);
  const long total = static_cast<long>(nr * na);
  std::vector<std::string> errors(nr * na);
#pragma omp parallel for schedule(dynamic)
  for (long idx = 0; idx < total; ++idx) {
    const auto u = static_cast<std::size_t>(idx);
    const double r = radii[u / na];
    const double th = 2.0 * std::numbers::pi * static_cast<double>(u % na) / nangles;
    try {
      const Eigen::VectorXd mu =
          band_energies(V, K + r * Vec2(std::cos(th), std::sin(th)), b1 + 1, basis, dual);
      fit.samples[u] = ConeSample{r, th, mu(b1), mu(b1 - 1), 0.0, 0.0};
    } catch (const std::exception& e) {
      errors[u] = e.what();
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw NumericalError("cone sample failed: " + e);
  }

  // The half splitting (mu_+ - mu_-)/2 cancels the common curvature, and the
  // angle average cancels the cos(3 theta) warping, leaving s r + d r^3.
  std::vector<double> ring_slope(nr, 0.0), ring_curv(nr, 0.0);
  for (std::size_t ir = 0; ir < nr; ++ir) {
    for (std::size_t a = 0; a < na; ++a) {
      const auto& smp = fit.samples[ir * na + a];
      ring_slope[ir] += (smp.mu_plus - smp.mu_minus) / (2.0 * smp.radius);
      ring_curv[ir] += (smp.mu_plus + smp.mu_minus - 2.0 * mu_star) / (2.0 * smp.radius * smp.radius);
    }
    ring_slope[ir] /= static_cast<double>(na);
    ring_curv[ir] /= static_cast<double>(na);
  }
  // least squares of S(r) = s + d r^2 over the two smallest rings
  {
    Eigen::MatrixXd A(2, 2);
    Eigen::VectorXd y(2);
    for (int i = 0; i < 2; ++i) {
      A(i, 0) = 1.0;
      A(i, 1) = radii[static_cast<std::size_t>(i)] * radii[static_cast<std::size_t>(i)];
      y(i) = ring_slope[static_cast<std::size_t>(i)];
    }
    const Eigen::Vector2d sd = A.colPivHouseholderQr().solve(y);
    fit.slope = sd(0);
    if (!(fit.slope > 0.0)) throw ConeFitFailure("nonpositive cone slope " + std::to_string(fit.slope));
    fit.quadratic = ring_curv[0];
    for (std::size_t ir = 0; ir < nr; ++ir) {
      const double pred = sd(0) + sd(1) * radii[ir] * radii[ir];
      if (radii[ir] <= 4.0 * radii[0]) {
        fit.fit_residual = std::max(fit.fit_residual, std::abs(pred - ring_slope[ir]) / fit.slope);
      }
    }
  }
  if (fit.fit_residual > 0.1) {
    throw ConeFitFailure("dispersion is not conical on the smallest rings (misfit " +
                         std::to_string(fit.fit_residual) + " of slope)");
  }

  for (std::size_t a = 0; a < na; ++a) {
    const auto& smp = fit.samples[a];
    fit.angle_slopes.push_back((smp.mu_plus - smp.mu_minus) / (2.0 * smp.radius));
  }
  const auto [mn, mx] = std::minmax_element(fit.angle_slopes.begin(), fit.angle_slopes.end());
  double mean = 0.0;
  for (double s : fit.angle_slopes) mean += s;
  mean /= static_cast<double>(na);
  fit.isotropy_spread = (*mx - *mn) / mean;

  fit.validity_radius = radii.back();
  for (std::size_t ir = 0; ir < nr; ++ir) {
    double emax = 0.0;
    for (std::size_t a = 0; a < na; ++a) {
      auto& smp = fit.samples[ir * na + a];
      smp.e_plus = (smp.mu_plus - mu_star) / (fit.slope * smp.radius) - 1.0;
      smp.e_minus = (smp.mu_minus - mu_star) / (-fit.slope * smp.radius) - 1.0;
      emax = std::max({emax, std::abs(smp.e_plus), std::abs(smp.e_minus)});
    }
    fit.ring_max_e.push_back(emax);
    fit.lipschitz_constant = std::max(fit.lipschitz_constant, emax / radii[ir]);
    if (!fit.validity_bounded && emax > 0.1) {
      fit.validity_radius = radii[ir];
      fit.validity_bounded = true;
    }
  }
  return fit;
}

namespace {

struct PairAtK {
  Eigen::VectorXcd minus;
  Eigen::VectorXcd plus;
};

PairAtK cone_pair(const FourierPotential& V, const HoneycombLattice& lattice, const DiracPointData& dp,
                  const Vec2& kappa) {
  const PlaneWaveBasis basis(dp.cutoff);
  const Vec2 K = vertex_K(lattice.dual).first.k;
  const QuasiMomentum k{K + kappa, false};
  const auto pairs = solve_bands(assemble_hamiltonian(V, k, basis, lattice.dual), dp.b1 + 1, k);
  return {pairs[static_cast<std::size_t>(dp.b1 - 1)].coeffs, pairs[static_cast<std::size_t>(dp.b1)].coeffs};
}

}  // namespace

ExpansionResidual eigenvector_expansion_residual(const FourierPotential& V, const HoneycombLattice& lattice,
                                                 const DiracPointData& dp, const Vec2& kappa) {
  const double r = kappa.norm();
  if (!(r > 0.0)) throw DomainError("kappa must be nonzero");
  const auto pm = cone_pair(V, lattice, dp, kappa);
  const double lam = std::abs(dp.lambda_sharp);

  ExpansionResidual out;
  out.kappa = kappa;
  out.alpha_expected = std::conj(dp.lambda_sharp) / lam * cplx(kappa(0), kappa(1)) / r;
  const double s2 = std::sqrt(0.5);
  out.span_mass = 1.0;
  for (int sign : {+1, -1}) {
    const Eigen::VectorXcd& v = sign > 0 ? pm.plus : pm.minus;
    cplx a1 = dp.phi1.dot(v);  // <p1, p_pm>
    cplx a2 = dp.phi2.dot(v);
    const double mass = std::norm(a1) + std::norm(a2);
    if (mass < 0.5) {
      throw NumericalError("projection of p_pm onto span{p1, p2} is " + std::to_string(mass) +
                           "; band pairing looks wrong");
    }
    // phase making a2 real with the sign of the branch
    const cplx phase = (sign > 0 ? 1.0 : -1.0) * std::conj(a2) / std::abs(a2);
    a1 *= phase;
    a2 *= phase;
    const double err = std::max(std::abs(a1 - s2 * out.alpha_expected), std::abs(a2 - sign * s2));
    out.coefficient_error = std::max(out.coefficient_error, err);
    out.out_of_span = std::max(out.out_of_span, 1.0 - mass);
    out.span_mass = std::min(out.span_mass, mass);
    (sign > 0 ? out.plus : out.minus) = {a1, a2};
  }
  return out;
}

double alpha_winding(const FourierPotential& V, const HoneycombLattice& lattice, const DiracPointData& dp,
                     double radius, int nangles) {
  if (nangles < 3) throw DomainError("winding needs at least three samples");
  double total = 0.0;
  double prev = 0.0;
  for (int a = 0; a <= nangles; ++a) {
    const double th = 2.0 * std::numbers::pi * a / nangles;
    const auto res = eigenvector_expansion_residual(V, lattice, dp, radius * Vec2(std::cos(th), std::sin(th)));
    const double arg = std::arg(res.plus[0]);
    if (a > 0) {
      double d = arg - prev;
      while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
      while (d < -std::numbers::pi) d += 2.0 * std::numbers::pi;
      total += d;
    }
    prev = arg;
  }
  return total;
}

DiracPointData characterize_dirac_point(const FourierPotential& V, const HoneycombLattice& lattice, int cutoff,
                                        std::optional<double> rel_tol) {
  DiracPointData dp = detect(V, lattice, cutoff, rel_tol);
  const ConeFit fit = cone_slope_fit(V, lattice, cutoff, dp.b1, dp.mu_star);
  dp.estimates.cone_fit = fit.slope;
  dp.cone_residuals = fit.samples;
  return dp;
}

}  // namespace honeycomb
