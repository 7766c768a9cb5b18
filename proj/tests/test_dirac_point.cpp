#include "honeycomb/dirac_point.hpp"
#include "honeycomb/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace honeycomb;

namespace {

const HoneycombLattice& lattice() {
  static const auto lat = honeycomb_basis(1.0);
  return lat;
}

const DiracPointData& reference_point() {
  static const DiracPointData dp =
      characterize_dirac_point(three_cosine_potential(1.0, lattice().dual), lattice(), 5);
  return dp;
}

}  // namespace

TEST_CASE("three-cosine potential has a Dirac pair at the lowest crossing") {
  const auto& dp = reference_point();
  CHECK(dp.b1 == 1);
  CHECK(dp.mu_star == doctest::Approx(17.0366).epsilon(1e-5));
  CHECK(dp.degeneracy_gap < dp.tolerance);
  CHECK(dp.isolation_gap > 1.0);
  CHECK(dp.residual < 1e-8);
  CHECK(std::abs(dp.lambda_sharp) == doctest::Approx(4.18797).epsilon(1e-5));
}

TEST_CASE("Dirac eigenvectors are normalized and related by conjugate inversion") {
  const auto& dp = reference_point();
  const PlaneWaveBasis basis(dp.cutoff);
  CHECK(dp.phi1.norm() == doctest::Approx(1.0));
  CHECK(dp.phi2.norm() == doctest::Approx(1.0));
  CHECK(std::abs(dp.phi1.dot(dp.phi2)) < 1e-10);
  const RotationOperator R(basis);
  const cplx tau = sigma_value(Sigma::Tau);
  CHECK((R.apply(dp.phi1) - tau * dp.phi1).norm() < 1e-9);
  CHECK((R.apply(dp.phi2) - std::conj(tau) * dp.phi2).norm() < 1e-9);
  // gauge: largest coefficient of phi1 real positive
  Eigen::Index imax = 0;
  dp.phi1.cwiseAbs().maxCoeff(&imax);
  CHECK(dp.phi1(imax).real() > 0);
  CHECK(std::abs(dp.phi1(imax).imag()) < 1e-12);
}

TEST_CASE("lambda estimates agree across methods") {
  const auto& dp = reference_point();
  const PlaneWaveBasis basis(dp.cutoff);
  const auto ip = lambda_sharp_inner_product(dp.phi1, dp.phi2, basis, lattice().dual);
  CHECK(std::abs(ip.lambda_sharp - dp.lambda_sharp) < 1e-12);
  CHECK(ip.cross_residual < 1e-9);
  CHECK(ip.self_term < 1e-9);
  CHECK(std::abs(ip.pairing_lhs - ip.pairing_rhs) < 1e-9);
  REQUIRE(dp.estimates.fourier_sum.has_value());
  // unrestricted sum over all indices: reported only, not expected to match
  CHECK(std::isfinite(std::abs(*dp.estimates.fourier_sum)));
  CHECK(std::abs(dp.estimates.cone_fit - std::abs(dp.lambda_sharp)) < 1e-3 * std::abs(dp.lambda_sharp));
}

TEST_CASE("lambda is insensitive to the cutoff") {
  const auto hi = characterize_dirac_point(three_cosine_potential(1.0, lattice().dual), lattice(), 8);
  const auto& lo = reference_point();
  CHECK(std::abs(hi.mu_star - lo.mu_star) < 1e-6);
  CHECK(std::abs(std::abs(hi.lambda_sharp) - std::abs(lo.lambda_sharp)) < 1e-6);
}

TEST_CASE("cone is isotropic at leading order") {
  const auto& dp = reference_point();
  const auto fit = cone_slope_fit(three_cosine_potential(1.0, lattice().dual), lattice(), dp.cutoff, dp.b1,
                                  dp.mu_star);
  CHECK(fit.angle_slopes.size() == 12);
  // trigonal warping of the per-angle slopes is first order in the radius
  const double q = lattice().dual.q;
  const auto fine = cone_slope_fit(three_cosine_potential(1.0, lattice().dual), lattice(), dp.cutoff, dp.b1,
                                   dp.mu_star, {0.000625 * q, 0.00125 * q, 0.0025 * q});
  CHECK(fit.isotropy_spread / fine.isotropy_spread == doctest::Approx(4.0).epsilon(0.25));
  CHECK(fit.fit_residual < 0.1);
  CHECK(fit.slope == doctest::Approx(std::abs(dp.lambda_sharp)).epsilon(1e-3));
}

TEST_CASE("eigenvectors near K follow the cone expansion") {
  const auto& dp = reference_point();
  const auto V = three_cosine_potential(1.0, lattice().dual);
  const double q = lattice().dual.q;
  for (double theta : {0.0, 1.0, 2.5}) {
    const Vec2 kappa = 1e-4 * q * Vec2(std::cos(theta), std::sin(theta));
    const auto res = eigenvector_expansion_residual(V, lattice(), dp, kappa);
    CHECK(res.coefficient_error < 1e-2);
    CHECK(res.span_mass > 0.99);
  }
  const double winding = alpha_winding(V, lattice(), dp, 1e-3 * q);
  CHECK(std::abs(winding) == doctest::Approx(2 * std::numbers::pi).epsilon(1e-6));
}

TEST_CASE("free problem at K is threefold degenerate, not a Dirac point") {
  try {
    detect(zero_potential(), lattice(), 3);
    FAIL("expected NotADiracPoint");
  } catch (const NotADiracPoint& e) {
    CHECK(e.multiplicity() == 3);
  }
}

TEST_CASE("default tolerance loosens below the reference cutoff") {
  CHECK(default_degeneracy_tolerance(0.0, 12) == doctest::Approx(1e-7));
  CHECK(default_degeneracy_tolerance(1.0, 5) == doctest::Approx(2e-6));
}
