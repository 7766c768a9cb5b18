#include "honeycomb/errors.hpp"
#include "honeycomb/harness.hpp"

#include <doctest.h>

#include <cmath>

using namespace honeycomb;

namespace {

const HoneycombLattice& lattice() {
  static const auto lat = honeycomb_basis(1.0);
  return lat;
}

const DiracPointData& dirac() {
  static const DiracPointData dp =
      characterize_dirac_point(three_cosine_potential(1.0, lattice().dual), lattice(), 5);
  return dp;
}

}  // namespace

TEST_CASE("constant envelope is an exact solution of both dynamics") {
  const auto& dp = dirac();
  const auto V = three_cosine_potential(1.0, lattice().dual);
  const double delta = 0.5;
  const Supercell cell(lattice(), 6, 6, 12);
  const auto eg = cell.envelope_grid(delta);
  EnvelopePair env{eg, std::vector<cplx>(eg.size(), cplx(1.0)), std::vector<cplx>(eg.size(), cplx(0.0, 0.5)),
                   dp.lambda_sharp};
  const auto wp = build_wavepacket(env, dp, delta, cell, "constant", false);
  const auto coeffs = bloch_transform(cell, wp.spectrum, V, dp.cutoff);
  const double norm0 = std::sqrt(spectrum_norm2(cell, wp.spectrum));
  for (double t : {0.0, 0.7, 3.0}) {
    const auto spec = bloch_synthesize_spectrum(cell, coeffs, t);
    const auto envT = dirac_propagate(env, delta * t).env;
    const auto n = effective_dynamics_error(cell, spec, envT, dp, delta, t, norm0);
    CHECK(n.relative < 1e-8);
    CHECK(n.psi_norm == doctest::Approx(norm0).epsilon(1e-10));
  }
}

TEST_CASE("envelopes propagated with another lambda are rejected") {
  const auto& dp = dirac();
  const double delta = 0.5;
  const Supercell cell(lattice(), 4, 4, 12);
  const auto eg = cell.envelope_grid(delta);
  EnvelopePair env{eg, std::vector<cplx>(eg.size(), cplx(1.0)), std::vector<cplx>(eg.size(), cplx(0.0)),
                   dp.lambda_sharp * 1.01};
  const auto wp = build_wavepacket(env, dp, delta, cell, "constant", false);
  CHECK_THROWS_AS(effective_dynamics_error(cell, wp.spectrum, env, dp, delta, 0.0, 1.0), ConfigError);
}

TEST_CASE("exponent fit recovers a power law") {
  const std::vector<double> d{0.5, 0.25, 0.125};
  std::vector<double> e;
  for (double x : d) e.push_back(3.0 * std::pow(x, 0.8));
  CHECK(fit_exponent(d, e) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK_THROWS_AS(fit_exponent({0.5}, {1.0}), DomainError);
  CHECK_THROWS_AS(fit_exponent({0.5, 0.25}, {1.0, 0.0}), NumericalError);
}

TEST_CASE("a single delta yields no scaling exponent") {
  ScalingConfig cfg;
  cfg.deltas = {0.5};
  cfg.samples = 4;
  const auto rep = scaling_study(three_cosine_potential(1.0, lattice().dual), lattice(), cfg);
  REQUIRE(rep.rows.size() == 1);
  CHECK_FALSE(rep.tau_star.has_value());
  CHECK_FALSE(rep.pass);
  CHECK(rep.rows[0].t0_error == 0.0);
  CHECK(rep.rows[0].max_norm_drift < 1e-10);
  CHECK(rep.rows[0].samples.size() == 5);
}

TEST_CASE("envelope moments of a Gaussian") {
  const auto eg = EnvelopeGrid::square(24.0, 64);
  const auto a = sample_envelope(eg, [](const Vec2& X) { return std::exp(-(X - Vec2(1.0, -2.0)).squaredNorm() / 2); });
  const auto m = envelope_moments(eg, envelope_spectrum(eg, a));
  CHECK((m.center - Vec2(1.0, -2.0)).norm() < 1e-8);
  CHECK((m.covariance - 0.5 * Mat2::Identity()).norm() < 1e-8);
}

TEST_CASE("free effective-mass packet follows the homogenized dynamics") {
  EffectiveMassConfig cfg;
  cfg.delta = 0.25;
  cfg.tau_final = 0.5;
  const auto rep = effective_mass_experiment(zero_potential(), lattice(), cfg);
  CHECK((rep.a_eff - Mat2::Identity()).norm() < 1e-6);
  CHECK(rep.field_deviation < 1e-6);
  CHECK(rep.variance_growth_deviation < 1e-6);
  CHECK(rep.eccentricity < 1e-6);
}

TEST_CASE("effective mass refuses points that are not critical") {
  EffectiveMassConfig cfg;
  cfg.ktilde = Vec2(0.5, 0.1);
  CHECK_THROWS_AS(effective_mass_experiment(zero_potential(), lattice(), cfg), NumericalError);
}

TEST_CASE("free ballistic packet moves at twice its momentum") {
  BallisticConfig cfg;
  cfg.ktilde = Vec2(0.5, 0.0);
  cfg.delta = 0.25;
  const auto rep = ballistic_experiment(zero_potential(), lattice(), cfg);
  CHECK((rep.group_velocity - Vec2(1.0, 0.0)).norm() < 1e-6);
  CHECK(rep.velocity_deviation < 1e-6);
  CHECK(rep.contamination < 1e-10);
}

TEST_CASE("free Lipschitz quotient matches the closed-form bands") {
  LipschitzConfig cfg;
  cfg.cutoff = 3;
  cfg.npairs = 400;
  const auto rep = lipschitz_check(zero_potential(), lattice(), cfg);
  const auto e1 = free_band_energies(rep.argmax_k1, cfg.nbands, cfg.cutoff, lattice().dual);
  const auto e2 = free_band_energies(rep.argmax_k2, cfg.nbands, cfg.cutoff, lattice().dual);
  const double dk = (rep.argmax_k1 - rep.argmax_k2).norm();
  double qmax = 0.0;
  for (int b = 0; b < cfg.nbands; ++b) qmax = std::max(qmax, std::abs(e1(b) - e2(b)) / ((std::abs(e1(b)) + 1) * dk));
  CHECK(qmax == doctest::Approx(rep.overall_max).epsilon(1e-10));
  // bands of |k + G|^2 have slope at most 2|k + G| <= |k + G|^2 + 1
  CHECK(rep.overall_max <= 1.0 + 1e-6);
}

TEST_CASE("Lipschitz pair sequence extends with npairs") {
  LipschitzConfig cfg;
  cfg.cutoff = 3;
  cfg.npairs = 100;
  const auto small = lipschitz_check(three_cosine_potential(1.0, lattice().dual), lattice(), cfg);
  cfg.npairs = 200;
  const auto large = lipschitz_check(three_cosine_potential(1.0, lattice().dual), lattice(), cfg);
  for (std::size_t b = 0; b < small.max_quotient.size(); ++b) CHECK(large.max_quotient[b] >= small.max_quotient[b]);
}
