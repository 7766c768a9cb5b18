#include "honeycomb/dirac_env.hpp"

#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>

using namespace honeycomb;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kLambda(-3.62689, -2.09398);

double pair_distance(const std::vector<cplx>& a1, const std::vector<cplx>& a2, const std::vector<cplx>& b1,
                     const std::vector<cplx>& b2) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a1.size(); ++i) {
    num += std::norm(a1[i] - b1[i]) + std::norm(a2[i] - b2[i]);
    den += std::norm(b1[i]) + std::norm(b2[i]);
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("step matrix equals the matrix exponential of the symbol") {
  for (const Vec2& xi : {Vec2(0.3, -1.2), Vec2(0.0, 0.0), Vec2(5.0, 2.0)}) {
    for (double T : {0.0, 0.1, 2.7}) {
      const Mat2c expect = (cplx(0.0, -T) * dirac_symbol(xi, kLambda)).exp();
      CHECK((dirac_step_matrix(xi, kLambda, T) - expect).norm() < 1e-12);
    }
  }
}

TEST_CASE("symbol is Hermitian with eigenvalues +-|lambda||xi|") {
  const Vec2 xi(0.7, -0.4);
  const Mat2c S = dirac_symbol(xi, kLambda);
  CHECK((S - S.adjoint()).norm() < 1e-14);
  const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Mat2c>(S).eigenvalues();
  CHECK(ev(1) == doctest::Approx(std::abs(kLambda) * xi.norm()));
  CHECK(ev(0) == doctest::Approx(-std::abs(kLambda) * xi.norm()));
}

TEST_CASE("plane-wave eigenmode evolves by its phase") {
  const auto grid = EnvelopeGrid::square(2 * kPi, 32);
  const Vec2 xi = grid.mode(2, 3);
  const Mat2c S = dirac_symbol(xi, kLambda);
  Eigen::SelfAdjointEigenSolver<Mat2c> es(S);
  const double omega = es.eigenvalues()(1);
  const Eigen::Vector2cd v = es.eigenvectors().col(1);
  EnvelopePair env{grid, {}, {}, kLambda};
  env.alpha1 = sample_envelope(grid, [&](const Vec2& X) { return v(0) * std::exp(cplx(0, xi.dot(X))); });
  env.alpha2 = sample_envelope(grid, [&](const Vec2& X) { return v(1) * std::exp(cplx(0, xi.dot(X))); });
  const double T = 1.3;
  const auto out = dirac_propagate(env, T).env;
  const cplx phase = std::exp(cplx(0, -omega * T));
  std::vector<cplx> e1(env.alpha1), e2(env.alpha2);
  for (auto& z : e1) z *= phase;
  for (auto& z : e2) z *= phase;
  CHECK(pair_distance(out.alpha1, out.alpha2, e1, e2) < 1e-12);
}

TEST_CASE("propagation composes and conserves all derivative norms") {
  const auto grid = EnvelopeGrid::square(24.0, 64);
  const auto env = envelope_preset("gaussian-pair", grid, kLambda);
  const auto a = dirac_propagate(dirac_propagate(env, 0.4).env, 0.7).env;
  const auto b = dirac_propagate(env, 1.1).env;
  CHECK(pair_distance(a.alpha1, a.alpha2, b.alpha1, b.alpha2) < 1e-12);
  const auto back = dirac_propagate(b, -1.1).env;
  CHECK(pair_distance(back.alpha1, back.alpha2, env.alpha1, env.alpha2) < 1e-12);

  const auto n0 = conserved_norms(env, 2);
  const auto n1 = conserved_norms(b, 2);
  REQUIRE(n0.size() == 6);
  for (std::size_t i = 0; i < n0.size(); ++i) CHECK(n1[i].norm == doctest::Approx(n0[i].norm).epsilon(1e-12));
  CHECK(n0[0].norm == doctest::Approx(std::sqrt(kPi * 1.25)).epsilon(1e-8));
}

TEST_CASE("zero time returns the input exactly") {
  const auto grid = EnvelopeGrid::square(20.0, 32);
  const auto env = envelope_preset("gaussian", grid, kLambda);
  const auto out = dirac_propagate(env, 0.0);
  CHECK(out.env.alpha1 == env.alpha1);
  CHECK(out.env.alpha2 == env.alpha2);
}

TEST_CASE("well-resolved Gaussian has negligible spectral tail") {
  const auto env = envelope_preset("gaussian", EnvelopeGrid::square(24.0, 64), kLambda);
  CHECK(spectral_tail_mass(env) < 1e-12);
  const auto coarse = envelope_preset("gaussian", EnvelopeGrid::square(24.0, 8), kLambda);
  CHECK(spectral_tail_mass(coarse) > 1e-6);
}

TEST_CASE("spectrum round trip and reciprocal duality on a skew grid") {
  EnvelopeGrid grid{Vec2(3.0, 1.0), Vec2(1.5, -2.0), 12, 10};
  const auto [b1, b2] = grid.reciprocal();
  CHECK(b1.dot(grid.a1) == doctest::Approx(2 * kPi));
  CHECK(std::abs(b1.dot(grid.a2)) < 1e-12);
  CHECK(b2.dot(grid.a2) == doctest::Approx(2 * kPi));
  const auto f = sample_envelope(grid, [](const Vec2& X) { return cplx(std::cos(X(0)), X(1) * X(1)); });
  const auto back = envelope_synthesize(grid, envelope_spectrum(grid, f));
  double err = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) err = std::max(err, std::abs(back[i] - f[i]));
  CHECK(err < 1e-12);
}

TEST_CASE("unknown preset name is rejected") {
  CHECK_THROWS(envelope_preset("square", EnvelopeGrid::square(10.0, 16), kLambda));
}
