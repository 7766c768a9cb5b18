#include "honeycomb/errors.hpp"
#include "honeycomb/potential.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace honeycomb;

TEST_CASE("three-cosine potential matches its closed form pointwise") {
  const auto lat = honeycomb_basis(1.0);
  const auto V = three_cosine_potential(1.7, lat.dual);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    const Vec2 x(u(rng), u(rng));
    const double expect = 1.7 * (std::cos(lat.dual.k1.dot(x)) + std::cos(lat.dual.k2.dot(x)) +
                                 std::cos((lat.dual.k1 + lat.dual.k2).dot(x)));
    const cplx v = V.value(x, lat.dual);
    CHECK(v.real() == doctest::Approx(expect).epsilon(1e-12));
    CHECK(std::abs(v.imag()) < 1e-12);
  }
  CHECK(V.cutoff() == 1);
  CHECK(V.sup_bound() == doctest::Approx(3 * 1.7));
}

TEST_CASE("zero amplitude is rejected and the zero potential is explicit") {
  const auto lat = honeycomb_basis(1.0);
  CHECK_THROWS_AS(three_cosine_potential(0.0, lat.dual), DomainError);
  const auto Z = zero_potential();
  CHECK(Z.is_zero());
  CHECK(Z.cutoff() == 0);
  CHECK(Z.coefficient({0, 0}) == cplx(0.0));
}

TEST_CASE("symmetry report recognizes honeycomb potentials") {
  const auto lat = honeycomb_basis(1.0);
  const auto V = three_cosine_potential(1.0, lat.dual);
  const auto rep = symmetry_report(V);
  CHECK(rep.honeycomb());
  CHECK(rep.residual_r < 1e-12);
}

TEST_CASE("symmetry report flags broken reality, parity and rotation") {
  FourierPotential odd;
  odd.shape[{1, 0}] = cplx(0.0, 1.0);
  odd.shape[{-1, 0}] = cplx(0.0, -1.0);
  const auto r1 = symmetry_report(odd);
  CHECK(r1.real);
  CHECK_FALSE(r1.even);
  CHECK_FALSE(r1.r_invariant);

  FourierPotential complex_valued;
  complex_valued.shape[{1, 0}] = 1.0;
  const auto r2 = symmetry_report(complex_valued);
  CHECK_FALSE(r2.real);
  CHECK_FALSE(r2.honeycomb());

  FourierPotential stripe;
  stripe.shape[{1, 0}] = 1.0;
  stripe.shape[{-1, 0}] = 1.0;
  const auto r3 = symmetry_report(stripe);
  CHECK(r3.real);
  CHECK(r3.even);
  CHECK_FALSE(r3.r_invariant);
}

TEST_CASE("V11 of the three-cosine potential is eps |Omega| / 2") {
  const auto lat = honeycomb_basis(1.0);
  const auto V = three_cosine_potential(2.0, lat.dual);
  const cplx v11 = v11_coefficient(V, lat.direct);
  CHECK(v11.real() == doctest::Approx(lat.direct.cell_area()));
  CHECK(std::abs(v11.imag()) < 1e-14);
}

TEST_CASE("grid samples agree with pointwise evaluation") {
  const auto lat = honeycomb_basis(1.0);
  const auto V = three_cosine_potential(1.0, lat.dual);
  const auto g = evaluate_grid(V, 8);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) {
      const Vec2 x = lat.direct.point(i / 8.0, j / 8.0);
      CHECK(g.at(i, j) == doctest::Approx(V.value(x, lat.dual).real()).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(evaluate_grid(V, 3), DomainError);
}

TEST_CASE("potential hash separates amplitudes and is stable") {
  const auto lat = honeycomb_basis(1.0);
  const auto a = three_cosine_potential(1.0, lat.dual);
  const auto b = three_cosine_potential(1.0, lat.dual);
  const auto c = three_cosine_potential(1.0 + 1e-12, lat.dual);
  CHECK(potential_hash(a) == potential_hash(b));
  CHECK(potential_hash(a) != potential_hash(c));
}
