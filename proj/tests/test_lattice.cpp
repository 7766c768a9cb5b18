#include "honeycomb/errors.hpp"
#include "honeycomb/lattice.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace honeycomb;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("primitive and dual bases are dual to each other") {
  for (double a : {1.0, 0.37, 2.5}) {
    const auto lat = honeycomb_basis(a);
    const auto& d = lat.direct;
    const auto& k = lat.dual;
    CHECK(d.v1.dot(k.k1) == doctest::Approx(2 * kPi));
    CHECK(d.v2.dot(k.k2) == doctest::Approx(2 * kPi));
    CHECK(std::abs(d.v1.dot(k.k2)) < 1e-12);
    CHECK(std::abs(d.v2.dot(k.k1)) < 1e-12);
    CHECK(d.cell_area() == doctest::Approx(std::sqrt(3.0) / 2 * a * a));
    CHECK(k.q == doctest::Approx(4 * kPi / (a * std::sqrt(3.0))));
  }
}

TEST_CASE("nonpositive lattice constants are rejected") {
  CHECK_THROWS_AS(honeycomb_basis(0.0), DomainError);
  CHECK_THROWS_AS(honeycomb_basis(-1.0), DomainError);
}

TEST_CASE("vertex K at a = 1 is (0, 4 pi / 3)") {
  const auto lat = honeycomb_basis(1.0);
  const auto [K, Kp] = vertex_K(lat.dual);
  CHECK(std::abs(K.k(0)) < 1e-14);
  CHECK(K.k(1) == doctest::Approx(4 * kPi / 3));
  CHECK((Kp.k + K.k).norm() < 1e-14);
}

TEST_CASE("rotation R has order three and maps K into its own orbit") {
  const Mat2 R = rotation_R();
  CHECK((R * R * R - Mat2::Identity()).norm() < 1e-14);
  CHECK(std::abs(R.determinant() - 1.0) < 1e-14);
  const auto lat = honeycomb_basis(1.0);
  const Vec2 K = vertex_K(lat.dual).first.k;
  for (const Vec2& RK : {Vec2(R * K), Vec2(R * R * K)}) {
    const Vec2 c = lat.dual.coordinates(RK - K);
    CHECK(std::abs(c(0) - std::round(c(0))) < 1e-12);
    CHECK(std::abs(c(1) - std::round(c(1))) < 1e-12);
  }
  CHECK((rotate_R(K) - R * K).norm() < 1e-14);
}

TEST_CASE("Brillouin zone vertices are equidistant from K") {
  const auto lat = honeycomb_basis(1.0);
  const auto verts = bz_vertices(lat.dual);
  const double r = verts[0].norm();
  for (const auto& v : verts) CHECK(v.norm() == doctest::Approx(r));
}

TEST_CASE("reduce_to_bz lands in the zone and differs by a dual lattice vector") {
  const auto lat = honeycomb_basis(1.3);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  for (int i = 0; i < 500; ++i) {
    const Vec2 k(u(rng), u(rng));
    const auto r = reduce_to_bz(k, lat.dual);
    CHECK(in_bz(r.k, lat.dual, 1e-10));
    const Vec2 c = lat.dual.coordinates(k - r.k);
    CHECK(std::abs(c(0) - std::round(c(0))) < 1e-9);
    CHECK(std::abs(c(1) - std::round(c(1))) < 1e-9);
  }
}

TEST_CASE("points inside the zone are left unchanged") {
  const auto lat = honeycomb_basis(1.0);
  const Vec2 K = vertex_K(lat.dual).first.k;
  const Vec2 k = K + Vec2(0.1, -0.2);
  CHECK((reduce_to_bz(k, lat.dual).k - k).norm() == 0.0);
}

TEST_CASE("index rotation reproduces R(K + m.k) = K + m'.k") {
  const auto lat = honeycomb_basis(0.8);
  const auto map = index_rotation_map(lat.dual);
  const Vec2 K = vertex_K(lat.dual).first.k;
  const Mat2 R = rotation_R();
  for (int m1 = -4; m1 <= 4; ++m1) {
    for (int m2 = -4; m2 <= 4; ++m2) {
      const IndexPair m{m1, m2};
      const IndexPair mp = map(m);
      CHECK((R * (K + lat.dual.vector(m)) - (K + lat.dual.vector(mp))).norm() < 1e-11);
      CHECK(map(map(map(m))) == m);
    }
  }
  const auto lin = rotation_linear_map(lat.dual);
  for (IndexPair m : {IndexPair{2, -3}, IndexPair{0, 0}, IndexPair{-1, 4}}) {
    const auto [img, shift] = index_rotation(m);
    CHECK(img == map(m));
    CHECK(img == lin.linear_part(m) + shift);
  }
}

TEST_CASE("conjugate inversion fixes every index") {
  const auto lat = honeycomb_basis(1.0);
  const auto map = conjugate_inversion_map(lat.dual);
  for (int m1 = -3; m1 <= 3; ++m1) {
    for (int m2 = -3; m2 <= 3; ++m2) CHECK(map({m1, m2}) == IndexPair{m1, m2});
  }
}

TEST_CASE("linear rotation map permutes the dual lattice") {
  const auto lat = honeycomb_basis(1.0);
  const auto L = rotation_linear_map(lat.dual);
  const Mat2 R = rotation_R();
  for (int m1 = -3; m1 <= 3; ++m1) {
    for (int m2 = -3; m2 <= 3; ++m2) {
      const IndexPair m{m1, m2};
      CHECK((R * lat.dual.vector(m) - lat.dual.vector(L.linear_part(m))).norm() < 1e-11);
    }
  }
}
