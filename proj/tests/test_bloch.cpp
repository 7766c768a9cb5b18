#include "honeycomb/bloch.hpp"
#include "honeycomb/errors.hpp"
#include "honeycomb/harness.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace honeycomb;

TEST_CASE("plane-wave basis is closed under the K-centered rotation") {
  for (int M : {1, 3, 5}) {
    const PlaneWaveBasis basis(M);
    const auto lat = honeycomb_basis(1.0);
    const auto rot = index_rotation_map(lat.dual);
    for (const auto& m : basis.indices()) CHECK(basis.contains(rot(m)));
    for (int i = 0; i < basis.size(); ++i) CHECK(basis.position(basis.index(i)) == i);
  }
  CHECK(PlaneWaveBasis(5).size() == 90);
}

TEST_CASE("free Hamiltonian reproduces the free dispersion") {
  const auto lat = honeycomb_basis(1.0);
  const PlaneWaveBasis basis(4);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int t = 0; t < 5; ++t) {
    const Vec2 k(u(rng), u(rng));
    const auto mu = band_energies(zero_potential(), k, 6, basis, lat.dual);
    const auto expect = free_band_energies(k, 6, 4, lat.dual);
    for (int b = 0; b < 6; ++b) CHECK(mu(b) == doctest::Approx(expect(b)).epsilon(1e-12));
  }
}

TEST_CASE("Hamiltonian is Hermitian and real for a real even potential") {
  const auto lat = honeycomb_basis(1.0);
  const auto V = three_cosine_potential(3.0, lat.dual);
  const PlaneWaveBasis basis(3);
  const auto H = assemble_hamiltonian(V, {Vec2(0.3, -1.1), false}, basis, lat.dual);
  CHECK((H - H.adjoint()).norm() < 1e-13);
  CHECK(H.imag().norm() < 1e-13);
  CHECK_THROWS_AS(assemble_hamiltonian(V, {}, PlaneWaveBasis(0), lat.dual), DomainError);
}

TEST_CASE("eigenpairs are orthonormal and ascending") {
  const auto lat = honeycomb_basis(1.0);
  const auto V = three_cosine_potential(1.0, lat.dual);
  const PlaneWaveBasis basis(4);
  const QuasiMomentum k{Vec2(0.2, 3.0), false};
  const auto H = assemble_hamiltonian(V, k, basis, lat.dual);
  const auto pairs = solve_bands(H, 5, k);
  REQUIRE(pairs.size() == 5);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    CHECK(pairs[i].band == static_cast<int>(i) + 1);
    CHECK((H * pairs[i].coeffs - pairs[i].mu * pairs[i].coeffs).norm() < 1e-9);
    if (i > 0) CHECK(pairs[i].mu >= pairs[i - 1].mu);
    for (std::size_t j = 0; j < pairs.size(); ++j) {
      const double ip = std::abs(pairs[i].coeffs.dot(pairs[j].coeffs));
      CHECK(ip == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("band energies are periodic in the dual lattice and symmetric under rotation") {
  const auto lat = honeycomb_basis(1.0);
  const auto V = three_cosine_potential(1.0, lat.dual);
  const PlaneWaveBasis basis(6);
  const Vec2 k(0.4, 2.1);
  const auto a = band_energies(V, k, 4, basis, lat.dual);
  const auto b = band_energies(V, k + lat.dual.k1, 4, basis, lat.dual);
  const auto c = band_energies(V, rotate_R(k), 4, basis, lat.dual);
  const auto d = band_energies(V, -k, 4, basis, lat.dual);
  // a shift by k1 changes the truncation only far from the basis center
  CHECK((a - b).norm() < 1e-6 * (1 + a.norm()));
  CHECK((a - c).norm() < 1e-6 * (1 + a.norm()));
  CHECK((a - d).norm() < 1e-12 * (1 + a.norm()));
}

TEST_CASE("bz grid stays in the zone and band grid fills every row") {
  const auto lat = honeycomb_basis(1.0);
  const auto grid = bz_grid(6, lat.dual);
  CHECK(grid.size() == 36);
  for (const auto& k : grid) CHECK(in_bz(k, lat.dual, 1e-10));
  const auto bs = band_grid(three_cosine_potential(1.0, lat.dual), grid, 3, 3, lat.dual, true);
  CHECK(bs.mu.rows() == 36);
  CHECK(bs.vectors.size() == 36);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(bs.at(i, 1) <= bs.at(i, 2));
}

TEST_CASE("rotation operator has order three and its projectors resolve the identity") {
  const auto lat = honeycomb_basis(1.0);
  const PlaneWaveBasis basis(3);
  const RotationOperator R(basis);
  const Eigen::MatrixXcd Rm = R.matrix();
  const auto I = Eigen::MatrixXcd::Identity(basis.size(), basis.size());
  CHECK((Rm * Rm * Rm - I).norm() < 1e-12);
  const Eigen::MatrixXcd sum =
      R.projector_matrix(Sigma::One) + R.projector_matrix(Sigma::Tau) + R.projector_matrix(Sigma::TauBar);
  CHECK((sum - I).norm() < 1e-12);
  // H(K) commutes with R for a honeycomb potential
  const auto K = vertex_K(lat.dual).first;
  const auto H = assemble_hamiltonian(three_cosine_potential(1.0, lat.dual), K, basis, lat.dual);
  CHECK((H * Rm - Rm * H).norm() < 1e-10);
}

TEST_CASE("free Hamiltonian at K has a threefold lowest level with one state per sector") {
  const auto lat = honeycomb_basis(1.0);
  const PlaneWaveBasis basis(3);
  const auto K = vertex_K(lat.dual).first;
  const auto H = assemble_hamiltonian(zero_potential(), K, basis, lat.dual);
  const auto pairs = solve_bands(H, 3, K);
  CHECK(pairs[2].mu - pairs[0].mu < 1e-10);
  CHECK(pairs[0].mu == doctest::Approx(K.k.squaredNorm()));
  const auto labeled = symmetry_decompose_at_K(pairs, basis, lat.dual);
  int count[3] = {0, 0, 0};
  for (const auto& l : labeled) {
    CHECK(l.purity == doctest::Approx(1.0).epsilon(1e-8));
    ++count[static_cast<int>(l.sigma)];
  }
  CHECK(count[0] == 1);
  CHECK(count[1] == 1);
  CHECK(count[2] == 1);
}

TEST_CASE("group velocity and effective mass of the free problem") {
  const auto lat = honeycomb_basis(1.0);
  // lowest free band near 0 is |k|^2
  const Vec2 k(0.3, -0.2);
  const auto gv = group_velocity(zero_potential(), k, 1, 3, lat.dual);
  CHECK((gv.velocity - 2 * k).norm() < 1e-7);
  const auto em = effective_mass_tensor(zero_potential(), Vec2::Zero(), 1, 3, lat.dual);
  CHECK((em.a_eff - Mat2::Identity()).norm() < 1e-5);
  CHECK_FALSE(em.not_critical);
  const auto em2 = effective_mass_tensor(zero_potential(), k, 1, 3, lat.dual);
  CHECK(em2.not_critical);
}
