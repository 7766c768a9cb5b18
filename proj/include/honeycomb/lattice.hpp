#pragma once

// Honeycomb lattice geometry: primitive and dual bases, Brillouin zone
// vertices, the 2pi/3 rotation and its action on dual-lattice indices.

#include <Eigen/Dense>

#include <array>
#include <compare>
#include <utility>

namespace honeycomb {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Integer coordinates m = (m1, m2) of the dual-lattice vector m1 k1 + m2 k2.
struct IndexPair {
  int m1 = 0;
  int m2 = 0;

  friend auto operator<=>(const IndexPair&, const IndexPair&) = default;
  friend IndexPair operator+(IndexPair a, IndexPair b) { return {a.m1 + b.m1, a.m2 + b.m2}; }
  friend IndexPair operator-(IndexPair a, IndexPair b) { return {a.m1 - b.m1, a.m2 - b.m2}; }
  friend IndexPair operator-(IndexPair a) { return {-a.m1, -a.m2}; }
};

/// Primitive vectors v1 = a(sqrt3/2, 1/2), v2 = a(sqrt3/2, -1/2).
struct LatticeBasis {
  Vec2 v1;
  Vec2 v2;
  double a = 1.0;

  /// |v1 x v2| = a^2 sqrt(3)/2, the area of the fundamental cell Omega.
  double cell_area() const;
  /// Cartesian point for fractional coordinates (s1, s2): s1 v1 + s2 v2.
  Vec2 point(double s1, double s2) const { return s1 * v1 + s2 * v2; }
};

/// Dual vectors with k_i . v_j = 2 pi delta_ij, |k_i| = q = 4 pi / (a sqrt 3).
struct DualBasis {
  Vec2 k1;
  Vec2 k2;
  double q = 0.0;

  Vec2 vector(IndexPair m) const { return m.m1 * k1 + m.m2 * k2; }
  /// Coordinates (f1, f2) of k in the dual basis: k = f1 k1 + f2 k2.
  Vec2 coordinates(const Vec2& k) const;
};

struct HoneycombLattice {
  LatticeBasis direct;
  DualBasis dual;
};

struct QuasiMomentum {
  Vec2 k = Vec2::Zero();
  bool reduced = false;
};

/// Throws DomainError for a <= 0.
HoneycombLattice honeycomb_basis(double a);

/// K = (k1 - k2)/3 and K' = -K.
std::pair<QuasiMomentum, QuasiMomentum> vertex_K(const DualBasis& dual);

/// Clockwise rotation by 2 pi / 3.
Mat2 rotation_R();
Vec2 rotate_R(const Vec2& v);

/// The six vertices of B_h = K + B in two R-orbits:
/// {K, RK, R^2K} followed by {K', RK', R^2K'}.
std::array<Vec2, 6> bz_vertices(const DualBasis& dual);

/// True when k lies in B_h (closed hexagon centered at K), within tol * q.
bool in_bz(const Vec2& k, const DualBasis& dual, double tol = 1e-12);

/// Representative of k modulo the dual lattice inside B_h. Boundary ties are
/// broken toward the lexicographically smaller reduced vector.
QuasiMomentum reduce_to_bz(const Vec2& k, const DualBasis& dual);

/// Integer affine map m -> L m + shift on dual indices.
struct IndexAffineMap {
  std::array<int, 4> linear{1, 0, 0, 1};  // row-major 2x2
  IndexPair shift{};

  IndexPair operator()(IndexPair m) const {
    return {linear[0] * m.m1 + linear[1] * m.m2 + shift.m1,
            linear[2] * m.m1 + linear[3] * m.m2 + shift.m2};
  }
  IndexPair linear_part(IndexPair m) const {
    return {linear[0] * m.m1 + linear[1] * m.m2, linear[2] * m.m1 + linear[3] * m.m2};
  }
};

/// The map with R (K + m.k) = K + m'.k, resolved numerically from the basis.
/// Throws InternalError if the images are not integer combinations.
IndexAffineMap index_rotation_map(const DualBasis& dual);

/// m' with R (K + m.k) = K + m'.k, plus the constant shift m' - L m
/// (L the linear action of R on dual indices). Uses a cached map.
std::pair<IndexPair, IndexPair> index_rotation(IndexPair m);

/// Index map of the conjugate-inversion f(x) -> conj(f(-x)) on K-pseudo-periodic
/// plane waves e^{i(K + m.k).x}.
IndexAffineMap conjugate_inversion_map(const DualBasis& dual);

/// Linear action of R on dual indices (no K shift): R (m.k) = (L m).k.
IndexAffineMap rotation_linear_map(const DualBasis& dual);

}  // namespace honeycomb
