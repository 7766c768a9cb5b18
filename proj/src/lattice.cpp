#include "honeycomb/lattice.hpp"

#include "honeycomb/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace honeycomb {

namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;

int resolve_integer(double x, const char* what) {
  const double r = std::round(x);
  if (std::abs(x - r) > 1e-9) {
    throw InternalError(std::string("index map for ") + what +
                        " does not resolve to integers: " + std::to_string(x));
  }
  return static_cast<int>(r);
}

IndexPair resolve_pair(const Vec2& f, const char* what) {
  return {resolve_integer(f(0), what), resolve_integer(f(1), what)};
}

// Solve for the affine integer map sending K + m.k -> K + image(m).k by probing
// the three index pairs (0,0), (1,0), (0,1).
template <typename Transform>
IndexAffineMap probe_affine(const DualBasis& dual, const Transform& transform, const char* what) {
  const Vec2 K = vertex_K(dual).first.k;
  auto image = [&](IndexPair m) {
    const Vec2 out = transform(K + dual.vector(m)) - K;
    const IndexPair r = resolve_pair(dual.coordinates(out), what);
    if ((dual.vector(r) - out).norm() > 1e-12 * dual.q * (1.0 + std::abs(m.m1) + std::abs(m.m2))) {
      throw InternalError(std::string("index map residual too large for ") + what);
    }
    return r;
  };
  const IndexPair s = image({0, 0});
  const IndexPair c1 = image({1, 0}) - s;
  const IndexPair c2 = image({0, 1}) - s;
  IndexAffineMap map;
  map.linear = {c1.m1, c2.m1, c1.m2, c2.m2};
  map.shift = s;
  return map;
}

}  // namespace

double LatticeBasis::cell_area() const { return std::abs(v1(0) * v2(1) - v1(1) * v2(0)); }

Vec2 DualBasis::coordinates(const Vec2& k) const {
  Mat2 basis;
  basis.col(0) = k1;
  basis.col(1) = k2;
  return basis.inverse() * k;
}

HoneycombLattice honeycomb_basis(double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw DomainError("lattice constant must be positive and finite, got " + std::to_string(a));
  }
  HoneycombLattice lat;
  lat.direct.a = a;
  lat.direct.v1 = a * Vec2(kSqrt3 / 2.0, 0.5);
  lat.direct.v2 = a * Vec2(kSqrt3 / 2.0, -0.5);
  const double q = 4.0 * std::numbers::pi / (a * kSqrt3);
  lat.dual.q = q;
  lat.dual.k1 = q * Vec2(0.5, kSqrt3 / 2.0);
  lat.dual.k2 = q * Vec2(0.5, -kSqrt3 / 2.0);
  return lat;
}

std::pair<QuasiMomentum, QuasiMomentum> vertex_K(const DualBasis& dual) {
  const Vec2 K = (dual.k1 - dual.k2) / 3.0;
  return {QuasiMomentum{K, true}, QuasiMomentum{-K, false}};
}

Mat2 rotation_R() {
  Mat2 R;
  R << -0.5, kSqrt3 / 2.0, -kSqrt3 / 2.0, -0.5;
  return R;
}

Vec2 rotate_R(const Vec2& v) { return rotation_R() * v; }

std::array<Vec2, 6> bz_vertices(const DualBasis& dual) {
  const Mat2 R = rotation_R();
  const Vec2 K = vertex_K(dual).first.k;
  const Vec2 Kp = -K;
  return {K, R * K, R * R * K, Kp, R * Kp, R * R * Kp};
}

bool in_bz(const Vec2& k, const DualBasis& dual, double tol) {
  const Vec2 x = k - vertex_K(dual).first.k;
  const std::array<Vec2, 3> dirs{dual.k1, dual.k2, dual.k1 + dual.k2};
  for (const Vec2& g : dirs) {
    if (std::abs(x.dot(g)) > 0.5 * g.squaredNorm() + tol * dual.q * g.norm()) return false;
  }
  return true;
}

QuasiMomentum reduce_to_bz(const Vec2& k, const DualBasis& dual) {
  const Vec2 K = vertex_K(dual).first.k;
  const double strict = -1e-12;
  if (in_bz(k, dual, strict)) return {k, true};

  // Wigner-Seitz reduction of x = k - K: nearest dual lattice point.
  const Vec2 x = k - K;
  const Vec2 f = dual.coordinates(x);
  const double r1 = std::round(f(0));
  const double r2 = std::round(f(1));
  const double tie = 1e-12 * dual.q * dual.q;

  Vec2 best = Vec2::Constant(std::numeric_limits<double>::infinity());
  double best_norm = std::numeric_limits<double>::infinity();
  for (int d1 = -2; d1 <= 2; ++d1) {
    for (int d2 = -2; d2 <= 2; ++d2) {
      const Vec2 cand = x - (r1 + d1) * dual.k1 - (r2 + d2) * dual.k2;
      const double n = cand.squaredNorm();
      if (n < best_norm - tie) {
        best = cand;
        best_norm = n;
      } else if (std::abs(n - best_norm) <= tie) {
        // lexicographic tie break with tolerance on the first coordinate
        const double eps = 1e-12 * dual.q;
        const bool smaller = cand(0) < best(0) - eps ||
                             (std::abs(cand(0) - best(0)) <= eps && cand(1) < best(1));
        if (smaller) {
          best = cand;
          best_norm = std::min(best_norm, n);
        }
      }
    }
  }
  return {K + best, true};
}

IndexAffineMap index_rotation_map(const DualBasis& dual) {
  const Mat2 R = rotation_R();
  return probe_affine(dual, [&](const Vec2& k) { return Vec2(R * k); }, "rotation R");
}

std::pair<IndexPair, IndexPair> index_rotation(IndexPair m) {
  static const IndexAffineMap map = index_rotation_map(honeycomb_basis(1.0).dual);
  return {map(m), map.shift};
}

IndexAffineMap conjugate_inversion_map(const DualBasis& dual) {
  // x -> -x sends the momentum p of e^{ip.x} to -p; conjugation sends it back to p.
  return probe_affine(dual, [](const Vec2& k) { return Vec2(-(-k)); }, "conjugate inversion");
}

IndexAffineMap rotation_linear_map(const DualBasis& dual) {
  const Mat2 R = rotation_R();
  auto image = [&](const Vec2& v) { return resolve_pair(dual.coordinates(R * v), "linear rotation"); };
  const IndexPair c1 = image(dual.k1);
  const IndexPair c2 = image(dual.k2);
  IndexAffineMap map;
  map.linear = {c1.m1, c2.m1, c1.m2, c2.m2};
  return map;
}

}  // namespace honeycomb
