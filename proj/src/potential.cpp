#include "honeycomb/potential.hpp"

#include "honeycomb/errors.hpp"
#include "honeycomb/hash.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace honeycomb {

cplx FourierPotential::coefficient(IndexPair m) const {
  const auto it = shape.find(m);
  return it == shape.end() ? cplx{} : amplitude * it->second;
}

std::map<IndexPair, cplx> FourierPotential::coefficients() const {
  std::map<IndexPair, cplx> out;
  for (const auto& [m, s] : shape) {
    if (s != cplx{} && amplitude != 0.0) out.emplace(m, amplitude * s);
  }
  return out;
}

int FourierPotential::cutoff() const {
  int c = 0;
  for (const auto& [m, s] : coefficients()) c = std::max({c, std::abs(m.m1), std::abs(m.m2)});
  return c;
}

bool FourierPotential::is_zero() const { return coefficients().empty(); }

cplx FourierPotential::value(const Vec2& x, const DualBasis& dual) const {
  cplx v{};
  for (const auto& [m, c] : coefficients()) v += c * std::polar(1.0, dual.vector(m).dot(x));
  return v;
}

double FourierPotential::sup_bound() const {
  double s = 0.0;
  for (const auto& [m, c] : coefficients()) s += std::abs(c);
  return s;
}

FourierPotential three_cosine_potential(double eps, const DualBasis& /*dual*/) {
  if (eps == 0.0 || !std::isfinite(eps)) {
    throw DomainError("three-cosine potential needs a nonzero finite amplitude");
  }
  FourierPotential V;
  V.amplitude = eps;
  for (IndexPair m : {IndexPair{1, 0}, IndexPair{0, 1}, IndexPair{1, 1}}) {
    V.shape[m] = 0.5;
    V.shape[-m] = 0.5;
  }
  return V;
}

FourierPotential zero_potential() { return FourierPotential{}; }

SymmetryReport symmetry_report(const FourierPotential& V, double tol) {
  const auto coeffs = V.coefficients();
  std::set<IndexPair> keys;
  for (const auto& [m, c] : coeffs) keys.insert(m);

  // dual basis only matters through the integer linear action of R
  const IndexAffineMap L = rotation_linear_map(honeycomb_basis(1.0).dual);
  SymmetryReport r;
  for (IndexPair m : keys) {
    const cplx vm = V.coefficient(m);
    const cplx vminus = V.coefficient(-m);
    r.residual_real = std::max(r.residual_real, std::abs(vminus - std::conj(vm)));
    r.residual_even = std::max(r.residual_even, std::abs(vminus - vm));
    r.residual_r = std::max(r.residual_r, std::abs(V.coefficient(L(m)) - vm));
  }
  r.real = r.residual_real < tol;
  r.even = r.residual_even < tol;
  r.r_invariant = r.residual_r < tol;
  return r;
}

cplx v11_coefficient(const FourierPotential& V, const LatticeBasis& direct) {
  return direct.cell_area() * V.coefficient({1, 1});
}

CellGrid evaluate_grid(const FourierPotential& V, int n) {
  const int cutoff = V.cutoff();
  if (n < 2 * cutoff + 2) {
    throw DomainError("grid of " + std::to_string(n) + " points per side aliases a potential of cutoff " +
                      std::to_string(cutoff));
  }
  const auto coeffs = V.coefficients();
  CellGrid grid;
  grid.n = n;
  grid.values.resize(static_cast<std::size_t>(n) * n);
  double max_abs = 0.0;
  double max_imag = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      cplx v{};
      for (const auto& [m, c] : coeffs) {
        // k_m . x_ij = 2 pi (m1 i + m2 j) / n by biorthogonality
        const long phase = (static_cast<long>(m.m1) * i + static_cast<long>(m.m2) * j) % n;
        v += c * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(phase) / n);
      }
      grid.values[static_cast<std::size_t>(i) * n + j] = v.real();
      max_abs = std::max(max_abs, std::abs(v));
      max_imag = std::max(max_imag, std::abs(v.imag()));
    }
  }
  if (max_imag > 1e-12 * std::max(1.0, max_abs)) {
    throw DomainError("potential is not real-valued on the grid (imaginary residue " +
                      std::to_string(max_imag) + ")");
  }
  return grid;
}

std::uint64_t potential_hash(const FourierPotential& V) {
  Fnv1a h;
  h.add(V.amplitude);
  for (const auto& [m, s] : V.shape) {
    if (s == cplx{}) continue;
    h.add(m.m1);
    h.add(m.m2);
    h.add(s.real());
    h.add(s.imag());
  }
  return h.value();
}

}  // namespace honeycomb
