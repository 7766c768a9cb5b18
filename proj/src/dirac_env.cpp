#include "honeycomb/dirac_env.hpp"

#include "honeycomb/errors.hpp"
#include "honeycomb/fft.hpp"

#include <cmath>
#include <numbers>

namespace honeycomb {

EnvelopeGrid EnvelopeGrid::square(double side, int n) {
  if (!(side > 0.0) || n < 2) throw DomainError("square envelope grid needs side > 0 and n >= 2");
  return {Vec2(side, 0.0), Vec2(0.0, side), n, n};
}

Vec2 EnvelopeGrid::point(int i, int j) const {
  return (static_cast<double>(i) / n1) * a1 + (static_cast<double>(j) / n2) * a2;
}

Vec2 EnvelopeGrid::centered_point(int i, int j) const {
  const int ci = i >= (n1 + 1) / 2 ? i - n1 : i;
  const int cj = j >= (n2 + 1) / 2 ? j - n2 : j;
  return point(ci, cj);
}

std::pair<Vec2, Vec2> EnvelopeGrid::reciprocal() const {
  Mat2 A;
  A.row(0) = a1.transpose();
  A.row(1) = a2.transpose();
  // columns of B = 2 pi A^{-1} satisfy a_i . b_j = 2 pi delta_ij
  const Mat2 B = 2.0 * std::numbers::pi * A.inverse();
  return {B.col(0), B.col(1)};
}

Vec2 EnvelopeGrid::mode(int i, int j) const {
  const auto [b1, b2] = reciprocal();
  return signed_index(i, n1) * b1 + signed_index(j, n2) * b2;
}

Mat2c dirac_symbol(const Vec2& xi, cplx lambda_sharp) {
  const cplx z(xi(0), xi(1));
  Mat2c W;
  W << 0.0, std::conj(lambda_sharp) * z, lambda_sharp * std::conj(z), 0.0;
  return W;
}

Mat2c dirac_step_matrix(const Vec2& xi, cplx lambda_sharp, double T) {
  const double omega = std::abs(lambda_sharp) * xi.norm();
  if (omega == 0.0) return Mat2c::Identity();
  const Mat2c W = dirac_symbol(xi, lambda_sharp);
  return std::cos(omega * T) * Mat2c::Identity() - cplx(0.0, std::sin(omega * T) / omega) * W;
}

std::vector<cplx> envelope_spectrum(const EnvelopeGrid& grid, const std::vector<cplx>& field) {
  if (field.size() != grid.size()) throw DomainError("envelope field does not match its grid");
  std::vector<cplx> out = field;
  Fft2d(grid.n1, grid.n2).forward(out);
  const double inv = 1.0 / static_cast<double>(grid.size());
  for (auto& c : out) c *= inv;
  return out;
}

std::vector<cplx> envelope_synthesize(const EnvelopeGrid& grid, std::vector<cplx> spectrum) {
  if (spectrum.size() != grid.size()) throw DomainError("envelope spectrum does not match its grid");
  Fft2d(grid.n1, grid.n2).backward(spectrum);
  return spectrum;
}

double spectral_tail_mass(const EnvelopePair& env) {
  const auto& g = env.grid;
  const auto s1 = envelope_spectrum(g, env.alpha1);
  const auto s2 = envelope_spectrum(g, env.alpha2);
  double total = 0.0, tail = 0.0;
  for (int i = 0; i < g.n1; ++i) {
    const double f1 = std::abs(signed_index(i, g.n1)) / (0.5 * g.n1);
    for (int j = 0; j < g.n2; ++j) {
      const double f2 = std::abs(signed_index(j, g.n2)) / (0.5 * g.n2);
      const auto u = static_cast<std::size_t>(i) * g.n2 + j;
      const double w = std::norm(s1[u]) + std::norm(s2[u]);
      total += w;
      if (std::max(f1, f2) > 0.8) tail += w;
    }
  }
  return total > 0.0 ? tail / total : 0.0;
}

DiracPropagation dirac_propagate(const EnvelopePair& env, double T) {
  DiracPropagation out;
  out.tail_mass = spectral_tail_mass(env);
  out.tail_warning = out.tail_mass >= 1e-10;
  if (T == 0.0) {
    out.env = env;
    return out;
  }
  const auto& g = env.grid;
  auto s1 = envelope_spectrum(g, env.alpha1);
  auto s2 = envelope_spectrum(g, env.alpha2);
  const long n1 = g.n1;
#pragma omp parallel for
  for (long i = 0; i < n1; ++i) {
    for (int j = 0; j < g.n2; ++j) {
      const auto u = static_cast<std::size_t>(i) * g.n2 + j;
      const Mat2c U = dirac_step_matrix(g.mode(static_cast<int>(i), j), env.lambda_sharp, T);
      const cplx a = s1[u], b = s2[u];
      s1[u] = U(0, 0) * a + U(0, 1) * b;
      s2[u] = U(1, 0) * a + U(1, 1) * b;
    }
  }
  out.env.grid = g;
  out.env.lambda_sharp = env.lambda_sharp;
  out.env.alpha1 = envelope_synthesize(g, std::move(s1));
  out.env.alpha2 = envelope_synthesize(g, std::move(s2));
  return out;
}

std::vector<DerivativeNorm> conserved_norms(const EnvelopePair& env, int s) {
  if (s < 0) throw DomainError("derivative order must be nonnegative");
  const auto& g = env.grid;
  const auto s1 = envelope_spectrum(g, env.alpha1);
  const auto s2 = envelope_spectrum(g, env.alpha2);
  std::vector<DerivativeNorm> out;
  for (int order = 0; order <= s; ++order) {
    for (int ax = order; ax >= 0; --ax) {
      const int ay = order - ax;
      double sum = 0.0;
      for (int i = 0; i < g.n1; ++i) {
        for (int j = 0; j < g.n2; ++j) {
          const Vec2 xi = g.mode(i, j);
          const double w = std::pow(xi(0) * xi(0), ax) * std::pow(xi(1) * xi(1), ay);
          const auto u = static_cast<std::size_t>(i) * g.n2 + j;
          sum += w * (std::norm(s1[u]) + std::norm(s2[u]));
        }
      }
      out.push_back({ax, ay, std::sqrt(g.area() * sum)});
    }
  }
  return out;
}

std::vector<cplx> sample_envelope(const EnvelopeGrid& grid, const std::function<cplx(const Vec2&)>& f) {
  std::vector<cplx> out(grid.size());
  for (int i = 0; i < grid.n1; ++i) {
    for (int j = 0; j < grid.n2; ++j) out[static_cast<std::size_t>(i) * grid.n2 + j] = f(grid.centered_point(i, j));
  }
  return out;
}

EnvelopePair envelope_preset(const std::string& name, const EnvelopeGrid& grid, cplx lambda_sharp) {
  EnvelopePair env;
  env.grid = grid;
  env.lambda_sharp = lambda_sharp;
  env.alpha1 = sample_envelope(grid, [](const Vec2& X) { return cplx(std::exp(-0.5 * X.squaredNorm())); });
  if (name == "gaussian") {
    env.alpha2.assign(grid.size(), cplx{});
  } else if (name == "gaussian-pair") {
    env.alpha2 = sample_envelope(grid, [](const Vec2& X) {
      return cplx(0.0, 0.5 * std::exp(-0.5 * (X - Vec2(1.0, 0.0)).squaredNorm()));
    });
  } else {
    throw DomainError("unknown envelope preset '" + name + "'");
  }
  return env;
}

}  // namespace honeycomb
