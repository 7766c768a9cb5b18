#include "honeycomb/schrodinger.hpp"

#include "honeycomb/errors.hpp"
#include "honeycomb/fft.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

namespace honeycomb {

Supercell::Supercell(const HoneycombLattice& lattice, int n1, int n2, int p, const Vec2& center)
    : lattice_(lattice), n1_(n1), n2_(n2), p_(p), center_(center) {
  if (n1 < 1 || n2 < 1) throw DomainError("supercell needs at least one cell per direction");
  if (p < 3) throw DomainError("supercell needs at least 3 points per cell");
}

Supercell::Supercell(const HoneycombLattice& lattice, int n1, int n2, int p)
    : Supercell(lattice, n1, n2, p, vertex_K(lattice.dual).first.k) {}

double Supercell::area() const { return static_cast<double>(n1_) * n2_ * lattice_.direct.cell_area(); }

Vec2 Supercell::point(int i, int j) const {
  return (static_cast<double>(i) / p_) * lattice_.direct.v1 + (static_cast<double>(j) / p_) * lattice_.direct.v2;
}

Vec2 Supercell::fiber_momentum(int r1, int r2) const {
  return center_ + (static_cast<double>(r1) / n1_) * lattice_.dual.k1 +
         (static_cast<double>(r2) / n2_) * lattice_.dual.k2;
}

Vec2 Supercell::mode_momentum(int g1, int g2) const { return fiber_momentum(g1, g2); }

long Supercell::mode_position(int r1, int r2, IndexPair m) const {
  const int g1 = n1_ * m.m1 + r1;
  const int g2 = n2_ * m.m2 + r2;
  const int s1 = storage_index(g1, grid1());
  const int s2 = storage_index(g2, grid2());
  if (signed_index(s1, grid1()) != g1 || signed_index(s2, grid2()) != g2) return -1;
  return static_cast<long>(s1) * grid2() + s2;
}

EnvelopeGrid Supercell::envelope_grid(double delta) const {
  return {delta * n1_ * lattice_.direct.v1, delta * n2_ * lattice_.direct.v2, n1_, n2_};
}

Supercell supercell_for_envelope(const HoneycombLattice& lattice, double delta, double side_X, int p,
                                 const Vec2& center) {
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  int n = static_cast<int>(std::ceil(side_X / (delta * lattice.direct.a)));
  n += n % 2;
  return Supercell(lattice, n, n, p, center);
}

std::vector<cplx> field_spectrum(const Supercell& cell, const SupercellField& field) {
  if (field.u.size() != cell.size()) throw DomainError("field does not match the supercell grid");
  std::vector<cplx> s = field.u;
  Fft2d(cell.grid1(), cell.grid2()).forward(s);
  const double inv = 1.0 / static_cast<double>(cell.size());
  for (auto& c : s) c *= inv;
  return s;
}

SupercellField field_from_spectrum(const Supercell& cell, std::vector<cplx> spectrum) {
  if (spectrum.size() != cell.size()) throw DomainError("spectrum does not match the supercell grid");
  Fft2d(cell.grid1(), cell.grid2()).backward(spectrum);
  return {std::move(spectrum)};
}

double spectrum_norm2(const Supercell& cell, const std::vector<cplx>& spectrum) {
  double s = 0.0;
  for (const auto& c : spectrum) s += std::norm(c);
  return cell.area() * s;
}

double field_norm2(const Supercell& cell, const SupercellField& field) {
  double s = 0.0;
  for (const auto& c : field.u) s += std::norm(c);
  return cell.area() * s / static_cast<double>(cell.size());
}

std::array<double, 2> spectrum_gradient_norm2(const Supercell& cell, const std::vector<cplx>& spectrum) {
  std::array<double, 2> out{0.0, 0.0};
  const int N1 = cell.grid1(), N2 = cell.grid2();
  for (int s1 = 0; s1 < N1; ++s1) {
    for (int s2 = 0; s2 < N2; ++s2) {
      const double w = std::norm(spectrum[static_cast<std::size_t>(s1) * N2 + s2]);
      if (w == 0.0) continue;
      const Vec2 k = cell.mode_momentum(signed_index(s1, N1), signed_index(s2, N2));
      out[0] += k(0) * k(0) * w;
      out[1] += k(1) * k(1) * w;
    }
  }
  out[0] *= cell.area();
  out[1] *= cell.area();
  return out;
}

std::vector<double> field_density(const SupercellField& field) {
  std::vector<double> d(field.u.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::norm(field.u[i]);
  return d;
}

Eigen::VectorXcd packet_fiber(const Supercell& cell, const PlaneWaveBasis& basis, double delta,
                              const std::vector<PacketTerm>& terms, int r1, int r2) {
  const std::size_t j = static_cast<std::size_t>(storage_index(r1, cell.n1())) * cell.n2() +
                        storage_index(r2, cell.n2());
  const double scale = delta / std::sqrt(cell.lattice().direct.cell_area());
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(basis.size());
  for (const auto& t : terms) {
    const cplx a = (*t.envelope_spectrum)[j];
    if (a == cplx{}) continue;
    out += (scale * a) * (*t.profile);
  }
  return out;
}

std::vector<cplx> packet_spectrum(const Supercell& cell, const PlaneWaveBasis& basis, double delta,
                                  const std::vector<PacketTerm>& terms) {
  if (basis.cutoff() > cell.max_cutoff()) {
    throw DomainError("plane-wave cutoff " + std::to_string(basis.cutoff()) + " does not fit on " +
                      std::to_string(cell.p()) + " points per cell");
  }
  const EnvelopeGrid eg = cell.envelope_grid(delta);
  for (const auto& t : terms) {
    if (t.envelope_spectrum->size() != eg.size() || t.profile->size() != basis.size()) {
      throw DomainError("packet term does not match the supercell or basis");
    }
  }
  std::vector<cplx> spec(cell.size(), cplx{});
  for (int i1 = 0; i1 < cell.n1(); ++i1) {
    for (int i2 = 0; i2 < cell.n2(); ++i2) {
      const int r1 = signed_index(i1, cell.n1()), r2 = signed_index(i2, cell.n2());
      const Eigen::VectorXcd f = packet_fiber(cell, basis, delta, terms, r1, r2);
      for (int b = 0; b < basis.size(); ++b) {
        spec[static_cast<std::size_t>(cell.mode_position(r1, r2, basis.index(b)))] = f(b);
      }
    }
  }
  return spec;
}

double envelope_exterior_mass(const EnvelopeGrid& grid, const std::vector<const std::vector<cplx>*>& fields) {
  double total = 0.0, outer = 0.0;
  for (int i = 0; i < grid.n1; ++i) {
    const double f1 = std::abs(static_cast<double>(signed_index(i, grid.n1)) / grid.n1);
    for (int j = 0; j < grid.n2; ++j) {
      const double f2 = std::abs(static_cast<double>(signed_index(j, grid.n2)) / grid.n2);
      double w = 0.0;
      for (const auto* f : fields) w += std::norm((*f)[static_cast<std::size_t>(i) * grid.n2 + j]);
      total += w;
      if (std::max(f1, f2) > 0.4) outer += w;
    }
  }
  return total > 0.0 ? outer / total : 0.0;
}

WavePacket build_wavepacket(const EnvelopePair& envelopes, const DiracPointData& dp, double delta,
                            const Supercell& cell, const std::string& envelope_name, bool check_truncation) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
  const EnvelopeGrid eg = cell.envelope_grid(delta);
  if (envelopes.grid.n1 != eg.n1 || envelopes.grid.n2 != eg.n2 || (envelopes.grid.a1 - eg.a1).norm() > 1e-9 ||
      (envelopes.grid.a2 - eg.a2).norm() > 1e-9) {
    throw DomainError("envelope grid does not match the supercell envelope torus for this delta");
  }
  WavePacket wp{cell, delta, envelope_name, dp.cutoff, dp.mu_star, dp.lambda_sharp, {}, {}, 0.0};
  wp.exterior_mass = envelope_exterior_mass(eg, {&envelopes.alpha1, &envelopes.alpha2});
  if (check_truncation && wp.exterior_mass > 1e-8) {
    std::ostringstream os;
    os << "envelope mass near the supercell boundary is " << wp.exterior_mass
       << " (limit 1e-8); increase n1, n2 (currently " << cell.n1() << " x " << cell.n2() << ")";
    throw DomainError(os.str());
  }
  const PlaneWaveBasis basis(dp.cutoff);
  const auto s1 = envelope_spectrum(eg, envelopes.alpha1);
  const auto s2 = envelope_spectrum(eg, envelopes.alpha2);
  wp.spectrum = packet_spectrum(cell, basis, delta, {{&s1, &dp.phi1}, {&s2, &dp.phi2}});
  wp.field = field_from_spectrum(cell, wp.spectrum);
  return wp;
}

BlochCoefficients bloch_transform(const Supercell& cell, const std::vector<cplx>& spectrum,
                                  const FourierPotential& V, int cutoff, const BlochOptions& options) {
  if (spectrum.size() != cell.size()) throw DomainError("spectrum does not match the supercell grid");
  if (cutoff > cell.max_cutoff()) {
    throw DomainError("cutoff " + std::to_string(cutoff) + " exceeds what " + std::to_string(cell.p()) +
                      " points per cell resolve");
  }
  const PlaneWaveBasis basis(cutoff);
  const int D = basis.size();
  const int nb = options.nbands > 0 ? std::min(options.nbands, D) : D;
  const double A = cell.area();
  const double sqrtA = std::sqrt(A);

  BlochCoefficients out;
  out.cutoff = cutoff;
  out.nbands = nb;
  out.norm2 = spectrum_norm2(cell, spectrum);

  const long nf = static_cast<long>(cell.fiber_count());
  std::vector<std::optional<BlochFiber>> slots(static_cast<std::size_t>(nf));
  std::vector<double> fiber_mass(static_cast<std::size_t>(nf), 0.0);
  std::vector<std::string> failures(static_cast<std::size_t>(nf));

#pragma omp parallel for schedule(dynamic, 16)
  for (long f = 0; f < nf; ++f) {
    const int i1 = static_cast<int>(f / cell.n2()), i2 = static_cast<int>(f % cell.n2());
    const int r1 = signed_index(i1, cell.n1()), r2 = signed_index(i2, cell.n2());
    Eigen::VectorXcd c(D);
    for (int b = 0; b < D; ++b) c(b) = spectrum[static_cast<std::size_t>(cell.mode_position(r1, r2, basis.index(b)))];
    const double mass = A * c.squaredNorm();
    fiber_mass[static_cast<std::size_t>(f)] = mass;
    const bool keep = options.fiber_tolerance <= 0.0 || mass > options.fiber_tolerance * out.norm2;
    if (!keep) continue;
    try {
      BlochFiber fib;
      fib.r1 = r1;
      fib.r2 = r2;
      fib.k = cell.fiber_momentum(r1, r2);
      const Eigen::MatrixXd H = assemble_hamiltonian(V, {fib.k, false}, basis, cell.lattice().dual).real();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
      if (es.info() != Eigen::Success) throw NumericalError("fiber eigensolver did not converge");
      fib.mu = es.eigenvalues().head(nb);
      fib.vectors = es.eigenvectors().leftCols(nb);
      const Eigen::VectorXd re = fib.vectors.transpose() * c.real();
      const Eigen::VectorXd im = fib.vectors.transpose() * c.imag();
      fib.coeffs.resize(nb);
      for (int b = 0; b < nb; ++b) fib.coeffs(b) = sqrtA * cplx(re(b), im(b));
      slots[static_cast<std::size_t>(f)] = std::move(fib);
    } catch (const std::exception& e) {
      failures[static_cast<std::size_t>(f)] = e.what();
    }
  }
  for (const auto& msg : failures) {
    if (!msg.empty()) throw NumericalError("bloch_transform: " + msg);
  }

  out.fiber_index.assign(static_cast<std::size_t>(nf), -1);
  for (long f = 0; f < nf; ++f) {
    auto& s = slots[static_cast<std::size_t>(f)];
    if (s) {
      out.captured_norm2 += s->coeffs.squaredNorm();
      out.fiber_index[static_cast<std::size_t>(f)] = static_cast<int>(out.fibers.size());
      out.fibers.push_back(std::move(*s));
    } else {
      out.dropped_norm2 += fiber_mass[static_cast<std::size_t>(f)];
    }
  }
  out.plancherel_residual =
      out.norm2 > 0.0 ? std::abs(out.norm2 - out.captured_norm2 - out.dropped_norm2) / out.norm2 : 0.0;
  if (out.plancherel_residual > 1e-3) {
    std::ostringstream os;
    os << "Plancherel residual " << out.plancherel_residual << " exceeds 1e-3 with " << nb
       << " bands at cutoff " << cutoff << "; raise nbands or the cutoff";
    throw NumericalError(os.str());
  }
  return out;
}

BlochCoefficients bloch_transform(const Supercell& cell, const SupercellField& field, const FourierPotential& V,
                                  int cutoff, const BlochOptions& options) {
  return bloch_transform(cell, field_spectrum(cell, field), V, cutoff, options);
}

BlochCoefficients bloch_propagate(const BlochCoefficients& coeffs, double t) {
  BlochCoefficients out = coeffs;
  if (t == 0.0) return out;
  for (auto& f : out.fibers) {
    for (Eigen::Index b = 0; b < f.coeffs.size(); ++b) f.coeffs(b) *= std::polar(1.0, -f.mu(b) * t);
  }
  return out;
}

Eigen::VectorXcd fiber_spectrum(const BlochFiber& fiber, double area, double t) {
  Eigen::VectorXcd f = fiber.coeffs;
  if (t != 0.0) {
    for (Eigen::Index b = 0; b < f.size(); ++b) f(b) *= std::polar(1.0, -fiber.mu(b) * t);
  }
  const Eigen::VectorXd re = fiber.vectors * f.real();
  const Eigen::VectorXd im = fiber.vectors * f.imag();
  Eigen::VectorXcd out(re.size());
  const double s = 1.0 / std::sqrt(area);
  for (Eigen::Index i = 0; i < re.size(); ++i) out(i) = cplx(re(i), im(i)) * s;
  return out;
}

std::vector<cplx> bloch_synthesize_spectrum(const Supercell& cell, const BlochCoefficients& coeffs, double t) {
  const PlaneWaveBasis basis(coeffs.cutoff);
  std::vector<cplx> spec(cell.size(), cplx{});
  const long nf = static_cast<long>(coeffs.fibers.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < nf; ++i) {
    const auto& f = coeffs.fibers[static_cast<std::size_t>(i)];
    const Eigen::VectorXcd c = fiber_spectrum(f, cell.area(), t);
    for (int b = 0; b < basis.size(); ++b) {
      spec[static_cast<std::size_t>(cell.mode_position(f.r1, f.r2, basis.index(b)))] = c(b);
    }
  }
  return spec;
}

SupercellField bloch_synthesize(const Supercell& cell, const BlochCoefficients& coeffs) {
  return field_from_spectrum(cell, bloch_synthesize_spectrum(cell, coeffs));
}

SupercellField bloch_evolve(const Supercell& cell, const BlochCoefficients& coeffs, double t) {
  return field_from_spectrum(cell, bloch_synthesize_spectrum(cell, coeffs, t));
}

SplitStepReport split_step_evolve(const Supercell& cell, const SupercellField& psi, const FourierPotential& V,
                                  double t, double dt) {
  if (!(dt > 0.0) || t < 0.0) throw DomainError("split-step needs dt > 0 and t >= 0");
  if (psi.u.size() != cell.size()) throw DomainError("field does not match the supercell grid");
  SplitStepReport rep;
  rep.steps = t == 0.0 ? 0 : static_cast<long>(std::ceil(t / dt - 1e-9));
  rep.dt = rep.steps > 0 ? t / static_cast<double>(rep.steps) : dt;
  rep.field = psi;
  if (rep.steps == 0) return rep;

  const int N1 = cell.grid1(), N2 = cell.grid2();
  const std::size_t N = cell.size();
  const CellGrid vg = evaluate_grid(V, cell.p());
  std::vector<cplx> half(N), full(N), pot(N);
  const long double inv_n = 1.0L / static_cast<long double>(N);
  auto unit_phase = [](long double theta, long double scale) {
    return cplx(static_cast<double>(scale * std::cos(theta)), static_cast<double>(scale * std::sin(theta)));
  };
  double kmax = 0.0;
  for (int s1 = 0; s1 < N1; ++s1) {
    for (int s2 = 0; s2 < N2; ++s2) {
      const std::size_t i = static_cast<std::size_t>(s1) * N2 + s2;
      const double e = cell.mode_momentum(signed_index(s1, N1), signed_index(s2, N2)).squaredNorm();
      kmax = std::max(kmax, e);
      // the forward transform is unnormalized; fold 1/N into the multipliers.
      // Extended precision keeps their modulus from drifting over ~1e5 steps.
      half[i] = unit_phase(-0.5L * e * rep.dt, inv_n);
      full[i] = unit_phase(-1.0L * e * rep.dt, inv_n);
      pot[i] = unit_phase(-1.0L * vg.at(s1 % cell.p(), s2 % cell.p()) * rep.dt, 1.0L);
    }
  }
  rep.cfl = rep.dt * kmax;

  const Fft2d fft(N1, N2);
  auto& u = rep.field.u;
  const double n0 = field_norm2(cell, psi);
  auto multiply = [&](const std::vector<cplx>& m) {
#pragma omp parallel for
    for (long i = 0; i < static_cast<long>(N); ++i) u[static_cast<std::size_t>(i)] *= m[static_cast<std::size_t>(i)];
  };
  fft.forward(u);
  multiply(half);
  for (long s = 0; s < rep.steps; ++s) {
    fft.backward(u);
    multiply(pot);
    fft.forward(u);
    multiply(s + 1 < rep.steps ? full : half);
  }
  fft.backward(u);
  const double n1 = field_norm2(cell, rep.field);
  rep.norm_drift = n0 > 0.0 ? std::abs(std::sqrt(n1 / n0) - 1.0) : 0.0;
  if (rep.norm_drift > 1e-8) {
    std::ostringstream os;
    os << "split-step norm drift " << rep.norm_drift << " after " << rep.steps << " steps (dt = " << rep.dt
       << ", dt * max|k|^2 = " << rep.cfl << ")";
    throw NumericalError(os.str());
  }
  return rep;
}

double relative_difference(const SupercellField& a, const SupercellField& b) {
  if (a.u.size() != b.u.size()) throw DomainError("fields differ in size");
  double d = 0.0, n = 0.0;
  for (std::size_t i = 0; i < a.u.size(); ++i) {
    d += std::norm(a.u[i] - b.u[i]);
    n += std::norm(b.u[i]);
  }
  return n > 0.0 ? std::sqrt(d / n) : std::sqrt(d);
}

}  // namespace honeycomb
