#include "honeycomb/harness.hpp"

#include "honeycomb/errors.hpp"
#include "honeycomb/fft.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace honeycomb {

namespace {

constexpr double kSin60 = std::numbers::sqrt3 / 2.0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> log_times(double t_final, int samples) {
  std::vector<double> ts{0.0};
  if (t_final <= 0.0 || samples <= 0) return ts;
  if (samples == 1) {
    ts.push_back(t_final);
    return ts;
  }
  const double lo = std::log(t_final / 100.0), hi = std::log(t_final);
  for (int i = 0; i < samples; ++i) ts.push_back(std::exp(lo + (hi - lo) * i / (samples - 1)));
  ts.back() = t_final;
  return ts;
}

std::vector<double> linear_times(double t_final, int samples) {
  std::vector<double> ts;
  const int n = std::max(samples, 2);
  for (int i = 0; i < n; ++i) ts.push_back(t_final * i / (n - 1));
  return ts;
}

// sum_g conj(f_g) f_{g - e} on a periodic n1 x n2 spectrum
cplx shifted_overlap(const std::vector<cplx>& f, int n1, int n2, int e1, int e2) {
  cplx s{};
  for (int i = 0; i < n1; ++i) {
    const int i2 = storage_index(i - e1, n1);
    for (int j = 0; j < n2; ++j) {
      const int j2 = storage_index(j - e2, n2);
      s += std::conj(f[static_cast<std::size_t>(i) * n2 + j]) * f[static_cast<std::size_t>(i2) * n2 + j2];
    }
  }
  return s;
}

PacketMoments circular_moments(const std::vector<cplx>& f, int n1, int n2, const Vec2& b1, const Vec2& b2,
                               const std::optional<Vec2>& previous) {
  PacketMoments out;
  double norm = 0.0;
  for (const auto& c : f) norm += std::norm(c);
  out.norm2 = norm;
  if (norm == 0.0) throw NumericalError("moments of a zero field");
  const std::array<Vec2, 3> bs{b1, b2, b1 + b2};
  const std::array<std::array<int, 2>, 3> shifts{{{1, 0}, {0, 1}, {1, 1}}};
  std::array<cplx, 3> S;
  for (int d = 0; d < 3; ++d) S[d] = shifted_overlap(f, n1, n2, shifts[d][0], shifts[d][1]) / norm;

  Vec2 phase(std::arg(S[0]), std::arg(S[1]));
  if (previous) {
    for (int d = 0; d < 2; ++d) {
      const double ref = bs[d].dot(*previous);
      phase(d) += 2.0 * std::numbers::pi * std::round((ref - phase(d)) / (2.0 * std::numbers::pi));
    }
  }
  Mat2 B;
  B.row(0) = b1.transpose();
  B.row(1) = b2.transpose();
  out.center = B.inverse() * phase;

  // b^T Sigma b = -2 ln |S_b| for a Gaussian density
  Eigen::Matrix3d M;
  Eigen::Vector3d rhs;
  for (int d = 0; d < 3; ++d) {
    const Vec2& b = bs[d];
    M(d, 0) = b(0) * b(0);
    M(d, 1) = 2.0 * b(0) * b(1);
    M(d, 2) = b(1) * b(1);
    rhs(d) = -2.0 * std::log(std::abs(S[d]));
  }
  const Eigen::Vector3d sol = M.fullPivLu().solve(rhs);
  out.covariance << sol(0), sol(1), sol(1), sol(2);
  return out;
}

}  // namespace

EffectiveDynamicsNorms effective_dynamics_error(const Supercell& cell, const std::vector<cplx>& psi_spectrum,
                                                const EnvelopePair& env_T, const DiracPointData& dp, double delta,
                                                double t, double psi0_norm) {
  if (env_T.lambda_sharp != dp.lambda_sharp) {
    throw ConfigError("envelopes were propagated with a lambda_sharp that differs from the Dirac point data");
  }
  if (psi_spectrum.size() != cell.size()) throw DomainError("spectrum does not match the supercell grid");
  const PlaneWaveBasis basis(dp.cutoff);
  const EnvelopeGrid eg = cell.envelope_grid(delta);
  const auto s1 = envelope_spectrum(eg, env_T.alpha1);
  const auto s2 = envelope_spectrum(eg, env_T.alpha2);
  std::vector<cplx> eta = packet_spectrum(cell, basis, delta, {{&s1, &dp.phi1}, {&s2, &dp.phi2}});
  const cplx phase = std::polar(1.0, dp.mu_star * t);
  double psi2 = 0.0;
  for (std::size_t i = 0; i < eta.size(); ++i) {
    psi2 += std::norm(psi_spectrum[i]);
    eta[i] = phase * psi_spectrum[i] - eta[i];
  }
  EffectiveDynamicsNorms out;
  out.t = t;
  out.psi_norm = std::sqrt(cell.area() * psi2);
  out.eta = std::sqrt(spectrum_norm2(cell, eta));
  const double ref = psi0_norm > 0.0 ? psi0_norm : 1.0;
  out.relative = out.eta / ref;
  const auto g = spectrum_gradient_norm2(cell, eta);
  out.grad_x1 = std::sqrt(g[0]) / ref;
  out.grad_x2 = std::sqrt(g[1]) / ref;
  return out;
}

double fit_exponent(const std::vector<double>& deltas, const std::vector<double>& errors) {
  if (deltas.size() != errors.size() || deltas.size() < 2) throw DomainError("exponent fit needs matching data");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(deltas.size());
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(errors[i] > 0.0)) throw NumericalError("exponent fit needs positive errors");
    const double x = std::log(deltas[i]), y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SimulationReport scaling_study(const FourierPotential& V, const HoneycombLattice& lattice,
                               const ScalingConfig& config, std::uint64_t config_hash) {
  if (config.deltas.empty()) throw DomainError("scaling study needs at least one delta");
  SimulationReport rep;
  rep.kind = "scaling";
  rep.config_hash = config_hash;
  rep.potential_hash = potential_hash(V);
  rep.cutoff = config.cutoff;
  rep.p = config.p;
  rep.rho = config.rho;
  rep.eps1 = config.eps1;

  const DiracPointData dp = detect(V, lattice, config.cutoff);
  rep.mu_star = dp.mu_star;
  rep.lambda_sharp = dp.lambda_sharp;
  const double speed = std::abs(dp.lambda_sharp);

  std::vector<double> deltas = config.deltas;
  std::sort(deltas.begin(), deltas.end(), std::greater<>());

  for (const double delta : deltas) {
    const auto t0 = std::chrono::steady_clock::now();
    ScalingRow row;
    row.delta = delta;
    row.t_theory = config.rho * std::pow(delta, -2.0 + config.eps1);
    row.t_final = std::min(row.t_theory, config.time_cap);
    row.capped = row.t_final < row.t_theory;

    const double side = 2.0 * (speed * delta * row.t_final + config.margin) / kSin60;
    const Supercell cell = supercell_for_envelope(lattice, delta, side, config.p, vertex_K(lattice.dual).first.k);
    row.cells = cell.n1();
    row.grid = cell.grid1();
    const EnvelopeGrid eg = cell.envelope_grid(delta);
    const EnvelopePair env0 = envelope_preset(config.envelope, eg, dp.lambda_sharp);
    WavePacket wp = build_wavepacket(env0, dp, delta, cell, config.envelope);
    wp.field.u.clear();
    wp.field.u.shrink_to_fit();
    const BlochCoefficients coeffs = bloch_transform(cell, wp.spectrum, V, config.cutoff, {0, config.fiber_tolerance});
    row.plancherel_residual = coeffs.plancherel_residual;
    row.fibers_kept = coeffs.fibers.size();
    const double psi0_norm = std::sqrt(spectrum_norm2(cell, wp.spectrum));

    for (const double t : log_times(row.t_final, config.samples)) {
      const DiracPropagation prop = dirac_propagate(env0, delta * t);
      row.envelope_tail = std::max(row.envelope_tail, prop.tail_mass);
      EffectiveDynamicsNorms n;
      if (t == 0.0) {
        n = effective_dynamics_error(cell, wp.spectrum, prop.env, dp, delta, t, psi0_norm);
      } else {
        n = effective_dynamics_error(cell, bloch_synthesize_spectrum(cell, coeffs, t), prop.env, dp, delta, t,
                                     psi0_norm);
      }
      if (t == 0.0) row.t0_error = n.eta;
      row.max_norm_drift = std::max(row.max_norm_drift, std::abs(n.psi_norm / psi0_norm - 1.0));
      row.sup_eta = std::max(row.sup_eta, n.eta);
      row.sup_relative = std::max(row.sup_relative, n.relative);
      row.sup_relative_gradient = std::max(row.sup_relative_gradient, std::hypot(n.grad_x1, n.grad_x2));
      row.samples.push_back(n);
    }
    row.runtime = seconds_since(t0);
    rep.rows.push_back(std::move(row));
  }

  rep.monotone = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    if (!(rep.rows[i].sup_relative < rep.rows[i - 1].sup_relative)) {
      rep.monotone = false;
      std::ostringstream os;
      os << "relative error does not decrease from delta = " << rep.rows[i - 1].delta << " to " << rep.rows[i].delta
         << "; suspect a supercell that is too small or a cutoff that is too low";
      rep.diagnostics.push_back(os.str());
    }
  }
  if (rep.rows.size() >= 3) {
    std::vector<double> ds, es;
    for (const auto& r : rep.rows) {
      ds.push_back(r.delta);
      es.push_back(r.sup_relative);
    }
    rep.tau_star = fit_exponent(ds, es);
  }
  rep.pass = rep.monotone && rep.tau_star && *rep.tau_star > 0.0;
  for (const auto& r : rep.rows) {
    if (r.t0_error != 0.0) {
      rep.pass = false;
      rep.diagnostics.push_back("nonzero error at t = 0");
    }
  }
  return rep;
}

PacketMoments packet_moments(const Supercell& cell, const std::vector<cplx>& spectrum,
                             const std::optional<Vec2>& previous_center) {
  const auto& d = cell.lattice().dual;
  PacketMoments m = circular_moments(spectrum, cell.grid1(), cell.grid2(), d.k1 / cell.n1(), d.k2 / cell.n2(),
                                     previous_center);
  m.norm2 *= cell.area();
  return m;
}

PacketMoments envelope_moments(const EnvelopeGrid& grid, const std::vector<cplx>& spectrum) {
  const auto [b1, b2] = grid.reciprocal();
  PacketMoments m = circular_moments(spectrum, grid.n1, grid.n2, b1, b2, std::nullopt);
  m.norm2 *= grid.area();
  return m;
}

namespace {

struct SingleBandSetup {
  Supercell cell;
  Eigen::VectorXcd profile;
  double mu = 0.0;
  std::vector<cplx> alpha_hat;
  std::vector<cplx> spectrum;
  BlochCoefficients coeffs;
  double contamination = 0.0;
};

SingleBandSetup single_band_packet(const FourierPotential& V, const HoneycombLattice& lattice, const Vec2& ktilde,
                                   int band, double delta, double side_X, int cutoff, int p) {
  const Supercell cell = supercell_for_envelope(lattice, delta, side_X, p, ktilde);
  const PlaneWaveBasis basis(cutoff);
  const auto pairs = solve_bands(assemble_hamiltonian(V, {ktilde, false}, basis, lattice.dual), band, {ktilde, false});
  const EnvelopeGrid eg = cell.envelope_grid(delta);
  const auto alpha = sample_envelope(eg, [](const Vec2& X) { return cplx(std::exp(-0.5 * X.squaredNorm())); });
  const double ext = envelope_exterior_mass(eg, {&alpha});
  if (ext > 1e-8) throw DomainError("envelope too wide for the supercell; increase the domain margin");
  SingleBandSetup s{cell, pairs.back().coeffs, pairs.back().mu, envelope_spectrum(eg, alpha), {}, {}, 0.0};
  s.spectrum = packet_spectrum(cell, basis, delta, {{&s.alpha_hat, &s.profile}});
  s.coeffs = bloch_transform(cell, s.spectrum, V, cutoff, {0, 1e-24});
  double in_band = 0.0;
  for (const auto& f : s.coeffs.fibers) in_band += std::norm(f.coeffs(band - 1));
  s.contamination = 1.0 - in_band / s.coeffs.norm2;
  return s;
}

}  // namespace

BallisticReport ballistic_experiment(const FourierPotential& V, const HoneycombLattice& lattice,
                                     const BallisticConfig& config) {
  BallisticReport rep;
  rep.ktilde = config.ktilde;
  rep.band = config.band;
  rep.delta = config.delta;
  rep.t_final = config.t_final > 0.0 ? config.t_final : 1.0 / config.delta;

  const GroupVelocity gv = group_velocity(V, config.ktilde, config.band, config.cutoff, lattice.dual);
  rep.group_velocity = gv.velocity;
  const double travel = gv.velocity.norm() * config.delta * rep.t_final;
  const double side = 2.0 * (travel + config.margin) / kSin60;
  SingleBandSetup s = single_band_packet(V, lattice, config.ktilde, config.band, config.delta, side, config.cutoff,
                                         config.p);
  rep.cells = s.cell.n1();
  rep.contamination = s.contamination;
  if (s.contamination > 0.01) {
    std::ostringstream os;
    os << "packet carries " << s.contamination << " of its mass outside band " << config.band;
    throw NumericalError(os.str());
  }

  std::optional<Vec2> prev;
  Mat2 cov0 = Mat2::Zero(), cov1 = Mat2::Zero();
  for (const double t : linear_times(rep.t_final, config.samples)) {
    const auto spec = t == 0.0 ? s.spectrum : bloch_synthesize_spectrum(s.cell, s.coeffs, t);
    const PacketMoments m = packet_moments(s.cell, spec, prev);
    prev = m.center;
    rep.times.push_back(t);
    rep.centers.push_back(m.center);
    if (t == 0.0) cov0 = m.covariance;
    cov1 = m.covariance;
  }
  // least-squares velocity
  const double n = static_cast<double>(rep.times.size());
  double st = 0, stt = 0;
  Vec2 sx = Vec2::Zero(), stx = Vec2::Zero();
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    st += rep.times[i];
    stt += rep.times[i] * rep.times[i];
    sx += rep.centers[i];
    stx += rep.times[i] * rep.centers[i];
  }
  rep.measured_velocity = (n * stx - st * sx) / (n * stt - st * st);
  const double vn = rep.group_velocity.norm();
  rep.velocity_deviation = (rep.measured_velocity - rep.group_velocity).norm() / (vn > 0.0 ? vn : 1.0);
  rep.drift = (rep.centers.back() - rep.centers.front()).norm();
  rep.envelope_width = std::sqrt(0.5 * cov0.trace());
  rep.width_change = std::abs(std::sqrt(cov1.trace() / cov0.trace()) - 1.0);
  return rep;
}

EffectiveMassReport effective_mass_experiment(const FourierPotential& V, const HoneycombLattice& lattice,
                                              const EffectiveMassConfig& config) {
  EffectiveMassReport rep;
  rep.ktilde = config.ktilde;
  rep.band = config.band;
  rep.delta = config.delta;
  rep.t_final = config.tau_final / (config.delta * config.delta);

  const EffectiveMass em = effective_mass_tensor(V, config.ktilde, config.band, config.cutoff, lattice.dual);
  if (em.not_critical) {
    throw NumericalError("ktilde is not a critical point of the band (|grad mu| too large); choose a band edge");
  }
  rep.a_eff = em.a_eff;
  const Eigen::SelfAdjointEigenSolver<Mat2> es(em.a_eff);
  const double amax = es.eigenvalues().cwiseAbs().maxCoeff();
  if (es.eigenvalues().cwiseAbs().minCoeff() < 1e-6 * std::max(amax, 1e-300)) {
    throw NumericalError("effective-mass tensor is degenerate at this point; choose a different band edge");
  }
  rep.isotropy_offdiag = std::abs(em.a_eff(0, 1)) / std::abs(em.a_eff.trace());

  // |alpha(X, tau)| = |alpha_0| at most sqrt(1 + 4 a^2 tau^2) wider
  const double growth = std::sqrt(1.0 + 4.0 * amax * amax * config.tau_final * config.tau_final);
  const double side = 2.0 * config.margin * growth / kSin60;
  SingleBandSetup s = single_band_packet(V, lattice, config.ktilde, config.band, config.delta, side, config.cutoff,
                                         config.p);
  rep.cells = s.cell.n1();
  const EnvelopeGrid eg = s.cell.envelope_grid(config.delta);
  const PlaneWaveBasis basis(config.cutoff);
  const double norm0 = spectrum_norm2(s.cell, s.spectrum);

  double var0 = 0.0, pred0 = 0.0;
  Mat2 cov_last = Mat2::Zero();
  for (const double t : linear_times(rep.t_final, config.samples)) {
    const double tau = config.delta * config.delta * t;
    std::vector<cplx> ah(s.alpha_hat.size());
    for (int i = 0; i < eg.n1; ++i) {
      for (int j = 0; j < eg.n2; ++j) {
        const std::size_t u = static_cast<std::size_t>(i) * eg.n2 + j;
        const Vec2 xi = eg.mode(i, j);
        ah[u] = s.alpha_hat[u] * std::polar(1.0, -xi.dot(em.a_eff * xi) * tau);
      }
    }
    const auto spec = t == 0.0 ? s.spectrum : bloch_synthesize_spectrum(s.cell, s.coeffs, t);
    const PacketMoments m = packet_moments(s.cell, spec);
    const PacketMoments pm = envelope_moments(eg, ah);
    const double var = m.covariance.trace();
    const double pred = pm.covariance.trace() / (config.delta * config.delta);
    if (t == 0.0) {
      var0 = var;
      pred0 = pred;
    } else {
      const double dm = var - var0, dp = pred - pred0;
      rep.variance_growth_deviation = std::max(rep.variance_growth_deviation, std::abs(dm - dp) / std::abs(dp));
    }
    rep.times.push_back(t);
    rep.variance_measured.push_back(var);
    rep.variance_predicted.push_back(pred);
    cov_last = m.covariance;

    if (t == rep.t_final) {
      auto hom = packet_spectrum(s.cell, basis, config.delta, {{&ah, &s.profile}});
      const cplx ph = std::polar(1.0, -s.mu * t);
      double diff = 0.0;
      for (std::size_t i = 0; i < hom.size(); ++i) diff += std::norm(spec[i] - ph * hom[i]);
      rep.field_deviation = std::sqrt(s.cell.area() * diff / norm0);
    }
  }
  const Eigen::SelfAdjointEigenSolver<Mat2> ce(cov_last);
  rep.eccentricity = 1.0 - ce.eigenvalues()(0) / ce.eigenvalues()(1);
  return rep;
}

Eigen::VectorXd free_band_energies(const Vec2& k, int nbands, int cutoff, const DualBasis& dual) {
  const PlaneWaveBasis basis(cutoff);
  std::vector<double> e;
  e.reserve(static_cast<std::size_t>(basis.size()));
  for (const auto& m : basis.indices()) e.push_back((k + dual.vector(m)).squaredNorm());
  std::sort(e.begin(), e.end());
  Eigen::VectorXd out(nbands);
  for (int b = 0; b < nbands; ++b) out(b) = e[static_cast<std::size_t>(b)];
  return out;
}

std::pair<std::vector<Vec2>, std::vector<Vec2>> lipschitz_pairs(const LipschitzConfig& config, const DualBasis& dual) {
  const Vec2 K = vertex_K(dual).first.k;
  const double floor = std::max(config.radius_floor * dual.q, 1e-8);
  const double cap = std::max(config.radius_cap * dual.q, floor);

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Vec2> k1s(static_cast<std::size_t>(config.npairs)), k2s(static_cast<std::size_t>(config.npairs));
  for (long i = 0; i < config.npairs; ++i) {
    const double s1 = unit(rng), s2 = unit(rng), u = unit(rng), th = unit(rng);
    const Vec2 k1 = reduce_to_bz(K + (s1 - 0.5) * dual.k1 + (s2 - 0.5) * dual.k2, dual).k;
    const double r = floor * std::pow(cap / floor, u);
    const double ang = 2.0 * std::numbers::pi * th;
    k1s[static_cast<std::size_t>(i)] = k1;
    k2s[static_cast<std::size_t>(i)] = k1 + r * Vec2(std::cos(ang), std::sin(ang));
  }
  return {std::move(k1s), std::move(k2s)};
}

LipschitzReport lipschitz_check(const FourierPotential& V, const HoneycombLattice& lattice,
                                const LipschitzConfig& config) {
  if (config.npairs < 1 || config.nbands < 1) throw DomainError("Lipschitz check needs pairs and bands");
  const auto& dual = lattice.dual;
  const auto pairs = lipschitz_pairs(config, dual);
  const auto& k1s = pairs.first;
  const auto& k2s = pairs.second;

  const PlaneWaveBasis basis(config.cutoff);
  const int nb = config.nbands;
  std::vector<Eigen::VectorXd> q(static_cast<std::size_t>(config.npairs));
  auto energies = [&](const Vec2& k) {
    const Eigen::MatrixXd H = assemble_hamiltonian(V, {k, false}, basis, dual).real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
    return Eigen::VectorXd(es.eigenvalues().head(nb));
  };
#pragma omp parallel for schedule(dynamic, 8)
  for (long i = 0; i < config.npairs; ++i) {
    const auto& a = k1s[static_cast<std::size_t>(i)];
    const auto& b = k2s[static_cast<std::size_t>(i)];
    const Eigen::VectorXd e1 = energies(a), e2 = energies(b);
    const double dk = (a - b).norm();
    Eigen::VectorXd qi(nb);
    for (int j = 0; j < nb; ++j) qi(j) = std::abs(e1(j) - e2(j)) / ((std::abs(e1(j)) + 1.0) * dk);
    q[static_cast<std::size_t>(i)] = qi;
  }

  LipschitzReport rep;
  rep.cutoff = config.cutoff;
  rep.npairs = config.npairs;
  rep.max_quotient.assign(static_cast<std::size_t>(nb), 0.0);
  for (long i = 0; i < config.npairs; ++i) {
    for (int j = 0; j < nb; ++j) {
      const double v = q[static_cast<std::size_t>(i)](j);
      rep.max_quotient[static_cast<std::size_t>(j)] = std::max(rep.max_quotient[static_cast<std::size_t>(j)], v);
      if (v > rep.overall_max) {
        rep.overall_max = v;
        rep.argmax_k1 = k1s[static_cast<std::size_t>(i)];
        rep.argmax_k2 = k2s[static_cast<std::size_t>(i)];
      }
    }
  }
  return rep;
}

}  // namespace honeycomb
