// Command-line front end: one subcommand per experiment, each writing CSV/JSON
// artifacts and a report.json into the output directory.

#include "honeycomb/band_io.hpp"
#include "honeycomb/bloch.hpp"
#include "honeycomb/config.hpp"
#include "honeycomb/dirac_env.hpp"
#include "honeycomb/dirac_point.hpp"
#include "honeycomb/errors.hpp"
#include "honeycomb/field_io.hpp"
#include "honeycomb/harness.hpp"
#include "honeycomb/report.hpp"
#include "honeycomb/schrodinger.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>

using namespace honeycomb;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;
constexpr int kNumerical = 3;

struct Context {
  RunConfig cfg;
  HoneycombLattice lattice;
  FourierPotential V;
  std::filesystem::path out;

  std::string path(const std::string& name) const { return (out / name).string(); }

  Json provenance() const {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(config_hash(cfg)));
    Json j;
    j["config"] = cfg.source;
    j["config_hash"] = buf;
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(potential_hash(V)));
    j["potential_hash"] = buf;
    j["M"] = cfg.cutoff;
    j["M_evolve"] = cfg.cutoff_evolve;
    j["p"] = cfg.p;
    j["n1"] = cfg.n1;
    j["n2"] = cfg.n2;
    j["dt"] = cfg.dt;
    j["seed"] = cfg.seed;
    return j;
  }
};

Context make_context(const std::string& config_path, const std::string& out_dir) {
  Context c;
  c.cfg = config_path.empty() ? parse_config("", "<defaults>") : load_config(config_path);
  c.lattice = config_lattice(c.cfg);
  c.V = config_potential(c.cfg, c.lattice.dual);
  const auto sym = symmetry_report(c.V);
  if (!sym.honeycomb()) {
    throw ConfigError(c.cfg.source + ": potential is not real, even and rotation invariant");
  }
  c.out = out_dir;
  std::filesystem::create_directories(c.out);
  return c;
}

int finish(const Context& c, Json report, bool pass) {
  report["provenance"] = c.provenance();
  report["pass"] = pass;
  write_json(c.path("report.json"), report);
  std::cout << report.value("kind", "run") << ": " << (pass ? "PASS" : "FAIL") << " (" << c.path("report.json")
            << ")\n";
  return pass ? kPass : kFail;
}

int run_bands(const Context& c) {
  const auto kgrid = bz_grid(c.cfg.band_grid, c.lattice.dual);
  const BandCacheKey key{potential_hash(c.V), c.cfg.cutoff, grid_hash(kgrid), c.cfg.nbands};
  const std::string cache_dir = c.path("cache");
  bool cached = true;
  auto bands = load_band_cache(cache_dir, key);
  if (!bands) {
    cached = false;
    bands = band_grid(c.V, kgrid, c.cfg.nbands, c.cfg.cutoff, c.lattice.dual);
    save_band_cache(cache_dir, key, *bands);
  }
  write_bands_csv(c.path("bands.csv"), *bands);
  Json r;
  r["kind"] = "bands";
  r["kpoints"] = bands->kpoints.size();
  r["nbands"] = bands->nbands;
  r["from_cache"] = cached;
  return finish(c, r, true);
}

int run_dirac_point(const Context& c) {
  DiracPointData dp = characterize_dirac_point(c.V, c.lattice, c.cfg.cutoff);
  const ConeFit cone = cone_slope_fit(c.V, c.lattice, c.cfg.cutoff, dp.b1, dp.mu_star);
  const Json j = dirac_point_json(dp, cone);
  write_json(c.path("dirac_point.json"), j);
  Json r;
  r["kind"] = "dirac-point";
  r["mu_star"] = dp.mu_star;
  r["lambda_sharp_abs"] = std::abs(dp.lambda_sharp);
  r["cone_slope"] = cone.slope;
  r["slope_agreement"] = std::abs(cone.slope - std::abs(dp.lambda_sharp)) / std::abs(dp.lambda_sharp);
  r["degeneracy_gap"] = dp.degeneracy_gap;
  r["isolation_gap"] = dp.isolation_gap;
  r["residual"] = dp.residual;
  return finish(c, r, true);
}

int run_dirac_evolve(const Context& c) {
  const DiracPointData dp = detect(c.V, c.lattice, c.cfg.cutoff);
  const double side = 2.0 * (std::abs(dp.lambda_sharp) * c.cfg.T + 8.0);
  const EnvelopeGrid grid = EnvelopeGrid::square(side, 128);
  const EnvelopePair env0 = envelope_preset(c.cfg.envelope, grid, dp.lambda_sharp);
  const DiracPropagation prop = dirac_propagate(env0, c.cfg.T);
  write_envelope_csv(c.path("envelope.csv"), prop.env);
  write_field(c.path("envelope.bin"), envelope_snapshot(prop.env, 0.0, c.cfg.T));
  Json r;
  r["kind"] = "dirac-evolve";
  r["T"] = c.cfg.T;
  r["lambda_sharp"] = cplx_json(dp.lambda_sharp);
  r["tail_mass"] = prop.tail_mass;
  r["tail_warning"] = prop.tail_warning;
  Json norms = Json::array();
  const auto n0 = conserved_norms(env0, 1), n1 = conserved_norms(prop.env, 1);
  for (std::size_t i = 0; i < n0.size(); ++i) {
    norms.push_back({{"order", {n0[i].order_x1, n0[i].order_x2}}, {"initial", n0[i].norm}, {"final", n1[i].norm}});
  }
  r["norms"] = norms;
  return finish(c, r, !prop.tail_warning);
}

int run_evolve(const Context& c) {
  const double delta = c.cfg.delta;
  const DiracPointData dp = detect(c.V, c.lattice, c.cfg.cutoff_evolve);
  const Supercell cell(c.lattice, c.cfg.n1, c.cfg.n2, c.cfg.p);
  const EnvelopeGrid eg = cell.envelope_grid(delta);
  const EnvelopePair env0 = envelope_preset(c.cfg.envelope, eg, dp.lambda_sharp);
  const WavePacket wp = build_wavepacket(env0, dp, delta, cell, c.cfg.envelope, false);
  const double n0 = std::sqrt(spectrum_norm2(cell, wp.spectrum));
  SupercellField psi;
  Json r;
  r["kind"] = "evolve";
  r["backend"] = c.cfg.backend;
  if (c.cfg.backend == "split-step") {
    const SplitStepReport ss = split_step_evolve(cell, wp.field, c.V, c.cfg.t, c.cfg.dt);
    psi = ss.field;
    r["steps"] = ss.steps;
    r["dt"] = ss.dt;
    r["cfl"] = ss.cfl;
    r["norm_drift"] = ss.norm_drift;
  } else {
    const BlochCoefficients coeffs = bloch_transform(cell, wp.spectrum, c.V, c.cfg.cutoff_evolve);
    psi = bloch_evolve(cell, coeffs, c.cfg.t);
    r["plancherel_residual"] = coeffs.plancherel_residual;
  }
  const auto env_t = dirac_propagate(env0, delta * c.cfg.t).env;
  const auto err = effective_dynamics_error(cell, field_spectrum(cell, psi), env_t, dp, delta, c.cfg.t, n0);
  write_field(c.path("field_initial.bin"), supercell_snapshot(cell, wp.field, delta, 0.0));
  write_field(c.path("field_final.bin"), supercell_snapshot(cell, psi, delta, c.cfg.t));
  write_density_slice_csv(c.path("density_slice.csv"), cell, psi, 0);
  r["delta"] = delta;
  r["t"] = c.cfg.t;
  r["exterior_mass"] = wp.exterior_mass;
  r["relative_eta"] = err.relative;
  r["norm_ratio"] = err.psi_norm / n0;
  return finish(c, r, true);
}

int run_validate(const Context& c) {
  ScalingConfig sc;
  sc.deltas = c.cfg.deltas;
  sc.rho = c.cfg.rho;
  sc.eps1 = c.cfg.eps1;
  sc.envelope = c.cfg.envelope;
  sc.cutoff = c.cfg.cutoff_evolve;
  sc.p = c.cfg.p;
  sc.samples = c.cfg.samples;
  sc.time_cap = c.cfg.time_cap;
  const SimulationReport rep = scaling_study(c.V, c.lattice, sc, config_hash(c.cfg));
  write_scaling_csv(c.path("scaling.csv"), rep);
  const DiracPointData dp = detect(c.V, c.lattice, sc.cutoff);
  write_json(c.path("dirac_point.json"), dirac_point_json(dp));
  Json r = simulation_report_json(rep);
  r["kind"] = "validate";
  return finish(c, r, rep.pass);
}

Vec2 default_ballistic_k(const HoneycombLattice& lat) { return 0.5 * vertex_K(lat.dual).first.k; }

int run_ballistic(const Context& c) {
  BallisticConfig bc;
  bc.ktilde = c.cfg.has_ktilde ? c.cfg.ktilde : default_ballistic_k(c.lattice);
  bc.band = c.cfg.band;
  bc.delta = c.cfg.delta;
  bc.cutoff = c.cfg.cutoff_evolve;
  bc.p = c.cfg.p;
  const BallisticReport rep = ballistic_experiment(c.V, c.lattice, bc);
  return finish(c, ballistic_json(rep), rep.velocity_deviation < 0.02);
}

int run_effmass(const Context& c) {
  EffectiveMassConfig ec;
  ec.ktilde = c.cfg.has_ktilde ? c.cfg.ktilde : Vec2::Zero();
  ec.band = c.cfg.band;
  ec.delta = c.cfg.delta;
  ec.tau_final = c.cfg.tau_final;
  ec.cutoff = c.cfg.cutoff_evolve;
  ec.p = c.cfg.p;
  const EffectiveMassReport rep = effective_mass_experiment(c.V, c.lattice, ec);
  const bool pass = c.V.is_zero() ? rep.field_deviation < 1e-6 : rep.variance_growth_deviation < 0.05;
  return finish(c, effective_mass_json(rep), pass);
}

int run_lipschitz(const Context& c) {
  LipschitzConfig lc;
  lc.cutoff = c.cfg.cutoff;
  lc.npairs = c.cfg.npairs;
  lc.nbands = c.cfg.lipschitz_bands;
  lc.radius_cap = c.cfg.radius_cap;
  lc.seed = c.cfg.seed;
  const LipschitzReport a = lipschitz_check(c.V, c.lattice, lc);
  lc.npairs *= 2;
  const LipschitzReport b = lipschitz_check(c.V, c.lattice, lc);
  const double ratio = b.overall_max / a.overall_max;
  Json r;
  r["kind"] = "lipschitz";
  r["base"] = lipschitz_json(a);
  r["doubled"] = lipschitz_json(b);
  r["doubling_ratio"] = ratio;
  const bool pass = std::isfinite(a.overall_max) && std::isfinite(b.overall_max) && ratio < 2.0 && ratio > 0.5;
  return finish(c, r, pass);
}

void print_error(const char* category, const std::exception& e) {
  Json j{{"error", category}, {"message", e.what()}};
  std::cerr << j.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Honeycomb Schroedinger operators: bands, Dirac points and wave-packet dynamics"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir = ".";

  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const Context&);
  };
  const Sub subs[] = {
      {"bands", "band structure on a Brillouin-zone grid", run_bands},
      {"dirac-point", "locate and characterize the Dirac point at K", run_dirac_point},
      {"dirac-evolve", "propagate envelopes with the effective Dirac system", run_dirac_evolve},
      {"evolve", "evolve one wave packet on a supercell", run_evolve},
      {"validate", "effective-dynamics error scaling in delta", run_validate},
      {"ballistic", "single-band packet transport at the group velocity", run_ballistic},
      {"effmass", "band-edge packet against the homogenized equation", run_effmass},
      {"lipschitz", "empirical Lipschitz quotient of band functions", run_lipschitz},
  };
  int (*selected)(const Context&) = nullptr;
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("-c,--config", config_path, "config file (defaults are used when omitted)");
    sub->add_option("-o,--out", out_dir, "output directory");
    sub->callback([&selected, run = s.run] { selected = run; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    const Context ctx = make_context(config_path, out_dir);
    return selected(ctx);
  } catch (const ConfigError& e) {
    print_error("config", e);
    return kUsage;
  } catch (const DomainError& e) {
    print_error("domain", e);
    return kUsage;
  } catch (const NumericalError& e) {
    print_error("numerical", e);
    return kNumerical;
  } catch (const std::exception& e) {
    print_error("internal", e);
    return kNumerical;
  }
}
