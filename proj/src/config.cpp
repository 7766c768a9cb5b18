#include "honeycomb/config.hpp"

#include "honeycomb/errors.hpp"
#include "honeycomb/hash.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace honeycomb {

namespace pt = boost::property_tree;

namespace {

template <typename T>
T get_or(const pt::ptree& tree, const std::string& key, const T& fallback, const std::string& source) {
  const auto node = tree.get_child_optional(key);
  if (!node) return fallback;
  const auto value = node->get_value_optional<T>();
  if (!value) throw ConfigError(source + ": cannot parse '" + key + "' = '" + node->data() + "'");
  return *value;
}

std::vector<std::string> split(const std::string& s, const char* seps) {
  std::vector<std::string> parts;
  boost::split(parts, s, boost::is_any_of(seps), boost::token_compress_on);
  std::vector<std::string> out;
  for (auto& p : parts) {
    boost::trim(p);
    if (!p.empty()) out.push_back(p);
  }
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse number '" + s + "' in " + what);
  }
}

std::vector<std::pair<IndexPair, cplx>> parse_rows(const std::string& text, const std::string& source) {
  std::vector<std::pair<IndexPair, cplx>> rows;
  for (const auto& row : split(text, ";")) {
    const auto f = split(row, " \t,");
    if (f.size() != 3 && f.size() != 4) {
      throw ConfigError(source + ": coefficient row '" + row + "' needs m1 m2 re [im]");
    }
    const IndexPair m{static_cast<int>(to_double(f[0], source)), static_cast<int>(to_double(f[1], source))};
    const cplx v(to_double(f[2], source), f.size() == 4 ? to_double(f[3], source) : 0.0);
    rows.emplace_back(m, v);
  }
  return rows;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

}  // namespace

double default_time_step(double a) {
  const double a_over_q = a * a * std::sqrt(3.0) / (4.0 * std::numbers::pi);
  return 5e-3 * a_over_q * a_over_q;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  pt::ptree tree;
  try {
    std::istringstream is(text);
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(source + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  RunConfig c;
  c.source = source;
  c.a = get_or(tree, "lattice.a", c.a, source);
  c.eps = get_or(tree, "potential.eps", c.eps, source);
  if (const auto rows = tree.get_optional<std::string>("potential.coefficients")) c.rows = parse_rows(*rows, source);

  c.cutoff = get_or(tree, "discretization.M", c.cutoff, source);
  c.cutoff_evolve = get_or(tree, "discretization.M_evolve", c.cutoff_evolve, source);
  c.p = get_or(tree, "discretization.p", c.p, source);
  c.n1 = get_or(tree, "discretization.n1", c.n1, source);
  c.n2 = get_or(tree, "discretization.n2", c.n2, source);
  c.dt = get_or(tree, "discretization.dt", default_time_step(c.a), source);
  c.band_grid = get_or(tree, "discretization.band_grid", c.band_grid, source);
  c.nbands = get_or(tree, "discretization.nbands", c.nbands, source);

  c.kind = get_or(tree, "experiment.kind", c.kind, source);
  if (const auto d = tree.get_optional<std::string>("experiment.deltas")) {
    c.deltas.clear();
    for (const auto& s : split(*d, " ,;\t")) c.deltas.push_back(to_double(s, source + " [experiment] deltas"));
  }
  c.rho = get_or(tree, "experiment.rho", c.rho, source);
  c.eps1 = get_or(tree, "experiment.eps1", c.eps1, source);
  c.envelope = get_or(tree, "experiment.envelope", c.envelope, source);
  c.seed = get_or(tree, "experiment.seed", c.seed, source);
  c.samples = get_or(tree, "experiment.samples", c.samples, source);
  c.time_cap = get_or(tree, "experiment.time_cap", c.time_cap, source);
  c.delta = get_or(tree, "experiment.delta", c.delta, source);
  c.t = get_or(tree, "experiment.t", c.t, source);
  c.T = get_or(tree, "experiment.T", c.T, source);
  c.backend = get_or(tree, "experiment.backend", c.backend, source);
  if (const auto k = tree.get_optional<std::string>("experiment.ktilde")) {
    const auto f = split(*k, " ,;\t");
    if (f.size() != 2) throw ConfigError(source + ": ktilde needs two components");
    c.ktilde = Vec2(to_double(f[0], source), to_double(f[1], source));
    c.has_ktilde = true;
  }
  c.band = get_or(tree, "experiment.band", c.band, source);
  c.tau_final = get_or(tree, "experiment.tau_final", c.tau_final, source);
  c.npairs = get_or(tree, "experiment.npairs", c.npairs, source);
  c.lipschitz_bands = get_or(tree, "experiment.lipschitz_bands", c.lipschitz_bands, source);
  c.radius_cap = get_or(tree, "experiment.radius_cap", c.radius_cap, source);

  if (!(c.a > 0.0)) throw ConfigError(source + ": [lattice] a must be positive");
  if (c.cutoff < 1 || c.cutoff_evolve < 1) throw ConfigError(source + ": cutoffs must be at least 1");
  if (c.p < 2 * c.cutoff_evolve + 1) {
    throw ConfigError(source + ": p = " + std::to_string(c.p) + " cannot hold M_evolve = " +
                      std::to_string(c.cutoff_evolve) + " (need p >= 2 M_evolve + 1)");
  }
  if (c.backend != "bloch" && c.backend != "split-step") {
    throw ConfigError(source + ": backend must be 'bloch' or 'split-step'");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string canonical_config(const RunConfig& c) {
  std::ostringstream os;
  os << "a=" << fmt(c.a) << "\neps=" << fmt(c.eps) << "\nrows=";
  for (const auto& [m, v] : c.rows) os << m.m1 << ' ' << m.m2 << ' ' << fmt(v.real()) << ' ' << fmt(v.imag()) << ';';
  os << "\nM=" << c.cutoff << "\nM_evolve=" << c.cutoff_evolve << "\np=" << c.p << "\nn1=" << c.n1
     << "\nn2=" << c.n2 << "\ndt=" << fmt(c.dt) << "\nband_grid=" << c.band_grid << "\nnbands=" << c.nbands
     << "\nkind=" << c.kind << "\ndeltas=";
  for (const double d : c.deltas) os << fmt(d) << ',';
  os << "\nrho=" << fmt(c.rho) << "\neps1=" << fmt(c.eps1) << "\nenvelope=" << c.envelope << "\nseed=" << c.seed
     << "\nsamples=" << c.samples << "\ntime_cap=" << fmt(c.time_cap) << "\ndelta=" << fmt(c.delta)
     << "\nt=" << fmt(c.t) << "\nT=" << fmt(c.T) << "\nbackend=" << c.backend << "\nktilde=";
  if (c.has_ktilde) os << fmt(c.ktilde(0)) << ',' << fmt(c.ktilde(1));
  os << "\nband=" << c.band << "\ntau_final=" << fmt(c.tau_final) << "\nnpairs=" << c.npairs
     << "\nlipschitz_bands=" << c.lipschitz_bands << "\nradius_cap=" << fmt(c.radius_cap) << '\n';
  return os.str();
}

std::uint64_t config_hash(const RunConfig& cfg) {
  Fnv1a h;
  h.add(canonical_config(cfg));
  return h.value();
}

HoneycombLattice config_lattice(const RunConfig& cfg) { return honeycomb_basis(cfg.a); }

FourierPotential config_potential(const RunConfig& cfg, const DualBasis& dual) {
  if (cfg.rows.empty()) {
    if (cfg.eps == 0.0) return zero_potential();
    return three_cosine_potential(cfg.eps, dual);
  }
  FourierPotential V;
  V.amplitude = cfg.eps;
  for (const auto& [m, v] : cfg.rows) V.shape[m] += v;
  return V;
}

std::string write_potential(const FourierPotential& V) {
  std::ostringstream os;
  os << "[potential]\neps = " << fmt(V.amplitude) << "\ncoefficients = ";
  bool first = true;
  for (const auto& [m, v] : V.shape) {
    if (!first) os << "; ";
    first = false;
    os << m.m1 << ' ' << m.m2 << ' ' << fmt(v.real()) << ' ' << fmt(v.imag());
  }
  os << '\n';
  return os.str();
}

FourierPotential read_potential(const std::string& text) {
  const RunConfig c = parse_config(text, "<potential>");
  FourierPotential V;
  V.amplitude = c.eps;
  for (const auto& [m, v] : c.rows) V.shape[m] += v;
  return V;
}

}  // namespace honeycomb
