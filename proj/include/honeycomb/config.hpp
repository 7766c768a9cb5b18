#pragma once

// Run configuration read from an INI-style text file with sections
// [lattice], [potential], [discretization] and [experiment].

#include "honeycomb/lattice.hpp"
#include "honeycomb/potential.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace honeycomb {

struct RunConfig {
  std::string source;  // file path or "<defaults>"

  // [lattice]
  double a = 1.0;

  // [potential]; no rows means the three-cosine shape
  double eps = 1.0;
  std::vector<std::pair<IndexPair, cplx>> rows;

  // [discretization]
  int cutoff = 12;         // Dirac point detection and band plots
  int cutoff_evolve = 5;   // time evolution
  int p = 12;              // grid points per cell
  int n1 = 8;
  int n2 = 8;
  double dt = 9.5e-5;      // default_time_step(a) when not given
  int band_grid = 30;
  int nbands = 6;

  // [experiment]
  std::string kind = "scaling";
  std::vector<double> deltas{0.5, 0.25, 0.125};
  double rho = 1.0;
  double eps1 = 1.0;
  std::string envelope = "gaussian";
  std::uint64_t seed = 1;
  int samples = 32;
  double time_cap = std::numeric_limits<double>::infinity();
  double delta = 0.5;       // single-run packets (evolve, ballistic, effmass)
  double t = 10.0;          // evolve horizon
  double T = 1.0;           // dirac-evolve horizon
  std::string backend = "bloch";  // evolve: bloch or split-step
  bool has_ktilde = false;
  Vec2 ktilde = Vec2::Zero();
  int band = 1;
  double tau_final = 0.5;
  long npairs = 10000;
  int lipschitz_bands = 4;
  double radius_cap = 1e-2;
};

/// Split-step default 5e-3 (a/q)^2.
double default_time_step(double a);

/// Throws ConfigError naming the path when the file is missing or malformed.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& source);

/// Canonical key = value listing of every field; the config hash is taken over it.
std::string canonical_config(const RunConfig& cfg);
std::uint64_t config_hash(const RunConfig& cfg);

HoneycombLattice config_lattice(const RunConfig& cfg);
FourierPotential config_potential(const RunConfig& cfg, const DualBasis& dual);

/// [potential] section with eps and "m1 m2 re im" rows separated by ';'.
std::string write_potential(const FourierPotential& V);
/// Reads a [potential] section (the rest of the file is ignored).
FourierPotential read_potential(const std::string& text);

}  // namespace honeycomb
