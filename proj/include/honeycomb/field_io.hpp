#pragma once

// Binary field snapshots shared by supercell fields and envelopes, plus CSV
// exports for plotting.
//
// Layout (little-endian): 8-byte magic "HCFIELD1", int32 n1, int32 n2,
// int32 components, 2 x 2 doubles spacing vectors (grid step along each
// axis), double delta, double t, then n1 * n2 * components interleaved
// (re, im) doubles, component-major.

#include "honeycomb/dirac_env.hpp"
#include "honeycomb/schrodinger.hpp"

#include <string>
#include <vector>

namespace honeycomb {

struct FieldSnapshot {
  int n1 = 0;
  int n2 = 0;
  Vec2 step1 = Vec2::Zero();
  Vec2 step2 = Vec2::Zero();
  double delta = 0.0;
  double t = 0.0;
  std::vector<std::vector<cplx>> components;
};

void write_field(const std::string& path, const FieldSnapshot& snap);
FieldSnapshot read_field(const std::string& path);

/// Physical psi = exp(i k_c.x) u on the supercell grid.
FieldSnapshot supercell_snapshot(const Supercell& cell, const SupercellField& field, double delta, double t);
FieldSnapshot envelope_snapshot(const EnvelopePair& env, double delta, double T);

/// |psi|^2 along the grid row i = row: columns x, y, density.
void write_density_slice_csv(const std::string& path, const Supercell& cell, const SupercellField& field, int row);
/// Columns X1, X2, re_alpha1, im_alpha1, re_alpha2, im_alpha2 at centered points.
void write_envelope_csv(const std::string& path, const EnvelopePair& env);

}  // namespace honeycomb
