#pragma once

// Band structure CSV export and a binary cache keyed by (potential hash,
// cutoff, grid hash).

#include "honeycomb/bloch.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace honeycomb {

/// Columns kx, ky, b, mu; one row per (k, band), full double precision.
void write_bands_csv(const std::string& path, const BandStructure& bands);

std::uint64_t grid_hash(const std::vector<Vec2>& kpoints);

struct BandCacheKey {
  std::uint64_t potential = 0;
  int cutoff = 0;
  std::uint64_t grid = 0;
  int nbands = 0;

  std::string file_name() const;
};

void save_band_cache(const std::string& dir, const BandCacheKey& key, const BandStructure& bands);
/// Empty when no cache file exists for the key; throws NumericalError on a
/// corrupt or mismatching file.
std::optional<BandStructure> load_band_cache(const std::string& dir, const BandCacheKey& key);

}  // namespace honeycomb
