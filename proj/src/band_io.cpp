#include "honeycomb/band_io.hpp"

#include "honeycomb/errors.hpp"
#include "honeycomb/hash.hpp"

#include <array>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace honeycomb {

namespace {

constexpr std::array<char, 8> kMagic{'H', 'C', 'B', 'A', 'N', 'D', 'S', '1'};

template <typename T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T take(std::ifstream& in, const std::string& path) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw NumericalError("truncated band cache " + path);
  return v;
}

}  // namespace

void write_bands_csv(const std::string& path, const BandStructure& bands) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw DomainError("cannot write " + path);
  std::fprintf(f, "kx,ky,b,mu\n");
  for (std::size_t i = 0; i < bands.kpoints.size(); ++i) {
    for (int b = 1; b <= bands.nbands; ++b) {
      std::fprintf(f, "%.17g,%.17g,%d,%.17g\n", bands.kpoints[i](0), bands.kpoints[i](1), b, bands.at(i, b));
    }
  }
  std::fclose(f);
}

std::uint64_t grid_hash(const std::vector<Vec2>& kpoints) {
  Fnv1a h;
  h.add(static_cast<std::int64_t>(kpoints.size()));
  for (const auto& k : kpoints) {
    h.add(k(0));
    h.add(k(1));
  }
  return h.value();
}

std::string BandCacheKey::file_name() const {
  char buf[96];
  std::snprintf(buf, sizeof buf, "bands-%016llx-M%d-%016llx-b%d.bin", static_cast<unsigned long long>(potential),
                cutoff, static_cast<unsigned long long>(grid), nbands);
  return buf;
}

void save_band_cache(const std::string& dir, const BandCacheKey& key, const BandStructure& bands) {
  std::filesystem::create_directories(dir);
  const std::string path = (std::filesystem::path(dir) / key.file_name()).string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + path);
  out.write(kMagic.data(), kMagic.size());
  put(out, key.potential);
  put(out, static_cast<std::int32_t>(key.cutoff));
  put(out, key.grid);
  put(out, static_cast<std::int32_t>(bands.nbands));
  put(out, static_cast<std::uint64_t>(bands.kpoints.size()));
  for (std::size_t i = 0; i < bands.kpoints.size(); ++i) {
    put(out, bands.kpoints[i](0));
    put(out, bands.kpoints[i](1));
    for (int b = 1; b <= bands.nbands; ++b) put(out, bands.at(i, b));
  }
}

std::optional<BandStructure> load_band_cache(const std::string& dir, const BandCacheKey& key) {
  const std::string path = (std::filesystem::path(dir) / key.file_name()).string();
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw NumericalError("bad band cache header in " + path);
  const auto pot = take<std::uint64_t>(in, path);
  const auto cutoff = take<std::int32_t>(in, path);
  const auto grid = take<std::uint64_t>(in, path);
  const auto nb = take<std::int32_t>(in, path);
  const auto nk = take<std::uint64_t>(in, path);
  if (pot != key.potential || cutoff != key.cutoff || grid != key.grid || nb != key.nbands) {
    throw NumericalError("band cache " + path + " does not match its key");
  }
  BandStructure bs;
  bs.nbands = nb;
  bs.cutoff = cutoff;
  bs.mu.resize(static_cast<Eigen::Index>(nk), nb);
  for (std::uint64_t i = 0; i < nk; ++i) {
    const double kx = take<double>(in, path), ky = take<double>(in, path);
    bs.kpoints.emplace_back(kx, ky);
    for (int b = 0; b < nb; ++b) bs.mu(static_cast<Eigen::Index>(i), b) = take<double>(in, path);
  }
  if (grid_hash(bs.kpoints) != key.grid) throw NumericalError("band cache " + path + " has altered k-points");
  return bs;
}

}  // namespace honeycomb
