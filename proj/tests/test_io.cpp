#include "honeycomb/band_io.hpp"
#include "honeycomb/config.hpp"
#include "honeycomb/errors.hpp"
#include "honeycomb/field_io.hpp"
#include "honeycomb/report.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace honeycomb;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("honeycomb_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config parsing reads every section and keeps defaults") {
  const std::string text = R"([lattice]
a = 1.5
[potential]
eps = 2
[discretization]
M = 9
M_evolve = 4
p = 10
[experiment]
kind = ballistic
deltas = 0.5, 0.25
ktilde = 0.1 -0.2
backend = split-step
)";
  const auto c = parse_config(text, "inline");
  CHECK(c.a == 1.5);
  CHECK(c.eps == 2.0);
  CHECK(c.cutoff == 9);
  CHECK(c.cutoff_evolve == 4);
  CHECK(c.kind == "ballistic");
  CHECK(c.deltas == std::vector<double>{0.5, 0.25});
  CHECK(c.has_ktilde);
  CHECK((c.ktilde - Vec2(0.1, -0.2)).norm() == 0.0);
  CHECK(c.backend == "split-step");
  CHECK(c.dt == doctest::Approx(default_time_step(1.5)));
  CHECK(c.n1 == 8);
}

TEST_CASE("default time step scales with the lattice") {
  CHECK(default_time_step(1.0) == doctest::Approx(9.5e-5).epsilon(0.01));
  CHECK(default_time_step(2.0) == doctest::Approx(16 * default_time_step(1.0)));
}

TEST_CASE("config errors name their source") {
  CHECK_THROWS_AS(parse_config("[discretization]\np = 5\n", "x.ini"), ConfigError);
  CHECK_THROWS_AS(parse_config("[lattice]\na = -1\n", "x.ini"), ConfigError);
  CHECK_THROWS_AS(parse_config("[experiment]\nbackend = euler\n", "x.ini"), ConfigError);
  try {
    load_config("/nonexistent/run.ini");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/run.ini") != std::string::npos);
  }
}

TEST_CASE("config hash follows the canonical listing") {
  const auto a = parse_config("[potential]\neps = 1\n", "a");
  const auto b = parse_config("[potential]\neps = 1.0\n", "b");
  const auto c = parse_config("[potential]\neps = 2\n", "c");
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a) != config_hash(c));
  CHECK(canonical_config(a).find("M_evolve=5") != std::string::npos);
}

TEST_CASE("potential section round trips") {
  const auto lat = honeycomb_basis(1.0);
  const auto V = three_cosine_potential(1.25, lat.dual);
  const auto W = read_potential(write_potential(V));
  CHECK(potential_hash(V) == potential_hash(W));
  const auto cfg = parse_config("[potential]\neps = 0\n", "zero");
  CHECK(config_potential(cfg, lat.dual).is_zero());
}

TEST_CASE("band cache round trips and misses on a different key") {
  const auto lat = honeycomb_basis(1.0);
  const auto V = three_cosine_potential(1.0, lat.dual);
  const auto grid = bz_grid(4, lat.dual);
  const auto bands = band_grid(V, grid, 3, 3, lat.dual);
  const auto dir = scratch_dir("cache");
  const BandCacheKey key{potential_hash(V), 3, grid_hash(grid), 3};
  CHECK_FALSE(load_band_cache(dir.string(), key).has_value());
  save_band_cache(dir.string(), key, bands);
  const auto back = load_band_cache(dir.string(), key);
  REQUIRE(back.has_value());
  CHECK((back->mu - bands.mu).norm() == 0.0);
  CHECK(back->kpoints.size() == grid.size());
  BandCacheKey other = key;
  other.cutoff = 4;
  CHECK_FALSE(load_band_cache(dir.string(), other).has_value());

  const auto csv = dir / "bands.csv";
  write_bands_csv(csv.string(), bands);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "kx,ky,b,mu");
  std::filesystem::remove_all(dir);
}

TEST_CASE("field snapshots round trip bit for bit") {
  const auto lat = honeycomb_basis(1.0);
  const Supercell cell(lat, 2, 3, 6);
  SupercellField f{std::vector<cplx>(cell.size())};
  for (std::size_t i = 0; i < f.u.size(); ++i) f.u[i] = cplx(std::sin(0.1 * i), std::cos(0.3 * i));
  const auto snap = supercell_snapshot(cell, f, 0.25, 1.5);
  const auto dir = scratch_dir("field");
  const auto path = (dir / "psi.bin").string();
  write_field(path, snap);
  const auto back = read_field(path);
  CHECK(back.n1 == snap.n1);
  CHECK(back.n2 == snap.n2);
  CHECK(back.delta == 0.25);
  CHECK(back.t == 1.5);
  CHECK((back.step1 - snap.step1).norm() == 0.0);
  REQUIRE(back.components.size() == 1);
  CHECK(back.components[0] == snap.components[0]);
  std::ofstream(dir / "junk.bin") << "not a field";
  CHECK_THROWS(read_field((dir / "junk.bin").string()));
  std::filesystem::remove_all(dir);
}

TEST_CASE("Dirac point JSON round trips") {
  const auto lat = honeycomb_basis(1.0);
  const auto dp = characterize_dirac_point(three_cosine_potential(1.0, lat.dual), lat, 4);
  const Json j = dirac_point_json(dp);
  const auto back = dirac_point_from_json(Json::parse(j.dump()));
  CHECK(back.mu_star == dp.mu_star);
  CHECK(back.b1 == dp.b1);
  CHECK(back.cutoff == dp.cutoff);
  CHECK(back.lambda_sharp == dp.lambda_sharp);
  CHECK((back.phi1 - dp.phi1).norm() == 0.0);
  CHECK((back.phi2 - dp.phi2).norm() == 0.0);
  CHECK(json_cplx(cplx_json(cplx(1.5, -2.25))) == cplx(1.5, -2.25));
}

TEST_CASE("scaling CSV has the documented header") {
  SimulationReport rep;
  ScalingRow row;
  row.delta = 0.5;
  row.t_final = 2.0;
  row.sup_relative = 0.1;
  rep.rows.push_back(row);
  const auto dir = scratch_dir("csv");
  const auto path = (dir / "scaling.csv").string();
  write_scaling_csv(path, rep);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "delta,t_final,sup_rel_err,t_theory,capped,sup_rel_grad");
  std::filesystem::remove_all(dir);
}
