#include "honeycomb/field_io.hpp"

#include "honeycomb/errors.hpp"

#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>

namespace honeycomb {

namespace {

constexpr std::array<char, 8> kMagic{'H', 'C', 'F', 'I', 'E', 'L', 'D', '1'};

template <typename T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T take(std::ifstream& in, const std::string& path) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw DomainError("truncated field file " + path);
  return v;
}

}  // namespace

void write_field(const std::string& path, const FieldSnapshot& s) {
  const std::size_t n = static_cast<std::size_t>(s.n1) * s.n2;
  for (const auto& c : s.components) {
    if (c.size() != n) throw DomainError("field component does not match its dimensions");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("cannot write " + path);
  out.write(kMagic.data(), kMagic.size());
  put(out, static_cast<std::int32_t>(s.n1));
  put(out, static_cast<std::int32_t>(s.n2));
  put(out, static_cast<std::int32_t>(s.components.size()));
  for (const Vec2* v : {&s.step1, &s.step2}) {
    put(out, (*v)(0));
    put(out, (*v)(1));
  }
  put(out, s.delta);
  put(out, s.t);
  for (const auto& c : s.components) out.write(reinterpret_cast<const char*>(c.data()), c.size() * sizeof(cplx));
}

FieldSnapshot read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open field file " + path);
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw DomainError("not a field file: " + path);
  FieldSnapshot s;
  s.n1 = take<std::int32_t>(in, path);
  s.n2 = take<std::int32_t>(in, path);
  const auto nc = take<std::int32_t>(in, path);
  if (s.n1 <= 0 || s.n2 <= 0 || nc <= 0) throw DomainError("bad field dimensions in " + path);
  for (Vec2* v : {&s.step1, &s.step2}) {
    const double x = take<double>(in, path), y = take<double>(in, path);
    *v = Vec2(x, y);
  }
  s.delta = take<double>(in, path);
  s.t = take<double>(in, path);
  const std::size_t n = static_cast<std::size_t>(s.n1) * s.n2;
  for (int c = 0; c < nc; ++c) {
    std::vector<cplx> data(n);
    if (!in.read(reinterpret_cast<char*>(data.data()), n * sizeof(cplx))) {
      throw DomainError("truncated field file " + path);
    }
    s.components.push_back(std::move(data));
  }
  return s;
}

FieldSnapshot supercell_snapshot(const Supercell& cell, const SupercellField& field, double delta, double t) {
  FieldSnapshot s;
  s.n1 = cell.grid1();
  s.n2 = cell.grid2();
  s.step1 = cell.lattice().direct.v1 / cell.p();
  s.step2 = cell.lattice().direct.v2 / cell.p();
  s.delta = delta;
  s.t = t;
  std::vector<cplx> psi(field.u.size());
  for (int i = 0; i < s.n1; ++i) {
    for (int j = 0; j < s.n2; ++j) {
      const std::size_t u = static_cast<std::size_t>(i) * s.n2 + j;
      psi[u] = std::polar(1.0, cell.center().dot(cell.point(i, j))) * field.u[u];
    }
  }
  s.components.push_back(std::move(psi));
  return s;
}

FieldSnapshot envelope_snapshot(const EnvelopePair& env, double delta, double T) {
  FieldSnapshot s;
  s.n1 = env.grid.n1;
  s.n2 = env.grid.n2;
  s.step1 = env.grid.a1 / env.grid.n1;
  s.step2 = env.grid.a2 / env.grid.n2;
  s.delta = delta;
  s.t = T;
  s.components = {env.alpha1, env.alpha2};
  return s;
}

void write_density_slice_csv(const std::string& path, const Supercell& cell, const SupercellField& field, int row) {
  if (row < 0 || row >= cell.grid1()) throw DomainError("slice row outside the grid");
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw DomainError("cannot write " + path);
  std::fprintf(f, "x,y,density\n");
  for (int j = 0; j < cell.grid2(); ++j) {
    const Vec2 x = cell.point(row, j);
    std::fprintf(f, "%.17g,%.17g,%.17g\n", x(0), x(1), std::norm(field.u[static_cast<std::size_t>(row) * cell.grid2() + j]));
  }
  std::fclose(f);
}

void write_envelope_csv(const std::string& path, const EnvelopePair& env) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw DomainError("cannot write " + path);
  std::fprintf(f, "X1,X2,re_alpha1,im_alpha1,re_alpha2,im_alpha2\n");
  for (int i = 0; i < env.grid.n1; ++i) {
    for (int j = 0; j < env.grid.n2; ++j) {
      const std::size_t u = static_cast<std::size_t>(i) * env.grid.n2 + j;
      const Vec2 X = env.grid.centered_point(i, j);
      std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", X(0), X(1), env.alpha1[u].real(), env.alpha1[u].imag(),
                   env.alpha2[u].real(), env.alpha2[u].imag());
    }
  }
  std::fclose(f);
}

}  // namespace honeycomb
