#include "ans/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace ans {

static_assert(std::endian::native == std::endian::little,
              "ANSF I/O assumes a little-endian host");

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_f64(std::ostream& os, double v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
std::uint32_t get_u32(std::istream& is) {
  std::uint32_t v;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}
double get_f64(std::istream& is) {
  double v;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

}  // namespace

void write_ansf(const SpectralField& f, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  const Grid& g = f.grid;
  os.write("ANSF", 4);
  put_u32(os, ansf_version);
  put_u32(os, static_cast<std::uint32_t>(g.n1));
  put_u32(os, static_cast<std::uint32_t>(g.n2));
  put_u32(os, static_cast<std::uint32_t>(g.n3));
  put_f64(os, g.L1);
  put_f64(os, g.L2);
  put_f64(os, g.L3);
  auto lo = [](int n) { return n == 1 ? 0 : -n / 2; };
  auto hi = [](int n) { return n == 1 ? 0 : n / 2 - 1; };
  for (int m1 = lo(g.n1); m1 <= hi(g.n1); ++m1)
    for (int m2 = lo(g.n2); m2 <= hi(g.n2); ++m2)
      for (int m3 = lo(g.n3); m3 <= hi(g.n3); ++m3) {
        cplx c = f.mode(m1, m2, m3);
        put_f64(os, c.real());
        put_f64(os, c.imag());
      }
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

SpectralField read_ansf(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "ANSF", 4) != 0)
    throw std::runtime_error("not an ANSF file: " + path.string());
  std::uint32_t version = get_u32(is);
  if (version != ansf_version)
    throw std::runtime_error("unsupported ANSF version");
  int n1 = static_cast<int>(get_u32(is));
  int n2 = static_cast<int>(get_u32(is));
  int n3 = static_cast<int>(get_u32(is));
  double L1 = get_f64(is), L2 = get_f64(is), L3 = get_f64(is);
  Grid g(n1, n2, n3, L1, L2, L3);
  SpectralField f(g);
  auto lo = [](int n) { return n == 1 ? 0 : -n / 2; };
  auto hi = [](int n) { return n == 1 ? 0 : n / 2 - 1; };
  for (int m1 = lo(g.n1); m1 <= hi(g.n1); ++m1)
    for (int m2 = lo(g.n2); m2 <= hi(g.n2); ++m2)
      for (int m3 = lo(g.n3); m3 <= hi(g.n3); ++m3) {
        double re = get_f64(is), im = get_f64(is);
        f.mode(m1, m2, m3) = cplx(re, im);
      }
  if (!is) throw std::runtime_error("truncated ANSF file: " + path.string());
  return f;
}

void write_ansf(const VectorField& v, const std::filesystem::path& base) {
  for (int c = 0; c < 3; ++c) {
    std::filesystem::path p = base;
    p += ".c" + std::to_string(c + 1) + ".ansf";
    write_ansf(v.comp(c), p);
  }
}

VectorField read_ansf_vector(const std::filesystem::path& base) {
  VectorField v;
  for (int c = 0; c < 3; ++c) {
    std::filesystem::path p = base;
    p += ".c" + std::to_string(c + 1) + ".ansf";
    SpectralField f = read_ansf(p);
    v.comp(c) = std::move(f);
  }
  if (!(v.u1.grid == v.u2.grid && v.u2.grid == v.u3.grid))
    throw std::runtime_error("vector components have mismatched grids");
  return v;
}

}  // namespace ans
