#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ans/field_io.hpp"
#include "ans/reference.hpp"
#include "test_util.hpp"

using namespace ans;
using namespace ans::testutil;

TEST_CASE("forward transform: constant field is a pure DC mode") {
  Grid g = Grid::cubic(8);
  SpectralField f = field_of(g, [](double, double, double) { return 3.0; });
  CHECK(std::abs(f.mode(0, 0, 0) - cplx(3.0)) < 1e-13);
  f.mode(0, 0, 0) = 0.0;
  CHECK(max_coeff(f) < 1e-13);
}

TEST_CASE("forward transform: sin(x1) occupies modes (+-1,0,0)") {
  Grid g = Grid::cubic(8);
  SpectralField f =
      field_of(g, [](double x1, double, double) { return std::sin(x1); });
  CHECK(std::abs(f.mode(1, 0, 0) - cplx(0.0, -0.5)) < 1e-14);
  CHECK(std::abs(f.mode(-1, 0, 0) - cplx(0.0, 0.5)) < 1e-14);
  f.mode(1, 0, 0) = f.mode(-1, 0, 0) = 0.0;
  CHECK(max_coeff(f) < 1e-14);
}

TEST_CASE("forward/inverse round trip reproduces random data at 16^3") {
  Grid g = Grid::cubic(16);
  auto phys = random_physical(g, 42);
  SpectralField f = forward_transform(std::span<const double>(phys), g);
  auto back = inverse_transform_real(f);
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < phys.size(); ++i) {
    worst = std::max(worst, std::abs(back[i] - phys[i]));
    scale = std::max(scale, std::abs(phys[i]));
  }
  CHECK(worst / scale < 1e-12);
  CHECK(f.conjugate_symmetry_residual() < 1e-12);
}

TEST_CASE("forward transform agrees with the direct DFT oracle at 8^3") {
  Grid g = Grid::cubic(8);
  auto phys = random_physical(g, 7);
  SpectralField fast = forward_transform(std::span<const double>(phys), g);
  SpectralField slow = reference::dft_forward(phys, g);
  CHECK(max_coeff_diff(fast, slow) / max_coeff(slow) < 1e-12);
}

TEST_CASE("Parseval holds on random fields") {
  for (int n : {16, 32, 64}) {
    Grid g = Grid::cubic(n);
    auto phys = random_physical(g, 100 + n);
    SpectralField f = forward_transform(std::span<const double>(phys), g);
    double lhs = 0.0;
    for (double v : phys) lhs += v * v * g.cell_volume();
    double rhs = 0.0;
    for (const auto& c : f.coeffs) rhs += std::norm(c);
    rhs *= g.volume();
    CHECK(std::abs(lhs - rhs) / lhs < 1e-12);
  }
}

TEST_CASE("forward transform rejects mismatched sample arrays") {
  Grid g = Grid::cubic(8);
  std::vector<double> wrong(g.size() - 1);
  CHECK_THROWS_AS(forward_transform(std::span<const double>(wrong), g),
                  std::invalid_argument);
}

TEST_CASE("partial derivative: d1 sin(x1) = cos(x1) in coefficients") {
  Grid g = Grid::cubic(8);
  SpectralField f =
      field_of(g, [](double x1, double, double) { return std::sin(x1); });
  SpectralField df = partial_derivative(f, 1);
  SpectralField want =
      field_of(g, [](double x1, double, double) { return std::cos(x1); });
  CHECK(max_coeff_diff(df, want) < 1e-14);
}

TEST_CASE("partial derivative: d3 of an x3-independent field vanishes") {
  Grid g = Grid::cubic(8);
  SpectralField f = field_of(
      g, [](double x1, double x2, double) { return std::sin(x1 + 2 * x2); });
  CHECK(max_coeff(partial_derivative(f, 3)) < 1e-14);
}

TEST_CASE("partial derivatives commute coefficientwise") {
  Grid g = Grid::cubic(8);
  auto phys = random_physical(g, 9);
  SpectralField f = forward_transform(std::span<const double>(phys), g);
  SpectralField a = partial_derivative(partial_derivative(f, 1), 2);
  SpectralField b = partial_derivative(partial_derivative(f, 2), 1);
  CHECK(max_coeff_diff(a, b) == 0.0);
}

TEST_CASE("mixed norm: constant field on the (2pi)^3 box") {
  Grid g = Grid::cubic(8);
  SpectralField f = field_of(g, [](double, double, double) { return 1.0; });
  double want = std::pow(two_pi, 1.5);
  CHECK(mixed_norm(f, 2.0, 2.0) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("mixed norm factorizes on tensor products") {
  Grid g = Grid::cubic(16);
  auto gh = [](double x1, double x2) { return 1.5 + std::sin(x1) * std::cos(x2); };
  auto hv = [](double x3) { return 2.0 + std::cos(x3); };
  SpectralField f = field_of(
      g, [&](double x1, double x2, double x3) { return gh(x1, x2) * hv(x3); });
  double p_h = 4.0, q_v = 2.0;
  // Direct 2-D and 1-D factor norms via the rectangle rule.
  double nh = 0.0;
  for (int i1 = 0; i1 < g.n1; ++i1)
    for (int i2 = 0; i2 < g.n2; ++i2)
      nh += std::pow(std::abs(gh(g.x1(i1), g.x2(i2))), p_h) * g.dx1() * g.dx2();
  nh = std::pow(nh, 1.0 / p_h);
  double nv = 0.0;
  for (int i3 = 0; i3 < g.n3; ++i3)
    nv += std::pow(std::abs(hv(g.x3(i3))), q_v) * g.dx3();
  nv = std::pow(nv, 1.0 / q_v);
  CHECK(mixed_norm(f, p_h, q_v) == doctest::Approx(nh * nv).epsilon(1e-12));
}

TEST_CASE("mixed norm matches the nested-loop quadrature oracle") {
  Grid g = Grid::cubic(8);
  auto phys = random_physical(g, 17);
  SpectralField f = forward_transform(std::span<const double>(phys), g);
  auto pc = inverse_transform(f);
  for (auto [p, q] : {std::pair{4.0, 2.0}, {2.0, 2.0}, {inf, 2.0}, {3.0, inf}}) {
    double got = mixed_norm(f, p, q);
    double want =
        reference::mixed_norm_quadrature(std::span<const cplx>(pc), g, p, q);
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("mixed norm rejects exponents below one") {
  Grid g = Grid::cubic(8);
  SpectralField f(g);
  CHECK_THROWS_AS(mixed_norm(f, 0.5, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(mixed_norm(f, 2.0, 0.0), std::invalid_argument);
}

TEST_CASE("mixed norm (2,2) equals the spectral L2 norm") {
  Grid g = Grid::cubic(16);
  auto phys = random_physical(g, 23);
  SpectralField f = forward_transform(std::span<const double>(phys), g);
  CHECK(mixed_norm(f, 2.0, 2.0) == doctest::Approx(l2_norm(f)).epsilon(1e-10));
}

TEST_CASE("mixed norm is absolutely homogeneous") {
  Grid g = Grid::cubic(8);
  auto phys = random_physical(g, 29);
  SpectralField f = forward_transform(std::span<const double>(phys), g);
  double base = mixed_norm(f, 4.0, 2.0);
  SpectralField cf = f;
  cf *= -3.5;
  CHECK(mixed_norm(cf, 4.0, 2.0) == doctest::Approx(3.5 * base).epsilon(1e-14));
}

TEST_CASE("Leray projection annihilates pure gradients") {
  Grid g = Grid::cubic(16);
  SpectralField q = field_of(g, [](double x1, double x2, double x3) {
    return std::sin(x1) * std::cos(2 * x2) + std::sin(x3 + x1);
  });
  VectorField v;
  v.u1 = partial_derivative(q, 1);
  v.u2 = partial_derivative(q, 2);
  v.u3 = partial_derivative(q, 3);
  VectorField pv = leray_project(v);
  CHECK(max_coeff_diff(pv, VectorField(g)) < 1e-13);
}

TEST_CASE("Leray projection fixes divergence-free fields and is idempotent") {
  Grid g = Grid::cubic(16);
  VectorField v;
  v.u1 = forward_transform(std::span<const double>(random_physical(g, 1)), g);
  v.u2 = forward_transform(std::span<const double>(random_physical(g, 2)), g);
  v.u3 = forward_transform(std::span<const double>(random_physical(g, 3)), g);
  VectorField p1 = leray_project(v);
  CHECK(divergence_residual(p1) <= 1e-10);
  VectorField p2 = leray_project(p1);
  double scale = std::max({max_coeff(p1.u1), max_coeff(p1.u2), max_coeff(p1.u3)});
  CHECK(max_coeff_diff(p1, p2) / scale < 1e-12);
}

TEST_CASE("Leray projection is self-adjoint in L2") {
  Grid g = Grid::cubic(8);
  auto rand_vec = [&](std::uint64_t s) {
    VectorField v;
    v.u1 = forward_transform(std::span<const double>(random_physical(g, s)), g);
    v.u2 =
        forward_transform(std::span<const double>(random_physical(g, s + 1)), g);
    v.u3 =
        forward_transform(std::span<const double>(random_physical(g, s + 2)), g);
    return v;
  };
  VectorField v = rand_vec(31), w = rand_vec(41);
  double a = inner_product_l2(leray_project(v), w);
  double b = inner_product_l2(v, leray_project(w));
  CHECK(std::abs(a - b) / std::abs(a) < 1e-10);
}

TEST_CASE("dealias keeps the 2/3 ball and kills the top third") {
  Grid g = Grid::cubic(12);
  SpectralField f(g);
  f.mode(2, -3, 4) = cplx(1.0, 2.0);
  SpectralField d = dealias(f);
  CHECK(d.mode(2, -3, 4) == f.mode(2, -3, 4));

  SpectralField h(g);
  h.mode(g.n1 / 2 - 1, 0, 0) = 1.0;  // |m1| = 5 > 12/3
  CHECK(max_coeff(dealias(h)) == 0.0);
}

TEST_CASE("dealiased product matches the lattice convolution oracle at 8^3") {
  Grid g = Grid::cubic(8);
  BandWindow win{0.5, 2.0};
  SpectralField a = dealias(gen_random_scalar(g, 5, win, win, 1.0));
  SpectralField b = dealias(gen_random_scalar(g, 6, win, win, 1.0));
  auto pa = inverse_transform(a);
  auto pb = inverse_transform(b);
  aligned_vector<cplx> prod(g.size());
  for (std::size_t i = 0; i < prod.size(); ++i)
    prod[i] = pa[i].real() * pb[i].real();
  SpectralField fast = dealias(forward_transform(std::span<const cplx>(prod), g));
  SpectralField slow = dealias(reference::convolve(a, b));
  CHECK(max_coeff_diff(fast, slow) / max_coeff(slow) < 1e-10);
}

TEST_CASE("ANSF snapshots round trip and carry the documented header") {
  Grid g(8, 8, 8, two_pi, two_pi, 4.0);
  auto phys = random_physical(g, 77);
  SpectralField f = forward_transform(std::span<const double>(phys), g);
  auto path = std::filesystem::temp_directory_path() / "ans_test_field.ansf";
  write_ansf(f, path);
  SpectralField back = read_ansf(path);
  CHECK(back.grid == g);
  CHECK(max_coeff_diff(f, back) == 0.0);

  std::ifstream is(path, std::ios::binary);
  char magic[4];
  is.read(magic, 4);
  CHECK(std::string(magic, 4) == "ANSF");
  std::uint32_t version, n1;
  is.read(reinterpret_cast<char*>(&version), 4);
  is.read(reinterpret_cast<char*>(&n1), 4);
  CHECK(version == ansf_version);
  CHECK(n1 == 8);
  std::filesystem::remove(path);
}

TEST_CASE("vector ANSF round trip") {
  Grid g = Grid::cubic(8);
  BandWindow win{0.5, 2.0};
  VectorField v = gen_random_bandlimited(g, 11, win, win, 1.0);
  auto base = std::filesystem::temp_directory_path() / "ans_test_vec";
  write_ansf(v, base);
  VectorField back = read_ansf_vector(base);
  CHECK(max_coeff_diff(v, back) == 0.0);
  for (int c = 0; c < 3; ++c)
    std::filesystem::remove(base.string() + ".c" + std::to_string(c + 1) +
                            ".ansf");
}
