#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "helpers.hpp"
#include "rlab/fft.hpp"
#include "rlab/snapshot.hpp"
#include "rlab/symbol.hpp"
#include "rlab/trajectory.hpp"

using namespace rlab;
using rlab::test::max_abs_diff;
using rlab::test::plane_wave;
using rlab::test::random_field;
using rlab::test::rel_diff;
constexpr double pi = std::numbers::pi;

TEST_CASE("make_grid: 2pi box carries integer modes") {
  const Grid g = make_grid(4, 2 * pi);
  std::set<double> modes;
  for (int i = 0; i < 4; ++i) modes.insert(g.wavenumber(i));
  CHECK(modes == std::set<double>{-2.0, -1.0, 0.0, 1.0});
}

TEST_CASE("make_grid: spacing on a 16 pi box") {
  const Grid g = make_grid(8, 16 * pi);
  CHECK(g.dx() == doctest::Approx(2 * pi).epsilon(1e-15));
  CHECK(g.dxi() == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(g.dx() * g.n() == 16 * pi);
}

TEST_CASE("make_grid: odd n is rejected") {
  CHECK_THROWS_WITH_AS(make_grid(5, 1.0), doctest::Contains("odd n"),
                       std::invalid_argument);
}

TEST_CASE("forward transform of zero is zero") {
  const Grid g(8, 2 * pi);
  const Field f(g, Repr::physical);
  CHECK(forward_transform(f).data().abs().maxCoeff() == 0.0);
}

TEST_CASE("forward transform of a pure mode is L^3 at that mode") {
  const Grid g(16, 10.0);
  const Field fh = forward_transform(plane_wave(g, 2, -3, 5));
  const double L3 = std::pow(g.length(), 3);
  const std::size_t at = g.index(2, 16 - 3, 5);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Complex expect = i == at ? Complex(L3, 0.0) : Complex(0.0);
    REQUIRE(std::abs(fh[i] - expect) <= 1e-10 * L3);
  }
}

TEST_CASE("forward transform of a Gaussian matches the continuum transform") {
  const Grid g(64, 40.0);
  const Field f = sample_physical(g, [](double x1, double x2, double x3) {
    return Complex(std::exp(-0.5 * (x1 * x1 + x2 * x2 + x3 * x3)));
  });
  const Field fh = forward_transform(f);
  double worst = 0.0;
  for_each_mode(g, [&](std::size_t i, double k1, double k2, double k3) {
    const double r2 = k1 * k1 + k2 * k2 + k3 * k3;
    if (r2 > 4.0) return;
    const double exact = std::pow(2 * pi, 1.5) * std::exp(-0.5 * r2);
    worst = std::max(worst, std::abs(fh[i] - exact) / exact);
  });
  CHECK(worst <= 1e-8);
}

TEST_CASE("Parseval and round trip") {
  for (int n : {8, 16, 32}) {
    const Grid g(n, 7.0);
    const Field f = random_field(g, 11 + n);
    const Field fh = forward_transform(f);
    const double phys = l2_norm_squared(f);
    CHECK(std::abs(l2_norm_squared(fh) - phys) <= 1e-12 * phys);
    CHECK(rel_diff(inverse_transform(fh), f) <= 1e-13);
  }
}

TEST_CASE("transforms enforce their input representation") {
  const Grid g(8, 1.0);
  CHECK_THROWS_AS(forward_transform(Field(g, Repr::frequency)), RepresentationError);
  CHECK_THROWS_AS(inverse_transform(Field(g, Repr::physical)), RepresentationError);
}

TEST_CASE("apply_symbol") {
  const Grid g(16, 2 * pi);
  const Field f = plane_wave(g, 3, 1, -2);
  CHECK(max_abs_diff(apply_symbol(f, symbols::identity()), f) <= 1e-13);
  const Field d = apply_symbol(f, symbols::coordinate(0));
  CHECK(max_abs_diff(d, Complex(3.0) * f) <= 1e-12);

  SUBCASE("singular symbol on an active zero mode names the mode") {
    const Field c = sample_physical(g, [](double, double, double) { return Complex(1.0); });
    try {
      apply_symbol(c, symbols::inverse_square());
      FAIL("expected SingularSymbolError");
    } catch (const SingularSymbolError& e) {
      CHECK(e.m1 == 0);
      CHECK(e.m2 == 0);
      CHECK(e.m3 == 0);
      CHECK(std::string(e.what()).find("(0,0,0)") != std::string::npos);
    }
  }
  SUBCASE("singular symbol is fine when mode 0 carries no data") {
    const Field single = sample_frequency(g, [](double k1, double k2, double k3) {
      return Complex(k1 == 3.0 && k2 == 1.0 && k3 == -2.0 ? 1.0 : 0.0);
    });
    const Field r = apply_symbol(single, symbols::inverse_square());
    CHECK(max_abs_diff(r, Complex(1.0 / 14.0) * single) <= 1e-15);
  }
}

TEST_CASE("free_propagate: identity, isometry and group law") {
  const Grid g(16, 12.0);
  const Field f = random_field(g, 3);
  CHECK(rel_diff(free_propagate(f, 0.0), f) <= 1e-13);
  const double m = std::sqrt(l2_norm_squared(f));
  for (double t : {0.3, -2.0, 17.5}) {
    const double mt = std::sqrt(l2_norm_squared(free_propagate(f, t)));
    CHECK(std::abs(mt - m) <= 1e-13 * m);
  }
  const Field a = free_propagate(free_propagate(f, 0.7), 1.9);
  CHECK(rel_diff(a, free_propagate(f, 2.6)) <= 1e-12);
}

TEST_CASE("half_derivative") {
  const Grid g(16, 2 * pi);
  const Field f = plane_wave(g, -4, 2, 1);
  CHECK(max_abs_diff(half_derivative(f, 0), Complex(2.0) * f) <= 1e-12);
  CHECK(max_abs_diff(half_derivative(f, 1), Complex(std::sqrt(2.0)) * f) <= 1e-12);

  const Field flat = plane_wave(g, 0, 3, 3);
  CHECK(half_derivative(flat, 0).data().abs().maxCoeff() <= 1e-12);

  const Field r = random_field(g, 5);
  const Field twice = half_derivative(half_derivative(r, 2), 2);
  CHECK(rel_diff(twice, apply_symbol(r, symbols::axis_power(2, 1.0))) <= 1e-12);
}

TEST_CASE("snapshots round-trip at single precision") {
  const Grid g(8, 3.0);
  const Field f = random_field(g, 9);
  const Field back = decode_snapshot(encode_snapshot(f));
  CHECK(back.grid() == g);
  CHECK(back.repr() == Repr::physical);
  CHECK(rel_diff(back, f) <= 1e-6);
  auto bytes = encode_snapshot(f);
  bytes[0] = 'X';
  CHECK_THROWS_AS(decode_snapshot(bytes), SnapshotError);
}

TEST_CASE("trajectory invariants and persistence") {
  const Grid g(8, 3.0);
  Trajectory tr;
  CHECK_THROWS_AS(tr.push_back(0.5, Field(g, Repr::physical)), std::invalid_argument);
  tr.push_back(1.0, random_field(g, 1));
  tr.push_back(1.5, random_field(g, 2));
  CHECK_THROWS_AS(tr.push_back(1.5, Field(g, Repr::physical)), std::invalid_argument);
  CHECK_THROWS_AS(tr.push_back(2.0, Field(Grid(16, 3.0), Repr::physical)), GridMismatch);
  const auto w = trapezoid_weights({1.0, 1.5, 2.5});
  CHECK(w[0] == 0.25);
  CHECK(w[1] == 0.75);
  CHECK(w[2] == 0.5);

  const auto dir = std::filesystem::temp_directory_path() / "rlab_traj_test";
  std::filesystem::remove_all(dir);
  save_trajectory(dir, tr, 1, "abc");
  const Trajectory back = load_trajectory(dir);
  REQUIRE(back.size() == 2);
  CHECK(back.time(1) == 1.5);
  CHECK(rel_diff(back.field(1), tr.field(1)) <= 1e-6);
  std::filesystem::remove_all(dir);
}
