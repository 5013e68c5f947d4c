#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "rlab/bands.hpp"
#include "rlab/norms.hpp"
#include "rlab/symbol.hpp"

using namespace rlab;
using rlab::test::random_field;
using rlab::test::smooth_random;
constexpr double pi = std::numbers::pi;

namespace {

Field gaussian(const Grid& g, double s, Eigen::Vector3d shift = Eigen::Vector3d::Zero()) {
  return sample_physical(g, [&](double x1, double x2, double x3) {
    const double a = x1 - shift[0], b = x2 - shift[1], c = x3 - shift[2];
    return Complex(std::exp(-(a * a + b * b + c * c) / (2 * s * s)));
  });
}

// Quintic smoothstep derivative, the radial derivative of the band bump.
double chi_prime(double r) {
  constexpr double a = BandProfile::inner_radius, b = 1.04;
  if (r <= a || r >= b) return 0.0;
  const double s = (r - a) / (b - a);
  return -30.0 * s * s * (1.0 - s) * (1.0 - s) / (b - a);
}

double phi_prime(int k, double r) {
  const double scale = std::pow(1.1, -k);
  const double u = scale * r;
  return scale * (chi_prime(u / 1.1) / 1.1 - chi_prime(u));
}

} // namespace

TEST_CASE("lebesgue_norm closed forms") {
  const Grid box(8, 2.0);
  const Field one = sample_physical(box, [](double, double, double) { return Complex(1.0); });
  CHECK(lebesgue_norm(one, 1.0).value == doctest::Approx(8.0).epsilon(1e-14));

  const Grid g(64, 20.0);
  const Field f = sample_physical(g, [](double x1, double x2, double x3) {
    return Complex(std::exp(-(x1 * x1 + x2 * x2 + x3 * x3)));
  });
  CHECK(std::abs(lebesgue_norm(f, 2.0).value - std::pow(pi / 2, 0.75)) <= 1e-8);
  const double freq = std::sqrt(l2_norm_squared(f.frequency()));
  CHECK(std::abs(lebesgue_norm(f, 2.0).value - freq) <= 1e-12 * freq);
  CHECK(lebesgue_norm(f, kInf).value == doctest::Approx(1.0));
  CHECK_THROWS_AS(lebesgue_norm(f, 0.5), std::invalid_argument);
}

TEST_CASE("mixed_norm") {
  const Grid g(16, 6.0);
  SUBCASE("separable") {
    const Field f = sample_physical(g, [](double x1, double x2, double x3) {
      return Complex(std::exp(-x1 * x1) * (1.0 + x1 * x1),
                     0.0) * std::exp(-0.5 * (x2 * x2 + x3 * x3)) * Complex(1.0, x3);
    });
    const double dx = g.dx();
    const Eigen::ArrayXd x = g.coordinates();
    auto lp1 = [&](double p) {
      double s = 0.0;
      for (int i = 0; i < g.n(); ++i)
        s += std::pow(std::exp(-x[i] * x[i]) * (1.0 + x[i] * x[i]), p) * dx;
      return std::pow(s, 1.0 / p);
    };
    auto lq23 = [&](double q) {
      double s = 0.0;
      for (int i = 0; i < g.n(); ++i)
        for (int j = 0; j < g.n(); ++j)
          s += std::pow(std::exp(-0.5 * (x[i] * x[i] + x[j] * x[j])) *
                            std::sqrt(1.0 + x[j] * x[j]),
                        q) * dx * dx;
      return std::pow(s, 1.0 / q);
    };
    CHECK(std::abs(mixed_norm(f, 0, 3.0, 1.5).value - lp1(3.0) * lq23(1.5)) <= 1e-10);
  }
  SUBCASE("p = q is the Lebesgue norm") {
    const Field f = random_field(g, 2);
    for (double p : {1.0, 2.0, 4.0}) {
      const double l = lebesgue_norm(f, p).value;
      CHECK(std::abs(mixed_norm(f, 1, p, p).value - l) <= 1e-12 * l);
    }
  }
  SUBCASE("(1, 2) against nested loops") {
    const Field f = random_field(g, 3);
    const int n = g.n();
    const double dx = g.dx();
    double outer = 0.0;
    for (int i3 = 0; i3 < n; ++i3) {
      double inner = 0.0;
      for (int i1 = 0; i1 < n; ++i1)
        for (int i2 = 0; i2 < n; ++i2) inner += std::norm(f[g.index(i1, i2, i3)]) * dx * dx;
      outer += std::sqrt(inner) * dx;
    }
    CHECK(std::abs(mixed_norm(f, 2, 1.0, 2.0).value - outer) <= 1e-12 * outer);
  }
}

TEST_CASE("spacetime_norm") {
  const Grid g(16, 6.0);
  const Field f = random_field(g, 4);
  Trajectory flat;
  for (int i = 0; i <= 8; ++i) flat.push_back(1.0 + 0.25 * i, f);
  const double l3 = lebesgue_norm(f, 3.0).value;
  CHECK(std::abs(spacetime_norm(flat, 2.0, 3.0).value - std::sqrt(2.0) * l3) <= 1e-10);

  Trajectory varying;
  double biggest = 0.0;
  for (int i = 0; i < 4; ++i) {
    Field s = f;
    s *= Complex(1.0 + i * i);
    biggest = std::max(biggest, lebesgue_norm(s, 3.0).value);
    varying.push_back(1.0 + i, s);
  }
  CHECK(spacetime_norm(varying, kInf, 3.0).value == doctest::Approx(biggest).epsilon(1e-14));

  // Free flow of a band-limited datum: (2, 6) stabilizes under dt-halving.
  const Grid h(32, 40.0);
  const Field d = smooth_random(h, 7, 1.0, 2.0);
  auto value = [&](double dt) {
    Trajectory tr;
    const int steps = static_cast<int>(std::lround(2.0 / dt));
    for (int i = 0; i <= steps; ++i) tr.push_back(1.0 + i * dt, free_propagate(d, 1.0 + i * dt));
    return spacetime_norm(tr, 2.0, 6.0).value;
  };
  const double coarse = value(0.1), fine = value(0.05);
  CHECK(std::abs(coarse - fine) <= 0.01 * fine);
}

TEST_CASE("sobolev_norm") {
  const Grid g(16, 2 * pi);
  const Field r = random_field(g, 5);
  const double l2 = lebesgue_norm(r, 2.0).value;
  CHECK(std::abs(sobolev_norm(r, 0.0).value - l2) <= 1e-12 * l2);

  const Field mode = rlab::test::plane_wave(g, 1, -2, 2);
  const double ml2 = lebesgue_norm(mode, 2.0).value;
  CHECK(sobolev_norm(mode, 3.0).value ==
        doctest::Approx(std::pow(10.0, 1.5) * ml2).epsilon(1e-12));

  const Field bl = smooth_random(g, 6, 2.0, 1.0);
  const Field m = apply_symbol(bl, symbols::bessel(10.0));
  const double direct = std::sqrt(l2_norm_squared(m.frequency()));
  CHECK(std::abs(sobolev_norm(bl, 10.0).value - direct) <= 1e-12 * direct);
}

TEST_CASE("xi_gradient matches the analytic derivative of a Gaussian transform") {
  const Grid g(64, 40.0);
  const Field f = gaussian(g, 1.0);
  const Field d = xi_gradient(f, 0);
  double worst = 0.0;
  const double peak = std::pow(2 * pi, 1.5);
  for_each_mode(g, [&](std::size_t i, double k1, double k2, double k3) {
    const double r2 = k1 * k1 + k2 * k2 + k3 * k3;
    if (r2 > 4.0) return;
    const double exact = -k1 * peak * std::exp(-0.5 * r2);
    worst = std::max(worst, std::abs(d[i] - exact));
  });
  CHECK(worst <= 1e-8 * peak);
}

TEST_CASE("x_norm and x_prime_norm against the closed-form xi derivative") {
  const Grid g(64, 40.0);
  const Field f = gaussian(g, 1.0);
  const BandRange range = band_indices(g);
  const double peak = std::pow(2 * pi, 1.5);
  const double w = 1.0 / std::pow(g.length(), 3);
  double x_exact = 0.0, xp_exact = 0.0;
  const BandProfile bp;
  for (int k = range.lo; k <= range.hi; ++k) {
    double sx = 0.0, sxp = 0.0;
    for_each_mode(g, [&](std::size_t, double k1, double k2, double k3) {
      const double r = std::sqrt(k1 * k1 + k2 * k2 + k3 * k3);
      const double fh = peak * std::exp(-0.5 * r * r);
      const double pk = bp.band(k, r);
      // grad (P_k fhat) = (phi_k'(r) / r - P_k) xi fhat for this radial fhat.
      const double radial = r > 0.0 ? phi_prime(k, r) / r : 0.0;
      sx += std::pow((radial - pk) * fh, 2) * r * r;
      sxp += std::pow(pk * fh, 2) * r * r;
    });
    x_exact = std::max(x_exact, std::sqrt(sx * w));
    xp_exact = std::max(xp_exact, std::sqrt(sxp * w));
  }
  CHECK(std::abs(x_prime_norm(f).value - xp_exact) <= 1e-8 * xp_exact);
  CHECK(std::abs(x_norm(f).value - x_exact) <= 1e-8 * x_exact);
}

TEST_CASE("x norms of zero vanish") {
  const Grid g(16, 10.0);
  CHECK(x_norm(Field(g, Repr::physical)).value == 0.0);
  CHECK(x_prime_norm(Field(g, Repr::physical)).value == 0.0);
  CHECK(y_norm(Field(g, Repr::physical)).value == 0.0);
}

TEST_CASE("x_norm after a translation obeys the product-rule bound") {
  const Grid g(32, 30.0);
  const Field f = smooth_random(g, 9, 1.0, 1.5);
  const Eigen::Vector3d y(1.5, -0.75, 0.5);
  // f(x - y) has transform exp(-i y.xi) fhat.
  Field shifted = f.frequency();
  for_each_mode(g, [&](std::size_t i, double k1, double k2, double k3) {
    shifted.data()[i] *= std::exp(Complex(0.0, -(y[0] * k1 + y[1] * k2 + y[2] * k3)));
  });
  const double l2 = lebesgue_norm(f, 2.0).value;
  CHECK(x_norm(shifted).value <= y.norm() * l2 + x_norm(f).value + 1e-10);
}

TEST_CASE("x_prime_norm <= 3 x_norm on random localized fields") {
  const Grid g(16, 24.0);
  double worst = 0.0;
  for (int s = 0; s < 50; ++s) {
    const Field f = smooth_random(g, 100 + s, 1.0, 1.0 + 0.05 * s);
    worst = std::max(worst, x_prime_norm(f).value / x_norm(f).value);
  }
  MESSAGE("max x'/x ratio " << worst);
  CHECK(worst <= 3.0);
}

TEST_CASE("y_norm of a separable bump") {
  const Grid g(64, 40.0);
  const double s1 = 1.0, s2 = 1.5, s3 = 0.8;
  const Field w = sample_physical(g, [&](double x1, double x2, double x3) {
    return Complex(std::exp(-x1 * x1 / (2 * s1 * s1) - x2 * x2 / (2 * s2 * s2) -
                            x3 * x3 / (2 * s3 * s3)));
  });
  const double r = std::sqrt(2 * pi);
  const double exact = r * s1 * r * s2 * r * s3 + 1.0 + std::sqrt(r * s1) +
                       std::sqrt(r * s2) + std::sqrt(r * s3);
  CHECK(std::abs(y_norm(w).value - exact) <= 1e-8);

  for (double lambda : {1.0, 2.0, 7.5}) {
    Field scaled = w;
    scaled *= Complex(lambda);
    CHECK(y_norm(scaled).value <= lambda * y_norm(w).value * (1 + 1e-14));
  }
}

TEST_CASE("plane accumulator agrees with mixed_norm on one snapshot") {
  const Grid g(16, 6.0);
  const Field f = random_field(g, 21);
  PlaneAccumulator acc(g, 1, 2.0);
  acc.add(f, 1.0);
  CHECK(acc.norm(kInf) == doctest::Approx(mixed_norm(f, 1, kInf, 2.0).value).epsilon(1e-12));
  CHECK(acc.norm(4.0) == doctest::Approx(mixed_norm(f, 1, 4.0, 2.0).value).epsilon(1e-12));
  CHECK_THROWS_AS(acc.add(Field(Grid(8, 6.0), Repr::physical), 1.0), GridMismatch);
}

TEST_CASE("boundary mass warning fires for fields reaching the box edge") {
  const Grid g(16, 10.0);
  const Field edge = gaussian(g, 1.0, Eigen::Vector3d(-4.5, 0, 0));
  CHECK(boundary_mass_fraction(edge) > kBoundaryMassTolerance);
  CHECK_FALSE(x_norm(edge).warnings.empty());
  CHECK(x_norm(gaussian(g, 0.5)).warnings.empty());
}
