#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "rlab/flow.hpp"
#include "rlab/norms.hpp"
#include "rlab/symbol.hpp"

using namespace rlab;
using rlab::test::max_abs_diff;
using rlab::test::rel_diff;
using rlab::test::smooth_random;
constexpr double pi = std::numbers::pi;

namespace {

Field bump(const Grid& g, double width, double tilt = 0.0) {
  return sample_physical(g, [&](double x1, double x2, double x3) {
    return std::exp(-(x1 * x1 + x2 * x2 + x3 * x3) / (2 * width * width)) *
           Complex(1.0, tilt * x1);
  });
}

PotentialSet weak_set(const Grid& g, double amp) {
  PotentialSet ps = PotentialSet::zero(g);
  ps.V = gaussian_potential(g, Eigen::Vector3d(1, 0, 0), 2.0, amp);
  ps.a[0] = gaussian_potential(g, Eigen::Vector3d(0, 1, 0), 2.0, amp);
  ps.a[1] = gaussian_potential(g, Eigen::Vector3d(0, 0, 1), 2.0, -amp);
  ps.a[2] = gaussian_potential(g, Eigen::Vector3d(-1, 0, 0), 2.0, 0.5 * amp);
  ps.delta_target = 1e6;
  return ps;
}

EvolveConfig config(double t_end, double dt, int stride = 1) {
  EvolveConfig c;
  c.t_end = t_end;
  c.dt = dt;
  c.snapshot_stride = stride;
  return c;
}

} // namespace

TEST_CASE("EvolveConfig validation") {
  CHECK_THROWS_AS(config(2.0, 0.3).steps(), std::invalid_argument);
  CHECK_THROWS_AS(config(0.5, 0.1).steps(), std::invalid_argument);
  EvolveConfig c = config(2.0, 0.1);
  c.t_start = 0.5;
  CHECK_THROWS_AS(c.steps(), std::invalid_argument);
  CHECK(config(2.0, 0.25).steps() == 4);
}

TEST_CASE("evolve_linear with zero potentials is the free flow, bit for bit") {
  const Grid g(16, 8 * pi);
  const Field u1 = bump(g, 2.0, 0.3);
  const auto ev = evolve_linear(u1, PotentialSet::zero(g), config(2.0, 0.125, 2));
  REQUIRE(ev.trajectory.size() == 5);
  for (std::size_t i = 0; i < ev.trajectory.size(); ++i) {
    const double t = ev.trajectory.time(i);
    const Field ref = free_propagate(u1, t - 1.0);
    CHECK(max_abs_diff(ev.trajectory.field(i), ref.physical()) <= 1e-10);
  }
}

TEST_CASE("one free step equals free_propagate exactly") {
  const Grid g(16, 8 * pi);
  const Field u1 = bump(g, 2.0);
  SplitStepper st(FlowKind::linear, PotentialSet::zero(g), Dealias::off);
  Eigen::ArrayXcd uh = u1.frequency().data();
  st.step(uh, 0.1);
  const Field ref = free_propagate(u1.frequency(), 0.1);
  CHECK((uh - ref.data()).abs().maxCoeff() == 0.0);
}

TEST_CASE("constant V is a global phase") {
  const Grid g(16, 8 * pi);
  const Field u1 = bump(g, 2.0, 0.2);
  PotentialSet ps = PotentialSet::zero(g);
  const double c = 0.7;
  ps.V.data().setConstant(c);
  EvolveConfig cfg = config(3.0, 0.05, 20);
  cfg.require_certificate = false;
  const auto ev = evolve_linear(u1, ps, cfg);
  for (std::size_t i = 0; i < ev.trajectory.size(); ++i) {
    const double t = ev.trajectory.time(i);
    Field ref = free_propagate(u1, t - 1.0).physical();
    ref *= std::exp(Complex(0.0, -c * (t - 1.0)));
    CHECK(max_abs_diff(ev.trajectory.field(i), ref) <= 1e-8);
  }
}

TEST_CASE("uncertified potentials are refused") {
  const Grid g(16, 8 * pi);
  PotentialSet ps = weak_set(g, 0.05);
  ps.delta_target = 1e-3;
  CHECK_THROWS_AS(evolve_linear(bump(g, 2.0), ps, config(1.5, 0.1)), CertificationError);
}

TEST_CASE("Strang self-convergence is second order") {
  const Grid g(16, 8 * pi);
  const Field u1 = bump(g, 2.0, 0.25);
  const PotentialSet ps = weak_set(g, 0.05);
  for (bool nonlinear : {false, true}) {
    auto terminal = [&](double dt) {
      const auto cfg = config(2.0, dt, 1000);
      const auto ev = nonlinear ? evolve_nonlinear(u1, ps, cfg) : evolve_linear(u1, ps, cfg);
      return ev.trajectory.fields().back();
    };
    const Field a = terminal(0.1), b = terminal(0.05), c = terminal(0.025);
    const double e1 = std::sqrt(l2_norm_squared(a - b));
    const double e2 = std::sqrt(l2_norm_squared(b - c));
    CAPTURE(nonlinear);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.2));
  }
}

TEST_CASE("evolve_nonlinear: zero stays zero, tiny data stays small") {
  const Grid g(16, 8 * pi);
  const auto zero = evolve_nonlinear(Field(g, Repr::physical), PotentialSet::zero(g),
                                     config(2.0, 0.1));
  for (const auto& f : zero.trajectory.fields()) CHECK(f.data().abs().maxCoeff() == 0.0);

  Field u1 = bump(g, 2.0);
  u1 *= Complex(1e-3);
  const double eps0 = sobolev_norm(u1, 10.0).value;
  const auto ev = evolve_nonlinear(u1, PotentialSet::zero(g), config(2.0, 0.05));
  for (const auto& f : ev.trajectory.fields())
    CHECK(sobolev_norm(f, 10.0).value <= 2.0 * eps0);
}

TEST_CASE("blowup guard trips on large data") {
  const Grid g(16, 8 * pi);
  Field u1 = bump(g, 1.0);
  u1 *= Complex(50.0);
  CHECK_THROWS_AS(evolve_nonlinear(u1, PotentialSet::zero(g), config(3.0, 0.05)),
                  BlowupError);
}

TEST_CASE("bootstrap monitor reports exits without clipping") {
  const Grid g(16, 8 * pi);
  const Field u1 = bump(g, 2.0, 0.2);
  BootstrapParams tight{1e-3, 1.0};
  const auto ev = evolve_nonlinear(u1, PotentialSet::zero(g), config(2.0, 0.1, 2), tight);
  REQUIRE(ev.bootstrap);
  CHECK(ev.bootstrap->exited);
  CHECK(ev.bootstrap->exit_time == 1.0);
  CHECK(ev.bootstrap->sup_h10 > ev.bootstrap->eps1);
  CHECK(ev.bootstrap->sup_h10 >= sobolev_norm(u1, 10.0).value * (1 - 1e-12));

  CHECK_THROWS_AS((BootstrapParams{0.0, 2.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((BootstrapParams{1.0, 0.5}).validate(), std::invalid_argument);
}

TEST_CASE("evolve_hamiltonian") {
  const Grid g(16, 8 * pi);
  const Field u1 = bump(g, 2.0, 0.3);
  const std::array<Field, 3> zeroA{Field(g, Repr::physical), Field(g, Repr::physical),
                                   Field(g, Repr::physical)};
  SUBCASE("A = 0, V = 0 is the free flow") {
    const auto ev = evolve_hamiltonian(u1, zeroA, Field(g, Repr::physical), config(2.0, 0.1, 5));
    for (std::size_t i = 0; i < ev.trajectory.size(); ++i)
      CHECK(max_abs_diff(ev.trajectory.field(i),
                         free_propagate(u1, ev.trajectory.time(i) - 1.0).physical()) <= 1e-10);
  }
  SUBCASE("mass and energy over 1000 steps") {
    const PotentialSet ps = weak_set(g, 0.1);
    const auto ev = evolve_hamiltonian(u1, ps.a, ps.V, config(11.0, 0.01, 50));
    double mass_drift = 0.0, energy_drift = 0.0;
    for (std::size_t i = 0; i < ev.mass.size(); ++i) {
      mass_drift = std::max(mass_drift, std::abs(ev.mass[i] - ev.mass[0]));
      energy_drift = std::max(energy_drift, std::abs(ev.energy[i] - ev.energy[0]));
    }
    CHECK(mass_drift <= 1e-6);
    CHECK(energy_drift <= 1e-5 * std::abs(ev.energy[0]));
    CHECK(ev.energy[0] == doctest::Approx(hamiltonian_energy(u1, ps.a, ps.V)).epsilon(1e-12));
  }
}

TEST_CASE("profile_of") {
  const Grid g(16, 8 * pi);
  const Field u1 = smooth_random(g, 4, 1.0, 2.0);
  const auto ev = evolve_linear(u1, PotentialSet::zero(g), config(3.0, 0.25, 2));
  const Trajectory prof = profile_of(ev.trajectory);
  const Field first = prof.field(0).physical();
  for (const auto& f : prof.fields()) CHECK(rel_diff(f.physical(), first) <= 1e-12);
  CHECK(rel_diff(first, free_propagate(u1, -1.0).physical()) <= 1e-12);
  for (const auto& f : prof.fields()) CHECK(std::isfinite(x_norm(f).value));
}
