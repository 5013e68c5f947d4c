#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "rlab/duhamel.hpp"
#include "rlab/flow.hpp"
#include "rlab/norms.hpp"
#include "rlab/symbol.hpp"

using namespace rlab;
using rlab::test::max_abs_diff;
using rlab::test::rel_diff;
constexpr double pi = std::numbers::pi;

namespace {

Field data(const Grid& g) {
  return sample_physical(g, [](double x1, double x2, double x3) {
    return std::exp(-(x1 * x1 + x2 * x2 + x3 * x3) / 8.0) * Complex(1.0, 0.25 * x1);
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

} // namespace

TEST_CASE("potential tags") {
  CHECK(parse_potential_tag("a2") == PotentialTag::a2);
  CHECK(std::string(to_string(PotentialTag::all)) == "all");
  CHECK_THROWS_AS(parse_potential_tag("b"), std::invalid_argument);
}

TEST_CASE("born_term: order 0 is the free evolution, higher orders vanish without potentials") {
  const Grid g(16, 8 * pi);
  const Field u1 = data(g);
  const PotentialSet zero = PotentialSet::zero(g);
  const auto t0 = born_term(u1, weak_set(g, 0.05), 0, 2.0, 0.1);
  CHECK(rel_diff(t0.field, free_propagate(u1, 1.0).physical()) <= 1e-12);
  for (int n : {1, 3}) {
    const auto t = born_term(u1, zero, n, 2.0, 0.1);
    CHECK(t.field.data().abs().maxCoeff() == 0.0);
    CHECK(t.h10 == 0.0);
  }
}

TEST_CASE("Born partial sums approach the linear flow geometrically") {
  const Grid g(16, 8 * pi);
  const Field u1 = data(g);
  const PotentialSet ps = weak_set(g, 0.01);
  const double t = 3.0;
  // Both sides are Richardson-extrapolated in dt so their O(dt^2) schemes
  // agree to well below the series tail.
  auto rich = [](const Field& coarse, const Field& fine) {
    return Complex(4.0 / 3.0) * fine - Complex(1.0 / 3.0) * coarse;
  };
  const auto sc = born_series(u1, ps, 4, t, 0.1);
  const auto sf = born_series(u1, ps, 4, t, 0.05);
  EvolveConfig cfg;
  cfg.t_end = t;
  cfg.dt = 0.1;
  cfg.snapshot_stride = 1000;
  cfg.dealias = Dealias::off;
  const Field lc = evolve_linear(u1, ps, cfg).trajectory.fields().back();
  cfg.dt = 0.05;
  const Field lf = evolve_linear(u1, ps, cfg).trajectory.fields().back();
  const Field ref = rich(lc.physical(), lf.physical());
  std::vector<double> err;
  for (int N = 0; N <= 4; ++N)
    err.push_back(sobolev_norm(rich(partial_sum(sc, N), partial_sum(sf, N)) - ref, 10.0).value);
  for (int N = 1; N <= 3; ++N) {
    CAPTURE(N);
    CHECK(err[N] < 0.5 * err[N - 1]);
  }
}

TEST_CASE("series_decay_report") {
  const Grid g(16, 8 * pi);
  const Field u1 = data(g);
  const auto zero = series_decay_report(u1, PotentialSet::zero(g), 3, 2.0, 0.1);
  for (const auto& row : zero.rows) CHECK(row.ratio == 0.0);
  CHECK(zero.rate == 0.0);

  const auto r = series_decay_report(u1, weak_set(g, 0.02), 3, 2.0, 0.1);
  REQUIRE(r.rows.size() == 4);
  CHECK(r.rate > 0.0);
  CHECK(r.rate < 1.0);
  CHECK(r.csv().rfind("n,h10_norm,x_norm,ratio\n", 0) == 0);
  CHECK_THROWS_AS(series_decay_report(u1, weak_set(g, 0.02), 1, 2.0, 0.1),
                  std::invalid_argument);
}

TEST_CASE("refinement guard trips on an unresolved step") {
  const Grid g(16, 8 * pi);
  CHECK_THROWS_AS(born_series(data(g), weak_set(g, 2.0), 2, 3.0, 0.5), RefinementError);
}

TEST_CASE("wave_operator with zero potentials returns the pulled-back datum") {
  const Grid g(16, 8 * pi);
  const Field u1 = data(g);
  const auto w = wave_operator(u1, PotentialSet::zero(g), 8.0, 0.25, 2.0);
  CHECK(rel_diff(w.g, free_propagate(u1, -1.0).physical()) <= 1e-12);
  for (double d : w.distance) CHECK(d <= 1e-12);
  CHECK(w.converging);
  CHECK(w.tau == std::vector<double>{2.0, 4.0});
  CHECK_THROWS_AS(wave_operator(u1, PotentialSet::zero(g), 3.0, 0.25, 2.0),
                  std::invalid_argument);
}

TEST_CASE("regularized denominators") {
  const auto a0 = regularized_denominator_check(0.0, 1.0, 30.0, 1e-3);
  CHECK(std::abs(a0.exact - Complex(0.0, -1.0)) <= 1e-15);
  CHECK(a0.residual <= 1e-6);

  const auto a3 = regularized_denominator_check(3.0, 0.1, 200.0, 1e-3);
  CHECK(std::abs(a3.value - 1.0 / Complex(3.0, 0.1)) <= 1e-4);

  const auto sweep = denominator_sweep(2.0, 20.0, 1e-2);
  REQUIRE(sweep.size() == 3);
  for (const auto& s : sweep) CHECK(s.residual <= 1e-3);
  CHECK(std::abs(sweep.back().value - 0.5) <= 1e-3);
  CHECK(sweep.back().tau_max >= 1e4);

  const auto short_run = regularized_denominator_check(2.0, 0.01, 10.0, 1e-2);
  CHECK_FALSE(short_run.warnings.empty());
  CHECK_THROWS_AS(regularized_denominator_check(1.0, 0.0, 1.0, 0.1), std::invalid_argument);
}

TEST_CASE("resonance classification") {
  using V = Eigen::Vector3d;
  CHECK(resonance_classify(V::Zero(), V::Zero(), 0.1, 0.1) == Resonance::space_time);
  CHECK(resonance_classify(V(1, 0, 0), V(0, 1, 0), 0.1, 0.1) == Resonance::time);
  CHECK(resonance_classify(V(2, 0, 0), V(1, 0, 0), 0.1, 0.1) == Resonance::nonresonant);

  const auto s = resonance_sample(V(1.0, 2.0, -0.5), V(0.3, -0.7, 1.1), 0.0);
  CHECK(bilinear_phase_residual(s) <= 1e-13);
  CHECK(s.phase_pot == doctest::Approx(5.25 - (0.09 + 0.49 + 1.21)));
  CHECK(std::isinf(resonance_sample(V(1, 0, 0), V::Zero(), 0.0).space_multiplier[0]));
}
