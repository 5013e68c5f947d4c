#include "rlab/duhamel.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "rlab/csv.hpp"
#include "rlab/flow.hpp"
#include "rlab/norms.hpp"
#include "rlab/symbol.hpp"

namespace rlab {

const char* to_string(PotentialTag t) {
  switch (t) {
    case PotentialTag::all: return "all";
    case PotentialTag::V: return "V";
    case PotentialTag::a1: return "a1";
    case PotentialTag::a2: return "a2";
    case PotentialTag::a3: return "a3";
  }
  return "?";
}

PotentialTag parse_potential_tag(const std::string& s) {
  if (s == "all") return PotentialTag::all;
  if (s == "V") return PotentialTag::V;
  if (s == "a1") return PotentialTag::a1;
  if (s == "a2") return PotentialTag::a2;
  if (s == "a3") return PotentialTag::a3;
  throw std::invalid_argument("unknown potential tag '" + s +
                              "' (expected all, V, a1, a2, a3)");
}

RefinementError::RefinementError(int n, double c, double f)
    : std::runtime_error([&] {
        char buf[192];
        std::snprintf(buf, sizeof(buf),
                      "Born term %d under-resolved in time: H10 %.6g at dt, "
                      "%.6g at dt/2",
                      n, c, f);
        return std::string(buf);
      }()),
      order(n),
      coarse(c),
      fine(f) {}

namespace {

int ladder_steps(double span, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const double r = span / dt;
  if (std::abs(r - std::round(r)) > 1e-9)
    throw std::invalid_argument("time span is not a whole number of dt steps");
  return static_cast<int>(std::round(r));
}

// Raw frequency samples of terms 0..N at time t.
std::vector<Eigen::ArrayXcd> advance_terms(const Field& u1,
                                           const PotentialSet& ps, int N,
                                           double t, double dt,
                                           const std::vector<PotentialTag>& tags) {
  if (N < 0) throw std::invalid_argument("order must be >= 0");
  if (!(t > 1.0)) throw std::invalid_argument("Born terms need t > 1");
  require_same_grid(u1, ps.V);
  const int steps = ladder_steps(t - 1.0, dt);
  const Grid& g = u1.grid();
  const PotentialOperator op(FlowKind::linear, ps);
  const Eigen::ArrayXcd P = propagator_multiplier(g, dt);
  const Complex half(0.0, -0.5 * dt);

  auto apply = [&](int level, const Eigen::ArrayXcd& v) {
    const PotentialTag tag = level - 1 < static_cast<int>(tags.size())
                                 ? tags[level - 1]
                                 : PotentialTag::all;
    switch (tag) {
      case PotentialTag::all: return op.apply(v);
      case PotentialTag::V: return op.apply_tag(0, v);
      case PotentialTag::a1: return op.apply_tag(1, v);
      case PotentialTag::a2: return op.apply_tag(2, v);
      case PotentialTag::a3: return op.apply_tag(3, v);
    }
    return op.apply(v);
  };

  std::vector<Eigen::ArrayXcd> T(N + 1,
                                 Eigen::ArrayXcd::Zero(static_cast<Eigen::Index>(g.size())));
  T[0] = u1.frequency().data();
  if (op.is_zero()) {
    for (int s = 0; s < steps; ++s) T[0] *= P;
    return T;
  }
  // B applied to the previous step's T_{n-1}, reused by the next order.
  std::vector<Eigen::ArrayXcd> B_old(N + 1);
  for (int n = 1; n <= N; ++n) B_old[n] = apply(n, T[n - 1]);
  for (int s = 0; s < steps; ++s) {
    T[0] *= P;
    for (int n = 1; n <= N; ++n) {
      T[n] = P * (T[n] + half * B_old[n]);
      Eigen::ArrayXcd B_new = apply(n, T[n - 1]);
      T[n] += half * B_new;
      B_old[n] = std::move(B_new);
    }
  }
  return T;
}

std::vector<DuhamelTerm> finish(const Grid& g, std::vector<Eigen::ArrayXcd> raw,
                                double t, const std::vector<PotentialTag>& tags) {
  std::vector<DuhamelTerm> out;
  for (std::size_t n = 0; n < raw.size(); ++n) {
    Field hat(g, Repr::frequency, std::move(raw[n]));
    DuhamelTerm term{0, {}, Field(g, Repr::physical), 0.0, 0.0};
    term.order = static_cast<int>(n);
    for (std::size_t m = 0; m < n; ++m)
      term.tags.push_back(m < tags.size() ? tags[m] : PotentialTag::all);
    term.h10 = sobolev_norm(hat, 10.0).value;
    term.x = term.h10 > 0.0 ? x_norm(free_propagate(hat, -t)).value : 0.0;
    term.field = hat.physical();
    out.push_back(std::move(term));
  }
  return out;
}

} // namespace

std::vector<DuhamelTerm> born_series(const Field& u1, const PotentialSet& ps,
                                     int N, double t, double dt,
                                     const BornOptions& opt) {
  auto coarse = advance_terms(u1, ps, N, t, dt, opt.tags);
  if (opt.check_refinement && !ps.is_zero()) {
    const auto fine = advance_terms(u1, ps, N, t, 0.5 * dt, opt.tags);
    const Grid& g = u1.grid();
    for (int n = 1; n <= N; ++n) {
      const Field a(g, Repr::frequency, coarse[n]);
      const Field b(g, Repr::frequency, fine[n]);
      const double nb = sobolev_norm(b, 10.0).value;
      const double diff = sobolev_norm(a - b, 10.0).value;
      if (nb > 0.0 && diff > 0.1 * nb)
        throw RefinementError(n, sobolev_norm(a, 10.0).value, nb);
    }
  }
  return finish(u1.grid(), std::move(coarse), t, opt.tags);
}

DuhamelTerm born_term(const Field& u1, const PotentialSet& ps, int n, double t,
                      double dt, const BornOptions& opt) {
  auto terms = born_series(u1, ps, n, t, dt, opt);
  return std::move(terms.back());
}

Field partial_sum(const std::vector<DuhamelTerm>& terms, int N) {
  if (terms.empty() || N < 0 || N >= static_cast<int>(terms.size()))
    throw std::out_of_range("partial sum order outside the computed terms");
  Field s = terms[0].field;
  for (int n = 1; n <= N; ++n) s += terms[n].field;
  return s;
}

namespace {

// exp of the least-squares slope of log(values[i]) against i, over i >= 1.
double geometric_rate(const std::vector<double>& v) {
  std::vector<double> xs, ys;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > 0.0)) return 0.0;
    xs.push_back(static_cast<double>(i));
    ys.push_back(std::log(v[i]));
  }
  if (xs.size() < 2) return 0.0;
  const double m = xs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return std::exp((m * sxy - sx * sy) / (m * sxx - sx * sx));
}

} // namespace

SeriesDecayReport series_decay_report(const Field& u1, const PotentialSet& ps,
                                      int N, double t, double dt,
                                      const BornOptions& opt) {
  if (N < 2) throw std::invalid_argument("decay report needs N >= 2");
  SeriesDecayReport r;
  r.terms = born_series(u1, ps, N, t, dt, opt);
  std::vector<double> h, x;
  for (const auto& term : r.terms) {
    SeriesDecayRow row;
    row.n = term.order;
    row.h10 = term.h10;
    row.x = term.x;
    if (term.order > 0) {
      const auto& prev = r.terms[term.order - 1];
      row.ratio = prev.h10 > 0.0 ? term.h10 / prev.h10 : 0.0;
      row.x_ratio = prev.x > 0.0 ? term.x / prev.x : 0.0;
    }
    h.push_back(term.h10);
    x.push_back(term.x);
    r.rows.push_back(row);
  }
  r.rate = geometric_rate(h);
  r.x_rate = geometric_rate(x);
  return r;
}

std::string SeriesDecayReport::csv() const {
  CsvTable t({"n", "h10_norm", "x_norm", "ratio"});
  for (const auto& row : rows)
    t.add_row(std::vector<double>{double(row.n), row.h10, row.x, row.ratio});
  return t.str();
}

WaveOperatorResult wave_operator(const Field& u1, const PotentialSet& ps,
                                 double T, double dt, double tau0,
                                 bool require_certificate) {
  require_same_grid(u1, ps.V);
  if (!(tau0 >= 1.0)) throw std::invalid_argument("tau0 must be >= 1");
  if (!(T >= 2.0 * tau0))
    throw std::invalid_argument("T must reach at least 2 tau0");
  if (require_certificate && !ps.is_zero() &&
      !certify(ps, ps.delta_target).pass)
    throw CertificationError("wave operator needs a certified potential set");
  const int steps = ladder_steps(T - 1.0, dt);

  std::vector<double> ladder;
  for (double tau = tau0; tau <= T * (1.0 + 1e-12); tau *= 2.0) {
    ladder_steps(tau - 1.0, dt);
    ladder.push_back(tau);
  }

  const Grid& g = u1.grid();
  SplitStepper stepper(FlowKind::linear, ps, Dealias::off);
  Eigen::ArrayXcd uhat = u1.frequency().data();
  std::vector<Field> profiles;
  std::size_t next = 0;
  auto capture = [&](double t) {
    profiles.push_back(free_propagate(Field(g, Repr::frequency, uhat), -t));
    ++next;
  };
  if (next < ladder.size() && std::abs(ladder[next] - 1.0) < 1e-12) capture(1.0);
  for (int s = 1; s <= steps; ++s) {
    stepper.step(uhat, dt);
    const double t = 1.0 + s * dt;
    if (next < ladder.size() && std::abs(t - ladder[next]) < 1e-9 * t)
      capture(t);
  }

  WaveOperatorResult r{
      free_propagate(Field(g, Repr::frequency, uhat), -T).physical(), {}, {},
      0.0, true, {}};
  const double scale = sobolev_norm(r.g, 10.0).value;
  for (std::size_t i = 0; i + 1 < profiles.size(); ++i) {
    r.tau.push_back(ladder[i]);
    r.distance.push_back(sobolev_norm(profiles[i + 1] - profiles[i], 10.0).value);
  }
  const bool trivial = [&] {
    for (double d : r.distance)
      if (d > 1e-13 * scale) return false;
    return true;
  }();
  if (trivial) return r;

  for (std::size_t i = 1; i < r.distance.size(); ++i)
    if (!(r.distance[i] < r.distance[i - 1])) r.converging = false;
  if (r.distance.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = r.distance.size();
    for (std::size_t i = 0; i < r.distance.size(); ++i) {
      const double lx = std::log(r.tau[i]);
      const double ly = std::log(std::max(r.distance[i], 1e-300));
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    r.exponent = -(m * sxy - sx * sy) / (m * sxx - sx * sx);
  }
  if (!r.converging)
    r.warnings.emplace_back(
        "Cauchy trace is not strictly decreasing: no convergence observed");
  return r;
}

std::string WaveOperatorResult::csv() const {
  CsvTable t({"tau", "cauchy_distance"});
  for (std::size_t i = 0; i < tau.size(); ++i)
    t.add_row(std::vector<double>{tau[i], distance[i]});
  return t.str();
}

DenominatorCheck regularized_denominator_check(double a, double beta,
                                               double tau_max, double dtau) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!(tau_max > 0.0) || !(dtau > 0.0))
    throw std::invalid_argument("tau_max and dtau must be positive");
  const long steps = std::lround(std::ceil(tau_max / dtau));
  const double h = tau_max / steps;
  const Complex z(a, beta);
  const Complex I(0.0, 1.0);
  // Trapezoid sum with the per-step phase advanced by recurrence.
  const Complex ratio = std::exp(I * h * z);
  Complex term(1.0, 0.0);
  Complex sum = 0.5 * term;
  for (long i = 1; i < steps; ++i) {
    if (i % 4096 == 0)
      term = std::exp(I * (static_cast<double>(i) * h) * z);
    else
      term *= ratio;
    sum += term;
  }
  sum += 0.5 * std::exp(I * tau_max * z);

  DenominatorCheck c;
  c.value = -I * h * sum;
  c.exact = 1.0 / z;
  c.residual = std::abs(c.value - c.exact);
  c.beta = beta;
  c.tau_max = tau_max;
  if (tau_max * beta < 5.0)
    c.warnings.emplace_back("tau_max * beta < 5: truncation of the tail is "
                            "not negligible");
  return c;
}

std::vector<DenominatorCheck> denominator_sweep(double a, double tau_max,
                                                double dtau) {
  std::vector<DenominatorCheck> out;
  for (double beta : {1e-1, 1e-2, 1e-3})
    out.push_back(regularized_denominator_check(
        a, beta, std::max(tau_max, 10.0 / beta), dtau));
  return out;
}

ResonanceSample resonance_sample(const Eigen::Vector3d& xi,
                                 const Eigen::Vector3d& eta, double beta) {
  if (beta < 0.0) throw std::invalid_argument("beta must be >= 0");
  ResonanceSample s;
  s.xi = xi;
  s.eta = eta;
  s.beta = beta;
  s.phase_pot = xi.squaredNorm() - eta.squaredNorm();
  s.phase_bilin = xi.squaredNorm() - eta.squaredNorm() - (xi - eta).squaredNorm();
  const double e2 = eta.squaredNorm();
  s.space_multiplier =
      e2 > 0.0 ? Eigen::Vector3d(eta / e2)
               : Eigen::Vector3d::Constant(std::numeric_limits<double>::infinity());
  s.phase_gradient = 2.0 * (xi - 2.0 * eta);
  return s;
}

double bilinear_phase_residual(const ResonanceSample& s) {
  return std::abs(s.phase_bilin - 2.0 * s.eta.dot(s.xi - s.eta));
}

const char* to_string(Resonance r) {
  switch (r) {
    case Resonance::nonresonant: return "nonresonant";
    case Resonance::space: return "space-resonant";
    case Resonance::time: return "time-resonant";
    case Resonance::space_time: return "space-time-resonant";
  }
  return "?";
}

Resonance resonance_classify(const Eigen::Vector3d& xi,
                             const Eigen::Vector3d& eta, double tol_space,
                             double tol_time) {
  const bool space = eta.norm() <= tol_space;
  const bool time =
      std::abs(xi.squaredNorm() - eta.squaredNorm()) <= tol_time;
  if (space && time) return Resonance::space_time;
  if (space) return Resonance::space;
  if (time) return Resonance::time;
  return Resonance::nonresonant;
}

} // namespace rlab
