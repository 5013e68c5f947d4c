#include "rlab/flow.hpp"

#include <cmath>
#include <cstdio>

#include "rlab/fft.hpp"
#include "rlab/norms.hpp"
#include "rlab/symbol.hpp"

namespace rlab {

namespace {

constexpr double kBlowupDrift = 0.05;
constexpr int kTaylorTerms = 4;

Eigen::ArrayXd real_part(const Field& w) { return w.physical().data().real(); }

// Per-mode xi_j on axis j. The Nyquist mode is kept so that d_j^2 sums to
// exactly -|xi|^2 and the discrete H_A matches the discrete energy.
Eigen::ArrayXd derivative_wavenumber(const Grid& g, int axis) {
  Eigen::ArrayXd out(g.size());
  for_each_mode(g, [&](std::size_t i, double k1, double k2, double k3) {
    out[i] = axis == 0 ? k1 : axis == 1 ? k2 : k3;
  });
  return out;
}

void add_warning(std::vector<std::string>& w, const std::string& msg) {
  for (const auto& s : w)
    if (s == msg) return;
  w.push_back(msg);
}

} // namespace

int EvolveConfig::steps() const {
  if (!(t_start >= 1.0)) throw std::invalid_argument("t_start must be >= 1");
  if (!(t_end > t_start))
    throw std::invalid_argument("t_end must exceed t_start");
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (snapshot_stride < 1)
    throw std::invalid_argument("snapshot_stride must be >= 1");
  const double ratio = (t_end - t_start) / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9)
    throw std::invalid_argument("(t_end - t_start)/dt is not an integer");
  return static_cast<int>(rounded);
}

void BootstrapParams::validate() const {
  if (!(eps0 > 0.0)) throw std::invalid_argument("eps0 must be positive");
  if (!(amplification >= 1.0))
    throw std::invalid_argument("eps1 = A eps0 needs A >= 1");
}

BlowupError::BlowupError(double t, double d)
    : std::runtime_error([&] {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "blowup guard: L2 norm drifted by %.3g in one step at "
                      "t = %.6g",
                      d, t);
        return std::string(buf);
      }()),
      time(t),
      drift(d) {}

PotentialOperator::PotentialOperator(FlowKind kind, const PotentialSet& ps)
    : grid_(ps.grid()),
      kind_(kind),
      zero_(ps.is_zero()),
      magnetic_(ps.has_magnetic()) {
  validate(ps);
  V_ = real_part(ps.V);
  for (int j = 0; j < 3; ++j) {
    a_[j] = real_part(ps.a[j]);
    k_[j] = derivative_wavenumber(grid_, j);
    if (kind_ == FlowKind::hamiltonian) V_ += a_[j].square();
  }
}

Eigen::ArrayXcd PotentialOperator::apply(const Eigen::ArrayXcd& uhat) const {
  const Complex I(0.0, 1.0);
  Eigen::ArrayXcd u = uhat;
  detail::inverse_inplace(grid_, u);
  Eigen::ArrayXcd out = V_ * u;
  Eigen::ArrayXcd extra_hat;
  if (magnetic_) {
    for (int j = 0; j < 3; ++j) {
      Eigen::ArrayXcd d = I * k_[j] * uhat;
      detail::inverse_inplace(grid_, d);
      if (kind_ == FlowKind::hamiltonian) {
        // i (A_j d_j u + d_j (A_j u)), the second piece finished in frequency.
        out += I * a_[j] * d;
        Eigen::ArrayXcd au = a_[j] * u;
        detail::forward_inplace(grid_, au);
        au *= -k_[j];
        if (extra_hat.size() == 0)
          extra_hat = au;
        else
          extra_hat += au;
      } else {
        out += a_[j] * d;
      }
    }
  }
  detail::forward_inplace(grid_, out);
  if (extra_hat.size() != 0) out += extra_hat;
  return out;
}

Eigen::ArrayXcd PotentialOperator::apply_tag(int tag,
                                             const Eigen::ArrayXcd& uhat) const {
  if (tag < 0 || tag > 3) throw std::invalid_argument("tag must be 0..3");
  Eigen::ArrayXcd u;
  if (tag == 0) {
    u = uhat;
    detail::inverse_inplace(grid_, u);
    u *= V_;
  } else {
    u = Complex(0.0, 1.0) * k_[tag - 1] * uhat;
    detail::inverse_inplace(grid_, u);
    u *= a_[tag - 1];
  }
  detail::forward_inplace(grid_, u);
  return u;
}

SplitStepper::SplitStepper(FlowKind kind, const PotentialSet& ps,
                           Dealias dealias)
    : kind_(kind), op_(kind, ps) {
  mask_ = dealias == Dealias::two_thirds
              ? dealias_mask(op_.grid())
              : Eigen::ArrayXd::Ones(op_.grid().size());
}

void SplitStepper::refresh(double dt) {
  if (dt == cached_dt_ && full_.size() != 0) return;
  cached_dt_ = dt;
  full_ = propagator_multiplier(grid(), dt);
  half_ = propagator_multiplier(grid(), 0.5 * dt);
}

void SplitStepper::spatial(Eigen::ArrayXcd& uhat, double dt) const {
  if (!op_.magnetic()) {
    // A pure multiplication operator is exponentiated exactly.
    detail::inverse_inplace(grid(), uhat);
    uhat *= (Complex(0.0, -dt) * op_.scalar().cast<Complex>()).exp();
    detail::forward_inplace(grid(), uhat);
    return;
  }
  Eigen::ArrayXcd term = uhat;
  for (int m = 1; m < kTaylorTerms; ++m) {
    term = Complex(0.0, -dt / m) * op_.apply(term);
    uhat += term;
  }
}

Eigen::ArrayXcd SplitStepper::nonlinearity(const Eigen::ArrayXcd& uhat) const {
  Eigen::ArrayXcd u = mask_ * uhat;
  detail::inverse_inplace(grid(), u);
  u = u.square();
  detail::forward_inplace(grid(), u);
  return Complex(0.0, -1.0) * mask_ * u;
}

void SplitStepper::quadratic(Eigen::ArrayXcd& uhat, double dt) const {
  const Eigen::ArrayXcd k1 = nonlinearity(uhat);
  const Eigen::ArrayXcd k2 = nonlinearity(uhat + dt * k1);
  uhat += (0.5 * dt) * (k1 + k2);
}

void SplitStepper::step(Eigen::ArrayXcd& uhat, double dt) {
  refresh(dt);
  if (kind_ != FlowKind::nonlinear) {
    if (op_.is_zero()) {
      uhat *= full_;
      return;
    }
    uhat *= half_;
    spatial(uhat, dt);
    uhat *= half_;
    return;
  }
  uhat *= half_;
  if (!op_.is_zero()) spatial(uhat, 0.5 * dt);
  quadratic(uhat, dt);
  if (!op_.is_zero()) spatial(uhat, 0.5 * dt);
  uhat *= half_;
}

namespace {

struct Monitor {
  std::optional<BootstrapParams> params;
  const std::array<Field, 3>* A = nullptr;
  const Field* V = nullptr;
};

Evolution run_flow(FlowKind kind, const Field& u1, const PotentialSet& ps,
                   const EvolveConfig& cfg, const Monitor& mon) {
  require_same_grid(u1, ps.V);
  const int steps = cfg.steps();
  if (cfg.require_certificate && !ps.is_zero()) {
    const auto cert = certify(ps, ps.delta_target);
    if (!cert.pass)
      throw CertificationError(
          "potential set fails certification at delta = " +
          std::to_string(ps.delta_target));
  }
  if (mon.params) mon.params->validate();

  SplitStepper stepper(kind, ps, cfg.dealias);
  Evolution ev;
  if (mon.params) {
    BootstrapReport r;
    r.eps0 = mon.params->eps0;
    r.eps1 = mon.params->eps1();
    ev.bootstrap = r;
  }

  Eigen::ArrayXcd uhat = u1.frequency().data();
  const Grid& g = u1.grid();
  const double l3 = std::pow(g.length(), 3);
  auto norm_of = [&](const Eigen::ArrayXcd& d) {
    return std::sqrt(d.abs2().sum() / l3);
  };

  auto record = [&](double t) {
    Field u(g, Repr::frequency, uhat);
    ev.mass.push_back(norm_of(uhat));
    if (mon.A) ev.energy.push_back(hamiltonian_energy(u, *mon.A, *mon.V));
    if (ev.bootstrap) {
      auto& r = *ev.bootstrap;
      const double h10 = sobolev_norm(u, 10.0).value;
      const NormValue xn = x_norm(free_propagate(u, -t));
      for (const auto& w : xn.warnings) add_warning(ev.warnings, w);
      r.sup_h10 = std::max(r.sup_h10, h10);
      r.sup_x = std::max(r.sup_x, xn.value);
      if (!r.exited && (h10 > r.eps1 || xn.value > r.eps1)) {
        r.exited = true;
        r.exit_time = t;
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "bootstrap exit at t = %.6g: H10 %.4g, X %.4g, eps1 %.4g",
                      t, h10, xn.value, r.eps1);
        ev.warnings.emplace_back(buf);
      }
    }
    ev.trajectory.push_back(t, u.physical());
  };

  record(cfg.t_start);
  double prev = norm_of(uhat);
  for (int s = 1; s <= steps; ++s) {
    stepper.step(uhat, cfg.dt);
    const double t = cfg.t_start + s * cfg.dt;
    const double now = norm_of(uhat);
    const double drift = prev > 0.0 ? std::abs(now - prev) / prev : 0.0;
    if (!std::isfinite(now) || drift > kBlowupDrift) throw BlowupError(t, drift);
    prev = now;
    if (s % cfg.snapshot_stride == 0 || s == steps) record(t);
  }
  return ev;
}

} // namespace

Evolution evolve_linear(const Field& u1, const PotentialSet& ps,
                        const EvolveConfig& cfg) {
  return run_flow(FlowKind::linear, u1, ps, cfg, {});
}

Evolution evolve_nonlinear(const Field& u1, const PotentialSet& ps,
                           const EvolveConfig& cfg,
                           const std::optional<BootstrapParams>& bootstrap) {
  Monitor mon;
  mon.params = bootstrap;
  return run_flow(FlowKind::nonlinear, u1, ps, cfg, mon);
}

Evolution evolve_hamiltonian(const Field& u1, const std::array<Field, 3>& A,
                             const Field& V, EvolveConfig cfg) {
  PotentialSet ps{V.physical(),
                  {A[0].physical(), A[1].physical(), A[2].physical()},
                  0.0};
  cfg.require_certificate = false;
  Monitor mon;
  mon.A = &ps.a;
  mon.V = &ps.V;
  return run_flow(FlowKind::hamiltonian, u1, ps, cfg, mon);
}

double hamiltonian_energy(const Field& u, const std::array<Field, 3>& A,
                          const Field& V) {
  const Grid& g = u.grid();
  const Eigen::ArrayXcd uhat = u.frequency().data();
  Eigen::ArrayXcd phys = uhat;
  detail::inverse_inplace(g, phys);
  double sum = (real_part(V) * phys.abs2()).sum();
  for (int j = 0; j < 3; ++j) {
    Eigen::ArrayXcd d = Complex(0.0, 1.0) * derivative_wavenumber(g, j) * uhat;
    detail::inverse_inplace(g, d);
    d -= Complex(0.0, 1.0) * real_part(A[j]) * phys;
    sum += d.abs2().sum();
  }
  return 0.5 * sum * g.cell_volume();
}

Trajectory profile_of(const Trajectory& tr) {
  Trajectory out;
  for (std::size_t i = 0; i < tr.size(); ++i)
    out.push_back(tr.time(i),
                  free_propagate(tr.field(i), -tr.time(i)).physical());
  return out;
}

} // namespace rlab
