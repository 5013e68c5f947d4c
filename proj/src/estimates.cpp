#include "rlab/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "rlab/bands.hpp"
#include "rlab/csv.hpp"
#include "rlab/fft.hpp"
#include "rlab/flow.hpp"
#include "rlab/norms.hpp"
#include "rlab/parallel.hpp"
#include "rlab/symbol.hpp"

namespace rlab {

bool admissible(double p, double q) {
  if (std::isnan(p) || std::isnan(q)) return false;
  if (p < 2.0 || q < 2.0) return false;
  const double ip = std::isinf(p) ? 0.0 : 1.0 / p;
  const double iq = std::isinf(q) ? 0.0 : 1.0 / q;
  return std::abs(2.0 * ip + 3.0 * iq - 1.5) <= 1e-12;
}

bool admissible(const AdmissiblePair& pair) {
  return admissible(pair.p, pair.q);
}

double dual_exponent(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("exponent must be >= 1");
  if (std::isinf(p)) return 1.0;
  if (p == 1.0) return kInf;
  return p / (p - 1.0);
}

std::string EstimateReport::csv() const {
  CsvTable t({"sample", "ratio"});
  for (std::size_t i = 0; i < ratios.size(); ++i)
    t.add_row(std::vector<double>{double(i), ratios[i]});
  return t.str();
}

void to_json(nlohmann::json& j, const EstimateReport& r) {
  j = nlohmann::json{{"estimate_id", r.estimate_id},
                     {"sample_count", r.sample_count},
                     {"max_ratio", r.max_ratio},
                     {"median_ratio", r.median_ratio},
                     {"sample_class", r.sample_class},
                     {"metadata", r.metadata},
                     {"warnings", r.warnings},
                     {"ratios", r.ratios}};
}

std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over the combined key.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

Eigen::ArrayXd band_table(const Grid& g, int k) {
  const BandProfile profile;
  Eigen::ArrayXd t(g.size());
  for_each_mode(g, [&](std::size_t i, double k1, double k2, double k3) {
    t[i] = profile.band(k, std::sqrt(k1 * k1 + k2 * k2 + k3 * k3));
  });
  return t;
}

Eigen::ArrayXd axis_power_table(const Grid& g, int axis, double power) {
  Eigen::ArrayXd t(g.size());
  for_each_mode(g, [&](std::size_t i, double k1, double k2, double k3) {
    const double k = axis == 0 ? k1 : axis == 1 ? k2 : k3;
    t[i] = power == 0.0 ? 1.0 : std::pow(std::abs(k), power);
  });
  return t;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

EstimateReport make_report(const std::string& id, const HarnessConfig& cfg,
                           std::vector<double> ratios) {
  EstimateReport r;
  r.estimate_id = id;
  r.sample_count = static_cast<int>(ratios.size());
  r.ratios = std::move(ratios);
  r.max_ratio = r.ratios.empty()
                    ? 0.0
                    : *std::max_element(r.ratios.begin(), r.ratios.end());
  r.median_ratio = median_of(r.ratios);
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "complex Gaussian white noise under a Gaussian envelope of "
                "width %g, flat spectrum on bands %d..%d, unit L2 norm",
                cfg.envelope, cfg.band_lo, cfg.band_hi);
  r.sample_class = buf;
  r.metadata = {{"grid_n", cfg.n},        {"box_length", cfg.length},
                {"dx", cfg.length / cfg.n}, {"t_start", 1.0},
                {"t_end", cfg.t_end},     {"dt", cfg.dt},
                {"seed", cfg.seed},       {"axis", cfg.axis},
                {"band_lo", cfg.band_lo}, {"band_hi", cfg.band_hi}};
  r.metadata["note"] =
      "ratios are empirical lower bounds on the best constant; sups are "
      "grid and time-ladder maxima";
  return r;
}

// Rejects horizons past the wrap-around time of the harness samples.
void check_horizon(const HarnessConfig& base, double horizon) {
  HarnessConfig cfg = base;
  cfg.scale = 1.0;
  const Grid g = cfg.grid();
  const Field f = harness_sample(cfg, 0);
  const double xi_max =
      std::pow(BandProfile::base, cfg.band_hi) * BandProfile::outer_radius;
  const double wrap = wraparound_time(g, xi_max, mass_radius(f, cfg.wrap_tail));
  if (horizon > wrap) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "horizon t = %.4g exceeds the wrap-around time %.4g", horizon,
                  wrap);
    throw HorizonError(buf);
  }
}

int ladder_size(double t_end, double dt) {
  if (!(t_end > 1.0) || !(dt > 0.0))
    throw std::invalid_argument("time ladder needs t_end > 1 and dt > 0");
  const double r = (t_end - 1.0) / dt;
  if (std::abs(r - std::round(r)) > 1e-9)
    throw std::invalid_argument("(t_end - 1)/dt is not an integer");
  return static_cast<int>(std::round(r)) + 1;
}

// Calls fn(step, t, weight, uhat) with uhat = exp(it Laplacian) f in
// frequency form along the ladder t = 1 + step dt.
template <class Fn>
void sweep_free(const Field& f, double t_end, double dt, Fn&& fn) {
  const int m = ladder_size(t_end, dt);
  std::vector<double> times(m);
  for (int i = 0; i < m; ++i) times[i] = 1.0 + i * dt;
  const auto w = trapezoid_weights(times);
  const Grid& g = f.grid();
  const Eigen::ArrayXcd step = propagator_multiplier(g, dt);
  Eigen::ArrayXcd uhat = f.frequency().data() * propagator_multiplier(g, 1.0);
  for (int i = 0; i < m; ++i) {
    if (i) uhat *= step;
    fn(i, times[i], w[i], uhat);
  }
}

double lq_of_raw(const Grid& g, const Eigen::ArrayXcd& phys, double q) {
  if (std::isinf(q)) return phys.abs().maxCoeff();
  double s;
  if (q == 2.0)
    s = phys.abs2().sum();
  else if (q == 4.0)
    s = phys.abs2().square().sum();
  else if (q == 6.0)
    s = phys.abs2().cube().sum();
  else if (q == 3.0)
    s = phys.abs().cube().sum();
  else
    s = phys.abs().pow(q).sum();
  return std::pow(s * g.cell_volume(), 1.0 / q);
}

double time_norm(const std::vector<double>& values,
                 const std::vector<double>& weights, double p) {
  if (std::isinf(p)) return *std::max_element(values.begin(), values.end());
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    s += weights[i] * std::pow(values[i], p);
  return std::pow(s, 1.0 / p);
}

std::vector<double> ladder_weights(double t_end, double dt) {
  const int m = ladder_size(t_end, dt);
  std::vector<double> times(m);
  for (int i = 0; i < m; ++i) times[i] = 1.0 + i * dt;
  return trapezoid_weights(times);
}

} // namespace

Field harness_sample(const HarnessConfig& cfg, std::uint64_t index) {
  const Grid g = cfg.grid();
  if (cfg.band_hi < cfg.band_lo)
    throw std::invalid_argument("band_hi must be >= band_lo");
  std::mt19937_64 rng(sample_seed(cfg.seed, index));
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const double s = 1.0 / (2.0 * cfg.envelope * cfg.envelope);
  Field noise = sample_physical(g, [&](double x1, double x2, double x3) {
    const double env = std::exp(-s * (x1 * x1 + x2 * x2 + x3 * x3));
    const double re = normal(rng);
    const double im = normal(rng);
    return Complex(re, im) * env;
  });
  const Field hat = noise.frequency();
  Eigen::ArrayXd window = Eigen::ArrayXd::Zero(g.size());
  for (int k = cfg.band_lo; k <= cfg.band_hi; ++k) window += band_table(g, k);
  const Eigen::ArrayXcd sum = hat.data() * window;
  Field out(g, Repr::frequency, sum);
  const double m = std::sqrt(l2_norm_squared(out));
  if (m > 0.0) out *= cfg.scale / m;
  return out.physical();
}

Field smooth_random_packet(const Grid& g, std::uint64_t seed, double width,
                           double cutoff) {
  if (!(width > 0.0) || !(cutoff > 0.0))
    throw std::invalid_argument("width and cutoff must be positive");
  std::mt19937_64 rng(sample_seed(seed, 0));
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const double s = 1.0 / (2.0 * width * width);
  Field noise = sample_physical(g, [&](double x1, double x2, double x3) {
    const double env = std::exp(-s * (x1 * x1 + x2 * x2 + x3 * x3));
    const double re = normal(rng);
    const double im = normal(rng);
    return Complex(re, im) * env;
  });
  Field hat = noise.frequency();
  hat.data() *= (-wavenumber_squared(g) / (2.0 * cutoff * cutoff)).exp();
  hat *= 1.0 / std::sqrt(l2_norm_squared(hat));
  return hat.physical();
}

double mass_radius(const Field& f, double tail) {
  const Field u = f.physical();
  std::vector<std::pair<double, double>> rm(u.grid().size());
  double total = 0.0;
  for_each_point(u.grid(), [&](std::size_t i, double x1, double x2, double x3) {
    const double m = std::norm(u.data()[i]);
    rm[i] = {std::sqrt(x1 * x1 + x2 * x2 + x3 * x3), m};
    total += m;
  });
  if (total == 0.0) return 0.0;
  std::sort(rm.begin(), rm.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  double outside = 0.0;
  for (const auto& [r, m] : rm) {
    outside += m;
    if (outside > tail * total) return r;
  }
  return 0.0;
}

double wraparound_time(const Grid& g, double max_frequency, double radius) {
  if (!(max_frequency > 0.0)) throw std::invalid_argument("frequency > 0");
  return std::max(0.0, 0.5 * g.length() - radius) / (2.0 * max_frequency);
}

Trajectory free_trajectory(const Field& f, double t_end, double dt) {
  Trajectory tr;
  sweep_free(f, t_end, dt,
             [&](int, double t, double, const Eigen::ArrayXcd& uhat) {
               tr.push_back(t, Field(f.grid(), Repr::frequency, uhat).physical());
             });
  return tr;
}

EstimateReport check_strichartz(const HarnessConfig& cfg, AdmissiblePair pair) {
  if (!admissible(pair))
    throw std::invalid_argument("pair is not Strichartz admissible");
  check_horizon(cfg, cfg.t_end);
  const Grid g = cfg.grid();
  const auto w = ladder_weights(cfg.t_end, cfg.dt);
  std::vector<double> ratios(cfg.samples);
  parallel_for(ratios.size(), [&](std::size_t s) {
    const Field f = harness_sample(cfg, s);
    std::vector<double> lq(w.size());
    sweep_free(f, cfg.t_end, cfg.dt,
               [&](int i, double, double, const Eigen::ArrayXcd& uhat) {
                 Eigen::ArrayXcd u = uhat;
                 detail::inverse_inplace(g, u);
                 lq[i] = lq_of_raw(g, u, pair.q);
               });
    const double fnorm = std::sqrt(l2_norm_squared(f));
    ratios[s] = fnorm > 0.0 ? time_norm(lq, w, pair.p) / fnorm : 0.0;
  });
  auto r = make_report("str1", cfg, std::move(ratios));
  r.metadata["p"] = pair.p;
  r.metadata["q"] = pair.q;
  return r;
}

namespace {

double smoothing_homogeneous(const HarnessConfig& cfg, const Field& f,
                             const Eigen::ArrayXd& mult, int* argmax,
                             double* plane_norm) {
  const Grid& g = f.grid();
  PlaneAccumulator acc(g, cfg.axis, 2.0);
  Eigen::ArrayXcd v(g.size());
  sweep_free(f, cfg.t_end, cfg.dt,
             [&](int, double, double w, const Eigen::ArrayXcd& uhat) {
               v = mult * uhat;
               detail::inverse_inplace(g, v);
               acc.add_physical(v, w);
             });
  if (argmax) *argmax = acc.argmax_plane();
  const double n = acc.norm(kInf);
  if (plane_norm) *plane_norm = n;
  return n;
}

// Physical field restricted to the plane x_axis index == plane.
void restrict_to_plane(const Grid& g, int axis, int plane,
                       Eigen::ArrayXcd& phys) {
  const int n = g.n();
  std::size_t idx = 0;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i3 = 0; i3 < n; ++i3, ++idx) {
        const int i = axis == 0 ? i1 : axis == 1 ? i2 : i3;
        if (i != plane) phys[idx] = 0.0;
      }
}

double time_bump(double t, double t_end) {
  const double s = std::sin(std::numbers::pi * (t - 1.0) / (t_end - 1.0));
  return s * s;
}

} // namespace

EstimateReport check_smoothing(const HarnessConfig& cfg,
                               SmoothingVariant variant, bool half_derivative) {
  check_horizon(cfg, cfg.t_end);
  const Grid g = cfg.grid();
  const double power =
      !half_derivative ? 0.0
                       : variant == SmoothingVariant::inhomogeneous ? 1.0 : 0.5;
  const Eigen::ArrayXd mult = axis_power_table(g, cfg.axis, power);
  const auto w = ladder_weights(cfg.t_end, cfg.dt);
  const double l3 = std::pow(g.length(), 3);
  std::vector<double> ratios(cfg.samples);

  parallel_for(ratios.size(), [&](std::size_t s) {
    const Field f = harness_sample(cfg, s);
    const double fnorm = std::sqrt(l2_norm_squared(f));
    if (fnorm == 0.0) {
      ratios[s] = 0.0;
      return;
    }
    switch (variant) {
      case SmoothingVariant::homogeneous:
        ratios[s] = smoothing_homogeneous(cfg, f, mult, nullptr, nullptr) / fnorm;
        break;
      case SmoothingVariant::dual: {
        // Forcing matched to the sample: the smoothed free wave on its
        // heaviest plane. The adjoint is exp(-it Laplacian) with the same
        // trapezoid weights.
        int plane = 0;
        double plane_norm = 0.0;
        smoothing_homogeneous(cfg, f, mult, &plane, &plane_norm);
        Eigen::ArrayXcd G = Eigen::ArrayXcd::Zero(g.size());
        sweep_free(f, cfg.t_end, cfg.dt,
                   [&](int i, double t, double, const Eigen::ArrayXcd& uhat) {
                     Eigen::ArrayXcd v = mult * uhat;
                     detail::inverse_inplace(g, v);
                     restrict_to_plane(g, cfg.axis, plane, v);
                     detail::forward_inplace(g, v);
                     G += w[i] * mult * propagator_multiplier(g, -t) * v;
                   });
        const double forcing = g.dx() * plane_norm;
        ratios[s] = forcing > 0.0
                        ? std::sqrt(G.abs2().sum() / l3) / forcing
                        : 0.0;
        break;
      }
      case SmoothingVariant::inhomogeneous: {
        const Eigen::ArrayXcd fhat = f.frequency().data();
        const Eigen::ArrayXcd P = propagator_multiplier(g, cfg.dt);
        PlaneAccumulator num(g, cfg.axis, 2.0);
        PlaneAccumulator den(g, cfg.axis, 2.0);
        Eigen::ArrayXcd wacc = Eigen::ArrayXcd::Zero(g.size());
        Eigen::ArrayXcd prevF = Eigen::ArrayXcd::Zero(g.size());
        for (std::size_t i = 0; i < w.size(); ++i) {
          const double t = 1.0 + i * cfg.dt;
          const Eigen::ArrayXcd F = time_bump(t, cfg.t_end) * fhat;
          if (i) wacc = P * (wacc + 0.5 * cfg.dt * prevF) + 0.5 * cfg.dt * F;
          prevF = F;
          Eigen::ArrayXcd v = mult * wacc;
          detail::inverse_inplace(g, v);
          num.add_physical(v, w[i]);
          den.add(Field(g, Repr::frequency, F), w[i]);
        }
        const double d = den.norm(1.0);
        ratios[s] = d > 0.0 ? num.norm(kInf) / d : 0.0;
        break;
      }
    }
  });
  const char* id = variant == SmoothingVariant::homogeneous ? "smo1"
                   : variant == SmoothingVariant::dual      ? "smo2"
                                                            : "smo3";
  auto r = make_report(id, cfg, std::move(ratios));
  r.metadata["derivative_power"] = power;
  return r;
}

EstimateReport check_smoothing_strichartz(const HarnessConfig& cfg,
                                          AdmissiblePair pair,
                                          double forcing_scale) {
  if (!admissible(pair))
    throw std::invalid_argument("pair is not Strichartz admissible");
  check_horizon(cfg, cfg.t_end);
  const Grid g = cfg.grid();
  const Eigen::ArrayXd mult = axis_power_table(g, cfg.axis, 0.5);
  const auto w = ladder_weights(cfg.t_end, cfg.dt);
  const double pd = dual_exponent(pair.p);
  const double qd = dual_exponent(pair.q);
  const Eigen::ArrayXcd P = propagator_multiplier(g, cfg.dt);
  std::vector<double> ratios(cfg.samples);
  parallel_for(ratios.size(), [&](std::size_t s) {
    const Eigen::ArrayXcd fhat =
        forcing_scale * harness_sample(cfg, s).frequency().data();
    PlaneAccumulator num(g, cfg.axis, 2.0);
    std::vector<double> lq(w.size());
    Eigen::ArrayXcd wacc = Eigen::ArrayXcd::Zero(g.size());
    Eigen::ArrayXcd prevF = Eigen::ArrayXcd::Zero(g.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double t = 1.0 + i * cfg.dt;
      const Eigen::ArrayXcd F = time_bump(t, cfg.t_end) * fhat;
      if (i) wacc = P * (wacc + 0.5 * cfg.dt * prevF) + 0.5 * cfg.dt * F;
      prevF = F;
      Eigen::ArrayXcd v = mult * wacc;
      detail::inverse_inplace(g, v);
      num.add_physical(v, w[i]);
      Eigen::ArrayXcd Fx = F;
      detail::inverse_inplace(g, Fx);
      lq[i] = lq_of_raw(g, Fx, qd);
    }
    const double d = time_norm(lq, w, pd);
    ratios[s] = d > 0.0 ? num.norm(kInf) / d : 0.0;
  });
  auto r = make_report("ik-smostri", cfg, std::move(ratios));
  r.metadata["p"] = pair.p;
  r.metadata["q"] = pair.q;
  return r;
}

EstimateReport check_dispersive_decay(const HarnessConfig& base, int k,
                                      double t0, double t1, int n_times,
                                      double data_scale) {
  if (!(t1 > t0) || !(t0 > 0.0) || n_times < 2)
    throw std::invalid_argument("dispersive ladder needs 0 < t0 < t1, >= 2 times");
  HarnessConfig cfg = base;
  cfg.band_lo = cfg.band_hi = k;
  check_horizon(cfg, t1);
  const Grid g = cfg.grid();
  std::vector<double> ratios(cfg.samples);
  parallel_for(ratios.size(), [&](std::size_t s) {
    const Eigen::ArrayXcd fhat =
        data_scale * harness_sample(cfg, s).frequency().data();
    double lo = kInf, hi = 0.0;
    for (int i = 0; i < n_times; ++i) {
      const double t = t0 + (t1 - t0) * i / (n_times - 1);
      Eigen::ArrayXcd u = fhat * propagator_multiplier(g, t);
      detail::inverse_inplace(g, u);
      const double v = t * lq_of_raw(g, u, 6.0);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    ratios[s] = lo > 0.0 ? hi / lo : 0.0;
  });
  auto r = make_report("dispersive", cfg, std::move(ratios));
  r.metadata["band"] = k;
  r.metadata["t0"] = t0;
  r.metadata["t1"] = t1;
  r.metadata["n_times"] = n_times;
  r.metadata["quantity"] = "max/min over the ladder of t ||exp(it Laplacian) f_k||_L6";
  return r;
}

double band_kernel_l1(const Grid& g, int k) {
  Field K(g, Repr::frequency,
          band_table(g, k).cast<Complex>());
  return K.physical().data().abs().sum() * g.cell_volume();
}

EstimateReport check_bilinear(const HarnessConfig& cfg, const BilinearSymbol& m,
                              double p, double q, double r) {
  for (double e : {p, q, r})
    if (!(e >= 1.0)) throw std::invalid_argument("exponents must be >= 1");
  const auto inv = [](double e) { return std::isinf(e) ? 0.0 : 1.0 / e; };
  if (std::abs(inv(r) - inv(p) - inv(q)) > 1e-12)
    throw std::invalid_argument("Hoelder-incompatible exponents: 1/r != 1/p + 1/q");
  const Grid g = cfg.grid();
  const double kernel = m.identity ? 1.0 : band_kernel_l1(g, m.band);
  const Eigen::ArrayXd table =
      m.identity ? Eigen::ArrayXd::Ones(g.size()) : band_table(g, m.band);
  std::vector<double> ratios(cfg.samples);
  parallel_for(ratios.size(), [&](std::size_t s) {
    const Field f = harness_sample(cfg, 2 * s);
    const Field h = harness_sample(cfg, 2 * s + 1);
    Eigen::ArrayXcd hm = h.frequency().data() * table;
    detail::inverse_inplace(g, hm);
    const Eigen::ArrayXcd prod = f.data() * hm;
    const double rhs = kernel * lq_of_raw(g, f.data(), p) * lq_of_raw(g, h.data(), q);
    ratios[s] = rhs > 0.0 ? lq_of_raw(g, prod, r) / rhs : 0.0;
  });
  auto rep = make_report("bilin", cfg, std::move(ratios));
  rep.metadata["symbol"] = m.label.empty() ? (m.identity ? "one" : "band") : m.label;
  rep.metadata["kernel_l1"] = kernel;
  rep.metadata["p"] = p;
  rep.metadata["q"] = q;
  rep.metadata["r"] = r;
  return rep;
}

std::array<double, 3> DirectionPartition::evaluate(const Eigen::Vector3d& xi) {
  const Eigen::Vector3d a = xi.cwiseAbs();
  const double mx = a.maxCoeff();
  if (mx == 0.0) return {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  auto smooth = [](double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    return s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
  };
  std::array<double, 3> psi{};
  double total = 0.0;
  for (int j = 0; j < 3; ++j) {
    psi[j] = smooth((a[j] / mx - 0.9) / 0.1);
    total += psi[j];
  }
  for (auto& v : psi) v /= total;
  return psi;
}

DirectionReport check_direction_partition(const Grid& g) {
  DirectionReport r;
  for_each_mode(g, [&](std::size_t, double k1, double k2, double k3) {
    const Eigen::Vector3d xi(k1, k2, k3);
    const auto chi = DirectionPartition::evaluate(xi);
    r.max_sum_error =
        std::max(r.max_sum_error, std::abs(chi[0] + chi[1] + chi[2] - 1.0));
    const double mx = xi.cwiseAbs().maxCoeff();
    for (int j = 0; j < 3; ++j)
      if (chi[j] > 0.0 && std::abs(xi[j]) < 0.9 * mx) ++r.support_violations;
    ++r.modes;
  });
  return r;
}

EstimateReport check_summation_interpolation(const HarnessConfig& base, int k,
                                             double p, double q, double c) {
  if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("need 0 < c < 1");
  if (!(p >= 1.0) || !(q >= 1.0))
    throw std::invalid_argument("exponents must be >= 1");
  if (!std::isinf(p) && p * (1.0 - c) < 1.0)
    throw std::invalid_argument("p (1 - c) must be >= 1");
  HarnessConfig cfg = base;
  cfg.band_lo = cfg.band_hi = k;
  check_horizon(cfg, cfg.t_end);
  const Grid g = cfg.grid();
  const auto w = ladder_weights(cfg.t_end, cfg.dt);
  const double pc = std::isinf(p) ? kInf : p * (1.0 - c);
  std::vector<double> ratios(cfg.samples);
  parallel_for(ratios.size(), [&](std::size_t s) {
    const Field f = harness_sample(cfg, s);
    std::vector<double> lq(w.size());
    sweep_free(f, cfg.t_end, cfg.dt,
               [&](int i, double, double, const Eigen::ArrayXcd& uhat) {
                 Eigen::ArrayXcd u = uhat;
                 detail::inverse_inplace(g, u);
                 lq[i] = lq_of_raw(g, u, q);
               });
    const double lhs = time_norm(lq, w, p);
    const double a = time_norm(lq, w, pc);
    const double proxy = sobolev_norm(f, 2.0).value;
    const double rhs = std::pow(a, 1.0 - c) *
                       std::pow(std::pow(BandProfile::base, -8.0 * k) * proxy, c);
    ratios[s] = rhs > 0.0 ? lhs / rhs : 0.0;
  });
  auto r = make_report("summation", cfg, std::move(ratios));
  r.metadata["band"] = k;
  r.metadata["p"] = p;
  r.metadata["q"] = q;
  r.metadata["c"] = c;
  r.metadata["proxy"] =
      "||f_k||_H2 of the sample stands in for the bootstrap constant eps1";
  return r;
}

DoiReport check_doi_local(const Field& u1, const PotentialSet& ps, double T,
                          double dt) {
  if (!(T > 1.0) || T - 1.0 > 1.0 + 1e-12)
    throw std::invalid_argument("local bound needs 1 < T <= 2");
  EvolveConfig cfg;
  cfg.t_end = T;
  cfg.dt = dt;
  cfg.require_certificate = false;
  const Evolution ev = evolve_nonlinear(u1, ps, cfg);
  DoiReport r;
  for (const auto& u : ev.trajectory.fields())
    r.lhs = std::max(r.lhs, sobolev_norm(u, 10.0).value);
  const double f1 = sobolev_norm(u1, 10.0).value;
  r.rhs = f1 + (T - 1.0) * r.lhs * r.lhs;
  r.kappa = r.rhs > 0.0 ? r.lhs / r.rhs : 0.0;
  return r;
}

} // namespace rlab
