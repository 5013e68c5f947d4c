#include "rlab/norms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "rlab/bands.hpp"
#include "rlab/fft.hpp"
#include "rlab/parallel.hpp"

namespace rlab {

namespace {

void check_exponent(double p, const char* what) {
  if (std::isnan(p) || p < 1.0)
    throw std::invalid_argument(std::string(what) + " exponent must be >= 1");
}

double power_sum(const Eigen::ArrayXd& mod, double p) {
  if (p == 1.0) return mod.sum();
  if (p == 2.0) return mod.square().sum();
  return mod.pow(p).sum();
}

std::string exponent_label(double p) {
  if (std::isinf(p)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", p);
  return buf;
}

void attach_boundary_warning(const Field& f, NormValue& v) {
  const double frac = boundary_mass_fraction(f);
  if (frac > kBoundaryMassTolerance) {
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "wrap-around: %.3g of the L2 mass lies in the outer shell",
                  frac);
    v.warnings.emplace_back(buf);
  }
}

} // namespace

void to_json(nlohmann::json& j, const NormValue& v) {
  j = nlohmann::json{{"norm_id", v.norm_id},
                     {"value", v.value},
                     {"quadrature_note", v.quadrature_note}};
  if (!v.warnings.empty()) j["warnings"] = v.warnings;
}

void from_json(const nlohmann::json& j, NormValue& v) {
  j.at("norm_id").get_to(v.norm_id);
  j.at("value").get_to(v.value);
  j.at("quadrature_note").get_to(v.quadrature_note);
  v.warnings = j.value("warnings", std::vector<std::string>{});
}

double outer_norm(const std::vector<double>& values, double p,
                  double weight) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, v);
    return m;
  }
  double s = 0.0;
  for (double v : values) s += std::pow(v, p);
  return std::pow(s * weight, 1.0 / p);
}

NormValue lebesgue_norm(const Field& f, double p) {
  check_exponent(p, "Lebesgue");
  const Field u = f.physical();
  const Eigen::ArrayXd mod = u.data().abs();
  NormValue v;
  v.norm_id = "L" + exponent_label(p);
  if (std::isinf(p)) {
    v.value = mod.maxCoeff();
    v.quadrature_note = "grid maximum (lower bound of the continuum sup)";
  } else {
    v.value = std::pow(power_sum(mod, p) * u.grid().cell_volume(), 1.0 / p);
    v.quadrature_note = "rectangle rule, weight dx^3";
  }
  return v;
}

PlaneAccumulator::PlaneAccumulator(const Grid& g, int axis, double q_inner)
    : grid_(g), axis_(axis), q_(q_inner), sums_(g.n(), 0.0) {
  if (axis < 0 || axis > 2) throw std::invalid_argument("axis must be 0..2");
  check_exponent(q_inner, "inner");
}

void PlaneAccumulator::add(const Field& f, double time_weight) {
  if (!(f.grid() == grid_)) throw GridMismatch("plane accumulator grid mismatch");
  if (f.repr() == Repr::physical)
    add_physical(f.data(), time_weight);
  else
    add_physical(f.physical().data(), time_weight);
}

void PlaneAccumulator::add_physical(const Eigen::ArrayXcd& d,
                                    double time_weight) {
  const int n = grid_.n();
  const double area = grid_.dx() * grid_.dx();
  std::vector<double> local(n, 0.0);
  std::size_t idx = 0;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i3 = 0; i3 < n; ++i3, ++idx) {
        const int plane = axis_ == 0 ? i1 : axis_ == 1 ? i2 : i3;
        if (std::isinf(q_))
          local[plane] = std::max(local[plane], std::abs(d[idx]));
        else if (q_ == 2.0)
          local[plane] += std::norm(d[idx]);
        else
          local[plane] += std::pow(std::abs(d[idx]), q_);
      }
  for (int i = 0; i < n; ++i) {
    if (std::isinf(q_))
      sums_[i] = std::max(sums_[i], local[i]);
    else
      sums_[i] += time_weight * area * local[i];
  }
}

std::vector<double> PlaneAccumulator::plane_norms() const {
  if (std::isinf(q_)) return sums_;
  std::vector<double> out(sums_.size());
  for (std::size_t i = 0; i < sums_.size(); ++i)
    out[i] = std::pow(sums_[i], 1.0 / q_);
  return out;
}

double PlaneAccumulator::norm(double p_outer) const {
  check_exponent(p_outer, "outer");
  return outer_norm(plane_norms(), p_outer, grid_.dx());
}

int PlaneAccumulator::argmax_plane() const {
  return static_cast<int>(std::max_element(sums_.begin(), sums_.end()) -
                          sums_.begin());
}

NormValue mixed_norm(const Field& f, int axis, double p_outer,
                     double q_inner) {
  check_exponent(p_outer, "outer");
  PlaneAccumulator acc(f.grid(), axis, q_inner);
  acc.add(f, 1.0);
  NormValue v;
  v.value = acc.norm(p_outer);
  v.norm_id = "L" + exponent_label(p_outer) + "_x" + std::to_string(axis + 1) +
              " L" + exponent_label(q_inner) + "_transverse";
  v.quadrature_note = "rectangle rule per axis";
  return v;
}

NormValue mixed_norm(const Trajectory& tr, int axis, double p_outer,
                     double q_inner) {
  check_exponent(p_outer, "outer");
  if (tr.empty()) throw std::invalid_argument("empty trajectory");
  if (!std::isinf(q_inner) && tr.size() < 2)
    throw std::invalid_argument(
        "time integration needs at least two samples");
  const auto w = trapezoid_weights(tr.times());
  PlaneAccumulator acc(tr.grid(), axis, q_inner);
  for (std::size_t i = 0; i < tr.size(); ++i) acc.add(tr.field(i), w[i]);
  NormValue v;
  v.value = acc.norm(p_outer);
  v.norm_id = "L" + exponent_label(p_outer) + "_x" + std::to_string(axis + 1) +
              " L" + exponent_label(q_inner) + "_t,transverse";
  v.quadrature_note = "trapezoid in t, rectangle rule in x";
  return v;
}

NormValue spacetime_norm(const Trajectory& tr, double p_t, double q_x) {
  check_exponent(p_t, "time");
  check_exponent(q_x, "space");
  if (tr.empty()) throw std::invalid_argument("empty trajectory");
  if (!std::isinf(p_t) && tr.size() < 2)
    throw std::invalid_argument(
        "time integration needs at least two samples");
  std::vector<double> spatial(tr.size());
  for (std::size_t i = 0; i < tr.size(); ++i)
    spatial[i] = lebesgue_norm(tr.field(i), q_x).value;
  NormValue v;
  v.norm_id = "L" + exponent_label(p_t) + "_t L" + exponent_label(q_x) + "_x";
  if (std::isinf(p_t)) {
    v.value = *std::max_element(spatial.begin(), spatial.end());
    v.quadrature_note = "maximum over time samples";
  } else {
    const auto w = trapezoid_weights(tr.times());
    double s = 0.0;
    for (std::size_t i = 0; i < spatial.size(); ++i)
      s += w[i] * std::pow(spatial[i], p_t);
    v.value = std::pow(s, 1.0 / p_t);
    v.quadrature_note = "trapezoid in t";
  }
  return v;
}

NormValue sobolev_norm(const Field& f, double s) {
  const Field fhat = f.frequency();
  const Eigen::ArrayXd weight = (1.0 + wavenumber_squared(f.grid())).pow(s);
  const double l = f.grid().length();
  NormValue v;
  v.value = std::sqrt((weight * fhat.data().abs2()).sum() / (l * l * l));
  v.norm_id = "H" + exponent_label(s);
  v.quadrature_note = "Parseval weight (2pi)^-3 dxi^3";
  return v;
}

Field xi_gradient(const Field& f, int axis) {
  if (axis < 0 || axis > 2) throw std::invalid_argument("axis must be 0..2");
  Field u = f.physical();
  const Eigen::ArrayXd x = u.grid().coordinates();
  const int n = u.grid().n();
  auto& d = u.data();
  std::size_t idx = 0;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i3 = 0; i3 < n; ++i3, ++idx) {
        const double xa = axis == 0 ? x[i1] : axis == 1 ? x[i2] : x[i3];
        d[idx] *= Complex(0.0, -xa);
      }
  return forward_transform(u);
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

} // namespace

NormValue x_norm(const Field& f) {
  const Grid& g = f.grid();
  const Field fhat = f.frequency();
  const BandRange range = band_indices(g);
  std::array<Eigen::ArrayXcd, 3> grad;
  for (int a = 0; a < 3; ++a) grad[a] = xi_gradient(fhat, a).data();
  Eigen::ArrayXd r(g.size());
  std::array<Eigen::ArrayXd, 3> unit;
  for (auto& u : unit) u.resize(g.size());
  for_each_mode(g, [&](std::size_t i, double k1, double k2, double k3) {
    r[i] = std::sqrt(k1 * k1 + k2 * k2 + k3 * k3);
    const double inv = r[i] > 0.0 ? 1.0 / r[i] : 0.0;
    unit[0][i] = k1 * inv;
    unit[1][i] = k2 * inv;
    unit[2][i] = k3 * inv;
  });
  const double l = g.length();
  const BandProfile profile;
  std::vector<double> per_band(range.size(), 0.0);
  // Product rule: grad (P_k fhat) = P_k grad fhat + P_k'(|xi|) (xi/|xi|) fhat,
  // with the cutoff differentiated exactly; only fhat goes through the
  // lattice derivative.
  parallel_for(per_band.size(), [&](std::size_t b) {
    const int k = range.lo + int(b);
    const double lo = BandProfile::inner_radius * std::pow(BandProfile::base, k);
    const double hi = BandProfile::outer_radius * std::pow(BandProfile::base, k);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      if (r[i] <= lo || r[i] >= hi) continue;
      const double p = profile.band(k, r[i]);
      const double dp = profile.band_derivative(k, r[i]);
      for (int a = 0; a < 3; ++a)
        sum += std::norm(p * grad[a][i] + dp * unit[a][i] * fhat[i]);
    }
    per_band[b] = std::sqrt(sum / (l * l * l));
  });
  NormValue v;
  v.value = *std::max_element(per_band.begin(), per_band.end());
  v.norm_id = "X";
  v.quadrature_note = "sup over bands " + std::to_string(range.lo) + ".." +
                      std::to_string(range.hi) +
                      "; product rule with the exact cutoff derivative, Parseval weight";
  attach_boundary_warning(f, v);
  return v;
}

NormValue x_prime_norm(const Field& f) {
  const Grid& g = f.grid();
  const BandRange range = band_indices(g);
  Eigen::ArrayXd grad2 = Eigen::ArrayXd::Zero(g.size());
  for (int a = 0; a < 3; ++a) grad2 += xi_gradient(f, a).data().abs2();
  const double l = g.length();
  std::vector<double> per_band(range.size(), 0.0);
  parallel_for(per_band.size(), [&](std::size_t b) {
    const Eigen::ArrayXd pk = band_table(g, range.lo + int(b));
    per_band[b] = std::sqrt((pk.square() * grad2).sum() / (l * l * l));
  });
  NormValue v;
  v.value = *std::max_element(per_band.begin(), per_band.end());
  v.norm_id = "X'";
  v.quadrature_note = "sup over bands " + std::to_string(range.lo) + ".." +
                      std::to_string(range.hi) +
                      "; cutoff applied after grad_xi, Parseval weight";
  attach_boundary_warning(f, v);
  return v;
}

NormValue y_norm(const Field& w) {
  const Field u = w.physical();
  const Grid& g = u.grid();
  const Eigen::ArrayXd mod = u.data().abs();
  const double l1 = mod.sum() * g.cell_volume();
  const double linf = mod.maxCoeff();
  const int n = g.n();
  double mixed = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    std::vector<double> sup(n, 0.0);
    std::size_t idx = 0;
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2)
        for (int i3 = 0; i3 < n; ++i3, ++idx) {
          const int plane = axis == 0 ? i1 : axis == 1 ? i2 : i3;
          sup[plane] = std::max(sup[plane], mod[idx]);
        }
    double s = 0.0;
    for (double v : sup) s += v;
    mixed += std::sqrt(s * g.dx());
  }
  NormValue v;
  v.value = l1 + linf + mixed;
  v.norm_id = "Y";
  v.quadrature_note = "L1 + Linf + axis-wise L2(Linf |w|^1/2); grid maxima";
  return v;
}

double boundary_mass_fraction(const Field& f) {
  const Field u = f.physical();
  const Grid& g = u.grid();
  const double edge = 0.45 * g.length();
  double outer = 0.0;
  double total = 0.0;
  const auto& d = u.data();
  for_each_point(g, [&](std::size_t i, double x1, double x2, double x3) {
    const double m = std::norm(d[i]);
    total += m;
    if (std::max({std::abs(x1), std::abs(x2), std::abs(x3)}) >= edge)
      outer += m;
  });
  return total > 0.0 ? outer / total : 0.0;
}

} // namespace rlab
