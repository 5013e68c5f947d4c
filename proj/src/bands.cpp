#include "rlab/bands.hpp"

#include <cmath>

namespace rlab {

double BandProfile::chi(double r) const {
  constexpr double a = inner_radius;
  constexpr double b = 1.04;
  if (r <= a) return 1.0;
  if (r >= b) return 0.0;
  const double s = (r - a) / (b - a);
  return 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

double BandProfile::chi_derivative(double r) const {
  constexpr double a = inner_radius;
  constexpr double b = 1.04;
  if (r <= a || r >= b) return 0.0;
  const double s = (r - a) / (b - a);
  return -30.0 * s * s * (1.0 - s) * (1.0 - s) / (b - a);
}

double BandProfile::band_derivative(int k, double r) const {
  const double scale = std::pow(base, -k);
  const double u = r * scale;
  return scale * (chi_derivative(u / base) / base - chi_derivative(u));
}

double BandProfile::band(int k, double r) const {
  return phi(r * std::pow(base, -k));
}

double BandProfile::lowpass(int k, double r) const {
  return chi(r * std::pow(base, -(k + 1)));
}

BandProfile build_band_profile() { return {}; }

Symbol band_symbol(int k) {
  return {[k](const Eigen::Vector3d& xi) {
            return Complex(BandProfile{}.band(k, xi.norm()), 0.0);
          },
          "P_" + std::to_string(k)};
}

Symbol lowpass_symbol(int k) {
  return {[k](const Eigen::Vector3d& xi) {
            return Complex(BandProfile{}.lowpass(k, xi.norm()), 0.0);
          },
          "P_<=" + std::to_string(k)};
}

BandRange band_indices(double min_radius, double max_radius) {
  if (!(max_radius > 0.0) || !(min_radius > 0.0) || max_radius < min_radius)
    throw EmptyBandRange("no nonzero frequencies in the requested window");
  const double lb = std::log(BandProfile::base);
  // Band k touches the window when 1.1^k * inner <= max and
  // 1.1^k * outer >= min.
  const int hi = static_cast<int>(
      std::floor(std::log(max_radius / BandProfile::inner_radius) / lb));
  const int lo = static_cast<int>(
      std::ceil(std::log(min_radius / BandProfile::outer_radius) / lb));
  if (hi < lo) throw EmptyBandRange("band window is empty");
  return {lo, hi};
}

BandRange band_indices(const Grid& g) {
  return band_indices(g.dxi(), g.nyquist());
}

BandField project_band(const Field& f, int k) {
  const bool inert = !band_indices(f.grid()).contains(k);
  return {apply_symbol(f, band_symbol(k)), k, inert};
}

Field project_leq(const Field& f, int k) {
  return apply_symbol(f, lowpass_symbol(k));
}

} // namespace rlab
