#ifndef RLAB_BANDS_HPP
#define RLAB_BANDS_HPP

#include <stdexcept>

#include "rlab/field.hpp"
#include "rlab/symbol.hpp"

namespace rlab {

/// Littlewood-Paley profile at base 1.1.
///
/// chi is a C^2 quintic smoothstep equal to 1 for r <= 1/1.04 and 0 for
/// r >= 1.04; phi(r) = chi(r/1.1) - chi(r) is then supported in
/// [1/1.04, 1.04*1.1] and sum_j phi(1.1^-j r) telescopes to 1 for r > 0.
class BandProfile {
public:
  static constexpr double base = 1.1;
  static constexpr double inner_radius = 1.0 / 1.04;
  static constexpr double outer_radius = 1.04 * 1.1;

  double chi(double r) const;
  double chi_derivative(double r) const;
  double phi(double r) const { return chi(r / base) - chi(r); }
  /// P_k(|xi|) = phi(1.1^-k |xi|).
  double band(int k, double r) const;
  /// d/dr of band(k, r).
  double band_derivative(int k, double r) const;
  /// P_{<=k}(|xi|) = sum_{j<=k} P_j = chi(1.1^-(k+1) |xi|).
  double lowpass(int k, double r) const;
};

BandProfile build_band_profile();

Symbol band_symbol(int k);
Symbol lowpass_symbol(int k);

/// Inclusive range of bands whose annulus meets [dxi, nyquist].
struct BandRange {
  int lo;
  int hi;
  int size() const { return hi - lo + 1; }
  bool contains(int k) const { return k >= lo && k <= hi; }
};

class EmptyBandRange : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

BandRange band_indices(const Grid& g);
/// Bands meeting an arbitrary radial window; throws EmptyBandRange when the
/// window holds no nonzero frequency.
BandRange band_indices(double min_radius, double max_radius);

/// A band projection plus the flag for bands outside the resolved range.
struct BandField {
  Field field;
  int k;
  bool inert;
};

BandField project_band(const Field& f, int k);
Field project_leq(const Field& f, int k);

} // namespace rlab

#endif
