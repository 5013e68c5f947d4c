#ifndef RLAB_FIELD_HPP
#define RLAB_FIELD_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>

#include <Eigen/Core>

#include "rlab/grid.hpp"

namespace rlab {

using Complex = std::complex<double>;

enum class Repr : std::uint8_t { physical = 0, frequency = 1 };

const char* to_string(Repr r);

/// Complex samples on a Grid, tagged with their representation.
///
/// Physical samples are point values f(x). Frequency samples approximate
/// the continuum transform fhat(xi) = int exp(-i x.xi) f(x) dx, so a
/// pure mode exp(i x.xi0) transforms to L^3 at xi0.
class Field {
public:
  Field(const Grid& grid, Repr repr);
  Field(const Grid& grid, Repr repr, Eigen::ArrayXcd data);

  const Grid& grid() const { return grid_; }
  Repr repr() const { return repr_; }
  const Eigen::ArrayXcd& data() const { return data_; }
  Eigen::ArrayXcd& data() { return data_; }

  Complex operator[](std::size_t i) const { return data_[i]; }

  /// Returns the field in the requested representation, transforming if
  /// needed.
  Field in(Repr r) const;
  Field physical() const { return in(Repr::physical); }
  Field frequency() const { return in(Repr::frequency); }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(Complex s);

private:
  Grid grid_;
  Repr repr_;
  Eigen::ArrayXcd data_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(Complex s, Field a);

/// Builds a physical field from fn(x1, x2, x3).
template <class Fn>
Field sample_physical(const Grid& g, Fn&& fn) {
  Field f(g, Repr::physical);
  auto& d = f.data();
  for_each_point(g, [&](std::size_t i, double x1, double x2, double x3) {
    d[i] = fn(x1, x2, x3);
  });
  return f;
}

/// Builds a frequency field from fn(xi1, xi2, xi3).
template <class Fn>
Field sample_frequency(const Grid& g, Fn&& fn) {
  Field f(g, Repr::frequency);
  auto& d = f.data();
  for_each_mode(g, [&](std::size_t i, double k1, double k2, double k3) {
    d[i] = fn(k1, k2, k3);
  });
  return f;
}

class RepresentationError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

class GridMismatch : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

void require_same_grid(const Field& a, const Field& b);

/// Squared L2 mass with the quadrature weight of the field's representation
/// (dx^3 physically, (2pi)^-3 dxi^3 = L^-3 in frequency).
double l2_norm_squared(const Field& f);

} // namespace rlab

#endif
