#ifndef RLAB_GRID_HPP
#define RLAB_GRID_HPP

#include <cstddef>
#include <numbers>

#include <Eigen/Core>

namespace rlab {

/// Periodic cubic lattice standing in for R^3.
///
/// Physical coordinates are centered: x_i = -L/2 + i*dx, i in [0, n).
/// Frequencies are stored in FFT order: index i carries the signed mode
/// m = i for i < n/2 and m = i - n otherwise, so xi = 2*pi*m/L covers
/// [-n/2, n/2) with the single Nyquist mode at m = -n/2.
///
/// Samples are stored row-major with x_3 fastest:
/// index(i1, i2, i3) = (i1*n + i2)*n + i3.
class Grid {
public:
  Grid(int n, double box_length);

  int n() const { return n_; }
  double length() const { return length_; }
  double dx() const { return length_ / n_; }
  double dxi() const { return 2.0 * std::numbers::pi / length_; }
  double nyquist() const { return std::numbers::pi / dx(); }
  /// Largest |xi| present on the lattice (the corner mode).
  double max_wavenumber() const;
  double cell_volume() const;
  std::size_t size() const {
    return static_cast<std::size_t>(n_) * n_ * n_;
  }

  std::size_t index(int i1, int i2, int i3) const {
    return (static_cast<std::size_t>(i1) * n_ + i2) * n_ + i3;
  }
  double coordinate(int i) const { return -0.5 * length_ + i * dx(); }
  int mode(int i) const { return i < n_ / 2 ? i : i - n_; }
  double wavenumber(int i) const { return dxi() * mode(i); }

  /// Per-axis coordinate and wavenumber tables (length n).
  Eigen::ArrayXd coordinates() const;
  Eigen::ArrayXd wavenumbers() const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.n_ == b.n_ && a.length_ == b.length_;
  }

private:
  int n_;
  double length_;
};

Grid make_grid(int n, double box_length);

/// Calls fn(index, xi1, xi2, xi3) for every lattice mode.
template <class Fn>
void for_each_mode(const Grid& g, Fn&& fn) {
  const Eigen::ArrayXd k = g.wavenumbers();
  const int n = g.n();
  std::size_t idx = 0;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i3 = 0; i3 < n; ++i3, ++idx) fn(idx, k[i1], k[i2], k[i3]);
}

/// Calls fn(index, x1, x2, x3) for every lattice point.
template <class Fn>
void for_each_point(const Grid& g, Fn&& fn) {
  const Eigen::ArrayXd x = g.coordinates();
  const int n = g.n();
  std::size_t idx = 0;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i3 = 0; i3 < n; ++i3, ++idx) fn(idx, x[i1], x[i2], x[i3]);
}

/// |xi|^2 on every mode.
Eigen::ArrayXd wavenumber_squared(const Grid& g);

/// Two-thirds rule mask: 1 where every |m_j| < n/3, else 0.
Eigen::ArrayXd dealias_mask(const Grid& g);

} // namespace rlab

#endif
