#include "rlab/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rlab {

Grid::Grid(int n, double box_length) : n_(n), length_(box_length) {
  if (n % 2 != 0)
    throw std::invalid_argument("odd n: points per axis must be even, got " +
                                std::to_string(n));
  if (n < 4)
    throw std::invalid_argument("n too small: need n >= 4, got " +
                                std::to_string(n));
  if ((n & (n - 1)) != 0)
    throw std::invalid_argument("n must be a power of two, got " +
                                std::to_string(n));
  if (!(box_length > 0.0) || !std::isfinite(box_length))
    throw std::invalid_argument("box length must be positive and finite");
}

double Grid::max_wavenumber() const {
  return std::sqrt(3.0) * (n_ / 2) * dxi();
}

double Grid::cell_volume() const {
  const double h = dx();
  return h * h * h;
}

Eigen::ArrayXd Grid::coordinates() const {
  Eigen::ArrayXd x(n_);
  for (int i = 0; i < n_; ++i) x[i] = coordinate(i);
  return x;
}

Eigen::ArrayXd Grid::wavenumbers() const {
  Eigen::ArrayXd k(n_);
  for (int i = 0; i < n_; ++i) k[i] = wavenumber(i);
  return k;
}

Grid make_grid(int n, double box_length) { return Grid(n, box_length); }

Eigen::ArrayXd wavenumber_squared(const Grid& g) {
  Eigen::ArrayXd out(g.size());
  for_each_mode(g, [&](std::size_t idx, double k1, double k2, double k3) {
    out[idx] = k1 * k1 + k2 * k2 + k3 * k3;
  });
  return out;
}

Eigen::ArrayXd dealias_mask(const Grid& g) {
  const int n = g.n();
  Eigen::ArrayXd out(g.size());
  std::size_t idx = 0;
  auto kept = [&](int i) { return 3 * std::abs(g.mode(i)) < n; };
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i3 = 0; i3 < n; ++i3, ++idx)
        out[idx] = (kept(i1) && kept(i2) && kept(i3)) ? 1.0 : 0.0;
  return out;
}

} // namespace rlab
