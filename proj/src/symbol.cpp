#include "rlab/symbol.hpp"

#include <cmath>

#include "rlab/fft.hpp"

namespace rlab {

Symbol operator*(const Symbol& a, const Symbol& b) {
  return {[a, b](const Eigen::Vector3d& xi) { return a(xi) * b(xi); },
          a.label + "*" + b.label};
}

namespace symbols {

Symbol identity() {
  return {[](const Eigen::Vector3d&) { return Complex(1.0, 0.0); }, "1"};
}

Symbol coordinate(int axis) {
  return {[axis](const Eigen::Vector3d& xi) { return Complex(xi[axis], 0.0); },
          "xi_" + std::to_string(axis + 1)};
}

Symbol axis_power(int axis, double power) {
  return {[axis, power](const Eigen::Vector3d& xi) {
            return Complex(std::pow(std::abs(xi[axis]), power), 0.0);
          },
          "|xi_" + std::to_string(axis + 1) + "|^" + std::to_string(power)};
}

Symbol inverse_square() {
  return {[](const Eigen::Vector3d& xi) {
            return Complex(1.0 / xi.squaredNorm(), 0.0);
          },
          "1/|xi|^2"};
}

Symbol bessel(double s) {
  return {[s](const Eigen::Vector3d& xi) {
            return Complex(std::pow(1.0 + xi.squaredNorm(), 0.5 * s), 0.0);
          },
          "<xi>^" + std::to_string(s)};
}

} // namespace symbols

SingularSymbolError::SingularSymbolError(const std::string& label, int a,
                                         int b, int c)
    : std::domain_error("symbol '" + label + "' is not finite at mode (" +
                        std::to_string(a) + "," + std::to_string(b) + "," +
                        std::to_string(c) + ")"),
      m1(a), m2(b), m3(c) {}

Field apply_symbol(const Field& f, const Symbol& s) {
  Field fhat = f.frequency();
  const Grid& g = fhat.grid();
  const int n = g.n();
  auto& d = fhat.data();
  const Eigen::ArrayXd k = g.wavenumbers();
  std::size_t idx = 0;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i3 = 0; i3 < n; ++i3, ++idx) {
        if (d[idx] == Complex(0.0, 0.0)) continue;
        const Complex v = s(Eigen::Vector3d(k[i1], k[i2], k[i3]));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
          throw SingularSymbolError(s.label, g.mode(i1), g.mode(i2),
                                    g.mode(i3));
        d[idx] *= v;
      }
  return fhat.in(f.repr());
}

Eigen::ArrayXcd propagator_multiplier(const Grid& g, double t) {
  Eigen::ArrayXcd out(g.size());
  for_each_mode(g, [&](std::size_t idx, double k1, double k2, double k3) {
    out[idx] = std::polar(1.0, -t * (k1 * k1 + k2 * k2 + k3 * k3));
  });
  return out;
}

Field free_propagate(const Field& f, double t) {
  Field fhat = f.frequency();
  fhat.data() *= propagator_multiplier(f.grid(), t);
  return fhat.in(f.repr());
}

Field half_derivative(const Field& f, int axis) {
  Field fhat = f.frequency();
  const Eigen::ArrayXd k = f.grid().wavenumbers().abs().sqrt();
  const int n = f.grid().n();
  auto& d = fhat.data();
  std::size_t idx = 0;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2)
      for (int i3 = 0; i3 < n; ++i3, ++idx) {
        const int i = axis == 0 ? i1 : axis == 1 ? i2 : i3;
        d[idx] *= k[i];
      }
  return fhat.in(f.repr());
}

} // namespace rlab
