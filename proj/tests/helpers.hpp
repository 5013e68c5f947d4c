#ifndef RLAB_TEST_HELPERS_HPP
#define RLAB_TEST_HELPERS_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "rlab/fft.hpp"
#include "rlab/field.hpp"

namespace rlab::test {

inline double max_abs_diff(const Field& a, const Field& b) {
  return (a.data() - b.data()).abs().maxCoeff();
}

inline double rel_diff(const Field& a, const Field& b) {
  const double scale = b.data().abs().maxCoeff();
  return max_abs_diff(a, b) / (scale > 0.0 ? scale : 1.0);
}

/// Physical field of complex normal noise.
inline Field random_field(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  Field f(g, Repr::physical);
  for (Eigen::Index i = 0; i < f.data().size(); ++i)
    f.data()[i] = Complex(n01(rng), n01(rng));
  return f;
}

/// Random field low-passed by a Gaussian in frequency (band-limited to
/// machine precision well below Nyquist) and multiplied by a spatial
/// Gaussian envelope, in physical form.
inline Field smooth_random(const Grid& g, std::uint64_t seed, double cutoff,
                           double width) {
  Field f = random_field(g, seed);
  const double s = 0.5 / (width * width);
  for_each_point(g, [&](std::size_t i, double x1, double x2, double x3) {
    f.data()[i] *= std::exp(-s * (x1 * x1 + x2 * x2 + x3 * x3));
  });
  Field fh = forward_transform(f);
  const double c = 0.5 / (cutoff * cutoff);
  for_each_mode(g, [&](std::size_t i, double k1, double k2, double k3) {
    fh.data()[i] *= std::exp(-c * (k1 * k1 + k2 * k2 + k3 * k3));
  });
  return inverse_transform(fh);
}

/// exp(i x.xi0) for the integer mode (m1, m2, m3).
inline Field plane_wave(const Grid& g, int m1, int m2, int m3) {
  const double d = g.dxi();
  return sample_physical(g, [&](double x1, double x2, double x3) {
    return std::exp(Complex(0.0, d * (m1 * x1 + m2 * x2 + m3 * x3)));
  });
}

} // namespace rlab::test

#endif
