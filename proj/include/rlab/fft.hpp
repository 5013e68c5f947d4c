#ifndef RLAB_FFT_HPP
#define RLAB_FFT_HPP

#include "rlab/field.hpp"

namespace rlab {

/// fhat(xi) ~ sum_x exp(-i x.xi) f(x) dx^3 with centered x.
Field forward_transform(const Field& f);

/// f(x) ~ (2pi)^-3 sum_xi exp(i x.xi) fhat(xi) dxi^3.
Field inverse_transform(const Field& fhat);

namespace detail {

/// In-place scaled transforms on raw sample arrays laid out on g. These are
/// the kernels behind forward_transform / inverse_transform and are used
/// directly by time steppers that keep state in one representation.
void forward_inplace(const Grid& g, Eigen::ArrayXcd& data);
void inverse_inplace(const Grid& g, Eigen::ArrayXcd& data);

} // namespace detail

} // namespace rlab

#endif
