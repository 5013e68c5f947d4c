#include "rlab/field.hpp"

#include <utility>

#include "rlab/fft.hpp"

namespace rlab {

const char* to_string(Repr r) {
  return r == Repr::physical ? "physical" : "frequency";
}

Field::Field(const Grid& grid, Repr repr)
    : grid_(grid), repr_(repr),
      data_(Eigen::ArrayXcd::Zero(static_cast<Eigen::Index>(grid.size()))) {}

Field::Field(const Grid& grid, Repr repr, Eigen::ArrayXcd data)
    : grid_(grid), repr_(repr), data_(std::move(data)) {
  if (static_cast<std::size_t>(data_.size()) != grid_.size())
    throw std::invalid_argument("field data size does not match grid");
}

Field Field::in(Repr r) const {
  if (r == repr_) return *this;
  return r == Repr::frequency ? forward_transform(*this)
                              : inverse_transform(*this);
}

void require_same_grid(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid()))
    throw GridMismatch("fields live on different grids");
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(*this, other);
  data_ += other.in(repr_).data();
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(*this, other);
  data_ -= other.in(repr_).data();
  return *this;
}

Field& Field::operator*=(Complex s) {
  data_ *= s;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(Complex s, Field a) { return a *= s; }

double l2_norm_squared(const Field& f) {
  const double sum = f.data().abs2().sum();
  if (f.repr() == Repr::physical) return sum * f.grid().cell_volume();
  const double l = f.grid().length();
  return sum / (l * l * l);
}

} // namespace rlab
