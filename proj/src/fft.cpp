#include "rlab/fft.hpp"

#include <map>
#include <mutex>
#include <utility>

#include <fftw3.h>

namespace rlab {

namespace {

// FFTW planning is not thread safe, execution on distinct arrays is. Plans
// are created once per (n, sign) with FFTW_ESTIMATE | FFTW_UNALIGNED so the
// chosen algorithm never depends on timing or array alignment; this keeps
// repeated runs bit-identical.
class PlanCache {
public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int n, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_pair(n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    const std::size_t total = static_cast<std::size_t>(n) * n * n;
    auto* scratch = fftw_alloc_complex(total);
    fftw_plan plan = fftw_plan_dft_3d(n, n, n, scratch, scratch, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    plans_.emplace(key, plan);
    return plan;
  }

private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& plans() {
  static PlanCache cache;
  return cache;
}

void execute(const Grid& g, Eigen::ArrayXcd& data, int sign) {
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans().get(g.n(), sign), p, p);
}

// Multiplies by scale * (-1)^(i1+i2+i3), the phase that moves the DFT
// origin to the box center.
void checkerboard_scale(const Grid& g, Eigen::ArrayXcd& data, double scale) {
  const int n = g.n();
  std::size_t idx = 0;
  for (int i1 = 0; i1 < n; ++i1)
    for (int i2 = 0; i2 < n; ++i2) {
      const double s0 = ((i1 + i2) & 1) ? -scale : scale;
      for (int i3 = 0; i3 < n; ++i3, ++idx)
        data[idx] *= (i3 & 1) ? -s0 : s0;
    }
}

} // namespace

namespace detail {

void forward_inplace(const Grid& g, Eigen::ArrayXcd& data) {
  execute(g, data, FFTW_FORWARD);
  checkerboard_scale(g, data, g.cell_volume());
}

void inverse_inplace(const Grid& g, Eigen::ArrayXcd& data) {
  const double l = g.length();
  checkerboard_scale(g, data, 1.0 / (l * l * l));
  execute(g, data, FFTW_BACKWARD);
}

} // namespace detail

Field forward_transform(const Field& f) {
  if (f.repr() != Repr::physical)
    throw RepresentationError("forward_transform expects a physical field");
  Eigen::ArrayXcd d = f.data();
  detail::forward_inplace(f.grid(), d);
  return Field(f.grid(), Repr::frequency, std::move(d));
}

Field inverse_transform(const Field& fhat) {
  if (fhat.repr() != Repr::frequency)
    throw RepresentationError("inverse_transform expects a frequency field");
  Eigen::ArrayXcd d = fhat.data();
  detail::inverse_inplace(fhat.grid(), d);
  return Field(fhat.grid(), Repr::physical, std::move(d));
}

} // namespace rlab
