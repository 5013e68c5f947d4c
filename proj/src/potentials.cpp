#include "rlab/potentials.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "rlab/norms.hpp"
#include "rlab/parallel.hpp"
#include "rlab/symbol.hpp"

namespace rlab {

namespace {

constexpr double kImagTolerance = 1e-14;
constexpr double kResolutionTolerance = 1e-6;

Field squared(const Field& w) {
  Field u = w.physical();
  u.data() = u.data().real().square().cast<Complex>();
  return u;
}

} // namespace

PotentialSet PotentialSet::zero(const Grid& g) {
  Field z(g, Repr::physical);
  return PotentialSet{z, {z, z, z}, 0.0};
}

bool PotentialSet::is_zero() const {
  if (!V.data().isZero(0.0)) return false;
  for (const auto& ai : a)
    if (!ai.data().isZero(0.0)) return false;
  return true;
}

bool PotentialSet::has_magnetic() const {
  for (const auto& ai : a)
    if (!ai.data().isZero(0.0)) return true;
  return false;
}

PotentialSet PotentialSet::scaled(double lambda) const {
  PotentialSet out = *this;
  out.V *= lambda;
  for (auto& ai : out.a) ai *= lambda;
  return out;
}

void validate(const PotentialSet& ps) {
  auto check = [&](const Field& w, const char* name) {
    require_same_grid(ps.V, w);
    const Field u = w.physical();
    if (u.data().size() > 0 && u.data().imag().abs().maxCoeff() > kImagTolerance)
      throw std::invalid_argument(std::string("potential ") + name +
                                  " is not real-valued");
  };
  check(ps.V, "V");
  check(ps.a[0], "a1");
  check(ps.a[1], "a2");
  check(ps.a[2], "a3");
}

Field gaussian_potential(const Grid& g, const Eigen::Vector3d& center,
                         double width, double amplitude,
                         std::vector<std::string>* warnings) {
  if (!(width > 0.0)) throw std::invalid_argument("width must be positive");
  const double s = 1.0 / (2.0 * width * width);
  Field w = sample_physical(g, [&](double x1, double x2, double x3) {
    const double d1 = x1 - center[0], d2 = x2 - center[1],
                 d3 = x3 - center[2];
    return Complex(amplitude * std::exp(-s * (d1 * d1 + d2 * d2 + d3 * d3)),
                   0.0);
  });
  if (warnings && amplitude != 0.0) {
    const double frac = boundary_mass_fraction(w);
    if (frac > kBoundaryMassTolerance) {
      char buf[128];
      std::snprintf(buf, sizeof(buf),
                    "gaussian reaches the box edge (outer-shell mass %.3g)",
                    frac);
      warnings->emplace_back(buf);
    }
  }
  return w;
}

YTriple y_triple(const Field& w, std::vector<std::string>* warnings) {
  const Field u = w.physical();
  YTriple t;
  t.plain = y_norm(u).value;

  Field weighted = u;
  for_each_point(u.grid(), [&](std::size_t i, double x1, double x2, double x3) {
    weighted.data()[i] *= std::sqrt(1.0 + x1 * x1 + x2 * x2 + x3 * x3);
  });
  t.weighted = y_norm(weighted).value;

  Field hat = u.frequency();
  const Eigen::ArrayXd mult = (1.0 + wavenumber_squared(u.grid())).pow(5.0);
  hat.data() *= mult;
  if (warnings) {
    const Eigen::ArrayXd mass = hat.data().abs2();
    const Eigen::ArrayXd mask = dealias_mask(u.grid());
    const double total = mass.sum();
    const double outside = ((1.0 - mask) * mass).sum();
    if (total > 0.0 && outside > kResolutionTolerance * total) {
      char buf[128];
      std::snprintf(buf, sizeof(buf),
                    "(1-Laplacian)^5 under-resolved: %.3g of its mass lies "
                    "beyond the two-thirds band",
                    outside / total);
      warnings->emplace_back(buf);
    }
  }
  Field smooth = hat.physical();
  smooth.data() = smooth.data().real().cast<Complex>();
  t.smooth = y_norm(smooth).value;
  return t;
}

const CertificateEntry& SmallnessCertificate::entry(
    const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return e;
  throw std::out_of_range("no certificate entry " + name);
}

SmallnessCertificate certify(const PotentialSet& ps, double delta) {
  validate(ps);
  std::vector<std::pair<std::string, Field>> items;
  items.emplace_back("V", ps.V);
  for (int i = 0; i < 3; ++i)
    items.emplace_back("a" + std::to_string(i + 1), ps.a[i]);
  for (int i = 0; i < 3; ++i)
    items.emplace_back("a" + std::to_string(i + 1) + "^2", squared(ps.a[i]));

  SmallnessCertificate c;
  c.delta = delta;
  c.entries.resize(items.size());
  std::vector<std::vector<std::string>> notes(items.size());
  parallel_for(items.size(), [&](std::size_t i) {
    auto& e = c.entries[i];
    e.name = items[i].first;
    e.y = y_triple(items[i].second, &notes[i]);
    e.pass = e.y.sum() <= delta;
  });
  c.pass = true;
  for (std::size_t i = 0; i < items.size(); ++i) {
    c.pass = c.pass && c.entries[i].pass;
    for (auto& n : notes[i]) c.warnings.push_back(items[i].first + ": " + n);
  }
  return c;
}

void to_json(nlohmann::json& j, const SmallnessCertificate& c) {
  j = nlohmann::json{{"delta", c.delta}, {"pass", c.pass}};
  auto entries = nlohmann::json::array();
  for (const auto& e : c.entries)
    entries.push_back({{"name", e.name},
                       {"y", e.y.plain},
                       {"weighted_y", e.y.weighted},
                       {"smooth_y", e.y.smooth},
                       {"sum", e.y.sum()},
                       {"pass", e.pass}});
  j["entries"] = entries;
  j["warnings"] = c.warnings;
}

RescaledSet rescale_to_delta(const PotentialSet& ps, double delta) {
  if (ps.is_zero())
    throw std::invalid_argument("cannot rescale the zero potential set");
  auto passes = [&](double lambda) {
    return certify(ps.scaled(lambda), delta).pass;
  };
  if (passes(1.0)) return {ps, 1.0};
  double lo = 1e-12, hi = 1.0;
  if (!passes(lo))
    throw std::runtime_error(
        "potential set fails certification even at lambda = 1e-12");
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    (passes(mid) ? lo : hi) = mid;
  }
  PotentialSet out = ps.scaled(lo);
  out.delta_target = delta;
  return {out, lo};
}

} // namespace rlab
