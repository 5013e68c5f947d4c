#ifndef RLAB_NORMS_HPP
#define RLAB_NORMS_HPP

#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "rlab/field.hpp"
#include "rlab/trajectory.hpp"

namespace rlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct NormValue {
  double value = 0.0;
  std::string norm_id;
  std::string quadrature_note;
  std::vector<std::string> warnings;

  operator double() const { return value; }
};

void to_json(nlohmann::json& j, const NormValue& v);
void from_json(const nlohmann::json& j, NormValue& v);

/// (sum |f|^p dx^3)^(1/p); p = inf is the grid maximum, which is a lower
/// bound for the continuum supremum.
NormValue lebesgue_norm(const Field& f, double p);

/// L^p over x_axis of the L^q norm over the two transverse axes.
NormValue mixed_norm(const Field& f, int axis, double p_outer, double q_inner);

/// L^p over x_axis of the L^q norm over (t, transverse axes); time is
/// integrated with trapezoid weights.
NormValue mixed_norm(const Trajectory& tr, int axis, double p_outer,
                     double q_inner);

/// L^p_t L^q_x with trapezoid quadrature in t.
NormValue spacetime_norm(const Trajectory& tr, double p_t, double q_x);

/// ||(1 + |xi|^2)^(s/2) fhat|| with the Parseval weight (2pi)^-3 dxi^3.
NormValue sobolev_norm(const Field& f, double s);

/// Component `axis` of grad_xi fhat, realized as the transform of
/// (-i x_axis) f with centered coordinates. Returned in frequency form.
Field xi_gradient(const Field& f, int axis);

/// sup_k ||grad_xi (P_k fhat)|| with the Parseval weight, over the grid's
/// active bands. The cutoff is differentiated exactly and fhat through
/// xi_gradient.
NormValue x_norm(const Field& f);

/// sup_k ||P_k grad_xi fhat||: the cutoff is applied after differentiating.
NormValue x_prime_norm(const Field& f);

/// ||w||_L1 + ||w||_Linf + sum_j || sup_{transverse} |w|^(1/2) ||_{L2_{x_j}}.
NormValue y_norm(const Field& w);

/// Fraction of the L2 mass in the outer shell max_j |x_j| >= 0.45 L.
double boundary_mass_fraction(const Field& f);
inline constexpr double kBoundaryMassTolerance = 1e-6;

/// Streaming L^p_{x_j} L^q_{t, transverse} accumulator. Snapshots are added
/// with their time quadrature weights; nothing but per-plane sums is kept.
class PlaneAccumulator {
public:
  PlaneAccumulator(const Grid& g, int axis, double q_inner);

  void add(const Field& f, double time_weight);
  /// Same as add() for raw physical samples on grid().
  void add_physical(const Eigen::ArrayXcd& d, double time_weight);
  std::vector<double> plane_norms() const;
  double norm(double p_outer) const;
  int argmax_plane() const;
  const Grid& grid() const { return grid_; }
  int axis() const { return axis_; }

private:
  Grid grid_;
  int axis_;
  double q_;
  std::vector<double> sums_;
};

/// Shared helpers used by the harness and tests.
double outer_norm(const std::vector<double>& values, double p, double weight);

} // namespace rlab

#endif
