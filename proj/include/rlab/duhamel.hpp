#ifndef RLAB_DUHAMEL_HPP
#define RLAB_DUHAMEL_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rlab/field.hpp"
#include "rlab/potentials.hpp"

namespace rlab {

/// Operator tag for one application inside a Born term.
enum class PotentialTag { all, V, a1, a2, a3 };
const char* to_string(PotentialTag t);
PotentialTag parse_potential_tag(const std::string& s);

struct DuhamelTerm {
  int order = 0;
  std::vector<PotentialTag> tags;
  Field field;        // value at time t, physical
  double h10 = 0.0;   // ||term||_H10
  double x = 0.0;     // x_norm of the profile exp(-it Laplacian) term
};

class RefinementError : public std::runtime_error {
public:
  RefinementError(int order, double coarse, double fine);
  int order;
  double coarse;  // H10 norm at dt
  double fine;    // H10 norm at dt/2
};

struct BornOptions {
  /// Tag for the m-th potential application counted from the data
  /// (index m-1). Missing entries mean the full operator a.grad + V.
  std::vector<PotentialTag> tags;
  /// Recompute at dt/2 and throw RefinementError when any term moves by
  /// more than 10% in H10.
  bool check_refinement = true;
};

/// Terms 0..N of the Born series at time t, advanced together on one dt
/// ladder from t = 1 with the trapezoid recursion
///   T_n(s+dt) = P (T_n(s) - i dt/2 B T_{n-1}(s)) - i dt/2 B T_{n-1}(s+dt),
/// P = exp(i dt Laplacian), T_0 the free evolution of u1.
std::vector<DuhamelTerm> born_series(const Field& u1, const PotentialSet& ps,
                                     int N, double t, double dt,
                                     const BornOptions& opt = {});

DuhamelTerm born_term(const Field& u1, const PotentialSet& ps, int n, double t,
                      double dt, const BornOptions& opt = {});

/// Partial sum sum_{n<=N} T_n as a physical field.
Field partial_sum(const std::vector<DuhamelTerm>& terms, int N);

struct SeriesDecayRow {
  int n = 0;
  double h10 = 0.0;
  double x = 0.0;
  double ratio = 0.0;    // h10_n / h10_{n-1}, 0 for n = 0
  double x_ratio = 0.0;  // x_n / x_{n-1}
};

struct SeriesDecayReport {
  std::vector<SeriesDecayRow> rows;
  /// exp of the least-squares slope of log h10_n over n = 1..N; 0 when any
  /// term vanishes.
  double rate = 0.0;
  double x_rate = 0.0;
  std::vector<DuhamelTerm> terms;

  /// CSV with columns n,h10_norm,x_norm,ratio.
  std::string csv() const;
};

SeriesDecayReport series_decay_report(const Field& u1, const PotentialSet& ps,
                                      int N, double t, double dt,
                                      const BornOptions& opt = {});

struct WaveOperatorResult {
  Field g;                          // exp(-iT Laplacian) u(T)
  std::vector<double> tau;          // ladder tau_0, 2 tau_0, ... with 2 tau <= T
  std::vector<double> distance;     // ||g(2 tau) - g(tau)||_H10
  double exponent = 0.0;            // fitted a in d(tau) ~ tau^-a
  bool converging = true;           // d strictly decreasing
  std::vector<std::string> warnings;

  /// CSV with columns tau,cauchy_distance.
  std::string csv() const;
};

/// Runs the linear flow to T and records g(tau) on the dyadic ladder
/// tau0 * 2^m. A non-decreasing trace is reported, not thrown.
WaveOperatorResult wave_operator(const Field& u1, const PotentialSet& ps,
                                 double T, double dt, double tau0 = 2.0,
                                 bool require_certificate = true);

struct DenominatorCheck {
  Complex value;    // trapezoid of (-i) int_0^tau_max exp(i tau (a + i beta))
  Complex exact;    // 1 / (a + i beta)
  double residual = 0.0;
  double beta = 0.0;
  double tau_max = 0.0;
  std::vector<std::string> warnings;
};

DenominatorCheck regularized_denominator_check(double a, double beta,
                                               double tau_max, double dtau);

/// The check at beta in {1e-1, 1e-2, 1e-3}; tau_max is raised to 10/beta
/// where the given one would truncate.
std::vector<DenominatorCheck> denominator_sweep(double a, double tau_max,
                                                double dtau);

struct ResonanceSample {
  Eigen::Vector3d xi;
  Eigen::Vector3d eta;
  double phase_pot = 0.0;          // |xi|^2 - |eta|^2
  double phase_bilin = 0.0;        // |xi|^2 - |eta|^2 - |xi - eta|^2
  Eigen::Vector3d space_multiplier;  // eta / |eta|^2, infinite at eta = 0
  Eigen::Vector3d phase_gradient;  // grad_eta phase_bilin = 2 (xi - 2 eta)
  double beta = 0.0;
};

ResonanceSample resonance_sample(const Eigen::Vector3d& xi,
                                 const Eigen::Vector3d& eta, double beta);

/// |phase_bilin - 2 eta.(xi - eta)|.
double bilinear_phase_residual(const ResonanceSample& s);

enum class Resonance { nonresonant, space, time, space_time };
const char* to_string(Resonance r);

Resonance resonance_classify(const Eigen::Vector3d& xi,
                             const Eigen::Vector3d& eta, double tol_space,
                             double tol_time);

} // namespace rlab

#endif
