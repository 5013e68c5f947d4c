#ifndef RLAB_FLOW_HPP
#define RLAB_FLOW_HPP

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rlab/field.hpp"
#include "rlab/potentials.hpp"
#include "rlab/trajectory.hpp"

namespace rlab {

enum class Dealias { two_thirds, off };

struct EvolveConfig {
  double t_start = 1.0;
  double t_end = 2.0;
  double dt = 0.01;
  Dealias dealias = Dealias::two_thirds;
  int snapshot_stride = 1;
  /// When set, a nonzero potential set must pass certify(ps, ps.delta_target).
  bool require_certificate = true;

  /// Throws std::invalid_argument on t_end <= t_start, t_start < 1, dt <= 0
  /// or a horizon that is not a whole number of steps (to 1e-9).
  int steps() const;
};

struct BootstrapParams {
  double eps0 = 0.0;
  double amplification = 1.0;
  double eps1() const { return amplification * eps0; }
  void validate() const;
};

/// Bootstrap monitor outcome. Exits are reported with the first snapshot
/// time at which either bound failed; values are never clipped.
struct BootstrapReport {
  double eps0 = 0.0;
  double eps1 = 0.0;
  double sup_h10 = 0.0;
  double sup_x = 0.0;
  bool exited = false;
  double exit_time = 0.0;
};

struct Evolution {
  Trajectory trajectory;
  std::vector<double> mass;    // L2 norm at each snapshot
  std::vector<double> energy;  // Hamiltonian functional (H_A flow only)
  std::vector<std::string> warnings;
  std::optional<BootstrapReport> bootstrap;
};

class BlowupError : public std::runtime_error {
public:
  BlowupError(double t, double drift);
  double time;
  double drift;
};

class CertificationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Which generator the non-Laplacian part of a step uses.
enum class FlowKind {
  linear,       // B u = sum_j a_j d_j u + V u
  nonlinear,    // B u plus the quadratic term u^2
  hamiltonian,  // symmetric form of H_A + Laplacian
};

/// Spatial operator applied to frequency samples, products formed
/// physically. Owns the derivative multipliers and the potentials.
class PotentialOperator {
public:
  PotentialOperator(FlowKind kind, const PotentialSet& ps);

  /// Frequency samples of B u.
  Eigen::ArrayXcd apply(const Eigen::ArrayXcd& uhat) const;
  /// Single-potential pieces: tag 0 is V u, tags 1..3 are a_j d_j u.
  Eigen::ArrayXcd apply_tag(int tag, const Eigen::ArrayXcd& uhat) const;
  bool is_zero() const { return zero_; }
  bool magnetic() const { return magnetic_; }
  /// Multiplicative part (V, or V + |A|^2 for the H_A flow), physical.
  const Eigen::ArrayXd& scalar() const { return V_; }
  const Grid& grid() const { return grid_; }

private:
  Grid grid_;
  FlowKind kind_;
  bool zero_;
  bool magnetic_;
  Eigen::ArrayXd V_;          // V, or V + |A|^2 for the H_A flow
  std::array<Eigen::ArrayXd, 3> a_;
  std::array<Eigen::ArrayXd, 3> k_;  // xi_j per mode
};

/// Strang split step. State stays in frequency form; with zero potentials
/// and no nonlinearity one step is the single multiplier exp(-i dt |xi|^2),
/// bit-identical to free_propagate(dt). Negative dt runs the flow backward.
class SplitStepper {
public:
  SplitStepper(FlowKind kind, const PotentialSet& ps, Dealias dealias);

  void step(Eigen::ArrayXcd& uhat, double dt);
  const Grid& grid() const { return op_.grid(); }
  const PotentialOperator& op() const { return op_; }

private:
  void spatial(Eigen::ArrayXcd& uhat, double dt) const;
  void quadratic(Eigen::ArrayXcd& uhat, double dt) const;
  Eigen::ArrayXcd nonlinearity(const Eigen::ArrayXcd& uhat) const;
  void refresh(double dt);

  FlowKind kind_;
  PotentialOperator op_;
  Eigen::ArrayXd mask_;
  double cached_dt_ = 0.0;
  Eigen::ArrayXcd full_;
  Eigen::ArrayXcd half_;
};

Evolution evolve_linear(const Field& u1, const PotentialSet& ps,
                        const EvolveConfig& cfg);

/// i u_t + Laplacian u = a.grad u + V u + u^2. With bootstrap parameters the
/// monitor tracks sup ||u||_H10 and sup x_norm(profile) against eps1.
Evolution evolve_nonlinear(const Field& u1, const PotentialSet& ps,
                           const EvolveConfig& cfg,
                           const std::optional<BootstrapParams>& bootstrap = {});

/// i u_t = H_A u with H_A = -(grad - iA)^2 + V; records mass and the
/// Hamiltonian functional at every snapshot.
Evolution evolve_hamiltonian(const Field& u1, const std::array<Field, 3>& A,
                             const Field& V, EvolveConfig cfg);

/// (1/2) int |(grad - iA) u|^2 + V |u|^2 dx.
double hamiltonian_energy(const Field& u, const std::array<Field, 3>& A,
                          const Field& V);

/// f(t) = exp(-it Laplacian) u(t) snapshotwise.
Trajectory profile_of(const Trajectory& tr);

} // namespace rlab

#endif
