#ifndef RLAB_TRAJECTORY_HPP
#define RLAB_TRAJECTORY_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rlab/field.hpp"

namespace rlab {

/// Time-stamped fields on one grid. Times are strictly increasing and start
/// at or after the initial time t = 1.
class Trajectory {
public:
  Trajectory() = default;
  Trajectory(std::vector<double> times, std::vector<Field> fields);

  void push_back(double t, Field f);

  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }
  const std::vector<double>& times() const { return times_; }
  const std::vector<Field>& fields() const { return fields_; }
  const Field& field(std::size_t i) const { return fields_[i]; }
  double time(std::size_t i) const { return times_[i]; }
  const Grid& grid() const;
  /// Common spacing when the time ladder is uniform to 1e-9.
  std::optional<double> uniform_dt() const;

private:
  std::vector<double> times_;
  std::vector<Field> fields_;
};

/// Trapezoid weights for the given strictly increasing times.
std::vector<double> trapezoid_weights(const std::vector<double>& times);

/// Persists snapshots as snap_NNNNN.rlab plus index.json
/// {times, stride, config_hash, files}.
void save_trajectory(const std::filesystem::path& dir, const Trajectory& tr,
                     int stride, const std::string& config_hash);
Trajectory load_trajectory(const std::filesystem::path& dir);

} // namespace rlab

#endif
