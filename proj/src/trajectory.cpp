#include "rlab/trajectory.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "rlab/snapshot.hpp"

namespace rlab {

Trajectory::Trajectory(std::vector<double> times, std::vector<Field> fields) {
  if (times.size() != fields.size())
    throw std::invalid_argument("trajectory needs one field per time");
  for (std::size_t i = 0; i < times.size(); ++i)
    push_back(times[i], std::move(fields[i]));
}

void Trajectory::push_back(double t, Field f) {
  if (times_.empty() && t < 1.0 - 1e-12)
    throw std::invalid_argument("trajectory times start at t >= 1");
  if (!times_.empty() && !(t > times_.back()))
    throw std::invalid_argument("trajectory times must strictly increase");
  if (!fields_.empty() && !(f.grid() == fields_.front().grid()))
    throw GridMismatch("trajectory fields must share one grid");
  times_.push_back(t);
  fields_.push_back(std::move(f));
}

const Grid& Trajectory::grid() const {
  if (fields_.empty()) throw std::logic_error("empty trajectory has no grid");
  return fields_.front().grid();
}

std::optional<double> Trajectory::uniform_dt() const {
  if (times_.size() < 2) return std::nullopt;
  const double dt = (times_.back() - times_.front()) / (times_.size() - 1);
  for (std::size_t i = 1; i < times_.size(); ++i)
    if (std::abs(times_[i] - times_[i - 1] - dt) > 1e-9) return std::nullopt;
  return dt;
}

std::vector<double> trapezoid_weights(const std::vector<double>& t) {
  std::vector<double> w(t.size(), 0.0);
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double h = 0.5 * (t[i + 1] - t[i]);
    w[i] += h;
    w[i + 1] += h;
  }
  return w;
}

void save_trajectory(const std::filesystem::path& dir, const Trajectory& tr,
                     int stride, const std::string& config_hash) {
  std::filesystem::create_directories(dir);
  nlohmann::json index;
  index["times"] = tr.times();
  index["stride"] = stride;
  index["config_hash"] = config_hash;
  auto files = nlohmann::json::array();
  for (std::size_t i = 0; i < tr.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "snap_%05zu.rlab", i);
    write_snapshot(dir / name, tr.field(i));
    files.push_back(name);
  }
  index["files"] = files;
  std::ofstream(dir / "index.json") << index.dump(2) << '\n';
}

Trajectory load_trajectory(const std::filesystem::path& dir) {
  std::ifstream in(dir / "index.json");
  if (!in) throw std::runtime_error("missing index.json in " + dir.string());
  const auto index = nlohmann::json::parse(in);
  const auto times = index.at("times").get<std::vector<double>>();
  const auto files = index.at("files").get<std::vector<std::string>>();
  Trajectory tr;
  for (std::size_t i = 0; i < times.size(); ++i)
    tr.push_back(times[i], read_snapshot(dir / files.at(i)));
  return tr;
}

} // namespace rlab
