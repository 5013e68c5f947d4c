#ifndef RLAB_EXPERIMENT_HPP
#define RLAB_EXPERIMENT_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace rlab {

/// Invalid or incomplete configuration; the CLI maps it to a usage error.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Flat "section.key = value" configuration read from INI text.
///
/// Grammar: `[section]` headers, `key = value` lines, `;` comments on their
/// own line. Keys outside a section are rejected. The canonical form lists
/// sections and keys sorted, one `key = value` per line, and the config hash
/// is the SHA-256 of that text.
class ExperimentConfig {
public:
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::filesystem::path& path);

  std::string serialize() const;
  std::string hash() const;

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  void set(const std::string& key, const std::string& value);
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string get_string(const std::string& key,
                         const std::optional<std::string>& fallback = {}) const;
  double get_double(const std::string& key,
                    const std::optional<double>& fallback = {}) const;
  int get_int(const std::string& key,
              const std::optional<int>& fallback = {}) const;
  bool get_bool(const std::string& key,
                const std::optional<bool>& fallback = {}) const;
  std::vector<double> get_doubles(const std::string& key) const;

  std::string scenario() const { return get_string("scenario.name"); }

  /// Throws ConfigError listing every missing required key, unknown keys
  /// and an unknown scenario.
  void validate() const;

  friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    return a.values_ == b.values_;
  }

private:
  std::map<std::string, std::string> values_;
};

const std::vector<std::string>& scenario_ids();

/// Inputs, outputs and the mathematical content a scenario exercises.
/// Throws std::invalid_argument listing the valid ids for unknown names.
std::string describe_scenario(const std::string& scenario);

struct Assertion {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Artifact {
  std::string path;  // relative to the manifest directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  std::string scenario;
  std::string config_hash;
  std::string code_version;
  std::string started;
  std::string finished;
  std::vector<Artifact> artifacts;
  std::vector<Assertion> assertions;
  nlohmann::json metrics = nlohmann::json::object();
  std::string error;  // set when a runtime guard tripped
  bool pass = false;

  static RunManifest load(const std::filesystem::path& path);
};

void to_json(nlohmann::json& j, const RunManifest& m);
void from_json(const nlohmann::json& j, RunManifest& m);

/// Executes the scenario, writes its artifacts and manifest.json into
/// `out`, and returns the manifest. Runtime guard trips are recorded in the
/// manifest (pass = false) instead of being thrown.
RunManifest run_experiment(const ExperimentConfig& cfg,
                           const std::filesystem::path& out);

struct DiffRow {
  std::string metric;
  double a = 0.0;
  double b = 0.0;
};

/// Numeric metrics that differ between two runs of one scenario. Throws
/// std::invalid_argument on a scenario mismatch.
std::vector<DiffRow> compare_manifests(const RunManifest& a,
                                       const RunManifest& b);

/// CSV metric,a,b,ratio,difference.
std::string diff_csv(const std::vector<DiffRow>& rows);

/// Problems with the manifest's artifact list (missing files, changed
/// hashes); empty when the manifest checks out.
std::vector<std::string> verify_manifest(const std::filesystem::path& manifest);

std::string sha256_hex(const std::string& bytes);
std::string code_version();

} // namespace rlab

#endif
