#include "rlab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <openssl/evp.h>

#include "rlab/csv.hpp"
#include "rlab/duhamel.hpp"
#include "rlab/estimates.hpp"
#include "rlab/flow.hpp"
#include "rlab/norms.hpp"
#include "rlab/potentials.hpp"
#include "rlab/snapshot.hpp"
#include "rlab/symbol.hpp"

#ifndef RLAB_VERSION
#define RLAB_VERSION "unknown"
#endif

namespace rlab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "scenario.name",
      "grid.n", "grid.length",
      "run.seed", "run.output",
      "evolve.t_end", "evolve.dt", "evolve.stride", "evolve.dealias",
      "evolve.require_certificate",
      "potential.V", "potential.a1", "potential.a2", "potential.a3",
      "potential.delta", "potential.rescale",
      "data.shape", "data.width", "data.cutoff", "data.amplitude", "data.tilt",
      "bootstrap.eps0", "bootstrap.amplification",
      "born.order", "born.t", "born.dt", "born.tags", "born.refinement",
      "wave.t_end", "wave.dt", "wave.tau0", "wave.kappa_max",
      "harness.samples", "harness.band_lo", "harness.band_hi",
      "harness.envelope", "harness.t_end", "harness.dt", "harness.axis",
      "harness.wrap_tail", "harness.p", "harness.q", "harness.r", "harness.k",
      "harness.c", "harness.t0", "harness.t1", "harness.n_times",
      "harness.half_derivative", "harness.forcing_scale", "harness.data_scale",
      "harness.band", "harness.flatness_max", "harness.kappa_max"};
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string iso_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool is_finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

// Collects the files a scenario writes so the manifest can list them.
class ArtifactWriter {
public:
  explicit ArtifactWriter(fs::path root) : root_(std::move(root)) {
    fs::create_directories(root_);
  }

  void text(const std::string& rel, const std::string& content) {
    const fs::path p = root_ / rel;
    fs::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << content;
    record(rel);
  }

  void snapshot(const std::string& rel, const Field& f) {
    const fs::path p = root_ / rel;
    fs::create_directories(p.parent_path());
    write_snapshot(p, f);
    record(rel);
  }

  void trajectory(const std::string& rel, const Trajectory& tr, int stride,
                  const std::string& hash) {
    save_trajectory(root_ / rel, tr, stride, hash);
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(root_ / rel))
      names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    for (const auto& n : names) record(rel + "/" + n);
  }

  std::vector<Artifact> artifacts;

private:
  void record(const std::string& rel) {
    const fs::path p = root_ / rel;
    artifacts.push_back({rel, sha256_hex(read_file(p)), fs::file_size(p)});
  }

  fs::path root_;
};

struct Outcome {
  std::vector<Assertion> assertions;
  json metrics = json::object();

  void check(const std::string& name, bool pass, const std::string& detail) {
    assertions.push_back({name, pass, detail});
  }
};

std::string fmt(double v) { return format_double(v); }

Grid config_grid(const ExperimentConfig& c) {
  return Grid(c.get_int("grid.n"), c.get_double("grid.length"));
}

std::uint64_t config_seed(const ExperimentConfig& c) {
  const int s = c.get_int("run.seed", 1);
  if (s < 0) throw ConfigError("run.seed must be >= 0");
  return static_cast<std::uint64_t>(s);
}

Field config_data(const ExperimentConfig& c, const Grid& g) {
  const std::string shape = c.get_string("data.shape", std::string("gaussian"));
  const double width = c.get_double("data.width", 2.0);
  const double amplitude = c.get_double("data.amplitude", 1.0);
  if (!(width > 0.0)) throw ConfigError("data.width must be positive");
  if (shape == "gaussian") {
    const double tilt = c.get_double("data.tilt", 0.0);
    const double s = 0.5 / (width * width);
    return sample_physical(g, [&](double x1, double x2, double x3) {
      return amplitude * std::exp(-s * (x1 * x1 + x2 * x2 + x3 * x3)) *
             Complex(1.0, tilt * x1);
    });
  }
  if (shape == "packet") {
    Field f = smooth_random_packet(g, config_seed(c), width,
                                   c.get_double("data.cutoff", 0.25));
    f *= amplitude;
    return f;
  }
  throw ConfigError("data.shape must be gaussian or packet, got '" + shape + "'");
}

Field config_bump(const ExperimentConfig& c, const std::string& key,
                  const Grid& g, std::vector<std::string>& warnings) {
  if (!c.has(key)) return Field(g, Repr::physical);
  const auto v = c.get_doubles(key);
  if (v.size() != 5)
    throw ConfigError(key + " needs x, y, z, width, amplitude");
  if (!(v[3] > 0.0)) throw ConfigError(key + " width must be positive");
  return gaussian_potential(g, Eigen::Vector3d(v[0], v[1], v[2]), v[3], v[4],
                            &warnings);
}

struct ConfiguredPotentials {
  PotentialSet set;
  double lambda = 1.0;
  std::vector<std::string> warnings;
};

ConfiguredPotentials config_potentials(const ExperimentConfig& c,
                                       const Grid& g) {
  ConfiguredPotentials out{PotentialSet::zero(g), 1.0, {}};
  out.set.V = config_bump(c, "potential.V", g, out.warnings);
  out.set.a[0] = config_bump(c, "potential.a1", g, out.warnings);
  out.set.a[1] = config_bump(c, "potential.a2", g, out.warnings);
  out.set.a[2] = config_bump(c, "potential.a3", g, out.warnings);
  const double delta = c.get_double("potential.delta", 1.0);
  if (c.get_bool("potential.rescale", false) && !out.set.is_zero()) {
    auto r = rescale_to_delta(out.set, delta);
    out.set = std::move(r.set);
    out.lambda = r.lambda;
  }
  out.set.delta_target = delta;
  return out;
}

EvolveConfig config_evolve(const ExperimentConfig& c) {
  EvolveConfig e;
  e.t_end = c.get_double("evolve.t_end", 2.0);
  e.dt = c.get_double("evolve.dt", 0.01);
  e.snapshot_stride = c.get_int("evolve.stride", 1);
  const std::string d = c.get_string("evolve.dealias", std::string("two-thirds"));
  if (d == "two-thirds")
    e.dealias = Dealias::two_thirds;
  else if (d == "off")
    e.dealias = Dealias::off;
  else
    throw ConfigError("evolve.dealias must be two-thirds or off");
  e.require_certificate = c.get_bool("evolve.require_certificate", true);
  try {
    e.steps();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(std::string("evolve: ") + ex.what());
  }
  return e;
}

HarnessConfig config_harness(const ExperimentConfig& c) {
  HarnessConfig h;
  h.n = c.get_int("grid.n");
  h.length = c.get_double("grid.length");
  h.samples = c.get_int("harness.samples", h.samples);
  h.seed = config_seed(c);
  h.band_lo = c.get_int("harness.band_lo", h.band_lo);
  h.band_hi = c.get_int("harness.band_hi", h.band_hi);
  h.envelope = c.get_double("harness.envelope", h.envelope);
  h.t_end = c.get_double("harness.t_end", h.t_end);
  h.dt = c.get_double("harness.dt", h.dt);
  h.axis = c.get_int("harness.axis", h.axis);
  h.wrap_tail = c.get_double("harness.wrap_tail", h.wrap_tail);
  h.scale = c.get_double("harness.data_scale", h.scale);
  if (h.samples < 1) throw ConfigError("harness.samples must be >= 1");
  if (h.axis < 0 || h.axis > 2) throw ConfigError("harness.axis must be 0, 1 or 2");
  return h;
}

// ||.||_H10 + x_norm, the size functional of the data and wave-operator
// comparisons.
double data_size(const Field& f) {
  return sobolev_norm(f, 10.0).value + x_norm(f).value;
}

void add_warnings(json& metrics, const std::vector<std::string>& w) {
  metrics["warning_count"] = static_cast<double>(w.size());
}

json certificate_json(const SmallnessCertificate& cert) {
  json j;
  to_json(j, cert);
  return j;
}

void run_certify(const ExperimentConfig& c, ArtifactWriter& out, Outcome& o) {
  const Grid g = config_grid(c);
  auto pot = config_potentials(c, g);
  const double delta = pot.set.delta_target;
  const auto cert = certify(pot.set, delta);
  CsvTable table({"potential", "y_plain", "y_weighted", "y_smooth", "y_sum", "pass"});
  for (const auto& e : cert.entries) {
    table.add_row({e.name, fmt(e.y.plain), fmt(e.y.weighted), fmt(e.y.smooth),
                   fmt(e.y.sum()), e.pass ? "1" : "0"});
    o.metrics["y_sum_" + e.name] = e.y.sum();
  }
  json j = certificate_json(cert);
  j["lambda"] = pot.lambda;
  auto warnings = pot.warnings;
  warnings.insert(warnings.end(), cert.warnings.begin(), cert.warnings.end());
  j["warnings"] = warnings;
  out.text("certificate.csv", table.str());
  out.text("certificate.json", j.dump(2) + "\n");
  o.metrics["delta"] = delta;
  o.metrics["lambda"] = pot.lambda;
  add_warnings(o.metrics, warnings);
  o.check("certificate", cert.pass,
          "every Y triple sum <= delta = " + fmt(delta));
}

void run_simulate(const ExperimentConfig& c, bool nonlinear,
                  ArtifactWriter& out, Outcome& o, const std::string& hash) {
  const Grid g = config_grid(c);
  const Field u1 = config_data(c, g);
  auto pot = config_potentials(c, g);
  const EvolveConfig ecfg = config_evolve(c);

  std::optional<BootstrapParams> boot;
  if (nonlinear && (c.has("bootstrap.eps0") || c.has("bootstrap.amplification"))) {
    BootstrapParams b;
    const std::string e0 = c.get_string("bootstrap.eps0", std::string("auto"));
    b.eps0 = e0 == "auto" ? data_size(free_propagate(u1, -1.0))
                          : c.get_double("bootstrap.eps0");
    b.amplification = c.get_double("bootstrap.amplification", 2.0);
    try {
      b.validate();
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(std::string("bootstrap: ") + ex.what());
    }
    boot = b;
  }

  const Evolution ev = nonlinear ? evolve_nonlinear(u1, pot.set, ecfg, boot)
                                 : evolve_linear(u1, pot.set, ecfg);
  const auto& tr = ev.trajectory;
  CsvTable table({"t", "l2_norm", "h10_norm"});
  double max_drift = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    table.add_row({tr.time(i), ev.mass[i], sobolev_norm(tr.field(i), 10.0).value});
    max_drift = std::max(max_drift, std::abs(ev.mass[i] - ev.mass.front()));
  }
  out.text("diagnostics.csv", table.str());
  out.trajectory("trajectory", tr, ecfg.snapshot_stride, hash);

  json j;
  auto warnings = pot.warnings;
  warnings.insert(warnings.end(), ev.warnings.begin(), ev.warnings.end());
  j["warnings"] = warnings;
  j["lambda"] = pot.lambda;
  o.metrics["final_time"] = tr.times().back();
  o.metrics["mass_initial"] = ev.mass.front();
  o.metrics["mass_final"] = ev.mass.back();
  o.metrics["max_mass_drift"] = max_drift;
  o.metrics["lambda"] = pot.lambda;
  add_warnings(o.metrics, warnings);
  o.check("horizon reached", std::abs(tr.times().back() - ecfg.t_end) < 1e-9,
          "final snapshot at t = " + fmt(tr.times().back()));
  if (ev.bootstrap) {
    const auto& b = *ev.bootstrap;
    j["bootstrap"] = {{"eps0", b.eps0},       {"eps1", b.eps1},
                      {"sup_h10", b.sup_h10}, {"sup_x", b.sup_x},
                      {"exited", b.exited},   {"exit_time", b.exit_time}};
    o.metrics["eps0"] = b.eps0;
    o.metrics["eps1"] = b.eps1;
    o.metrics["sup_h10"] = b.sup_h10;
    o.metrics["sup_x"] = b.sup_x;
    o.metrics["bootstrap_exit_time"] = b.exit_time;
    o.check("bootstrap", !b.exited,
            b.exited ? "bound eps1 = " + fmt(b.eps1) + " failed at t = " +
                           fmt(b.exit_time)
                     : "sup H10 " + fmt(b.sup_h10) + ", sup X " + fmt(b.sup_x) +
                           " <= eps1 = " + fmt(b.eps1));
  }
  out.text("evolution.json", j.dump(2) + "\n");
}

std::vector<PotentialTag> config_tags(const ExperimentConfig& c) {
  std::vector<PotentialTag> tags;
  if (!c.has("born.tags")) return tags;
  std::stringstream ss(c.get_string("born.tags"));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      tags.push_back(parse_potential_tag(trim(item)));
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(std::string("born.tags: ") + ex.what());
    }
  }
  return tags;
}

void run_born(const ExperimentConfig& c, ArtifactWriter& out, Outcome& o) {
  const Grid g = config_grid(c);
  const Field u1 = config_data(c, g);
  auto pot = config_potentials(c, g);
  const int order = c.get_int("born.order", 6);
  if (order < 2) throw ConfigError("born.order must be >= 2");
  BornOptions opt;
  opt.tags = config_tags(c);
  opt.check_refinement = c.get_bool("born.refinement", true);
  const auto report = series_decay_report(u1, pot.set, order,
                                          c.get_double("born.t", 2.0),
                                          c.get_double("born.dt", 0.1), opt);
  out.text("series.csv", report.csv());

  json j;
  j["rate"] = report.rate;
  j["x_rate"] = report.x_rate;
  j["lambda"] = pot.lambda;
  j["warnings"] = pot.warnings;
  auto rows = json::array();
  for (const auto& r : report.rows)
    rows.push_back({{"n", r.n}, {"h10", r.h10}, {"x", r.x},
                    {"ratio", r.ratio}, {"x_ratio", r.x_ratio}});
  j["rows"] = rows;
  out.text("series.json", j.dump(2) + "\n");

  // Ratios from n = 2 on; the first one compares against the free term.
  double lo = INFINITY, hi = 0.0, xlo = INFINITY, xhi = 0.0;
  for (const auto& r : report.rows) {
    o.metrics["h10_" + std::to_string(r.n)] = r.h10;
    o.metrics["x_" + std::to_string(r.n)] = r.x;
    if (r.n < 2) continue;
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
    xlo = std::min(xlo, r.x_ratio);
    xhi = std::max(xhi, r.x_ratio);
  }
  const double band = lo > 0.0 ? hi / lo : INFINITY;
  const double xband = xlo > 0.0 ? xhi / xlo : INFINITY;
  o.metrics["rate"] = report.rate;
  o.metrics["x_rate"] = report.x_rate;
  o.metrics["ratio_band"] = band;
  o.metrics["x_ratio_band"] = xband;
  o.metrics["lambda"] = pot.lambda;
  add_warnings(o.metrics, pot.warnings);
  o.check("geometric band H10", band <= 2.0, "max/min ratio " + fmt(band));
  o.check("geometric band X", xband <= 2.0, "max/min ratio " + fmt(xband));
  o.check("contraction", report.rate < 1.0, "fitted rate " + fmt(report.rate));
}

void run_wave(const ExperimentConfig& c, ArtifactWriter& out, Outcome& o) {
  const Grid g = config_grid(c);
  const Field u1 = config_data(c, g);
  auto pot = config_potentials(c, g);
  const auto w = wave_operator(u1, pot.set, c.get_double("wave.t_end", 33.0),
                               c.get_double("wave.dt", 0.25),
                               c.get_double("wave.tau0", 4.0));
  const double size_g = data_size(w.g);
  const double size_0 = data_size(free_propagate(u1, -1.0));
  const double kappa = size_0 > 0.0 ? size_g / size_0 : 0.0;
  out.text("trace.csv", w.csv());
  out.snapshot("wave_operator.rlab", w.g);
  auto warnings = pot.warnings;
  warnings.insert(warnings.end(), w.warnings.begin(), w.warnings.end());
  json j{{"tau", w.tau},           {"distance", w.distance},
         {"exponent", w.exponent}, {"converging", w.converging},
         {"size_wave", size_g},    {"size_free", size_0},
         {"kappa", kappa},         {"lambda", pot.lambda},
         {"warnings", warnings}};
  out.text("wave.json", j.dump(2) + "\n");
  for (std::size_t i = 0; i < w.tau.size(); ++i)
    o.metrics["d_" + fmt(w.tau[i])] = w.distance[i];
  o.metrics["exponent"] = w.exponent;
  o.metrics["kappa"] = kappa;
  o.metrics["lambda"] = pot.lambda;
  add_warnings(o.metrics, warnings);
  o.check("cauchy trace decreasing", w.converging, "trace over " +
          std::to_string(w.tau.size()) + " dyadic times");
  o.check("decay exponent", w.exponent > 0.0, "a = " + fmt(w.exponent));
  if (c.has("wave.kappa_max")) {
    const double kmax = c.get_double("wave.kappa_max");
    o.check("kappa", kappa <= kmax, fmt(kappa) + " <= " + fmt(kmax));
  }
}

void record_report(const EstimateReport& r, ArtifactWriter& out, Outcome& o) {
  json j;
  to_json(j, r);
  out.text("report.json", j.dump(2) + "\n");
  out.text("ratios.csv", r.csv());
  o.metrics["max_ratio"] = r.max_ratio;
  o.metrics["median_ratio"] = r.median_ratio;
  o.metrics["sample_count"] = r.sample_count;
  add_warnings(o.metrics, r.warnings);
}

bool all_finite(const EstimateReport& r) {
  return std::all_of(r.ratios.begin(), r.ratios.end(),
                     [](double v) { return std::isfinite(v); });
}

void run_harness(const std::string& id, const ExperimentConfig& c,
                 ArtifactWriter& out, Outcome& o) {
  const HarnessConfig h = config_harness(c);
  const double p = c.get_double("harness.p", 2.0);
  const double q = c.get_double("harness.q", 6.0);
  if (id == "str1") {
    const auto r = check_strichartz(h, {p, q});
    record_report(r, out, o);
    o.check("finite ratios", all_finite(r), "max " + fmt(r.max_ratio));
    if (std::isinf(p) && q == 2.0)
      o.check("energy pair", std::abs(r.max_ratio - 1.0) <= 1e-12,
              "(inf, 2) ratio " + fmt(r.max_ratio));
  } else if (id == "smo1" || id == "smo2" || id == "smo3") {
    const SmoothingVariant v = id == "smo1"   ? SmoothingVariant::homogeneous
                               : id == "smo2" ? SmoothingVariant::dual
                                              : SmoothingVariant::inhomogeneous;
    const auto r = check_smoothing(h, v, c.get_bool("harness.half_derivative", true));
    record_report(r, out, o);
    o.check("finite ratios", all_finite(r), "max " + fmt(r.max_ratio));
  } else if (id == "ik-smostri") {
    const auto r = check_smoothing_strichartz(
        h, {p, q}, c.get_double("harness.forcing_scale", 1.0));
    record_report(r, out, o);
    o.check("finite ratios", all_finite(r), "max " + fmt(r.max_ratio));
  } else if (id == "dispersive") {
    const auto r = check_dispersive_decay(
        h, c.get_int("harness.k", 0), c.get_double("harness.t0", 4.0),
        c.get_double("harness.t1", 16.0), c.get_int("harness.n_times", 13));
    record_report(r, out, o);
    const double limit = c.get_double("harness.flatness_max", 2.0);
    o.check("flatness", r.max_ratio <= limit,
            "max flatness " + fmt(r.max_ratio) + " vs " + fmt(limit));
  } else if (id == "bilin") {
    BilinearSymbol m;
    if (c.has("harness.band")) {
      m.identity = false;
      m.band = c.get_int("harness.band");
      m.label = "band " + std::to_string(m.band);
    } else {
      m.label = "identity";
    }
    const auto r = check_bilinear(h, m, p, q, c.get_double("harness.r", 1.5));
    record_report(r, out, o);
    o.check("hoelder bound", r.max_ratio <= 1.0 + 1e-12,
            "max ratio " + fmt(r.max_ratio));
  } else if (id == "direction") {
    const auto d = check_direction_partition(h.grid());
    json j{{"max_sum_error", d.max_sum_error},
           {"support_violations", d.support_violations},
           {"modes", d.modes}};
    out.text("report.json", j.dump(2) + "\n");
    CsvTable table({"modes", "max_sum_error", "support_violations"});
    table.add_row({static_cast<double>(d.modes), d.max_sum_error,
                   static_cast<double>(d.support_violations)});
    out.text("partition.csv", table.str());
    o.metrics["max_sum_error"] = d.max_sum_error;
    o.metrics["support_violations"] = static_cast<double>(d.support_violations);
    o.check("partition of unity", d.max_sum_error <= 1e-12,
            "max |sum - 1| = " + fmt(d.max_sum_error));
    o.check("support", d.support_violations == 0,
            std::to_string(d.support_violations) + " violations");
  } else if (id == "summation") {
    const auto r = check_summation_interpolation(
        h, c.get_int("harness.k", 0), p, q, c.get_double("harness.c", 0.5));
    record_report(r, out, o);
    o.check("finite ratios", all_finite(r), "max " + fmt(r.max_ratio));
  } else if (id == "doi") {
    const Grid g = config_grid(c);
    const Field u1 = config_data(c, g);
    auto pot = config_potentials(c, g);
    const auto d = check_doi_local(u1, pot.set, c.get_double("evolve.t_end", 2.0),
                                   c.get_double("evolve.dt", 0.01));
    json j{{"lhs", d.lhs}, {"rhs", d.rhs}, {"kappa", d.kappa}};
    out.text("report.json", j.dump(2) + "\n");
    CsvTable table({"lhs", "rhs", "kappa"});
    table.add_row({d.lhs, d.rhs, d.kappa});
    out.text("doi.csv", table.str());
    o.metrics["lhs"] = d.lhs;
    o.metrics["rhs"] = d.rhs;
    o.metrics["kappa"] = d.kappa;
    const double kmax = c.get_double("harness.kappa_max", 1.0);
    o.check("local bound", d.kappa <= kmax, fmt(d.kappa) + " <= " + fmt(kmax));
  } else {
    throw ConfigError("unknown estimate id '" + id + "'");
  }
}

const std::map<std::string, std::string>& descriptions() {
  static const std::map<std::string, std::string> d{
      {"certify",
       "Builds the configured Gaussian potentials (V, a1..a3) and checks the\n"
       "smallness condition: for V, each a_j and each a_j^2 the Y norm of w,\n"
       "<x> w and (1 - Laplacian)^5 w must sum to at most delta.\n"
       "inputs: grid, potential, potential.delta, potential.rescale\n"
       "outputs: certificate.csv, certificate.json\n"},
      {"simulate-linear",
       "Strang split-step evolution of i u_t + Laplacian u = a.grad u + V u\n"
       "from t = 1, Fourier multiplier for the free part.\n"
       "inputs: grid, data, potential, evolve\n"
       "outputs: trajectory/ snapshots, diagnostics.csv (t, l2_norm, h10_norm),\n"
       "evolution.json\n"},
      {"simulate-nonlinear",
       "As simulate-linear with the quadratic term u^2 (two-thirds dealiasing).\n"
       "With a [bootstrap] section the run monitors the a priori bounds\n"
       "sup_t ||u||_H10 <= eps1 and sup_t x_norm(profile) <= eps1, eps1 = A eps0,\n"
       "and reports the first exit time without clipping.\n"
       "inputs: grid, data, potential, evolve, bootstrap\n"
       "outputs: trajectory/, diagnostics.csv, evolution.json\n"},
      {"born-series",
       "Iterated Duhamel formula for the linear flow: terms T_n of the Born\n"
       "series, their H10 and X norms, consecutive ratios and the fitted\n"
       "geometric rate (expected to scale linearly with delta).\n"
       "inputs: grid, data, potential, born\n"
       "outputs: series.csv (n, h10_norm, x_norm, ratio), series.json\n"},
      {"wave-operator",
       "Scattering limit of the profile exp(-it Laplacian) u(t) for the linear\n"
       "flow: dyadic Cauchy trace d(tau) = ||g(2 tau) - g(tau)||_H10, fitted\n"
       "decay exponent, and kappa = size(W u1) / size(exp(-i Laplacian) u1)\n"
       "with size = ||.||_H10 + x_norm.\n"
       "inputs: grid, data, potential, wave\n"
       "outputs: trace.csv (tau, cauchy_distance), wave_operator.rlab, wave.json\n"},
      {"harness:str1",
       "Free Strichartz estimate ||exp(it Laplacian) f||_{L^p_t L^q_x} <= C ||f||_L2\n"
       "for an admissible pair 2/p + 3/q = 3/2; empirical sup over samples.\n"
       "inputs: grid, harness (p, q, samples, bands, t_end, dt)\n"
       "outputs: report.json, ratios.csv\n"},
      {"harness:smo1",
       "Homogeneous local smoothing estimate (half-derivative gain):\n"
       "sup_{x_j} || |D_j|^(1/2) exp(it Laplacian) f ||_{L2_t L2_transverse}\n"
       "<= C ||f||_L2. harness.half_derivative = false drops the gain.\n"
       "inputs: grid, harness\noutputs: report.json, ratios.csv\n"},
      {"harness:smo2",
       "Dual local smoothing estimate: the adjoint of the homogeneous\n"
       "smoothing map, tested on forcings restricted to one plane.\n"
       "inputs: grid, harness\noutputs: report.json, ratios.csv\n"},
      {"harness:smo3",
       "Inhomogeneous local smoothing estimate: the Duhamel integral gains a\n"
       "full derivative from the L1_{x_j} L2 forcing norm to the\n"
       "L^inf_{x_j} L2 solution norm.\n"
       "inputs: grid, harness\noutputs: report.json, ratios.csv\n"},
      {"harness:ik-smostri",
       "Mixed smoothing-Strichartz estimate: Duhamel integral of a forcing\n"
       "measured in the dual smoothing norm, solution in L^p_t L^q_x.\n"
       "inputs: grid, harness (p, q, forcing_scale)\n"
       "outputs: report.json, ratios.csv\n"},
      {"harness:dispersive",
       "Dispersive decay of a single Littlewood-Paley piece: flatness of\n"
       "t ||exp(it Laplacian) f_k||_L6 over [t0, t1], checked against\n"
       "harness.flatness_max (default 2).\n"
       "inputs: grid, harness (k, t0, t1, n_times)\n"
       "outputs: report.json, ratios.csv\n"},
      {"harness:bilin",
       "Bilinear multiplier bound ||T_m(f, g)||_Lr <= ||F^-1 m||_L1 ||f||_Lp\n"
       "||g||_Lq with 1/r = 1/p + 1/q (Coifman-Meyer type, separable symbols).\n"
       "inputs: grid, harness (p, q, r, band)\n"
       "outputs: report.json, ratios.csv\n"},
      {"harness:direction",
       "Directional partition chi_1 + chi_2 + chi_3 = 1 with |xi_j| >= 0.9\n"
       "max_k |xi_k| on the support of chi_j, over every lattice mode.\n"
       "inputs: grid\noutputs: report.json, partition.csv\n"},
      {"harness:summation",
       "Interpolation step of the dyadic summation argument: the L^p_t L^q_x\n"
       "norm of a band piece against a lower time exponent and a weighted H2\n"
       "norm of its data.\n"
       "inputs: grid, harness (k, p, q, c)\n"
       "outputs: report.json, ratios.csv\n"},
      {"harness:doi",
       "Local-in-time energy bound on [1, T], T <= 2: sup_t ||f||_H10 against\n"
       "||f_1||_H10 + (T - 1) sup_t ||f||_H10^2 along the nonlinear flow.\n"
       "inputs: grid, data, potential, evolve (t_end, dt)\n"
       "outputs: report.json, doi.csv\n"},
  };
  return d;
}

} // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

std::string code_version() { return RLAB_VERSION; }

// --- configuration -------------------------------------------------------

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  ExperimentConfig c;
  for (const auto& [section, body] : tree) {
    if (body.empty())
      throw ConfigError("key '" + section + "' is outside a [section]");
    for (const auto& [key, value] : body) {
      if (!value.empty())
        throw ConfigError("nested key under " + section + "." + key);
      c.set(section + "." + key, value.data());
    }
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return parse(os.str());
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  const auto dot = key.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == key.size() ||
      key.find('.', dot + 1) != std::string::npos)
    throw ConfigError("config keys have the form section.key, got '" + key + "'");
  const std::string v = trim(value);
  if (v.find('\n') != std::string::npos)
    throw ConfigError("config values are single-line");
  values_[key] = v;
}

std::string ExperimentConfig::serialize() const {
  std::string out;
  std::string current;
  for (const auto& [key, value] : values_) {
    const auto dot = key.find('.');
    const std::string section = key.substr(0, dot);
    if (section != current) {
      if (!out.empty()) out += "\n";
      out += "[" + section + "]\n";
      current = section;
    }
    out += key.substr(dot + 1) + " = " + value + "\n";
  }
  return out;
}

std::string ExperimentConfig::hash() const { return sha256_hex(serialize()); }

std::string ExperimentConfig::get_string(
    const std::string& key, const std::optional<std::string>& fallback) const {
  const auto it = values_.find(key);
  if (it != values_.end()) return it->second;
  if (fallback) return *fallback;
  throw ConfigError("missing required key " + key);
}

namespace {

double parse_number(const std::string& key, const std::string& raw) {
  std::string s = trim(raw);
  double factor = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    factor = std::numbers::pi;
    s = trim(s.substr(0, s.size() - 2));
    if (!s.empty() && s.back() == '*') s = trim(s.substr(0, s.size() - 1));
    if (s.empty()) s = "1";
  }
  if (s == "inf") return INFINITY;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v * factor;
  } catch (const std::exception&) {
    throw ConfigError(key + ": '" + raw + "' is not a number");
  }
}

} // namespace

double ExperimentConfig::get_double(const std::string& key,
                                    const std::optional<double>& fallback) const {
  const auto it = values_.find(key);
  if (it != values_.end()) return parse_number(key, it->second);
  if (fallback) return *fallback;
  throw ConfigError("missing required key " + key);
}

int ExperimentConfig::get_int(const std::string& key,
                              const std::optional<int>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    if (fallback) return *fallback;
    throw ConfigError("missing required key " + key);
  }
  const double v = parse_number(key, it->second);
  if (v != std::floor(v) || std::abs(v) > 2e9)
    throw ConfigError(key + ": '" + it->second + "' is not an integer");
  return static_cast<int>(v);
}

bool ExperimentConfig::get_bool(const std::string& key,
                                const std::optional<bool>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    if (fallback) return *fallback;
    throw ConfigError("missing required key " + key);
  }
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": '" + v + "' is not a boolean");
}

std::vector<double> ExperimentConfig::get_doubles(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(get_string(key));
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(key, item));
  return out;
}

void ExperimentConfig::validate() const {
  std::vector<std::string> problems;
  std::vector<std::string> missing;
  for (const char* k : {"scenario.name", "grid.n", "grid.length"})
    if (!has(k)) missing.push_back(k);
  if (!missing.empty()) {
    std::string m = "missing required keys:";
    for (const auto& k : missing) m += " " + k;
    problems.push_back(m);
  }
  for (const auto& [k, v] : values_)
    if (!known_keys().count(k)) problems.push_back("unknown key " + k);
  if (has("scenario.name")) {
    const auto& ids = scenario_ids();
    if (std::find(ids.begin(), ids.end(), scenario()) == ids.end())
      problems.push_back("unknown scenario '" + scenario() + "'");
  }
  try {
    if (has("grid.n") && get_int("grid.n") < 4)
      problems.push_back("grid.n must be >= 4");
    if (has("grid.length") && !is_finite_positive(get_double("grid.length")))
      problems.push_back("grid.length must be positive");
    if (has("potential.delta") && !is_finite_positive(get_double("potential.delta")))
      problems.push_back("potential.delta must be positive");
    if (has("bootstrap.eps0") && get_string("bootstrap.eps0") != "auto" &&
        !is_finite_positive(get_double("bootstrap.eps0")))
      problems.push_back("bootstrap.eps0 must be positive or auto");
  } catch (const ConfigError& e) {
    problems.push_back(e.what());
  }
  if (problems.empty()) return;
  std::string msg;
  for (const auto& p : problems) msg += (msg.empty() ? "" : "\n") + p;
  throw ConfigError(msg);
}

const std::vector<std::string>& scenario_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v{"simulate-nonlinear", "simulate-linear",
                               "born-series", "wave-operator", "certify"};
    for (const auto& e : estimate_ids()) v.push_back("harness:" + e);
    return v;
  }();
  return ids;
}

std::string describe_scenario(const std::string& scenario) {
  const auto& d = descriptions();
  const auto it = d.find(scenario);
  if (it == d.end()) {
    std::string msg = "unknown scenario '" + scenario + "'; valid ids:";
    for (const auto& s : scenario_ids()) msg += " " + s;
    throw std::invalid_argument(msg);
  }
  return scenario + "\n" + it->second;
}

// --- manifest ------------------------------------------------------------

void to_json(json& j, const RunManifest& m) {
  auto artifacts = json::array();
  for (const auto& a : m.artifacts)
    artifacts.push_back({{"path", a.path}, {"sha256", a.sha256}, {"bytes", a.bytes}});
  auto assertions = json::array();
  for (const auto& a : m.assertions)
    assertions.push_back({{"name", a.name}, {"pass", a.pass}, {"detail", a.detail}});
  j = json{{"scenario", m.scenario},     {"config_hash", m.config_hash},
           {"code_version", m.code_version}, {"started", m.started},
           {"finished", m.finished},     {"artifacts", artifacts},
           {"assertions", assertions},   {"metrics", m.metrics},
           {"error", m.error},           {"pass", m.pass}};
}

void from_json(const json& j, RunManifest& m) {
  m.scenario = j.at("scenario").get<std::string>();
  m.config_hash = j.at("config_hash").get<std::string>();
  m.code_version = j.at("code_version").get<std::string>();
  m.started = j.at("started").get<std::string>();
  m.finished = j.at("finished").get<std::string>();
  m.artifacts.clear();
  for (const auto& a : j.at("artifacts"))
    m.artifacts.push_back({a.at("path").get<std::string>(),
                           a.at("sha256").get<std::string>(),
                           a.at("bytes").get<std::uintmax_t>()});
  m.assertions.clear();
  for (const auto& a : j.at("assertions"))
    m.assertions.push_back({a.at("name").get<std::string>(),
                            a.at("pass").get<bool>(),
                            a.at("detail").get<std::string>()});
  m.metrics = j.at("metrics");
  m.error = j.value("error", std::string());
  m.pass = j.at("pass").get<bool>();
}

RunManifest RunManifest::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read manifest " + path.string());
  return json::parse(in).get<RunManifest>();
}

RunManifest run_experiment(const ExperimentConfig& cfg, const fs::path& out) {
  cfg.validate();
  RunManifest m;
  m.scenario = cfg.scenario();
  m.config_hash = cfg.hash();
  m.code_version = code_version();
  m.started = iso_now();

  ArtifactWriter writer(out);
  writer.text("config.ini", cfg.serialize());
  Outcome o;
  const std::string& s = m.scenario;
  try {
    if (s == "certify")
      run_certify(cfg, writer, o);
    else if (s == "simulate-linear")
      run_simulate(cfg, false, writer, o, m.config_hash);
    else if (s == "simulate-nonlinear")
      run_simulate(cfg, true, writer, o, m.config_hash);
    else if (s == "born-series")
      run_born(cfg, writer, o);
    else if (s == "wave-operator")
      run_wave(cfg, writer, o);
    else
      run_harness(s.substr(std::string("harness:").size()), cfg, writer, o);
  } catch (const BlowupError& e) {
    m.error = e.what();
  } catch (const RefinementError& e) {
    m.error = e.what();
  } catch (const CertificationError& e) {
    m.error = e.what();
  } catch (const HorizonError& e) {
    m.error = e.what();
  }

  m.artifacts = std::move(writer.artifacts);
  m.assertions = std::move(o.assertions);
  m.metrics = std::move(o.metrics);
  m.pass = m.error.empty() && !m.assertions.empty() &&
           std::all_of(m.assertions.begin(), m.assertions.end(),
                       [](const Assertion& a) { return a.pass; });
  m.finished = iso_now();
  std::ofstream(out / "manifest.json") << json(m).dump(2) << '\n';
  return m;
}

std::vector<DiffRow> compare_manifests(const RunManifest& a,
                                       const RunManifest& b) {
  if (a.scenario != b.scenario)
    throw std::invalid_argument("scenario mismatch: " + a.scenario + " vs " +
                                b.scenario);
  std::vector<DiffRow> rows;
  for (const auto& [key, va] : a.metrics.items()) {
    if (!b.metrics.contains(key)) continue;
    const auto& vb = b.metrics.at(key);
    if (!va.is_number() || !vb.is_number()) continue;
    const double x = va.get<double>(), y = vb.get<double>();
    if (x != y) rows.push_back({key, x, y});
  }
  return rows;
}

std::string diff_csv(const std::vector<DiffRow>& rows) {
  CsvTable table({"metric", "a", "b", "ratio", "difference"});
  for (const auto& r : rows)
    table.add_row({r.metric, format_double(r.a), format_double(r.b),
                   format_double(r.a != 0.0 ? r.b / r.a : NAN),
                   format_double(r.b - r.a)});
  return table.str();
}

std::vector<std::string> verify_manifest(const fs::path& manifest) {
  std::vector<std::string> problems;
  RunManifest m;
  try {
    m = RunManifest::load(manifest);
  } catch (const std::exception& e) {
    return {std::string("unreadable manifest: ") + e.what()};
  }
  const fs::path root = manifest.parent_path();
  if (m.artifacts.empty()) problems.push_back("manifest lists no artifacts");
  for (const auto& a : m.artifacts) {
    const fs::path p = root / a.path;
    if (!fs::exists(p)) {
      problems.push_back("missing " + a.path);
      continue;
    }
    if (sha256_hex(read_file(p)) != a.sha256)
      problems.push_back("hash mismatch for " + a.path);
  }
  const fs::path cfg = root / "config.ini";
  if (fs::exists(cfg)) {
    try {
      if (ExperimentConfig::load(cfg).hash() != m.config_hash)
        problems.push_back("config hash does not match config.ini");
    } catch (const ConfigError& e) {
      problems.push_back(std::string("config.ini: ") + e.what());
    }
  }
  return problems;
}

} // namespace rlab
