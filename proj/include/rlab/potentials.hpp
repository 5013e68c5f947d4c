#ifndef RLAB_POTENTIALS_HPP
#define RLAB_POTENTIALS_HPP

#include <array>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "rlab/field.hpp"

namespace rlab {

/// Electric potential V and magnetic potentials a_1..a_3, all real and on
/// one grid, stored physically.
struct PotentialSet {
  Field V;
  std::array<Field, 3> a;
  double delta_target = 0.0;

  static PotentialSet zero(const Grid& g);
  const Grid& grid() const { return V.grid(); }
  bool is_zero() const;
  bool has_magnetic() const;
  PotentialSet scaled(double lambda) const;
};

/// Throws std::invalid_argument unless every component shares one grid and
/// has imaginary parts <= 1e-14.
void validate(const PotentialSet& ps);

/// amplitude * exp(-|x - center|^2 / (2 width^2)). A boundary-mass warning is
/// appended to `warnings` when the bump reaches the box edge.
Field gaussian_potential(const Grid& g, const Eigen::Vector3d& center,
                         double width, double amplitude,
                         std::vector<std::string>* warnings = nullptr);

/// (||w||_Y, ||<x> w||_Y, ||(1 - Laplacian)^5 w||_Y).
struct YTriple {
  double plain = 0.0;
  double weighted = 0.0;
  double smooth = 0.0;
  double sum() const { return plain + weighted + smooth; }
};

YTriple y_triple(const Field& w, std::vector<std::string>* warnings = nullptr);

struct CertificateEntry {
  std::string name;  // "V", "a1".."a3", "a1^2".."a3^2"
  YTriple y;
  bool pass = false;
};

struct SmallnessCertificate {
  double delta = 0.0;
  std::vector<CertificateEntry> entries;
  std::vector<std::string> warnings;
  bool pass = false;

  const CertificateEntry& entry(const std::string& name) const;
};

/// Each potential passes when its triple sum is <= delta; the certificate
/// passes when every entry does. The squares a_i^2 are always included.
SmallnessCertificate certify(const PotentialSet& ps, double delta);

void to_json(nlohmann::json& j, const SmallnessCertificate& c);

struct RescaledSet {
  PotentialSet set;
  double lambda = 1.0;
};

/// Largest lambda in (0, 1] with certify(lambda * ps, delta) passing, by 40
/// bisection steps. Throws for the zero set or when even 1e-12 fails.
RescaledSet rescale_to_delta(const PotentialSet& ps, double delta);

} // namespace rlab

#endif
