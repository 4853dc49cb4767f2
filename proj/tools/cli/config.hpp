#pragma once

// Run configuration for the multisym tool, parsed from JSON. Every object
// level rejects keys it does not know.

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "multisym/lagrangian.hpp"
#include "multisym/surfaces.hpp"

namespace multisym::cli {

// Malformed or invalid configuration; maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LagrangianSpec {
  std::string name;  // area, ellipsoid, projected_volume, geometric_mean, graph_lift
  int n = 3;
  int p = 2;
  std::vector<double> weights;  // ellipsoid
  std::string density;          // graph_lift: unit, area, slope_norm
};

struct SurfaceSpec {
  std::string kind;  // flat, plane, affine, bilinear, polynomial
  double a = 0.0;    // plane(a, b)
  double b = 0.0;
  Eigen::MatrixXd slopes;  // affine, p x (n - p)
  Eigen::VectorXd offset;
  std::vector<std::vector<Monomial>> components;
  Domain domain;
  std::vector<int> resolutions;
};

struct Tolerances {
  double euler = 1e-9;
  double homogeneity = 1e-9;
  double degree_zero = 1e-9;
  double hamiltonian = 1e-9;
  double rank_threshold = 1e-8;
  double round_trip = 1e-7;
  double convexity = 1e-7;
  double pullback = 1e-9;
  double closedness = 1e-6;
  double differential = 1e-6;
  double multisymplectic = 1e-10;
  double graph = 1e-6;
  double reference = 1e-8;
  double order = 0.3;
  double sphere = 1e-10;
  double quadric = 1e-9;
};

struct RunConfig {
  nlohmann::json source;  // the document as given, echoed into the report
  LagrangianSpec lagrangian;
  std::optional<Eigen::VectorXd> base_point;
  std::uint64_t seed = 1;
  int samples = 100;
  std::vector<std::string> suites;
  int convexity_pairs = 50;
  int convexity_steps = 10;
  std::optional<SurfaceSpec> surface;
  std::string density;  // graph density for the action command
  QuadratureRule quadrature = QuadratureRule::kMidpoint;
  std::optional<double> reference;
  std::optional<double> expected_order;
  int count = 500;
  std::optional<std::filesystem::path> csv;
  Tolerances tolerances;
};

inline const std::vector<std::string>& all_suites() {
  static const std::vector<std::string> suites{
      "euler", "homogeneity", "hamiltonian", "rank_lemma", "nondegeneracy",
      "round_trip", "convexity", "pullback", "multisymplectic"};
  return suites;
}

RunConfig parse_config(const nlohmann::json& document);
// Reads and parses a file; unreadable files and JSON syntax errors are
// ConfigErrors as well.
RunConfig load_config(const std::filesystem::path& path);

HomogeneousLagrangian make_lagrangian(const LagrangianSpec& spec);
GraphDensity make_density(const std::string& name, int n, int p);
GraphSurface make_surface(const SurfaceSpec& spec, int n, int p, int resolution);

}  // namespace multisym::cli
