#include "cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace multisym::cli {

using nlohmann::json;

namespace {

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
}

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& where) {
  require_object(j, where);
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + " must be a number");
  return j.get<double>();
}

long integer(const json& j, const std::string& where, long lo, long hi) {
  if (!j.is_number_integer()) throw ConfigError(where + " must be an integer");
  const long v = j.get<long>();
  if (v < lo || v > hi) {
    throw ConfigError(where + " must lie in [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  }
  return v;
}

std::string string(const json& j, const std::string& where) {
  if (!j.is_string()) throw ConfigError(where + " must be a string");
  return j.get<std::string>();
}

Eigen::VectorXd vector(const json& j, const std::string& where) {
  if (!j.is_array()) throw ConfigError(where + " must be an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = number(j[i], where + "[" + std::to_string(i) + "]");
  }
  return v;
}

double positive(const json& j, const std::string& where) {
  const double v = number(j, where);
  if (!(v > 0.0)) throw ConfigError(where + " must be positive");
  return v;
}

LagrangianSpec parse_lagrangian(const json& j) {
  check_keys(j, {"name", "n", "p", "params"}, "lagrangian");
  if (!j.contains("name")) throw ConfigError("lagrangian.name is required");
  LagrangianSpec spec;
  spec.name = string(j["name"], "lagrangian.name");
  if (j.contains("n")) spec.n = static_cast<int>(integer(j["n"], "lagrangian.n", 1, 10));
  if (j.contains("p")) spec.p = static_cast<int>(integer(j["p"], "lagrangian.p", 1, 10));
  if (spec.p >= spec.n) throw ConfigError("lagrangian needs p < n");
  const json params = j.value("params", json::object());

  if (spec.name == "ellipsoid") {
    check_keys(params, {"weights"}, "lagrangian.params");
    if (!params.contains("weights")) {
      throw ConfigError("ellipsoid Lagrangian needs params.weights");
    }
    const Eigen::VectorXd w = vector(params["weights"], "lagrangian.params.weights");
    spec.weights.assign(w.data(), w.data() + w.size());
  } else if (spec.name == "graph_lift") {
    check_keys(params, {"density"}, "lagrangian.params");
    spec.density = params.contains("density")
                       ? string(params["density"], "lagrangian.params.density")
                       : "area";
  } else if (spec.name == "area" || spec.name == "projected_volume" ||
             spec.name == "geometric_mean") {
    check_keys(params, {}, "lagrangian.params");
  } else {
    throw ConfigError("unknown Lagrangian '" + spec.name + "'");
  }
  return spec;
}

std::vector<std::vector<Monomial>> parse_components(const json& j) {
  if (!j.is_array()) throw ConfigError("surface.components must be an array");
  std::vector<std::vector<Monomial>> out;
  for (std::size_t c = 0; c < j.size(); ++c) {
    const std::string where = "surface.components[" + std::to_string(c) + "]";
    if (!j[c].is_array()) throw ConfigError(where + " must be an array of monomials");
    std::vector<Monomial> poly;
    for (const auto& term : j[c]) {
      check_keys(term, {"coefficient", "exponents"}, where + " monomial");
      Monomial m;
      m.coefficient = number(term.at("coefficient"), where + ".coefficient");
      const json& exps = term.at("exponents");
      if (!exps.is_array()) throw ConfigError(where + ".exponents must be an array");
      for (const auto& e : exps) {
        m.exponents.push_back(static_cast<int>(integer(e, where + ".exponents", 0, 16)));
      }
      poly.push_back(std::move(m));
    }
    out.push_back(std::move(poly));
  }
  return out;
}

SurfaceSpec parse_surface(const json& j, int n, int p) {
  check_keys(j, {"kind", "a", "b", "slopes", "offset", "components", "domain",
                 "resolutions"},
             "surface");
  SurfaceSpec spec;
  if (!j.contains("kind")) throw ConfigError("surface.kind is required");
  spec.kind = string(j["kind"], "surface.kind");

  if (spec.kind == "plane" || spec.kind == "bilinear") {
    if (n != 3 || p != 2) {
      throw ConfigError("surface kind '" + spec.kind + "' needs n = 3, p = 2");
    }
  }
  if (spec.kind == "plane") {
    spec.a = j.contains("a") ? number(j["a"], "surface.a") : 0.0;
    spec.b = j.contains("b") ? number(j["b"], "surface.b") : 0.0;
  } else if (spec.kind == "affine") {
    if (!j.contains("slopes") || !j["slopes"].is_array() ||
        static_cast<int>(j["slopes"].size()) != p) {
      throw ConfigError("surface.slopes must have p rows");
    }
    spec.slopes.resize(p, n - p);
    for (int i = 0; i < p; ++i) {
      const Eigen::VectorXd row = vector(j["slopes"][static_cast<std::size_t>(i)], "surface.slopes");
      if (row.size() != n - p) throw ConfigError("surface.slopes rows must have n - p entries");
      spec.slopes.row(i) = row.transpose();
    }
    spec.offset = j.contains("offset") ? vector(j["offset"], "surface.offset")
                                       : Eigen::VectorXd::Zero(n - p);
    if (spec.offset.size() != n - p) throw ConfigError("surface.offset must have n - p entries");
  } else if (spec.kind == "polynomial") {
    if (!j.contains("components")) throw ConfigError("surface.components is required");
    spec.components = parse_components(j["components"]);
  } else if (spec.kind != "flat" && spec.kind != "bilinear") {
    throw ConfigError("unknown surface kind '" + spec.kind + "'");
  }

  spec.domain = Domain::unit(p);
  if (j.contains("domain")) {
    check_keys(j["domain"], {"lower", "upper"}, "surface.domain");
    if (j["domain"].contains("lower")) spec.domain.lower = vector(j["domain"]["lower"], "surface.domain.lower");
    if (j["domain"].contains("upper")) spec.domain.upper = vector(j["domain"]["upper"], "surface.domain.upper");
    if (spec.domain.lower.size() != p || spec.domain.upper.size() != p ||
        ((spec.domain.upper - spec.domain.lower).array() <= 0.0).any()) {
      throw ConfigError("surface.domain must be a nonempty rectangle in R^p");
    }
  }
  if (j.contains("resolutions")) {
    if (!j["resolutions"].is_array() || j["resolutions"].empty()) {
      throw ConfigError("surface.resolutions must be a nonempty array");
    }
    for (const auto& r : j["resolutions"]) {
      spec.resolutions.push_back(static_cast<int>(integer(r, "surface.resolutions", 2, 4096)));
    }
  } else {
    spec.resolutions = {64};
  }
  return spec;
}

Tolerances parse_tolerances(const json& j) {
  Tolerances t;
  const std::vector<std::pair<std::string, double*>> fields{
      {"euler", &t.euler},
      {"homogeneity", &t.homogeneity},
      {"degree_zero", &t.degree_zero},
      {"hamiltonian", &t.hamiltonian},
      {"rank_threshold", &t.rank_threshold},
      {"round_trip", &t.round_trip},
      {"convexity", &t.convexity},
      {"pullback", &t.pullback},
      {"closedness", &t.closedness},
      {"differential", &t.differential},
      {"multisymplectic", &t.multisymplectic},
      {"graph", &t.graph},
      {"reference", &t.reference},
      {"order", &t.order},
      {"sphere", &t.sphere},
      {"quadric", &t.quadric}};
  std::set<std::string> allowed;
  for (const auto& f : fields) allowed.insert(f.first);
  check_keys(j, allowed, "tolerances");
  for (const auto& [key, target] : fields) {
    if (j.contains(key)) *target = positive(j[key], "tolerances." + key);
  }
  return t;
}

}  // namespace

RunConfig parse_config(const json& document) {
  check_keys(document,
             {"lagrangian", "base_point", "seed", "samples", "suites", "convexity",
              "surface", "density", "quadrature", "reference", "expected_order",
              "count", "csv", "tolerances"},
             "config");
  RunConfig config;
  config.source = document;
  if (!document.contains("lagrangian")) throw ConfigError("config.lagrangian is required");
  config.lagrangian = parse_lagrangian(document["lagrangian"]);
  const int n = config.lagrangian.n;
  const int p = config.lagrangian.p;

  if (document.contains("base_point")) {
    config.base_point = vector(document["base_point"], "base_point");
    if (config.base_point->size() != n) throw ConfigError("base_point must have n entries");
  }
  if (document.contains("seed")) {
    config.seed = static_cast<std::uint64_t>(
        integer(document["seed"], "seed", 0, std::numeric_limits<long>::max()));
  }
  if (document.contains("samples")) {
    config.samples = static_cast<int>(integer(document["samples"], "samples", 1, 100000));
  }
  if (document.contains("suites")) {
    if (!document["suites"].is_array()) throw ConfigError("suites must be an array");
    for (const auto& s : document["suites"]) {
      const std::string name = string(s, "suites[]");
      if (std::find(all_suites().begin(), all_suites().end(), name) == all_suites().end()) {
        throw ConfigError("unknown suite '" + name + "'");
      }
      config.suites.push_back(name);
    }
  } else {
    config.suites = all_suites();
  }
  if (document.contains("convexity")) {
    check_keys(document["convexity"], {"pairs", "t_steps"}, "convexity");
    const json& c = document["convexity"];
    if (c.contains("pairs")) config.convexity_pairs = static_cast<int>(integer(c["pairs"], "convexity.pairs", 0, 100000));
    if (c.contains("t_steps")) config.convexity_steps = static_cast<int>(integer(c["t_steps"], "convexity.t_steps", 1, 1000));
  }
  if (document.contains("surface")) {
    config.surface = parse_surface(document["surface"], n, p);
  }
  if (document.contains("density")) {
    config.density = string(document["density"], "density");
  }
  if (document.contains("quadrature")) {
    const std::string rule = string(document["quadrature"], "quadrature");
    if (rule == "midpoint") {
      config.quadrature = QuadratureRule::kMidpoint;
    } else if (rule == "gauss2") {
      config.quadrature = QuadratureRule::kGauss2;
    } else {
      throw ConfigError("quadrature must be 'midpoint' or 'gauss2'");
    }
  }
  if (document.contains("reference")) config.reference = number(document["reference"], "reference");
  if (document.contains("expected_order")) {
    config.expected_order = positive(document["expected_order"], "expected_order");
  }
  if (document.contains("count")) {
    config.count = static_cast<int>(integer(document["count"], "count", 0, 10000000));
  }
  if (document.contains("csv")) config.csv = string(document["csv"], "csv");
  if (document.contains("tolerances")) config.tolerances = parse_tolerances(document["tolerances"]);

  // Construct once so invalid parameters (bad weights, unknown densities)
  // are reported as configuration errors before any work starts.
  try {
    (void)make_lagrangian(config.lagrangian);
    if (!config.density.empty()) (void)make_density(config.density, n, p);
    if (config.surface) (void)make_surface(*config.surface, n, p, config.surface->resolutions.front());
  } catch (const multisym::Error& e) {
    throw ConfigError(e.what());
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  json document;
  try {
    document = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  try {
    return parse_config(document);
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  }
}

HomogeneousLagrangian make_lagrangian(const LagrangianSpec& spec) {
  if (spec.name == "area") return area_lagrangian(spec.n, spec.p);
  if (spec.name == "ellipsoid") {
    return ellipsoid_lagrangian(
        spec.n, spec.p,
        Eigen::Map<const Eigen::VectorXd>(spec.weights.data(),
                                          static_cast<Eigen::Index>(spec.weights.size())));
  }
  if (spec.name == "projected_volume") return projected_volume_lagrangian(spec.n, spec.p);
  if (spec.name == "geometric_mean") return geometric_mean_lagrangian(spec.n, spec.p);
  if (spec.name == "graph_lift") return graph_lift(make_density(spec.density, spec.n, spec.p));
  throw DomainError("unknown Lagrangian '" + spec.name + "'");
}

GraphDensity make_density(const std::string& name, int n, int p) {
  if (name == "unit") return unit_density(n, p);
  if (name == "area") return area_density(n, p);
  if (name == "slope_norm") return slope_norm_density(n, p);
  throw DomainError("unknown graph density '" + name + "'");
}

GraphSurface make_surface(const SurfaceSpec& spec, int n, int p, int resolution) {
  const std::vector<int> res(static_cast<std::size_t>(p), resolution);
  if (spec.kind == "flat") return flat_graph(p, n, spec.domain, res);
  if (spec.kind == "plane") {
    return affine_graph((Eigen::MatrixXd(2, 1) << spec.a, spec.b).finished(),
                        Eigen::VectorXd::Zero(1), spec.domain, res);
  }
  if (spec.kind == "affine") return affine_graph(spec.slopes, spec.offset, spec.domain, res);
  if (spec.kind == "bilinear") return bilinear_graph(spec.domain, res);
  if (spec.kind == "polynomial") return polynomial_graph(p, n, spec.components, spec.domain, res);
  throw DomainError("unknown surface kind '" + spec.kind + "'");
}

}  // namespace multisym::cli
