#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>

#include "multisym/legendre.hpp"
#include "multisym/multisymplectic.hpp"
#include "multisym/sampling.hpp"

namespace multisym::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Runs `measure` and turns library errors into a failed check.
Check run_check(std::string name, std::string anchor, double tolerance,
                const std::function<double()>& measure) {
  Check check;
  check.name = std::move(name);
  check.anchor = std::move(anchor);
  check.tolerance = tolerance;
  const Stopwatch clock;
  try {
    check.residual = measure();
    check.passed = check.residual <= tolerance;
  } catch (const OrientationError& e) {
    check.residual = kInf;
    check.error = e.what();
    if (e.cell() >= 0) check.cell = e.cell();
  } catch (const DegenerateCellError& e) {
    check.residual = kInf;
    check.error = e.what();
    check.cell = e.cell();
  } catch (const Error& e) {
    check.residual = kInf;
    check.error = e.what();
  }
  check.runtime_ms = clock.elapsed_ms();
  return check;
}

bool wants(const RunConfig& config, const std::string& suite) {
  return std::find(config.suites.begin(), config.suites.end(), suite) != config.suites.end();
}

// Per-suite streams keep each suite's samples independent of which other
// suites are enabled.
Rng stream(const RunConfig& config, std::uint64_t suite, int sample) {
  return sample_stream(config.seed, suite * 1000003ULL + static_cast<std::uint64_t>(sample));
}

Point base_point(const RunConfig& config, Rng& rng, int n) {
  return config.base_point ? *config.base_point : gaussian_vector(rng, n);
}

KVector draw_pvector(const HomogeneousLagrangian& l, Rng& rng) {
  KVector y(l.ambient_dim(), l.degree(),
            gaussian_vector(rng, static_cast<Eigen::Index>(binomial(l.ambient_dim(), l.degree()))));
  return l.admissible(y) ? y : -y;
}

template <typename Fn>
double max_over_samples(const RunConfig& config, std::uint64_t suite,
                        const HomogeneousLagrangian& l, Fn&& fn) {
  double worst = 0.0;
  for (int i = 0; i < config.samples; ++i) {
    Rng rng = stream(config, suite, i);
    const Point x = base_point(config, rng, l.ambient_dim());
    const KVector y = draw_pvector(l, rng);
    worst = std::max(worst, fn(x, y, rng));
  }
  return worst;
}

}  // namespace

Report cmd_verify(const RunConfig& config) {
  Report report;
  report.command = "verify";
  report.config = config.source;
  const HomogeneousLagrangian l = make_lagrangian(config.lagrangian);
  const int n = l.ambient_dim();
  const int p = l.degree();
  const Tolerances& tol = config.tolerances;

  if (wants(config, "euler")) {
    report.checks.push_back(run_check(
        "euler_formula", "Euler formula L(x,y) = sum_I dL/dy^I y^I", tol.euler, [&] {
          return max_over_samples(config, 1, l, [&](const Point& x, const KVector& y, Rng&) {
            return euler_residual(l, x, y) / std::max(1.0, std::abs(l.value(x, y)));
          });
        }));
  }
  if (wants(config, "homogeneity")) {
    report.checks.push_back(run_check(
        "homogeneity", "L is positively homogeneous of degree 1 in y", tol.homogeneity, [&] {
          return max_over_samples(config, 2, l, [&](const Point& x, const KVector& y, Rng&) {
            return homogeneity_residual(l, x, y, {0.5, 2.0, 10.0});
          });
        }));
    report.checks.push_back(run_check(
        "degree_zero_gradient", "dL/dy is homogeneous of degree 0 in y", tol.degree_zero, [&] {
          return max_over_samples(config, 3, l, [&](const Point& x, const KVector& y, Rng&) {
            const Eigen::VectorXd g = l.gradient(x, y).coords();
            double worst = 0.0;
            for (double lambda : {0.5, 2.0, 1000.0}) {
              worst = std::max(worst, (l.gradient(x, y * lambda).coords() - g).lpNorm<Eigen::Infinity>());
            }
            return worst;
          });
        }));
  }
  if (wants(config, "hamiltonian")) {
    report.checks.push_back(run_check(
        "vanishing_hamiltonian", "the Hamiltonian <p,y> - L vanishes at p = dL/dy",
        tol.hamiltonian, [&] {
          return max_over_samples(config, 4, l, [&](const Point& x, const KVector& y, Rng&) {
            const KCovector pc = legendre_map(l, x, y).p;
            return std::abs(hamiltonian(l, x, pc, y)) / std::max(1.0, std::abs(l.value(x, y)));
          });
        }));
  }
  if (wants(config, "rank_lemma")) {
    report.checks.push_back(run_check(
        "rank_lemma", "rank Hess(L^2) = 1 + rank Hess(L)", 0.0, [&] {
          double failures = 0.0;
          max_over_samples(config, 5, l, [&](const Point& x, const KVector& y, Rng&) {
            if (!rank_lemma_check(l, x, y, tol.rank_threshold).holds()) failures += 1.0;
            return 0.0;
          });
          return failures;
        }));
  }
  if (wants(config, "nondegeneracy")) {
    report.checks.push_back(run_check(
        "nondegenerate_lagrangian", "Hess(L^2) is positive definite off the zero section", 0.0,
        [&] {
          double failures = 0.0;
          max_over_samples(config, 6, l, [&](const Point& x, const KVector& y, Rng&) {
            if (!is_nondegenerate(l, x, y)) failures += 1.0;
            return 0.0;
          });
          return failures;
        }));
  }
  if (wants(config, "round_trip")) {
    report.checks.push_back(run_check(
        "legendre_round_trip", "y is recovered up to positive scale from dL/dy(x,y)",
        tol.round_trip, [&] {
          return max_over_samples(config, 7, l, [&](const Point& x, const KVector& y, Rng&) {
            try {
              const OrientedRay ray = inverse_legendre(l, x, legendre_map(l, x, y).p);
              return (ray.unit().coords() - OrientedRay(y).unit().coords()).norm();
            } catch (const NoSolutionError&) {
              return 2.0;
            } catch (const NumericalFailureError&) {
              return 2.0;
            }
          });
        }));
  }
  if (wants(config, "convexity")) {
    Check check = run_check(
        "convexity_certificate", "the Legendre image N_x is a convex hypersurface",
        tol.convexity, [&] {
          const Point x = config.base_point ? *config.base_point : Point::Zero(n);
          const auto cert = convexity_certificate(l, x, config.convexity_pairs,
                                                  config.convexity_steps, config.seed,
                                                  tol.convexity);
          report.results["convexity"] = {{"num_segment_checks", cert.num_segment_checks},
                                         {"num_inversion_failures", cert.num_inversion_failures},
                                         {"worst_violation", cert.worst_violation},
                                         {"sample_seed", cert.sample_seed}};
          return cert.worst_violation;
        });
    report.checks.push_back(std::move(check));
  }
  if (wants(config, "pullback")) {
    report.checks.push_back(run_check(
        "pullback_identity", "(dL/dy)^* theta = l, the areolar form", tol.pullback, [&] {
          return max_over_samples(config, 8, l, [&](const Point& x, const KVector& y, Rng& rng) {
            const std::vector<Eigen::MatrixXd> tuples{gaussian_matrix(rng, n, p)};
            return pullback_residual(l, x, y, tuples);
          });
        }));
  }
  if (wants(config, "multisymplectic")) {
    const TotalSpaceChart chart(n, p);
    const FormField th = theta(chart);
    const FormField om = omega(chart);
    const int points = std::min(config.samples, 20);
    report.checks.push_back(run_check(
        "omega_nondegenerate", "Omega = d theta is nondegenerate", 0.0, [&] {
          Rng rng = stream(config, 9, 0);
          const auto result = nondegeneracy_check(om, gaussian_vector(rng, chart.dim()));
          return static_cast<double>(result.dim - result.rank);
        }));
    report.checks.push_back(run_check(
        "omega_closed", "Omega is closed", tol.closedness, [&] {
          double worst = 0.0;
          for (int i = 0; i < points; ++i) {
            Rng rng = stream(config, 10, i);
            const Eigen::VectorXd z = gaussian_vector(rng, chart.dim());
            std::vector<TotalVector> v;
            for (int k = 0; k < p + 2; ++k) v.push_back({gaussian_vector(rng, chart.dim())});
            worst = std::max(worst, closedness_residual(om, z, v));
          }
          return worst;
        }));
    report.checks.push_back(run_check(
        "theta_differential", "d theta = Omega", tol.differential, [&] {
          double worst = 0.0;
          for (int i = 0; i < points; ++i) {
            Rng rng = stream(config, 11, i);
            const Eigen::VectorXd z = gaussian_vector(rng, chart.dim());
            std::vector<TotalVector> v;
            for (int k = 0; k < p + 1; ++k) v.push_back({gaussian_vector(rng, chart.dim())});
            worst = std::max(worst, std::abs(exterior_derivative(th, z, v) - om(z, v)));
          }
          return worst;
        }));
  }
  return report;
}

Report cmd_action(const RunConfig& config) {
  if (!config.surface) throw ConfigError("the action command needs a surface");
  Report report;
  report.command = "action";
  report.config = config.source;
  const HomogeneousLagrangian l = make_lagrangian(config.lagrangian);
  const int n = l.ambient_dim();
  const int p = l.degree();
  const SurfaceSpec& spec = *config.surface;
  const QuadratureConfig quad{config.quadrature};
  const Tolerances& tol = config.tolerances;

  std::optional<GraphDensity> density;
  if (!config.density.empty()) {
    density = make_density(config.density, n, p);
  } else if (config.lagrangian.name == "graph_lift") {
    density = make_density(config.lagrangian.density, n, p);
  }

  std::vector<double> lagrangian_values, multisymplectic_values, graph_values;
  Check evaluation = run_check("action_evaluation", "the action integrals are defined on the surface",
                               0.0, [&] {
    for (int r : spec.resolutions) {
      const GraphSurface surface = make_surface(spec, n, p, r);
      const ParametricGrid grid = surface.grid();
      lagrangian_values.push_back(lagrangian_action(l, grid, quad));
      multisymplectic_values.push_back(multisymplectic_action(l, grid, quad));
      if (density) graph_values.push_back(graph_action(*density, surface, quad));
    }
    return 0.0;
  });
  const bool evaluated = evaluation.passed;
  report.checks.push_back(std::move(evaluation));

  nlohmann::json& results = report.results;
  results["resolutions"] = spec.resolutions;
  results["lagrangian"] = lagrangian_values;
  results["multisymplectic"] = multisymplectic_values;
  if (density) {
    results["graph"] = graph_values;
    results["density"] = density->name();
  }
  if (!evaluated) return report;

  nlohmann::json diffs = nlohmann::json::object();
  std::vector<double> ms_minus_l, g_minus_l;
  for (std::size_t i = 0; i < lagrangian_values.size(); ++i) {
    ms_minus_l.push_back(multisymplectic_values[i] - lagrangian_values[i]);
    if (density) g_minus_l.push_back(graph_values[i] - lagrangian_values[i]);
  }
  diffs["multisymplectic_minus_lagrangian"] = ms_minus_l;
  if (density) diffs["graph_minus_lagrangian"] = g_minus_l;
  results["differences"] = diffs;

  report.checks.push_back(run_check(
      "multisymplectic_action",
      "the Lagrangian action equals the integral of theta over the Legendre image of the tangent lift",
      tol.multisymplectic, [&] {
        double worst = 0.0;
        for (std::size_t i = 0; i < lagrangian_values.size(); ++i) {
          worst = std::max(worst, std::abs(ms_minus_l[i]) /
                                      std::max(std::abs(lagrangian_values[i]), 1e-300));
        }
        return worst;
      }));
  if (density) {
    report.checks.push_back(run_check(
        "graph_action", "the graph-density action equals the Lagrangian action", tol.graph,
        [&] { return std::abs(g_minus_l.back()); }));
  }
  if (config.reference) {
    report.checks.push_back(run_check(
        "reference_value", "the Lagrangian action matches the supplied reference value",
        tol.reference, [&] { return std::abs(lagrangian_values.back() - *config.reference); }));
  }
  if (spec.resolutions.size() >= 3) {
    const double extent = (spec.domain.upper - spec.domain.lower).maxCoeff();
    // Values were computed above in resolution order; the study reads them back.
    std::size_t next = 0;
    const auto table = convergence_study(
        [&](int) { return lagrangian_values[next++]; }, spec.resolutions, config.reference,
        extent);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : table.rows) {
      nlohmann::json row;
      row["resolution"] = r.resolution;
      row["h"] = r.h;
      row["value"] = r.value;
      row["error"] = r.error ? nlohmann::json(*r.error) : nlohmann::json();
      row["order"] = r.order ? nlohmann::json(*r.order) : nlohmann::json();
      rows.push_back(std::move(row));
    }
    results["convergence"] = {{"rows", rows}, {"monotone", table.monotone}};
    if (config.expected_order) {
      report.checks.push_back(run_check(
          "convergence_order", "the discretized action converges at the expected order",
          tol.order, [&] {
            double worst = -1.0;
            for (const auto& row : rows) {
              if (!row["order"].is_null()) {
                worst = std::max(worst, std::abs(row["order"].get<double>() - *config.expected_order));
              }
            }
            if (worst < 0.0) throw NumericalFailureError("errors at rounding level; no observable order");
            return worst;
          }));
    }
  }
  return report;
}

Report cmd_image(const RunConfig& config, const std::filesystem::path& csv_path) {
  Report report;
  report.command = "image";
  report.config = config.source;
  const HomogeneousLagrangian l = make_lagrangian(config.lagrangian);
  const int n = l.ambient_dim();
  const int p = l.degree();
  const Point x = config.base_point ? *config.base_point : Point::Zero(n);
  const Tolerances& tol = config.tolerances;

  std::vector<LegendreImagePoint> points;
  Check sampling = run_check("image_sampling", "points of N_x are images of S_x under dL/dy", 0.0,
                             [&] {
                               points = sample_image(l, x, static_cast<std::size_t>(config.count),
                                                     config.seed);
                               return 0.0;
                             });
  const bool sampled = sampling.passed;
  report.checks.push_back(std::move(sampling));

  std::ofstream csv(csv_path);
  if (!csv) throw std::ios_base::failure("cannot open '" + csv_path.string() + "' for writing");
  write_image_csv(csv, n, p, points);
  csv.close();
  if (!csv) throw std::ios_base::failure("failed writing '" + csv_path.string() + "'");
  report.results["csv"] = csv_path.filename().string();
  report.results["count"] = points.size();
  if (!sampled) return report;

  report.checks.push_back(run_check(
      "image_hamiltonian", "the Hamiltonian vanishes on the Legendre image", tol.hamiltonian, [&] {
        double worst = 0.0;
        for (const auto& pt : points) {
          const KVector y = pt.source.unit();
          worst = std::max(worst, std::abs(hamiltonian(l, x, pt.p, y)) /
                                      std::max(1.0, std::abs(l.value(x, y))));
        }
        return worst;
      }));
  if (config.lagrangian.name == "area") {
    report.checks.push_back(run_check(
        "image_unit_sphere", "the Legendre image of the area Lagrangian is the unit sphere",
        tol.sphere, [&] {
          double worst = 0.0;
          for (const auto& pt : points) worst = std::max(worst, std::abs(pt.p.norm() - 1.0));
          return worst;
        }));
  } else if (config.lagrangian.name == "ellipsoid") {
    const Eigen::Map<const Eigen::VectorXd> w(
        config.lagrangian.weights.data(), static_cast<Eigen::Index>(config.lagrangian.weights.size()));
    report.checks.push_back(run_check(
        "image_quadric", "the Legendre image of the ellipsoid Lagrangian is the dual ellipsoid",
        tol.quadric, [&] {
          double worst = 0.0;
          for (const auto& pt : points) {
            worst = std::max(worst,
                             std::abs((pt.p.coords().array().square() / w.array()).sum() - 1.0));
          }
          return worst;
        }));
  }
  if (config.convexity_pairs > 0) {
    report.checks.push_back(run_check(
        "convexity_certificate", "the Legendre image N_x is a convex hypersurface", tol.convexity,
        [&] {
          const auto cert = convexity_certificate(l, x, config.convexity_pairs,
                                                  config.convexity_steps, config.seed,
                                                  tol.convexity);
          report.results["convexity"] = {{"num_segment_checks", cert.num_segment_checks},
                                         {"num_inversion_failures", cert.num_inversion_failures},
                                         {"worst_violation", cert.worst_violation},
                                         {"sample_seed", cert.sample_seed}};
          return cert.worst_violation;
        }));
  }
  return report;
}

int run(const std::string& command, const std::filesystem::path& config_path,
        const std::filesystem::path& out, std::ostream& log) {
  RunConfig config;
  try {
    config = load_config(config_path);
    if (command != "verify" && command != "action" && command != "image") {
      throw ConfigError("unknown command '" + command + "'");
    }
    if (command == "action" && !config.surface) {
      throw ConfigError("the action command needs a surface");
    }
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kExitUsage;
  }

  std::filesystem::path report_path = out;
  std::filesystem::path csv_path =
      config.csv ? *config.csv : std::filesystem::path(out).replace_extension(".csv");
  if (const char* dir = std::getenv(kOutputDirEnv); dir != nullptr && *dir != '\0') {
    report_path = std::filesystem::path(dir) / report_path.filename();
    csv_path = std::filesystem::path(dir) / csv_path.filename();
  }

  Report report;
  try {
    if (command == "verify") {
      report = cmd_verify(config);
    } else if (command == "action") {
      report = cmd_action(config);
    } else {
      report = cmd_image(config, csv_path);
    }
  } catch (const std::ios_base::failure& e) {
    log << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }

  try {
    write_json(report_path, report.to_json());
  } catch (const std::ios_base::failure& e) {
    log << "I/O error: " << e.what() << '\n';
    return kExitIo;
  }
  for (const auto& c : report.checks) {
    log << (c.passed ? "pass " : "FAIL ") << c.name << "  residual=" << c.residual
        << " tol=" << c.tolerance << '\n';
  }
  return report.passed() ? kExitPass : kExitCheckFailure;
}

}  // namespace multisym::cli
