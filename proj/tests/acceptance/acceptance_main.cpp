// Acceptance driver: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Reference values come from the oracles in support/.

#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "multisym/legendre.hpp"
#include "multisym/multisymplectic.hpp"
#include "multisym/surfaces.hpp"
#include "oracles.hpp"

using namespace multisym;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

const std::vector<std::pair<int, int>> kShapes{{3, 2}, {4, 2}, {4, 3}};

Eigen::VectorXd weights(int n, int p) {
  return Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(binomial(n, p)), 1.0, 9.0);
}

struct Named {
  std::string name;
  HomogeneousLagrangian lagrangian;
};

// Lagrangians covered by the Euler and Hamiltonian criteria.
std::vector<Named> regular_builtins(int n, int p) {
  return {{"area", area_lagrangian(n, p)},
          {"ellipsoid", ellipsoid_lagrangian(n, p, weights(n, p))},
          {"graph_lift", graph_lift(area_density(n, p))}};
}

KVector admissible_sample(const HomogeneousLagrangian& l, Rng& rng) {
  KVector y = oracle::random_kvector(rng, l.ambient_dim(), l.degree());
  if (!l.admissible(y)) y = KVector(y.ambient_dim(), y.degree(), -y.coords());
  return y;
}

// Scale-aware max over 100 samples of residual / max(1, |L|).
template <typename Residual>
double worst_relative(const HomogeneousLagrangian& l, std::uint64_t seed, Residual&& residual) {
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    Rng rng = sample_stream(seed, static_cast<std::uint64_t>(i));
    const Point x = gaussian_vector(rng, l.ambient_dim());
    const KVector y = admissible_sample(l, rng);
    worst = std::max(worst, residual(x, y) / std::max(1.0, std::abs(l.value(x, y))));
  }
  return worst;
}

Outcome euler_formula() {
  Outcome out;
  double worst = 0.0;
  for (auto [n, p] : kShapes) {
    for (const auto& [name, l] : regular_builtins(n, p)) {
      const double w = worst_relative(l, 11, [&](const Point& x, const KVector& y) {
        return euler_residual(l, x, y);
      });
      out.require(w <= 1e-9, name + " (" + std::to_string(n) + "," + std::to_string(p) + ") residual " + fmt(w));
      worst = std::max(worst, w);
    }
  }
  if (out.passed) out.detail = "worst relative residual " + fmt(worst);
  return out;
}

Outcome vanishing_hamiltonian() {
  Outcome out;
  double worst = 0.0;
  for (auto [n, p] : kShapes) {
    for (const auto& [name, l] : regular_builtins(n, p)) {
      const double w = worst_relative(l, 11, [&](const Point& x, const KVector& y) {
        return std::abs(hamiltonian(l, x, l.gradient(x, y), y));
      });
      out.require(w <= 1e-9, name + " (" + std::to_string(n) + "," + std::to_string(p) + ") |H| " + fmt(w));
      worst = std::max(worst, w);
    }
  }
  if (out.passed) out.detail = "worst relative |H| " + fmt(worst);
  return out;
}

Outcome rank_lemma() {
  Outcome out;
  int checked = 0;
  for (auto [n, p] : {std::pair{3, 2}, {4, 2}}) {
    const std::vector<Named> ls{{"area", area_lagrangian(n, p)},
                                {"ellipsoid", ellipsoid_lagrangian(n, p, weights(n, p))}};
    for (const auto& [name, l] : ls) {
      for (int i = 0; i < 50; ++i) {
        Rng rng = sample_stream(23, static_cast<std::uint64_t>(i));
        const Point x = gaussian_vector(rng, n);
        const RankReport r = rank_lemma_check(l, x, admissible_sample(l, rng), 1e-8);
        out.require(r.holds(), name + " rank " + std::to_string(r.rank_square) + " vs 1+" +
                                   std::to_string(r.rank_hessian));
        ++checked;
      }
    }
  }
  const auto linear = projected_volume_lagrangian(3, 2);
  const RankReport probe = rank_lemma_check(linear, Point::Zero(3), KVector(3, 2, Eigen::Vector3d(1, 2, 3)));
  out.require(probe.rank_square == 1 && probe.rank_hessian == 0, "linear probe ranks " +
                                                                     std::to_string(probe.rank_square) + ", " +
                                                                     std::to_string(probe.rank_hessian));
  if (out.passed) out.detail = std::to_string(checked) + " samples; linear probe 1 = 1+0";
  return out;
}

Outcome convexity() {
  Outcome out;
  double worst = 0.0;
  for (auto [n, p] : {std::pair{3, 2}, {4, 2}}) {
    const std::vector<Named> ls{{"area", area_lagrangian(n, p)},
                                {"ellipsoid", ellipsoid_lagrangian(n, p, weights(n, p))}};
    for (const auto& [name, l] : ls) {
      const auto c = convexity_certificate(l, Point::Zero(n), 50, 10, 31, 1e-7);
      out.require(c.passed && c.num_segment_checks == 500,
                  name + " worst " + fmt(c.worst_violation) + " over " + std::to_string(c.num_segment_checks));
      worst = std::max(worst, c.worst_violation);
    }
  }
  const auto probe = convexity_certificate(geometric_mean_lagrangian(3, 2), Point::Zero(3), 50, 10, 31, 1e-7);
  out.require(!probe.passed, "nonconvex probe was not detected");
  if (out.passed) {
    out.detail = "worst violation " + fmt(worst) + "; probe flagged at " + fmt(probe.worst_violation);
  }
  return out;
}

Outcome image_shape() {
  Outcome out;
  double sphere = 0.0;
  double quadric = 0.0;
  for (auto [n, p] : {std::pair{3, 2}, {4, 2}}) {
    for (const auto& pt : sample_image(area_lagrangian(n, p), Point::Zero(n), 500, 41)) {
      sphere = std::max(sphere, std::abs(pt.p.coords().norm() - 1.0));
    }
    const Eigen::VectorXd w = weights(n, p);
    for (const auto& pt : sample_image(ellipsoid_lagrangian(n, p, w), Point::Zero(n), 500, 41)) {
      quadric = std::max(quadric, std::abs((pt.p.coords().array().square() / w.array()).sum() - 1.0));
    }
  }
  out.require(sphere <= 1e-10, "sphere deviation " + fmt(sphere));
  out.require(quadric <= 1e-9, "quadric deviation " + fmt(quadric));
  if (out.passed) out.detail = "sphere " + fmt(sphere) + ", quadric " + fmt(quadric);
  return out;
}

Outcome pullback() {
  Outcome out;
  double worst = 0.0;
  for (auto [n, p] : kShapes) {
    std::vector<Named> ls = regular_builtins(n, p);
    ls.push_back({"projected_volume", projected_volume_lagrangian(n, p)});
    ls.push_back({"geometric_mean", geometric_mean_lagrangian(n, p)});
    for (const auto& [name, l] : ls) {
      for (int i = 0; i < 100; ++i) {
        Rng rng = sample_stream(53, static_cast<std::uint64_t>(i));
        const Point x = gaussian_vector(rng, n);
        const KVector y = admissible_sample(l, rng);
        const std::vector<Eigen::MatrixXd> tuple{gaussian_matrix(rng, n, p)};
        const double r = pullback_residual(l, x, y, tuple);
        worst = std::max(worst, r);
        out.require(r <= 1e-9, name + " residual " + fmt(r));
      }
    }
  }
  if (out.passed) out.detail = "worst residual " + fmt(worst);
  return out;
}

double bilinear_area_oracle() {
  return oracle::midpoint_2d([](double a, double b) { return std::sqrt(1.0 + a * a + b * b); }, 2048);
}

Outcome action_triple() {
  Outcome out;
  const auto area = area_lagrangian(3, 2);
  const auto density = slope_norm_density(3, 2);
  const double sqrt14 = std::sqrt(1.0 + 4.0 + 9.0);

  Eigen::MatrixXd slopes(2, 1);
  slopes << 2.0, 3.0;
  const GraphSurface plane = affine_graph(slopes, Eigen::VectorXd::Zero(1), Domain::unit(2), {64, 64});
  const ParametricGrid pg = plane.grid();
  const double values[3] = {lagrangian_action(area, pg), multisymplectic_action(area, pg),
                            graph_action(density, plane)};
  for (double v : values) out.require(std::abs(v - sqrt14) <= 1e-8, "plane action " + fmt(v - sqrt14));

  double worst_ms = 0.0;
  for (int r : {16, 32, 64, 128, 256}) {
    const ParametricGrid g = bilinear_graph(Domain::unit(2), {r, r}).grid();
    const double lag = lagrangian_action(area, g);
    const double rel = std::abs(multisymplectic_action(area, g) - lag) / std::abs(lag);
    worst_ms = std::max(worst_ms, rel);
    out.require(rel <= 1e-10, "multisymplectic gap at " + std::to_string(r) + ": " + fmt(rel));
  }
  const GraphSurface fine = bilinear_graph(Domain::unit(2), {256, 256});
  const double graph_gap = std::abs(graph_action(density, fine) - lagrangian_action(area, fine.grid()));
  out.require(graph_gap <= 1e-6, "graph gap " + fmt(graph_gap));

  const std::vector<int> resolutions{16, 32, 64, 128};
  const ConvergenceTable table = convergence_study(ActionKind::kLagrangian, area,
                                                   bilinear_graph(Domain::unit(2), {16, 16}), resolutions, {},
                                                   bilinear_area_oracle());
  std::string orders;
  for (const auto& row : table.rows) {
    if (!row.order) continue;
    out.require(std::abs(*row.order - 2.0) <= 0.3, "order " + fmt(*row.order));
    orders += (orders.empty() ? "" : ",") + fmt(*row.order);
  }
  out.require(!orders.empty(), "no observed orders");
  if (out.passed) {
    out.detail = "plane within 1e-8; graph gap " + fmt(graph_gap) + "; multisymplectic gap " + fmt(worst_ms) +
                 "; orders " + orders;
  }
  return out;
}

Outcome general_graph_law() {
  Outcome out;
  for (auto [n, p] : {std::pair{4, 2}, {4, 3}}) {
    Rng rng = sample_stream(67, static_cast<std::uint64_t>(n * 10 + p));
    const Eigen::MatrixXd slopes = gaussian_matrix(rng, p, n - p);
    const GraphSurface surface = affine_graph(slopes, gaussian_vector(rng, n - p), Domain::unit(p),
                                              std::vector<int>(static_cast<std::size_t>(p), 2));
    const KVector y = tangent_pvector(surface.grid(), 0).y;

    Eigen::MatrixXd jacobian(n, p);
    jacobian << Eigen::MatrixXd::Identity(p, p), slopes.transpose();
    for (const auto& [rows, minor] : oracle::all_minors(jacobian)) {
      out.require(std::abs(y.component(rows) - minor) <= 1e-8, "minor mismatch");
    }
    std::vector<int> leading;
    for (int k = 1; k <= p; ++k) leading.push_back(k);
    out.require(std::abs(y.component(leading) - 1.0) <= 1e-8, "leading coordinate");
    // Replacing axis i of {1..p} by p+j: coordinate (-1)^(p-i) df_j/dx_i.
    for (int i = 1; i <= p; ++i) {
      for (int j = 1; j <= n - p; ++j) {
        std::vector<int> axes;
        for (int k = 1; k <= p; ++k) {
          if (k != i) axes.push_back(k);
        }
        axes.push_back(p + j);
        const double expected = ((p - i) % 2 == 0 ? 1.0 : -1.0) * slopes(i - 1, j - 1);
        out.require(std::abs(y.component(axes) - expected) <= 1e-8,
                    "signed slope (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }

  Eigen::MatrixXd slopes(2, 2);
  slopes << 0.7, -1.3, 2.1, 0.4;
  const GraphSurface plane = affine_graph(slopes, Eigen::Vector2d(0.2, -0.5), Domain::unit(2), {8, 8});
  Eigen::MatrixXd jacobian(4, 2);
  jacobian << Eigen::Matrix2d::Identity(), slopes.transpose();
  const double gap = std::abs(lagrangian_action(area_lagrangian(4, 2), plane.grid()) - oracle::gram_area(jacobian));
  out.require(gap <= 1e-8, "Gram area gap " + fmt(gap));
  if (out.passed) out.detail = "minors and signs within 1e-8; Gram area gap " + fmt(gap);
  return out;
}

Outcome multisymplectic_structure() {
  Outcome out;
  double worst = 0.0;
  for (auto [n, p] : kShapes) {
    const TotalSpaceChart chart(n, p);
    const FormField om = omega(chart);
    for (int i = 0; i < 20; ++i) {
      Rng rng = sample_stream(79, static_cast<std::uint64_t>(i));
      const Eigen::VectorXd z = gaussian_vector(rng, chart.dim());
      const auto rank = nondegeneracy_check(om, z);
      out.require(rank.rank == chart.dim(), "omega rank " + std::to_string(rank.rank) + " of " +
                                                std::to_string(chart.dim()));
      std::vector<TotalVector> v;
      for (int k = 0; k < p + 2; ++k) v.push_back({gaussian_vector(rng, chart.dim())});
      const double d = closedness_residual(om, z, v);
      worst = std::max(worst, d);
      out.require(d <= 1e-6, "d omega " + fmt(d));
    }
  }

  const TotalSpaceChart chart(3, 2);
  const FormField degenerate(chart.dim(), 3, "dx123", std::vector<FormTerm>{{1.0, std::nullopt, {0, 1, 2}}});
  out.require(!nondegeneracy_check(degenerate, Eigen::VectorXd::Zero(chart.dim())).nondegenerate,
              "degenerate probe not flagged");
  const int p23 = chart.p_slot(MultiIndex(3, {2, 3}));
  const FormField open(chart.dim(), 2, "p23 dx12", std::vector<FormTerm>{{1.0, p23, {0, 1}}});
  const std::vector<TotalVector> v{TotalVector::basis(chart, p23), TotalVector::basis(chart, 0),
                                   TotalVector::basis(chart, 1)};
  out.require(closedness_residual(open, Eigen::VectorXd::Zero(chart.dim()), v) > 1e-6,
              "non-closed probe not flagged");
  if (out.passed) out.detail = "full rank at 60 points; worst d omega " + fmt(worst) + "; probes flagged";
  return out;
}

Outcome round_trips() {
  Outcome out;
  int checked = 0;
  for (auto [n, p] : {std::pair{3, 2}, {4, 2}}) {
    const std::vector<Named> ls{{"area", area_lagrangian(n, p)},
                                {"ellipsoid", ellipsoid_lagrangian(n, p, weights(n, p))}};
    for (const auto& [name, l] : ls) {
      for (int i = 0; i < 50; ++i) {
        Rng rng = sample_stream(83, static_cast<std::uint64_t>(i));
        const Point x = gaussian_vector(rng, n);
        const KVector y = wedge_vectors(gaussian_matrix(rng, n, p));
        const OrientedRay back = inverse_legendre(l, x, legendre_map(l, x, y).p);
        out.require(grassmann_eq(back, OrientedRay(y), 1e-7), name + " round trip");
        ++checked;
      }
    }
  }
  for (int i = 0; i < 100; ++i) {
    Rng rng = sample_stream(89, static_cast<std::uint64_t>(i));
    const KVector u = wedge_vectors(gaussian_matrix(rng, 3, 2));
    const auto [a, b] = plane_from_bivector(u, volume_form(3));
    Eigen::MatrixXd ab(3, 2);
    ab << a, b;
    out.require(same_ray(wedge_vectors(ab), u, 1e-9), "plane_from_bivector lost the oriented class");
  }
  if (out.passed) out.detail = std::to_string(checked) + " Legendre and 100 bivector round trips";
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  Outcome out;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "multisym_acceptance";
  fs::create_directories(dir);
  std::ofstream(dir / "config.json")
      << R"({"lagrangian": {"name": "ellipsoid", "n": 4, "p": 2, "params": {"weights": [1, 2, 3, 4, 5, 6]}},
            "seed": 7})";
  std::ostringstream log;
  const int a = cli::run("verify", dir / "config.json", dir / "a.json", log);
  const int b = cli::run("verify", dir / "config.json", dir / "b.json", log);
  out.require(a == cli::kExitPass && b == cli::kExitPass, "verify exit codes " + std::to_string(a) + ", " +
                                                              std::to_string(b));
  const auto strip = [](const std::string& text) {
    return cli::without_timing(nlohmann::json::parse(text)).dump(2);
  };
  const std::string ra = read_file(dir / "a.json");
  const std::string rb = read_file(dir / "b.json");
  out.require(!ra.empty() && strip(ra) == strip(rb), "reports differ");
  fs::remove_all(dir);
  if (out.passed) out.detail = "reports identical apart from runtime_ms";
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Euler formula", euler_formula},
      {"vanishing Hamiltonian", vanishing_hamiltonian},
      {"rank lemma", rank_lemma},
      {"convexity certificate", convexity},
      {"Legendre image shape", image_shape},
      {"pullback identity", pullback},
      {"action triple equality", action_triple},
      {"general-p graph law", general_graph_law},
      {"multisymplectic structure", multisymplectic_structure},
      {"round trips", round_trips},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome.passed = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    if (!outcome.passed) ++failures;
    std::printf("[%s] criterion %zu %s: %s\n", outcome.passed ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), outcome.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failures), criteria.size());
  return failures == 0 ? 0 : 1;
}
