#include "multisym/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <optional>

namespace multisym {

LegendreImagePoint legendre_map(const HomogeneousLagrangian& lagrangian,
                                const Point& x, const KVector& y) {
  KCovector p = lagrangian.gradient(x, y);
  return {x, std::move(p), OrientedRay(y / y.norm())};
}

double hamiltonian(const HomogeneousLagrangian& lagrangian, const Point& x,
                   const KCovector& p, const KVector& y) {
  return pair(p, y) - lagrangian.value(x, y);
}

namespace {

struct Residual {
  Eigen::VectorXd value;
  Eigen::MatrixXd jacobian;
};

using ResidualFn = std::function<Residual(const KVector&, bool with_jacobian)>;

struct SolveResult {
  KVector y;
  double residual;
  bool converged;
};

// Rescales y onto {L = 1}; empty when y leaves the chart or L(y) <= 0.
std::optional<KVector> onto_level_set(const HomogeneousLagrangian& lagrangian,
                                      const Point& x, const KVector& y) {
  if (!y.is_finite() || !lagrangian.admissible(y)) return std::nullopt;
  const double l = lagrangian.value(x, y);
  if (!(l > 0.0) || !std::isfinite(l)) return std::nullopt;
  return y / l;
}

// Gauss-Newton on S_x with a pseudo-inverse step and step halving.
SolveResult solve_on_level_set(const HomogeneousLagrangian& lagrangian,
                               const Point& x, KVector y,
                               const ResidualFn& residual, double tol,
                               int max_iter) {
  auto start = onto_level_set(lagrangian, x, y);
  if (!start) {
    throw NumericalFailureError(
        "initial guess is outside the Lagrangian's domain");
  }
  y = *start;
  Residual r = residual(y, true);
  double norm = r.value.norm();
  for (int iter = 0; iter < max_iter && norm > tol; ++iter) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(
        r.jacobian, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-12);
    const Eigen::VectorXd step = -svd.solve(r.value);
    if (!step.allFinite()) {
      throw NumericalFailureError("non-finite Gauss-Newton step");
    }
    bool accepted = false;
    double alpha = 1.0;
    for (int halving = 0; halving < 40; ++halving, alpha *= 0.5) {
      const KVector trial(y.ambient_dim(), y.degree(),
                          y.coords() + alpha * step);
      if (trial.norm() < 1e-12 * std::max(1.0, y.norm())) continue;
      std::optional<KVector> candidate;
      try {
        candidate = onto_level_set(lagrangian, x, trial);
      } catch (const Error&) {
        continue;
      }
      if (!candidate) continue;
      Residual next;
      try {
        next = residual(*candidate, false);
      } catch (const Error&) {
        continue;
      }
      const double next_norm = next.value.norm();
      if (std::isfinite(next_norm) && next_norm < norm) {
        y = *candidate;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    if (y.norm() < 1e-12) {
      throw NumericalFailureError("iterate collapsed toward the zero section");
    }
    r = residual(y, true);
    norm = r.value.norm();
  }
  return {y, norm, norm <= tol};
}

}  // namespace

OrientedRay inverse_legendre(const HomogeneousLagrangian& lagrangian,
                             const Point& x, const KCovector& p, double tol,
                             int max_iter) {
  if (p.ambient_dim() != lagrangian.ambient_dim() ||
      p.degree() != lagrangian.degree()) {
    throw DomainError("covector shape does not match the Lagrangian");
  }
  if (p.is_zero()) {
    throw NumericalFailureError("the zero covector has no preimage ray");
  }
  const ResidualFn residual = [&](const KVector& y, bool with_jacobian) {
    Residual r;
    r.value = lagrangian.gradient(x, y).coords() - p.coords();
    if (with_jacobian) r.jacobian = lagrangian.hessian(x, y);
    return r;
  };
  const KVector guess(p.ambient_dim(), p.degree(), p.coords());
  const SolveResult result =
      solve_on_level_set(lagrangian, x, guess, residual, tol, max_iter);
  if (!result.converged) {
    throw NoSolutionError("inverse Legendre residual " +
                          std::to_string(result.residual) + " above " +
                          std::to_string(tol));
  }
  return OrientedRay(result.y);
}

double image_radius(const HomogeneousLagrangian& lagrangian, const Point& x,
                    const KCovector& direction, double tol, int max_iter) {
  if (direction.is_zero()) {
    throw DomainError("image radius along the zero direction");
  }
  const Eigen::VectorXd target = direction.coords() / direction.norm();
  const ResidualFn residual = [&](const KVector& y, bool with_jacobian) {
    const Eigen::VectorXd g = lagrangian.gradient(x, y).coords();
    const double gn = g.norm();
    if (!(gn > 0.0)) {
      throw NumericalFailureError("vanishing Legendre image");
    }
    const Eigen::VectorXd unit = g / gn;
    Residual r;
    r.value = unit - target;
    if (with_jacobian) {
      const Eigen::Index m = g.size();
      r.jacobian = (Eigen::MatrixXd::Identity(m, m) - unit * unit.transpose()) *
                   lagrangian.hessian(x, y) / gn;
    }
    return r;
  };
  const KVector guess(direction.ambient_dim(), direction.degree(), target);
  const SolveResult result =
      solve_on_level_set(lagrangian, x, guess, residual, tol, max_iter);
  if (!result.converged) {
    throw NoSolutionError("ray misses the Legendre image (residual " +
                          std::to_string(result.residual) + ")");
  }
  return lagrangian.gradient(x, result.y).norm();
}

LevelSetSampler::LevelSetSampler(HomogeneousLagrangian lagrangian, Point x,
                                 LevelSetMode mode)
    : lagrangian_(std::move(lagrangian)), x_(std::move(x)), mode_(mode) {
  if (x_.size() != lagrangian_.ambient_dim()) {
    throw DomainError("base point dimension does not match the Lagrangian");
  }
}

KVector LevelSetSampler::sample(Rng& rng) const {
  const int n = lagrangian_.ambient_dim();
  const int p = lagrangian_.degree();
  const auto m = static_cast<Eigen::Index>(binomial(n, p));
  for (int attempt = 0; attempt < 64; ++attempt) {
    KVector d(n, p, gaussian_vector(rng, m));
    if (d.is_zero()) continue;
    if (!lagrangian_.admissible(d)) d = -d;
    if (!lagrangian_.admissible(d)) continue;
    double l = lagrangian_.value(x_, d);
    if (!(l > 0.0)) {
      d = -d;
      if (!lagrangian_.admissible(d)) continue;
      l = lagrangian_.value(x_, d);
      if (!(l > 0.0)) continue;
    }
    KVector y = d / l;
    if (mode_ == LevelSetMode::kBall) {
      y = y * std::pow(uniform(rng, 0.0, 1.0), 1.0 / static_cast<double>(m));
    }
    return y;
  }
  throw NumericalFailureError("no direction with L > 0 found for '" +
                              lagrangian_.name() + "'");
}

std::vector<KVector> LevelSetSampler::sample(std::size_t count,
                                             std::uint64_t seed) const {
  std::vector<KVector> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng = sample_stream(seed, i);
    out.push_back(sample(rng));
  }
  return out;
}

std::vector<LegendreImagePoint> sample_image(
    const HomogeneousLagrangian& lagrangian, const Point& x, std::size_t count,
    std::uint64_t seed) {
  const LevelSetSampler sampler(lagrangian, x, LevelSetMode::kSphere);
  std::vector<LegendreImagePoint> out;
  out.reserve(count);
  for (const KVector& y : sampler.sample(count, seed)) {
    out.push_back(legendre_map(lagrangian, x, y));
  }
  return out;
}

namespace {

int numerical_rank(const Eigen::VectorXd& singular_values, double threshold) {
  if (singular_values.size() == 0) return 0;
  const double top = singular_values.maxCoeff();
  if (!(top > 0.0)) return 0;
  return static_cast<int>((singular_values.array() > threshold * top).count());
}

Eigen::VectorXd singular_values(const Eigen::MatrixXd& m) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues();
}

}  // namespace

RankReport rank_lemma_check(const HomogeneousLagrangian& lagrangian,
                            const Point& x, const KVector& y,
                            double threshold) {
  const Eigen::MatrixXd hess = lagrangian.hessian(x, y);
  const Eigen::MatrixXd hess_square = lagrangian.hessian_of_square(x, y);

  RankReport report;
  report.threshold = threshold;
  report.singular_values_square = singular_values(hess_square);
  report.singular_values_hessian = singular_values(hess);
  report.rank_square = numerical_rank(report.singular_values_square, threshold);
  report.rank_hessian = numerical_rank(report.singular_values_hessian, threshold);

  // Orthonormal basis of ker(dL_y) = T_y S_x, from a QR factorization of g.
  const Eigen::VectorXd g = lagrangian.gradient(x, y).coords();
  const Eigen::Index m = g.size();
  if (m > 1 && g.norm() > 0.0) {
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m, m);
    const Eigen::MatrixXd tangent = q.rightCols(m - 1);
    const Eigen::MatrixXd restricted = tangent.transpose() * hess * tangent;
    const Eigen::VectorXd sv = singular_values(restricted);
    const double top = report.singular_values_hessian.size() > 0
                           ? report.singular_values_hessian.maxCoeff()
                           : 0.0;
    report.rank_tangent =
        top > 0.0 ? static_cast<int>((sv.array() > threshold * top).count()) : 0;
  }
  return report;
}

ConvexityCertificate convexity_certificate(
    const HomogeneousLagrangian& lagrangian, const Point& x, int num_pairs,
    int t_steps, std::uint64_t seed, double tol) {
  if (num_pairs < 0 || t_steps < 0) {
    throw DomainError("convexity certificate needs nonnegative counts");
  }
  ConvexityCertificate cert;
  cert.tolerance = tol;
  cert.sample_seed = seed;

  const auto points = sample_image(
      lagrangian, x, 2 * static_cast<std::size_t>(num_pairs), seed);
  for (int k = 0; k < num_pairs; ++k) {
    const KCovector& first = points[2 * static_cast<std::size_t>(k)].p;
    const KCovector& second = points[2 * static_cast<std::size_t>(k) + 1].p;
    const double scale = std::max(first.norm(), second.norm());
    for (int s = 1; s <= t_steps; ++s) {
      const double t = static_cast<double>(s) / (t_steps + 1);
      const KCovector q = first * t + second * (1.0 - t);
      ++cert.num_segment_checks;
      const double qn = q.norm();
      if (qn <= 1e-14 * scale) continue;  // the origin is interior
      double violation = 0.0;
      try {
        const double radius = image_radius(lagrangian, x, q);
        inverse_legendre(lagrangian, x, q * (radius / qn));
        violation = std::max(0.0, qn / radius - 1.0);
      } catch (const Error&) {
        ++cert.num_inversion_failures;
        violation = 1.0;
      }
      cert.worst_violation = std::max(cert.worst_violation, violation);
    }
  }
  cert.passed = cert.worst_violation <= tol;
  return cert;
}

void write_image_csv(std::ostream& out, int n, int p,
                     const std::vector<LegendreImagePoint>& points) {
  const auto basis = enumerate_multi_indices(n, p);
  for (int i = 1; i <= n; ++i) {
    out << (i > 1 ? "," : "") << 'x' << i;
  }
  for (const MultiIndex& index : basis) {
    out << ",p" << index.label("_");
  }
  out << '\n';
  out << std::setprecision(17);
  for (const auto& point : points) {
    if (point.x.size() != n || point.p.ambient_dim() != n ||
        point.p.degree() != p) {
      throw DomainError("image point shape does not match the CSV header");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      out << (i > 0 ? "," : "") << point.x[i];
    }
    for (Eigen::Index k = 0; k < point.p.size(); ++k) {
      out << ',' << point.p.coords()[k];
    }
    out << '\n';
  }
}

}  // namespace multisym
