#include "multisym/lagrangian.hpp"

#include <algorithm>
#include <cmath>

namespace multisym {

HomogeneousLagrangian::HomogeneousLagrangian(int n, int p, Parts parts)
    : n_(n), p_(p), parts_(std::move(parts)) {
  if (n < 1 || p < 1 || p > n) {
    throw DomainError("Lagrangian on degree " + std::to_string(p) +
                      " in dimension " + std::to_string(n));
  }
  if (!parts_.value) {
    throw DomainError("Lagrangian '" + parts_.name + "' has no evaluator");
  }
}

void HomogeneousLagrangian::check_arguments(const Point& x,
                                            const KVector& y) const {
  if (x.size() != n_) {
    throw DomainError("base point has dimension " + std::to_string(x.size()) +
                      ", expected " + std::to_string(n_));
  }
  if (y.ambient_dim() != n_ || y.degree() != p_) {
    throw DomainError("p-vector shape does not match Lagrangian '" +
                      parts_.name + "'");
  }
  if (!y.is_finite()) {
    throw DomainError("non-finite p-vector");
  }
  if (y.is_zero()) {
    throw ZeroSectionError("Lagrangian '" + parts_.name +
                           "' evaluated on the zero section");
  }
}

double HomogeneousLagrangian::value(const Point& x, const KVector& y) const {
  check_arguments(x, y);
  return parts_.value(x, y);
}

KCovector HomogeneousLagrangian::gradient(const Point& x,
                                          const KVector& y) const {
  check_arguments(x, y);
  if (parts_.gradient) return parts_.gradient(x, y);
  return finite_difference_gradient(x, y);
}

Eigen::MatrixXd HomogeneousLagrangian::hessian(const Point& x,
                                               const KVector& y) const {
  check_arguments(x, y);
  if (parts_.hessian) return parts_.hessian(x, y);
  return finite_difference_hessian(x, y);
}

Eigen::MatrixXd HomogeneousLagrangian::hessian_of_square(
    const Point& x, const KVector& y) const {
  const double l = value(x, y);
  const Eigen::VectorXd g = gradient(x, y).coords();
  return 2.0 * (g * g.transpose() + l * hessian(x, y));
}

bool HomogeneousLagrangian::admissible(const KVector& y) const {
  if (y.is_zero()) return false;
  return !parts_.admissible || parts_.admissible(y);
}

KCovector HomogeneousLagrangian::finite_difference_gradient(
    const Point& x, const KVector& y) const {
  check_arguments(x, y);
  const double h = 1e-5 * std::max(1.0, y.norm());
  Eigen::VectorXd g(y.size());
  Eigen::VectorXd shifted = y.coords();
  for (Eigen::Index k = 0; k < y.size(); ++k) {
    const double original = shifted[k];
    shifted[k] = original + h;
    const double forward = parts_.value(x, KVector(n_, p_, shifted));
    shifted[k] = original - h;
    const double backward = parts_.value(x, KVector(n_, p_, shifted));
    shifted[k] = original;
    g[k] = (forward - backward) / (2.0 * h);
  }
  return KCovector(n_, p_, std::move(g));
}

Eigen::MatrixXd HomogeneousLagrangian::finite_difference_hessian(
    const Point& x, const KVector& y) const {
  check_arguments(x, y);
  const double h = 1e-4 * std::max(1.0, y.norm());
  const Eigen::Index m = y.size();
  Eigen::MatrixXd hess(m, m);
  Eigen::VectorXd shifted = y.coords();
  for (Eigen::Index k = 0; k < m; ++k) {
    const double original = shifted[k];
    shifted[k] = original + h;
    const Eigen::VectorXd forward = gradient(x, KVector(n_, p_, shifted)).coords();
    shifted[k] = original - h;
    const Eigen::VectorXd backward = gradient(x, KVector(n_, p_, shifted)).coords();
    shifted[k] = original;
    hess.col(k) = (forward - backward) / (2.0 * h);
  }
  return 0.5 * (hess + hess.transpose());
}

GraphDensity::GraphDensity(int n, int p, std::string name, DensityFn density,
                           SlopeGradientFn slope_gradient)
    : n_(n),
      p_(p),
      name_(std::move(name)),
      density_(std::move(density)),
      slope_gradient_(std::move(slope_gradient)) {
  if (p < 1 || p >= n) {
    throw DomainError("graph density needs 1 <= p < n");
  }
  if (!density_) {
    throw DomainError("graph density '" + name_ + "' has no evaluator");
  }
}

void GraphDensity::check(const Eigen::VectorXd& base,
                         const Eigen::VectorXd& values,
                         const Eigen::MatrixXd& slopes) const {
  if (base.size() != p_ || values.size() != n_ - p_ || slopes.rows() != p_ ||
      slopes.cols() != n_ - p_) {
    throw DomainError("graph density '" + name_ + "' called with wrong shapes");
  }
}

double GraphDensity::operator()(const Eigen::VectorXd& base,
                                const Eigen::VectorXd& values,
                                const Eigen::MatrixXd& slopes) const {
  check(base, values, slopes);
  return density_(base, values, slopes);
}

Eigen::MatrixXd GraphDensity::slope_gradient(const Eigen::VectorXd& base,
                                             const Eigen::VectorXd& values,
                                             const Eigen::MatrixXd& slopes) const {
  check(base, values, slopes);
  if (slope_gradient_) return slope_gradient_(base, values, slopes);
  const double h = 1e-5 * std::max(1.0, slopes.norm());
  Eigen::MatrixXd grad(slopes.rows(), slopes.cols());
  Eigen::MatrixXd shifted = slopes;
  for (Eigen::Index i = 0; i < slopes.rows(); ++i) {
    for (Eigen::Index j = 0; j < slopes.cols(); ++j) {
      const double original = shifted(i, j);
      shifted(i, j) = original + h;
      const double forward = density_(base, values, shifted);
      shifted(i, j) = original - h;
      const double backward = density_(base, values, shifted);
      shifted(i, j) = original;
      grad(i, j) = (forward - backward) / (2.0 * h);
    }
  }
  return grad;
}

MultiIndex graph_slope_index(int n, int p, int i, int j) {
  if (i < 1 || i > p || j < 1 || j > n - p) {
    throw DomainError("graph slope index out of range");
  }
  std::vector<int> axes;
  axes.reserve(static_cast<std::size_t>(p));
  for (int k = 1; k <= p; ++k) {
    if (k != i) axes.push_back(k);
  }
  axes.push_back(p + j);
  return MultiIndex(n, std::move(axes));
}

int graph_slope_sign(int p, int i) { return (p - i) % 2 == 0 ? 1 : -1; }

Eigen::MatrixXd graph_slopes(const KVector& y) {
  const int n = y.ambient_dim();
  const int p = y.degree();
  if (p < 1 || p >= n) {
    throw DomainError("graph chart needs 1 <= p < n");
  }
  // y^{1...p} is the first coordinate in lexicographic order.
  const double leading = y.coords()[0];
  if (!(leading > 0.0)) {
    throw OrientationError("y^{1..p} = " + std::to_string(leading) +
                           " is not positive; outside the graph chart");
  }
  Eigen::MatrixXd slopes(p, n - p);
  for (int i = 1; i <= p; ++i) {
    for (int j = 1; j <= n - p; ++j) {
      slopes(i - 1, j - 1) = graph_slope_sign(p, i) *
                             y[graph_slope_index(n, p, i, j)] / leading;
    }
  }
  return slopes;
}

HomogeneousLagrangian graph_lift(const GraphDensity& density) {
  const int n = density.ambient_dim();
  const int p = density.degree();

  // Slot of y^{graph_slope_index(i, j)} for every slope entry.
  Eigen::MatrixXi slots(p, n - p);
  for (int i = 1; i <= p; ++i) {
    for (int j = 1; j <= n - p; ++j) {
      slots(i - 1, j - 1) =
          static_cast<int>(graph_slope_index(n, p, i, j).position());
    }
  }

  HomogeneousLagrangian::Parts parts;
  parts.name = "graph_lift(" + density.name() + ")";
  parts.smoothness = "as smooth as the density on y^{1..p} > 0";
  parts.value = [density, p](const Point& x, const KVector& y) {
    const Eigen::MatrixXd slopes = graph_slopes(y);
    return y.coords()[0] * density(x.head(p), x.tail(x.size() - p), slopes);
  };
  parts.gradient = [density, slots, n, p](const Point& x, const KVector& y) {
    const Eigen::MatrixXd slopes = graph_slopes(y);
    const Eigen::VectorXd base = x.head(p);
    const Eigen::VectorXd values = x.tail(n - p);
    const double f = density(base, values, slopes);
    const Eigen::MatrixXd df = density.slope_gradient(base, values, slopes);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(y.size());
    g[0] = f - (df.array() * slopes.array()).sum();
    for (int i = 0; i < p; ++i) {
      for (int j = 0; j < n - p; ++j) {
        g[slots(i, j)] = graph_slope_sign(p, i + 1) * df(i, j);
      }
    }
    return KCovector(n, p, std::move(g));
  };
  parts.admissible = [](const KVector& y) { return y.coords()[0] > 0.0; };
  return HomogeneousLagrangian(n, p, std::move(parts));
}

double euler_residual(const HomogeneousLagrangian& lagrangian, const Point& x,
                      const KVector& y) {
  return std::abs(lagrangian.value(x, y) - pair(lagrangian.gradient(x, y), y));
}

double homogeneity_residual(const HomogeneousLagrangian& lagrangian,
                            const Point& x, const KVector& y,
                            std::span<const double> lambdas) {
  const double base = lagrangian.value(x, y);
  const double norm = y.norm();
  double worst = 0.0;
  for (double lambda : lambdas) {
    if (!(lambda > 0.0)) {
      throw DomainError("homogeneity is tested for positive factors only");
    }
    const double scaled = lagrangian.value(x, y * lambda);
    worst = std::max(worst, std::abs(scaled - lambda * base) / (lambda * norm));
  }
  return worst;
}

double homogeneity_residual(const HomogeneousLagrangian& lagrangian,
                            const Point& x, const KVector& y,
                            std::initializer_list<double> lambdas) {
  return homogeneity_residual(
      lagrangian, x, y, std::span<const double>(lambdas.begin(), lambdas.size()));
}

AreolarForm::AreolarForm(HomogeneousLagrangian lagrangian)
    : lagrangian_(std::move(lagrangian)) {}

KCovector AreolarForm::coefficients(const Point& x, const KVector& y) const {
  return lagrangian_.gradient(x, y);
}

KCovector AreolarForm::coefficients(const Point& x,
                                    const OrientedRay& element) const {
  return coefficients(x, element.representative());
}

KCovector AreolarForm::coefficients(const Point& x,
                                    const GrassmannPoint& element) const {
  return coefficients(x, element.representative());
}

double AreolarForm::evaluate(const Point& x, const KVector& y,
                             const Eigen::MatrixXd& columns) const {
  return multisym::evaluate(coefficients(x, y), columns);
}

AreolarForm areolar_form(const HomogeneousLagrangian& lagrangian) {
  return AreolarForm(lagrangian);
}

bool is_nondegenerate(const HomogeneousLagrangian& lagrangian, const Point& x,
                      const KVector& y, double tol) {
  const Eigen::MatrixXd h = lagrangian.hessian_of_square(x, y);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() > tol;
}

}  // namespace multisym
