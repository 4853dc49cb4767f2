#pragma once

// Positively homogeneous Lagrangians L(x, y) on p-vectors off the zero
// section, their derivatives, and the graph-density lift.

#include <Eigen/Dense>

#include <functional>
#include <initializer_list>
#include <string>

#include "multisym/exterior_algebra.hpp"

namespace multisym {

class HomogeneousLagrangian {
 public:
  using ValueFn = std::function<double(const Point&, const KVector&)>;
  using GradientFn = std::function<KCovector(const Point&, const KVector&)>;
  using HessianFn = std::function<Eigen::MatrixXd(const Point&, const KVector&)>;
  using AdmissibleFn = std::function<bool(const KVector&)>;

  struct Parts {
    std::string name;
    std::string smoothness = "C2 off the zero section";
    ValueFn value;
    GradientFn gradient;    // optional; central differences when empty
    HessianFn hessian;      // optional; differences of the gradient when empty
    AdmissibleFn admissible;  // optional chart restriction, e.g. y^{1..p} > 0
  };

  HomogeneousLagrangian(int n, int p, Parts parts);

  int ambient_dim() const noexcept { return n_; }
  int degree() const noexcept { return p_; }
  const std::string& name() const noexcept { return parts_.name; }
  const std::string& smoothness() const noexcept { return parts_.smoothness; }
  bool has_analytic_gradient() const noexcept { return bool(parts_.gradient); }
  bool has_analytic_hessian() const noexcept { return bool(parts_.hessian); }

  // All evaluators reject y = 0 with ZeroSectionError.
  double value(const Point& x, const KVector& y) const;
  KCovector gradient(const Point& x, const KVector& y) const;
  Eigen::MatrixXd hessian(const Point& x, const KVector& y) const;
  // 2 (g g^T + L Hess L).
  Eigen::MatrixXd hessian_of_square(const Point& x, const KVector& y) const;

  bool admissible(const KVector& y) const;

  // Central differences with step 1e-5 max(1, |y|), used as fallback and as
  // the independent oracle in verification.
  KCovector finite_difference_gradient(const Point& x, const KVector& y) const;
  // Central differences of gradient() with step 1e-4 max(1, |y|), symmetrized.
  Eigen::MatrixXd finite_difference_hessian(const Point& x,
                                            const KVector& y) const;

 private:
  void check_arguments(const Point& x, const KVector& y) const;

  int n_;
  int p_;
  Parts parts_;
};

// L = |y|, the Euclidean p-dimensional area element.
HomogeneousLagrangian area_lagrangian(int n, int p);

// L = sqrt(sum_I w_I (y^I)^2), weights in lexicographic multi-index order.
HomogeneousLagrangian ellipsoid_lagrangian(int n, int p,
                                           const Eigen::VectorXd& weights);

// L = y^{1...p}. Linear, hence homogeneous but degenerate.
HomogeneousLagrangian projected_volume_lagrangian(int n, int p);

// L = (prod_I |y^I|)^(1/C(n,p)). Homogeneous of degree 1, not convex.
HomogeneousLagrangian geometric_mean_lagrangian(int n, int p);

// First-order density F(x_1..x_p, f_1..f_{n-p}, slopes) for graphs of
// f: R^p -> R^{n-p}; slopes(i, j) = d f_j / d x_i.
class GraphDensity {
 public:
  using DensityFn = std::function<double(const Eigen::VectorXd& base,
                                         const Eigen::VectorXd& values,
                                         const Eigen::MatrixXd& slopes)>;
  using SlopeGradientFn = std::function<Eigen::MatrixXd(
      const Eigen::VectorXd& base, const Eigen::VectorXd& values,
      const Eigen::MatrixXd& slopes)>;

  GraphDensity(int n, int p, std::string name, DensityFn density,
               SlopeGradientFn slope_gradient = {});

  int ambient_dim() const noexcept { return n_; }
  int degree() const noexcept { return p_; }
  const std::string& name() const noexcept { return name_; }

  double operator()(const Eigen::VectorXd& base, const Eigen::VectorXd& values,
                    const Eigen::MatrixXd& slopes) const;
  // dF/dslopes, analytic when provided, else central differences.
  Eigen::MatrixXd slope_gradient(const Eigen::VectorXd& base,
                                 const Eigen::VectorXd& values,
                                 const Eigen::MatrixXd& slopes) const;

 private:
  void check(const Eigen::VectorXd& base, const Eigen::VectorXd& values,
             const Eigen::MatrixXd& slopes) const;

  int n_;
  int p_;
  std::string name_;
  DensityFn density_;
  SlopeGradientFn slope_gradient_;
};

// F = 1.
GraphDensity unit_density(int n, int p);
// F = sqrt(det(I + Q Q^T)), the area density of a graph for any codimension.
GraphDensity area_density(int n, int p);
// F = sqrt(1 + sum q^2). Equal to area_density only when n - p == 1.
GraphDensity slope_norm_density(int n, int p);

// Index {1..p} \ {i} u {p+j}, already increasing (i, j 1-based).
MultiIndex graph_slope_index(int n, int p, int i, int j);
// (-1)^(p-i): sign relating y^{graph_slope_index(i,j)} / y^{1..p} to the slope.
int graph_slope_sign(int p, int i);

// Slopes recovered from a graph-compatible p-vector; OrientationError unless
// y^{1...p} > 0.
Eigen::MatrixXd graph_slopes(const KVector& y);

// L(x, y) = y^{1...p} F(x, graph_slopes(y)). The gradient is assembled from
// dF/dslopes, so Euler's identity holds to rounding.
HomogeneousLagrangian graph_lift(const GraphDensity& density);

// |L(x,y) - <dL/dy, y>|.
double euler_residual(const HomogeneousLagrangian& lagrangian, const Point& x,
                      const KVector& y);

// max over lambda of |L(x, lambda y) - lambda L(x, y)| / (lambda |y|).
double homogeneity_residual(const HomogeneousLagrangian& lagrangian,
                            const Point& x, const KVector& y,
                            std::span<const double> lambdas);
double homogeneity_residual(const HomogeneousLagrangian& lagrangian,
                            const Point& x, const KVector& y,
                            std::initializer_list<double> lambdas);

// The p-form with coefficients dL/dy^I, well defined on oriented rays.
class AreolarForm {
 public:
  explicit AreolarForm(HomogeneousLagrangian lagrangian);

  KCovector coefficients(const Point& x, const KVector& y) const;
  KCovector coefficients(const Point& x, const OrientedRay& element) const;
  KCovector coefficients(const Point& x, const GrassmannPoint& element) const;
  // l(x, [y]) evaluated on p base vectors (columns).
  double evaluate(const Point& x, const KVector& y,
                  const Eigen::MatrixXd& columns) const;

  const HomogeneousLagrangian& lagrangian() const noexcept { return lagrangian_; }

 private:
  HomogeneousLagrangian lagrangian_;
};

AreolarForm areolar_form(const HomogeneousLagrangian& lagrangian);

// Smallest eigenvalue of Hess(L^2) at (x, y) exceeds tol.
bool is_nondegenerate(const HomogeneousLagrangian& lagrangian, const Point& x,
                      const KVector& y, double tol = 1e-8);

}  // namespace multisym
