#pragma once

// Discretized p-dimensional surfaces in R^n and the three action integrals:
// the Lagrangian action of L on tangent p-vectors, the graph action of a
// first-order density, and the integral of theta over the Legendre image of
// the tangent lift.

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "multisym/lagrangian.hpp"

namespace multisym {

// Axis-aligned rectangle in R^p.
struct Domain {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  static Domain unit(int p);
  int dim() const noexcept { return static_cast<int>(lower.size()); }
  double volume() const;
};

// Node values of a map from a parameter rectangle into R^n. Positions and
// tangents inside a cell come from the multilinear interpolant of its 2^p
// corner nodes, so cell-center tangents are central differences with step
// equal to the cell size.
class ParametricGrid {
 public:
  using Map = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

  // values: n x node_count, nodes ordered with axis 1 varying fastest.
  ParametricGrid(int n, Domain domain, std::vector<int> resolution,
                 Eigen::MatrixXd values);

  static ParametricGrid sample(int n, const Domain& domain,
                               std::vector<int> resolution, const Map& map);

  int degree() const noexcept { return domain_.dim(); }
  int ambient_dim() const noexcept { return n_; }
  const Domain& domain() const noexcept { return domain_; }
  const std::vector<int>& resolution() const noexcept { return resolution_; }
  long node_count() const noexcept { return static_cast<long>(values_.cols()); }
  long cell_count() const;
  Eigen::VectorXd cell_size() const;
  double cell_volume() const;

  std::vector<int> cell_coords(long cell) const;
  long cell_index(std::span<const int> coords) const;
  Eigen::VectorXd node(std::span<const int> coords) const;

  struct LocalFrame {
    Eigen::VectorXd position;  // in R^n
    Eigen::MatrixXd jacobian;  // n x p, derivatives in parameter space
  };
  // local in [0,1]^p.
  LocalFrame frame(long cell, const Eigen::VectorXd& local) const;
  Eigen::VectorXd parameter(long cell, const Eigen::VectorXd& local) const;

 private:
  int n_;
  Domain domain_;
  std::vector<int> resolution_;
  Eigen::MatrixXd values_;
};

class GraphSurface {
 public:
  using Function = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

  GraphSurface(int p, int n, std::string name, Function f, Domain domain,
               std::vector<int> resolution);

  int degree() const noexcept { return p_; }
  int ambient_dim() const noexcept { return n_; }
  const std::string& name() const noexcept { return name_; }
  const Domain& domain() const noexcept { return domain_; }
  const std::vector<int>& resolution() const noexcept { return resolution_; }

  Eigen::VectorXd f(const Eigen::VectorXd& x) const;
  // Grid of x -> (x, f(x)).
  ParametricGrid grid() const;
  GraphSurface with_resolution(int cells_per_axis) const;

 private:
  int p_;
  int n_;
  std::string name_;
  Function f_;
  Domain domain_;
  std::vector<int> resolution_;
};

GraphSurface flat_graph(int p, int n, Domain domain, std::vector<int> resolution);
// f(x) = offset + slopes^T x, slopes(i, j) = d f_j / d x_i.
GraphSurface affine_graph(const Eigen::MatrixXd& slopes,
                          const Eigen::VectorXd& offset, Domain domain,
                          std::vector<int> resolution);
// f(x1, x2) = x1 x2 in R^3.
GraphSurface bilinear_graph(Domain domain, std::vector<int> resolution);

struct Monomial {
  double coefficient = 0.0;
  std::vector<int> exponents;  // one per parameter axis
};
// components[j] is the polynomial f_{j+1}.
GraphSurface polynomial_graph(int p, int n,
                              std::vector<std::vector<Monomial>> components,
                              Domain domain, std::vector<int> resolution);

enum class QuadratureRule { kMidpoint, kGauss2 };

struct QuadraturePoint {
  Eigen::VectorXd local;  // in [0,1]^p
  double weight;          // fraction of the cell volume
};

struct QuadratureConfig {
  QuadratureRule rule = QuadratureRule::kMidpoint;
  std::vector<QuadraturePoint> points(int p) const;
};

struct CellTangent {
  KVector y;
  Point base;
};

// Wedge of the parameter derivatives at the cell center. Throws
// DegenerateCellError when the tangent p-vector vanishes.
CellTangent tangent_pvector(const ParametricGrid& grid, long cell);
CellTangent tangent_pvector(const ParametricGrid& grid, std::span<const int> cell);

// Cell contributions are summed pairwise in cell order, so results do not
// depend on how contributions were computed.
double lagrangian_action(const HomogeneousLagrangian& lagrangian,
                         const ParametricGrid& grid,
                         const QuadratureConfig& quad = {});
double graph_action(const GraphDensity& density, const GraphSurface& surface,
                    const QuadratureConfig& quad = {});
double multisymplectic_action(const HomogeneousLagrangian& lagrangian,
                              const ParametricGrid& grid,
                              const QuadratureConfig& quad = {});

double pairwise_sum(std::span<const double> values);

enum class ActionKind { kLagrangian, kGraph, kMultisymplectic };

struct ConvergenceRow {
  int resolution = 0;
  double h = 0.0;
  double value = 0.0;
  // |value - reference|, or |value - previous value| without a reference.
  std::optional<double> error;
  std::optional<double> order;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  std::optional<double> reference;
  bool monotone = true;  // errors strictly decrease with h
};

// Observed order log(e_coarse / e_fine) / log(h_coarse / h_fine). Needs at
// least three resolutions. Errors at or below `floor` are treated as exact
// and carry no order.
ConvergenceTable convergence_study(const std::function<double(int)>& action,
                                   std::span<const int> resolutions,
                                   std::optional<double> reference = std::nullopt,
                                   double extent = 1.0, double floor = 1e-13);
ConvergenceTable convergence_study(ActionKind kind,
                                   const HomogeneousLagrangian& lagrangian,
                                   const GraphSurface& surface,
                                   std::span<const int> resolutions,
                                   const QuadratureConfig& quad = {},
                                   std::optional<double> reference = std::nullopt);
ConvergenceTable convergence_study(const GraphDensity& density,
                                   const GraphSurface& surface,
                                   std::span<const int> resolutions,
                                   const QuadratureConfig& quad = {},
                                   std::optional<double> reference = std::nullopt);

}  // namespace multisym
