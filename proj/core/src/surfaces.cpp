#include "multisym/surfaces.hpp"

#include <algorithm>
#include <cmath>

#include "multisym/legendre.hpp"
#include "multisym/multisymplectic.hpp"

namespace multisym {

Domain Domain::unit(int p) {
  return {Eigen::VectorXd::Zero(p), Eigen::VectorXd::Ones(p)};
}

double Domain::volume() const { return (upper - lower).prod(); }

namespace {

void check_domain(const Domain& domain, std::size_t axes) {
  if (domain.lower.size() != domain.upper.size() ||
      static_cast<std::size_t>(domain.lower.size()) != axes || axes == 0) {
    throw DomainError("domain and resolution disagree on the parameter dimension");
  }
  if (!domain.lower.allFinite() || !domain.upper.allFinite() ||
      ((domain.upper - domain.lower).array() <= 0.0).any()) {
    throw DomainError("domain rectangle must have positive finite extent");
  }
}

long product_of_counts(const std::vector<int>& resolution, int extra) {
  long count = 1;
  for (int r : resolution) count *= r + extra;
  return count;
}

}  // namespace

ParametricGrid::ParametricGrid(int n, Domain domain, std::vector<int> resolution,
                               Eigen::MatrixXd values)
    : n_(n),
      domain_(std::move(domain)),
      resolution_(std::move(resolution)),
      values_(std::move(values)) {
  check_domain(domain_, resolution_.size());
  if (n_ <= domain_.dim()) {
    throw DomainError("surface dimension must be below the ambient dimension");
  }
  for (int r : resolution_) {
    if (r < 2) throw DomainError("grid resolution must be at least 2 per axis");
  }
  if (values_.rows() != n_ || values_.cols() != product_of_counts(resolution_, 1)) {
    throw DomainError("node value array has the wrong shape");
  }
  if (!values_.allFinite()) {
    throw DomainError("non-finite node values");
  }
}

ParametricGrid ParametricGrid::sample(int n, const Domain& domain,
                                      std::vector<int> resolution,
                                      const Map& map) {
  check_domain(domain, resolution.size());
  const long nodes = product_of_counts(resolution, 1);
  const int p = domain.dim();
  Eigen::MatrixXd values(n, nodes);
  std::vector<int> coords(static_cast<std::size_t>(p), 0);
  for (long node = 0; node < nodes; ++node) {
    long rest = node;
    Eigen::VectorXd s(p);
    for (int a = 0; a < p; ++a) {
      const int count = resolution[static_cast<std::size_t>(a)] + 1;
      coords[static_cast<std::size_t>(a)] = static_cast<int>(rest % count);
      rest /= count;
      const double t = static_cast<double>(coords[static_cast<std::size_t>(a)]) /
                       resolution[static_cast<std::size_t>(a)];
      s[a] = domain.lower[a] + t * (domain.upper[a] - domain.lower[a]);
    }
    const Eigen::VectorXd value = map(s);
    if (value.size() != n) {
      throw DomainError("surface map returned a point of the wrong dimension");
    }
    values.col(node) = value;
  }
  return ParametricGrid(n, domain, std::move(resolution), std::move(values));
}

long ParametricGrid::cell_count() const {
  return product_of_counts(resolution_, 0);
}

Eigen::VectorXd ParametricGrid::cell_size() const {
  Eigen::VectorXd h(degree());
  for (int a = 0; a < degree(); ++a) {
    h[a] = (domain_.upper[a] - domain_.lower[a]) /
           resolution_[static_cast<std::size_t>(a)];
  }
  return h;
}

double ParametricGrid::cell_volume() const { return cell_size().prod(); }

std::vector<int> ParametricGrid::cell_coords(long cell) const {
  if (cell < 0 || cell >= cell_count()) {
    throw DomainError("cell " + std::to_string(cell) + " outside the grid");
  }
  std::vector<int> coords(resolution_.size());
  for (std::size_t a = 0; a < resolution_.size(); ++a) {
    coords[a] = static_cast<int>(cell % resolution_[a]);
    cell /= resolution_[a];
  }
  return coords;
}

long ParametricGrid::cell_index(std::span<const int> coords) const {
  if (coords.size() != resolution_.size()) {
    throw DomainError("cell coordinates of the wrong dimension");
  }
  long index = 0;
  long stride = 1;
  for (std::size_t a = 0; a < coords.size(); ++a) {
    if (coords[a] < 0 || coords[a] >= resolution_[a]) {
      throw DomainError("cell coordinate outside the grid");
    }
    index += coords[a] * stride;
    stride *= resolution_[a];
  }
  return index;
}

Eigen::VectorXd ParametricGrid::node(std::span<const int> coords) const {
  if (coords.size() != resolution_.size()) {
    throw DomainError("node coordinates of the wrong dimension");
  }
  long index = 0;
  long stride = 1;
  for (std::size_t a = 0; a < coords.size(); ++a) {
    if (coords[a] < 0 || coords[a] > resolution_[a]) {
      throw DomainError("node coordinate outside the grid");
    }
    index += coords[a] * stride;
    stride *= resolution_[a] + 1;
  }
  return values_.col(index);
}

ParametricGrid::LocalFrame ParametricGrid::frame(
    long cell, const Eigen::VectorXd& local) const {
  const int p = degree();
  if (local.size() != p) throw DomainError("local coordinate dimension mismatch");
  const std::vector<int> base = cell_coords(cell);
  const Eigen::VectorXd h = cell_size();

  LocalFrame out{Eigen::VectorXd::Zero(n_), Eigen::MatrixXd::Zero(n_, p)};
  std::vector<int> corner(base);
  for (int mask = 0; mask < (1 << p); ++mask) {
    double weight = 1.0;
    Eigen::VectorXd partial = Eigen::VectorXd::Ones(p);
    for (int a = 0; a < p; ++a) {
      const bool upper = (mask >> a) & 1;
      corner[static_cast<std::size_t>(a)] = base[static_cast<std::size_t>(a)] + upper;
      const double factor = upper ? local[a] : 1.0 - local[a];
      weight *= factor;
      for (int b = 0; b < p; ++b) {
        partial[b] *= (a == b) ? (upper ? 1.0 : -1.0) / h[a] : factor;
      }
    }
    const Eigen::VectorXd value = node(corner);
    out.position += weight * value;
    out.jacobian += value * partial.transpose();
  }
  return out;
}

Eigen::VectorXd ParametricGrid::parameter(long cell,
                                          const Eigen::VectorXd& local) const {
  const std::vector<int> coords = cell_coords(cell);
  const Eigen::VectorXd h = cell_size();
  Eigen::VectorXd s(degree());
  for (int a = 0; a < degree(); ++a) {
    s[a] = domain_.lower[a] + (coords[static_cast<std::size_t>(a)] + local[a]) * h[a];
  }
  return s;
}

GraphSurface::GraphSurface(int p, int n, std::string name, Function f,
                           Domain domain, std::vector<int> resolution)
    : p_(p),
      n_(n),
      name_(std::move(name)),
      f_(std::move(f)),
      domain_(std::move(domain)),
      resolution_(std::move(resolution)) {
  if (p < 1 || p >= n) throw DomainError("graph needs 1 <= p < n");
  if (!f_) throw DomainError("graph '" + name_ + "' has no function");
  check_domain(domain_, resolution_.size());
  if (domain_.dim() != p) throw DomainError("graph domain dimension mismatch");
  for (int r : resolution_) {
    if (r < 2) throw DomainError("grid resolution must be at least 2 per axis");
  }
}

Eigen::VectorXd GraphSurface::f(const Eigen::VectorXd& x) const {
  Eigen::VectorXd value = f_(x);
  if (value.size() != n_ - p_) {
    throw DomainError("graph '" + name_ + "' returned the wrong number of values");
  }
  return value;
}

ParametricGrid GraphSurface::grid() const {
  return ParametricGrid::sample(n_, domain_, resolution_,
                                [this](const Eigen::VectorXd& x) {
                                  Eigen::VectorXd point(n_);
                                  point << x, f(x);
                                  return point;
                                });
}

GraphSurface GraphSurface::with_resolution(int cells_per_axis) const {
  return GraphSurface(p_, n_, name_, f_, domain_,
                      std::vector<int>(static_cast<std::size_t>(p_), cells_per_axis));
}

GraphSurface flat_graph(int p, int n, Domain domain, std::vector<int> resolution) {
  return GraphSurface(
      p, n, "flat",
      [n, p](const Eigen::VectorXd&) { return Eigen::VectorXd(Eigen::VectorXd::Zero(n - p)); },
      std::move(domain), std::move(resolution));
}

GraphSurface affine_graph(const Eigen::MatrixXd& slopes,
                          const Eigen::VectorXd& offset, Domain domain,
                          std::vector<int> resolution) {
  const int p = static_cast<int>(slopes.rows());
  const int n = p + static_cast<int>(slopes.cols());
  if (offset.size() != slopes.cols()) {
    throw DomainError("affine graph offset has the wrong dimension");
  }
  return GraphSurface(
      p, n, "affine",
      [slopes, offset](const Eigen::VectorXd& x) {
        return Eigen::VectorXd(offset + slopes.transpose() * x);
      },
      std::move(domain), std::move(resolution));
}

GraphSurface bilinear_graph(Domain domain, std::vector<int> resolution) {
  return GraphSurface(
      2, 3, "bilinear",
      [](const Eigen::VectorXd& x) {
        Eigen::VectorXd v(1);
        v[0] = x[0] * x[1];
        return v;
      },
      std::move(domain), std::move(resolution));
}

GraphSurface polynomial_graph(int p, int n,
                              std::vector<std::vector<Monomial>> components,
                              Domain domain, std::vector<int> resolution) {
  if (static_cast<int>(components.size()) != n - p) {
    throw DomainError("polynomial graph needs one polynomial per value");
  }
  for (const auto& poly : components) {
    for (const auto& term : poly) {
      if (static_cast<int>(term.exponents.size()) != p) {
        throw DomainError("monomial exponent count must equal p");
      }
      for (int e : term.exponents) {
        if (e < 0) throw DomainError("monomial exponents must be nonnegative");
      }
    }
  }
  return GraphSurface(
      p, n, "polynomial",
      [components = std::move(components)](const Eigen::VectorXd& x) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(components.size()));
        for (std::size_t j = 0; j < components.size(); ++j) {
          for (const auto& term : components[j]) {
            double monomial = term.coefficient;
            for (std::size_t a = 0; a < term.exponents.size(); ++a) {
              monomial *= std::pow(x[static_cast<Eigen::Index>(a)], term.exponents[a]);
            }
            v[static_cast<Eigen::Index>(j)] += monomial;
          }
        }
        return v;
      },
      std::move(domain), std::move(resolution));
}

std::vector<QuadraturePoint> QuadratureConfig::points(int p) const {
  if (rule == QuadratureRule::kMidpoint) {
    return {{Eigen::VectorXd::Constant(p, 0.5), 1.0}};
  }
  const double offset = 0.5 / std::sqrt(3.0);
  std::vector<QuadraturePoint> out;
  const double weight = 1.0 / static_cast<double>(1 << p);
  for (int mask = 0; mask < (1 << p); ++mask) {
    Eigen::VectorXd local(p);
    for (int a = 0; a < p; ++a) {
      local[a] = 0.5 + (((mask >> a) & 1) ? offset : -offset);
    }
    out.push_back({std::move(local), weight});
  }
  return out;
}

namespace {

KVector tangent_at(const ParametricGrid::LocalFrame& frame, long cell) {
  KVector y = wedge_vectors(frame.jacobian);
  const double scale = frame.jacobian.colwise().norm().prod();
  if (!(scale > 0.0) || y.norm() <= 1e-12 * scale) {
    throw DegenerateCellError(
        "cell " + std::to_string(cell) + " has a vanishing tangent p-vector", cell);
  }
  return y;
}

template <typename Integrand>
double integrate(const ParametricGrid& grid, const QuadratureConfig& quad,
                 Integrand&& integrand) {
  const auto points = quad.points(grid.degree());
  const double volume = grid.cell_volume();
  std::vector<double> contributions(static_cast<std::size_t>(grid.cell_count()));
  for (long cell = 0; cell < grid.cell_count(); ++cell) {
    double sum = 0.0;
    try {
      for (const auto& qp : points) {
        sum += qp.weight * integrand(cell, qp);
      }
    } catch (const OrientationError& e) {
      throw OrientationError("cell " + std::to_string(cell) + ": " + e.what(), cell);
    }
    contributions[static_cast<std::size_t>(cell)] = sum * volume;
  }
  return pairwise_sum(contributions);
}

}  // namespace

CellTangent tangent_pvector(const ParametricGrid& grid, long cell) {
  const auto frame =
      grid.frame(cell, Eigen::VectorXd::Constant(grid.degree(), 0.5));
  return {tangent_at(frame, cell), frame.position};
}

CellTangent tangent_pvector(const ParametricGrid& grid,
                            std::span<const int> cell) {
  return tangent_pvector(grid, grid.cell_index(cell));
}

double lagrangian_action(const HomogeneousLagrangian& lagrangian,
                         const ParametricGrid& grid,
                         const QuadratureConfig& quad) {
  if (lagrangian.ambient_dim() != grid.ambient_dim() ||
      lagrangian.degree() != grid.degree()) {
    throw DomainError("Lagrangian and surface dimensions disagree");
  }
  return integrate(grid, quad, [&](long cell, const QuadraturePoint& qp) {
    const auto frame = grid.frame(cell, qp.local);
    return lagrangian.value(frame.position, tangent_at(frame, cell));
  });
}

double multisymplectic_action(const HomogeneousLagrangian& lagrangian,
                              const ParametricGrid& grid,
                              const QuadratureConfig& quad) {
  if (lagrangian.ambient_dim() != grid.ambient_dim() ||
      lagrangian.degree() != grid.degree()) {
    throw DomainError("Lagrangian and surface dimensions disagree");
  }
  const TotalSpaceChart chart(grid.ambient_dim(), grid.degree());
  const FormField tautological = theta(chart);
  const int p = grid.degree();
  return integrate(grid, quad, [&](long cell, const QuadraturePoint& qp) {
    const auto frame = grid.frame(cell, qp.local);
    const KVector y = tangent_at(frame, cell);
    const LegendreImagePoint image = legendre_map(lagrangian, frame.position, y);
    std::vector<TotalVector> lifted;
    lifted.reserve(static_cast<std::size_t>(p));
    for (int a = 0; a < p; ++a) {
      lifted.push_back(TotalVector::horizontal(chart, frame.jacobian.col(a)));
    }
    return tautological(chart.point(frame.position, image.p), lifted);
  });
}

double graph_action(const GraphDensity& density, const GraphSurface& surface,
                    const QuadratureConfig& quad) {
  if (density.ambient_dim() != surface.ambient_dim() ||
      density.degree() != surface.degree()) {
    throw DomainError("density and graph dimensions disagree");
  }
  const int p = surface.degree();
  const int n = surface.ambient_dim();
  const ParametricGrid layout(
      n, surface.domain(), surface.resolution(),
      Eigen::MatrixXd::Zero(n, [&] {
        long nodes = 1;
        for (int r : surface.resolution()) nodes *= r + 1;
        return nodes;
      }()));
  const Eigen::VectorXd h = layout.cell_size();
  return integrate(layout, quad, [&](long cell, const QuadraturePoint& qp) {
    const Eigen::VectorXd x = layout.parameter(cell, qp.local);
    Eigen::MatrixXd slopes(p, n - p);
    for (int a = 0; a < p; ++a) {
      const Eigen::VectorXd step = Eigen::VectorXd::Unit(p, a) * (0.5 * h[a]);
      slopes.row(a) = ((surface.f(x + step) - surface.f(x - step)) / h[a]).transpose();
    }
    return density(x, surface.f(x), slopes);
  });
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

ConvergenceTable convergence_study(const std::function<double(int)>& action,
                                   std::span<const int> resolutions,
                                   std::optional<double> reference,
                                   double extent, double floor) {
  if (resolutions.size() < 3) {
    throw DomainError("a convergence study needs at least three resolutions");
  }
  ConvergenceTable table;
  table.reference = reference;
  for (int r : resolutions) {
    if (r < 2) throw DomainError("grid resolution must be at least 2 per axis");
    ConvergenceRow row;
    row.resolution = r;
    row.h = extent / r;
    row.value = action(r);
    table.rows.push_back(row);
  }
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    auto& row = table.rows[i];
    if (reference) {
      row.error = std::abs(row.value - *reference);
    } else if (i > 0) {
      row.error = std::abs(row.value - table.rows[i - 1].value);
    }
  }
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    const auto& coarse = table.rows[i - 1];
    auto& fine = table.rows[i];
    if (!coarse.error || !fine.error) continue;
    if (*fine.error >= *coarse.error) table.monotone = false;
    if (*coarse.error > floor && *fine.error > floor) {
      fine.order = std::log(*coarse.error / *fine.error) / std::log(coarse.h / fine.h);
    }
  }
  return table;
}

ConvergenceTable convergence_study(ActionKind kind,
                                   const HomogeneousLagrangian& lagrangian,
                                   const GraphSurface& surface,
                                   std::span<const int> resolutions,
                                   const QuadratureConfig& quad,
                                   std::optional<double> reference) {
  if (kind == ActionKind::kGraph) {
    throw DomainError("the graph action takes a density, not a Lagrangian");
  }
  const double extent = (surface.domain().upper - surface.domain().lower).maxCoeff();
  return convergence_study(
      [&](int r) {
        const ParametricGrid grid = surface.with_resolution(r).grid();
        return kind == ActionKind::kLagrangian
                   ? lagrangian_action(lagrangian, grid, quad)
                   : multisymplectic_action(lagrangian, grid, quad);
      },
      resolutions, reference, extent);
}

ConvergenceTable convergence_study(const GraphDensity& density,
                                   const GraphSurface& surface,
                                   std::span<const int> resolutions,
                                   const QuadratureConfig& quad,
                                   std::optional<double> reference) {
  const double extent = (surface.domain().upper - surface.domain().lower).maxCoeff();
  return convergence_study(
      [&](int r) { return graph_action(density, surface.with_resolution(r), quad); },
      resolutions, reference, extent);
}

}  // namespace multisym
