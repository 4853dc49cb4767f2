#include "multisym/multisymplectic.hpp"

#include <algorithm>
#include <cmath>

#include "detail/determinant.hpp"
#include "multisym/legendre.hpp"

namespace multisym {

TotalSpaceChart::TotalSpaceChart(int n, int p)
    : n_(n), p_(p), dim_(n + static_cast<int>(binomial(n, p))) {
  if (n < 1 || p < 1 || p > n) {
    throw DomainError("total space chart needs 1 <= p <= n");
  }
}

int TotalSpaceChart::x_slot(int axis) const {
  if (axis < 1 || axis > n_) {
    throw DomainError("axis " + std::to_string(axis) + " outside 1.." +
                      std::to_string(n_));
  }
  return axis - 1;
}

int TotalSpaceChart::p_slot(const MultiIndex& index) const {
  if (index.ambient_dim() != n_ || index.degree() != p_) {
    throw DomainError("multi-index does not belong to this chart");
  }
  return n_ + static_cast<int>(index.position());
}

std::vector<std::string> TotalSpaceChart::labels() const {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(dim_));
  for (int i = 1; i <= n_; ++i) out.push_back("x" + std::to_string(i));
  for (const auto& index : enumerate_multi_indices(n_, p_)) {
    out.push_back("p" + index.label("_"));
  }
  return out;
}

Eigen::VectorXd TotalSpaceChart::point(const Point& x, const KCovector& p) const {
  if (x.size() != n_ || p.ambient_dim() != n_ || p.degree() != p_) {
    throw DomainError("point does not match the chart");
  }
  Eigen::VectorXd z(dim_);
  z << x, p.coords();
  return z;
}

Point TotalSpaceChart::base(const Eigen::VectorXd& z) const {
  if (z.size() != dim_) throw DomainError("point does not match the chart");
  return z.head(n_);
}

KCovector TotalSpaceChart::fiber(const Eigen::VectorXd& z) const {
  if (z.size() != dim_) throw DomainError("point does not match the chart");
  return KCovector(n_, p_, z.tail(dim_ - n_));
}

TotalVector TotalVector::basis(const TotalSpaceChart& chart, int slot) {
  if (slot < 0 || slot >= chart.dim()) {
    throw DomainError("slot outside the total space");
  }
  return {Eigen::VectorXd::Unit(chart.dim(), slot)};
}

TotalVector TotalVector::horizontal(const TotalSpaceChart& chart,
                                    const Eigen::VectorXd& v) {
  if (v.size() != chart.ambient_dim()) {
    throw DomainError("base vector dimension does not match the chart");
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(chart.dim());
  c.head(chart.ambient_dim()) = v;
  return {std::move(c)};
}

namespace {

double term_value(const FormTerm& term, const Eigen::VectorXd& point,
                  std::span<const TotalVector> args) {
  const double coefficient =
      term.scale * (term.coefficient_slot ? point[*term.coefficient_slot] : 1.0);
  if (coefficient == 0.0) return 0.0;
  const auto k = static_cast<Eigen::Index>(term.slots.size());
  Eigen::MatrixXd m(k, k);
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index c = 0; c < k; ++c) {
      m(r, c) = args[static_cast<std::size_t>(c)].components[term.slots[r]];
    }
  }
  return coefficient * detail::determinant(m);
}

}  // namespace

FormField::FormField(int dim, int degree, std::string name, Evaluator evaluator)
    : dim_(dim),
      degree_(degree),
      name_(std::move(name)),
      evaluator_(std::move(evaluator)) {
  if (dim < 1 || degree < 0 || degree > dim) {
    throw DomainError("form degree " + std::to_string(degree) +
                      " on a space of dimension " + std::to_string(dim));
  }
}

FormField::FormField(int dim, int degree, std::string name,
                     std::vector<FormTerm> terms)
    : dim_(dim), degree_(degree), name_(std::move(name)) {
  if (dim < 1 || degree < 0 || degree > dim) {
    throw DomainError("form degree " + std::to_string(degree) +
                      " on a space of dimension " + std::to_string(dim));
  }
  for (const auto& term : terms) {
    if (static_cast<int>(term.slots.size()) != degree) {
      throw ArityError("form term of the wrong degree in '" + name_ + "'");
    }
    for (int s : term.slots) {
      if (s < 0 || s >= dim) throw DomainError("form term slot out of range");
    }
    if (term.coefficient_slot &&
        (*term.coefficient_slot < 0 || *term.coefficient_slot >= dim)) {
      throw DomainError("form coefficient slot out of range");
    }
  }
  terms_ = std::move(terms);
  evaluator_ = [terms = *terms_](const Eigen::VectorXd& point,
                                 std::span<const TotalVector> args) {
    double sum = 0.0;
    for (const auto& term : terms) sum += term_value(term, point, args);
    return sum;
  };
}

double FormField::operator()(const Eigen::VectorXd& point,
                             std::span<const TotalVector> args) const {
  if (static_cast<int>(args.size()) != degree_) {
    throw ArityError("form '" + name_ + "' of degree " +
                     std::to_string(degree_) + " given " +
                     std::to_string(args.size()) + " arguments");
  }
  if (point.size() != dim_) {
    throw DomainError("point dimension does not match form '" + name_ + "'");
  }
  for (const auto& v : args) {
    if (v.components.size() != dim_) {
      throw DomainError("vector dimension does not match form '" + name_ + "'");
    }
  }
  return evaluator_(point, args);
}

double FormField::operator()(const Eigen::VectorXd& point,
                             std::initializer_list<TotalVector> args) const {
  return (*this)(point, std::span<const TotalVector>(args.begin(), args.size()));
}

FormField theta(const TotalSpaceChart& chart) {
  std::vector<FormTerm> terms;
  for (const auto& index : enumerate_multi_indices(chart.ambient_dim(),
                                                   chart.degree())) {
    FormTerm term;
    term.coefficient_slot = chart.p_slot(index);
    for (int axis : index.axes()) term.slots.push_back(chart.x_slot(axis));
    terms.push_back(std::move(term));
  }
  return FormField(chart.dim(), chart.degree(), "theta", std::move(terms));
}

FormField omega(const TotalSpaceChart& chart) {
  std::vector<FormTerm> terms;
  for (const auto& index : enumerate_multi_indices(chart.ambient_dim(),
                                                   chart.degree())) {
    FormTerm term;
    term.slots.push_back(chart.p_slot(index));
    for (int axis : index.axes()) term.slots.push_back(chart.x_slot(axis));
    terms.push_back(std::move(term));
  }
  return FormField(chart.dim(), chart.degree() + 1, "omega", std::move(terms));
}

NondegeneracyResult nondegeneracy_check(const FormField& form,
                                        const Eigen::VectorXd& point) {
  const int dim = form.dim();
  const int k = form.degree();
  if (k < 1) throw DomainError("contraction needs a form of degree >= 1");
  if (point.size() != dim) throw DomainError("point dimension mismatch");

  // Rows: increasing (k-1)-tuples of slots, as 1-based multi-indices.
  const auto rows = static_cast<Eigen::Index>(binomial(dim, k - 1));
  Eigen::MatrixXd contraction = Eigen::MatrixXd::Zero(rows, dim);

  if (form.terms()) {
    for (const auto& term : *form.terms()) {
      const double coefficient =
          term.scale *
          (term.coefficient_slot ? point[*term.coefficient_slot] : 1.0);
      if (coefficient == 0.0) continue;
      std::vector<int> axes;
      for (int s : term.slots) axes.push_back(s + 1);
      const auto sorted = canonicalize_index(dim, axes);
      if (sorted.sign == 0) continue;
      const auto all = sorted.index->axes();
      for (std::size_t m = 0; m < all.size(); ++m) {
        std::vector<int> rest;
        for (std::size_t j = 0; j < all.size(); ++j) {
          if (j != m) rest.push_back(all[j]);
        }
        const MultiIndex row(dim, std::move(rest));
        const double sign = (m % 2 == 0 ? 1.0 : -1.0) * sorted.sign;
        contraction(static_cast<Eigen::Index>(row.position()), all[m] - 1) +=
            sign * coefficient;
      }
    }
  } else {
    std::vector<TotalVector> args(static_cast<std::size_t>(k));
    const auto tuples = enumerate_multi_indices(dim, k - 1);
    for (std::size_t r = 0; r < tuples.size(); ++r) {
      for (int j = 0; j < k - 1; ++j) {
        args[static_cast<std::size_t>(j) + 1] = {
            Eigen::VectorXd::Unit(dim, tuples[r][static_cast<std::size_t>(j)] - 1)};
      }
      for (int a = 0; a < dim; ++a) {
        args[0] = {Eigen::VectorXd::Unit(dim, a)};
        contraction(static_cast<Eigen::Index>(r), a) = form(point, args);
      }
    }
  }

  Eigen::FullPivLU<Eigen::MatrixXd> lu(contraction);
  lu.setThreshold(1e-10);
  NondegeneracyResult result;
  result.dim = dim;
  result.rank = static_cast<int>(lu.rank());
  result.nondegenerate = result.rank == dim;
  return result;
}

double exterior_derivative(const FormField& form, const Eigen::VectorXd& point,
                           std::span<const TotalVector> vectors, double h) {
  const int k = form.degree();
  if (static_cast<int>(vectors.size()) != k + 1) {
    throw ArityError("exterior derivative of a " + std::to_string(k) +
                     "-form needs " + std::to_string(k + 1) + " vectors");
  }
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  std::vector<TotalVector> rest(static_cast<std::size_t>(k));
  double sum = 0.0;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    std::size_t slot = 0;
    for (std::size_t j = 0; j < vectors.size(); ++j) {
      if (j != i) rest[slot++] = vectors[j];
    }
    const Eigen::VectorXd& v = vectors[i].components;
    const double forward = form(point + h * v, rest);
    const double backward = form(point - h * v, rest);
    const double derivative = (forward - backward) / (2.0 * h);
    sum += (i % 2 == 0 ? 1.0 : -1.0) * derivative;
  }
  return sum;
}

double closedness_residual(const FormField& form, const Eigen::VectorXd& point,
                           std::span<const TotalVector> vectors, double h) {
  return std::abs(exterior_derivative(form, point, vectors, h));
}

double pullback_residual(const HomogeneousLagrangian& lagrangian,
                         const Point& x, const KVector& y,
                         std::span<const Eigen::MatrixXd> tuples) {
  const int n = lagrangian.ambient_dim();
  const int p = lagrangian.degree();
  const TotalSpaceChart chart(n, p);
  const FormField tautological = theta(chart);
  const AreolarForm areolar(lagrangian);

  const LegendreImagePoint image = legendre_map(lagrangian, x, y);
  const Eigen::VectorXd z = chart.point(x, image.p);
  const KCovector coefficients = areolar.coefficients(x, y);

  double worst = 0.0;
  std::vector<TotalVector> lifted(static_cast<std::size_t>(p));
  for (const auto& tuple : tuples) {
    if (tuple.rows() != n || tuple.cols() != p) {
      throw DomainError("pullback tuple must be an n x p matrix");
    }
    // theta only sees base components, so the fiber part of the lift is zero.
    for (int j = 0; j < p; ++j) {
      lifted[static_cast<std::size_t>(j)] =
          TotalVector::horizontal(chart, tuple.col(j));
    }
    const double pulled_back = tautological(z, lifted);
    const double areolar_value = evaluate(coefficients, tuple);
    worst = std::max(worst, std::abs(pulled_back - areolar_value));
  }
  return worst;
}

}  // namespace multisym
