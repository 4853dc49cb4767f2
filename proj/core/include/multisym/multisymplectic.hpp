#pragma once

// The tautological p-form theta = sum_I p_I dx^I on Lambda^p T^*R^n, its
// differential Omega = sum_I dp_I ^ dx^I, and checks of the multisymplectic
// axioms in the coordinates (x^1..x^n, p_I).

#include <Eigen/Dense>

#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "multisym/lagrangian.hpp"

namespace multisym {

// Coordinates x^1..x^n followed by p_I in lexicographic multi-index order.
class TotalSpaceChart {
 public:
  TotalSpaceChart(int n, int p);

  int ambient_dim() const noexcept { return n_; }
  int degree() const noexcept { return p_; }
  int dim() const noexcept { return dim_; }

  // 0-based slots; axis is 1-based.
  int x_slot(int axis) const;
  int p_slot(const MultiIndex& index) const;
  std::vector<std::string> labels() const;

  Eigen::VectorXd point(const Point& x, const KCovector& p) const;
  Point base(const Eigen::VectorXd& z) const;
  KCovector fiber(const Eigen::VectorXd& z) const;

 private:
  int n_;
  int p_;
  int dim_;
};

// Tangent vector to the total space at some point.
struct TotalVector {
  Eigen::VectorXd components;

  static TotalVector basis(const TotalSpaceChart& chart, int slot);
  // (v, 0): a base vector with no fiber component.
  static TotalVector horizontal(const TotalSpaceChart& chart,
                                const Eigen::VectorXd& v);
};

// scale * (z[coefficient_slot] or 1) * dz^{slots[0]} ^ ... ^ dz^{slots[k-1]}.
struct FormTerm {
  double scale = 1.0;
  std::optional<int> coefficient_slot;
  std::vector<int> slots;
};

// Alternating k-form on the total space, given by an evaluator and, for
// forms assembled from FormTerms, the term list itself.
class FormField {
 public:
  using Evaluator = std::function<double(const Eigen::VectorXd& point,
                                         std::span<const TotalVector> args)>;

  FormField(int dim, int degree, std::string name, Evaluator evaluator);
  FormField(int dim, int degree, std::string name, std::vector<FormTerm> terms);

  int dim() const noexcept { return dim_; }
  int degree() const noexcept { return degree_; }
  const std::string& name() const noexcept { return name_; }
  const std::optional<std::vector<FormTerm>>& terms() const noexcept {
    return terms_;
  }

  // Throws ArityError unless exactly degree() arguments are passed.
  double operator()(const Eigen::VectorXd& point,
                    std::span<const TotalVector> args) const;
  double operator()(const Eigen::VectorXd& point,
                    std::initializer_list<TotalVector> args) const;

 private:
  int dim_;
  int degree_;
  std::string name_;
  Evaluator evaluator_;
  std::optional<std::vector<FormTerm>> terms_;
};

FormField theta(const TotalSpaceChart& chart);
FormField omega(const TotalSpaceChart& chart);

struct NondegeneracyResult {
  bool nondegenerate = false;
  int rank = 0;
  int dim = 0;
};

// Rank of xi -> xi -| form over all coordinate (k-1)-tuples. Built exactly
// from the term list when present, otherwise by evaluating on basis tuples.
NondegeneracyResult nondegeneracy_check(const FormField& form,
                                        const Eigen::VectorXd& point);

// d(form)(v_0..v_k) = sum_i (-1)^i D_{v_i}[form(v_0..^v_i..v_k)] with central
// differences of step h (constant vector fields).
double exterior_derivative(const FormField& form, const Eigen::VectorXd& point,
                           std::span<const TotalVector> vectors,
                           double h = 1e-4);
double closedness_residual(const FormField& form, const Eigen::VectorXd& point,
                           std::span<const TotalVector> vectors,
                           double h = 1e-4);

// max over tuples of |theta_(x, dL/dy)(lifted tuple) - l(x,[y])(tuple)|.
// Each tuple is an n x p matrix of base vectors.
double pullback_residual(const HomogeneousLagrangian& lagrangian,
                         const Point& x, const KVector& y,
                         std::span<const Eigen::MatrixXd> tuples);

}  // namespace multisym
