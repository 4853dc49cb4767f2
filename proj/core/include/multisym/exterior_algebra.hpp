#pragma once

// Exterior algebra over R^n in Pluecker coordinates.
//
// Axis labels are 1-based, matching the usual dx^1, ..., dx^n notation.
// Graded elements store one coordinate per strictly increasing multi-index,
// enumerated lexicographically; any other ordering of the same axes is
// mapped onto the stored coordinate with the sign of the sorting permutation.

#include <Eigen/Dense>

#include <array>
#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "multisym/errors.hpp"

namespace multisym {

using Point = Eigen::VectorXd;

inline constexpr double kDefaultTolerance = 1e-9;

// C(n, k); zero when k < 0 or k > n.
std::size_t binomial(int n, int k);

class MultiIndex {
 public:
  // Throws DomainError unless axes are strictly increasing and within 1..n.
  MultiIndex(int n, std::vector<int> axes);

  int ambient_dim() const noexcept { return n_; }
  int degree() const noexcept { return static_cast<int>(axes_.size()); }
  std::span<const int> axes() const noexcept { return axes_; }
  int operator[](std::size_t i) const { return axes_[i]; }
  bool contains(int axis) const;

  // Rank in the lexicographic enumeration of all indices of this (n, p).
  std::size_t position() const;
  static MultiIndex from_position(int n, int p, std::size_t position);

  // "12", "134"; axes are joined by `separator` once n exceeds 9.
  std::string label(std::string_view separator = ",") const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend std::strong_ordering operator<=>(const MultiIndex& a,
                                          const MultiIndex& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    return a.axes_ <=> b.axes_;
  }

 private:
  int n_;
  std::vector<int> axes_;
};

// All strictly increasing p-tuples in 1..n, lexicographic.
std::vector<MultiIndex> enumerate_multi_indices(int n, int p);

struct CanonicalIndex {
  std::optional<MultiIndex> index;  // empty iff sign == 0
  int sign = 0;
};

// Sorts an arbitrary axis sequence. sign is the parity of the sorting
// permutation, or 0 when an axis repeats.
CanonicalIndex canonicalize_index(int n, std::span<const int> sequence);
inline CanonicalIndex canonicalize_index(int n,
                                         std::initializer_list<int> sequence) {
  return canonicalize_index(n, std::span<const int>(sequence.begin(),
                                                    sequence.size()));
}

enum class Variance { kContravariant, kCovariant };

// Element of Lambda^p(R^n) (contravariant) or Lambda^p(R^n)^* (covariant).
template <Variance V>
class Graded {
 public:
  Graded(int n, int p) : n_(n), p_(p) {
    check_shape(n, p);
    coords_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(binomial(n, p)));
  }

  Graded(int n, int p, Eigen::VectorXd coords)
      : n_(n), p_(p), coords_(std::move(coords)) {
    check_shape(n, p);
    if (static_cast<std::size_t>(coords_.size()) != binomial(n, p)) {
      throw DomainError("coordinate count " + std::to_string(coords_.size()) +
                        " does not match C(" + std::to_string(n) + "," +
                        std::to_string(p) + ")");
    }
  }

  // e_{a1} ^ ... ^ e_{ap} (or dx^{a1} ^ ... for covectors), in any order.
  static Graded basis(int n, std::span<const int> axes) {
    Graded out(n, static_cast<int>(axes.size()));
    out.set_component(axes, 1.0);
    return out;
  }
  static Graded basis(int n, std::initializer_list<int> axes) {
    return basis(n, std::span<const int>(axes.begin(), axes.size()));
  }

  int ambient_dim() const noexcept { return n_; }
  int degree() const noexcept { return p_; }
  Eigen::Index size() const noexcept { return coords_.size(); }
  const Eigen::VectorXd& coords() const noexcept { return coords_; }

  double operator[](const MultiIndex& index) const {
    check_index(index);
    return coords_[static_cast<Eigen::Index>(index.position())];
  }

  // Signed component for an arbitrary axis ordering; zero on repeated axes.
  double component(std::span<const int> axes) const {
    const auto c = canonical(axes);
    if (c.sign == 0) return 0.0;
    return c.sign * coords_[static_cast<Eigen::Index>(c.index->position())];
  }
  double component(std::initializer_list<int> axes) const {
    return component(std::span<const int>(axes.begin(), axes.size()));
  }

  // Writes `value` as the component along the given ordering, so that
  // component(axes) == value afterwards.
  void set_component(std::span<const int> axes, double value) {
    const auto c = canonical(axes);
    if (c.sign == 0) {
      throw DomainError("repeated axis in a basis element");
    }
    coords_[static_cast<Eigen::Index>(c.index->position())] = c.sign * value;
  }
  void set_component(std::initializer_list<int> axes, double value) {
    set_component(std::span<const int>(axes.begin(), axes.size()), value);
  }

  double norm() const { return coords_.norm(); }
  bool is_zero() const { return coords_.isZero(0.0); }
  bool is_finite() const { return coords_.allFinite(); }

  Graded operator*(double s) const { return Graded(n_, p_, coords_ * s); }
  friend Graded operator*(double s, const Graded& g) { return g * s; }
  Graded operator/(double s) const { return Graded(n_, p_, coords_ / s); }
  Graded operator-() const { return Graded(n_, p_, -coords_); }
  Graded operator+(const Graded& o) const {
    check_same_shape(o);
    return Graded(n_, p_, coords_ + o.coords_);
  }
  Graded operator-(const Graded& o) const {
    check_same_shape(o);
    return Graded(n_, p_, coords_ - o.coords_);
  }

  void check_same_shape(const Graded& o) const {
    if (o.n_ != n_ || o.p_ != p_) {
      throw DomainError("shape mismatch: (" + std::to_string(n_) + "," +
                        std::to_string(p_) + ") vs (" + std::to_string(o.n_) +
                        "," + std::to_string(o.p_) + ")");
    }
  }

 private:
  static void check_shape(int n, int p) {
    if (n < 1 || p < 0 || p > n) {
      throw DomainError("invalid degree " + std::to_string(p) +
                        " for ambient dimension " + std::to_string(n));
    }
  }
  void check_index(const MultiIndex& index) const {
    if (index.ambient_dim() != n_ || index.degree() != p_) {
      throw DomainError("multi-index shape does not match element");
    }
  }
  CanonicalIndex canonical(std::span<const int> axes) const {
    if (static_cast<int>(axes.size()) != p_) {
      throw DomainError("expected " + std::to_string(p_) + " axes, got " +
                        std::to_string(axes.size()));
    }
    return canonicalize_index(n_, axes);
  }

  int n_;
  int p_;
  Eigen::VectorXd coords_;
};

using KVector = Graded<Variance::kContravariant>;
using KCovector = Graded<Variance::kCovariant>;

// Bivectors of R^3 in the cyclic display order (12, 23, 31).
// Storage order is (12, 13, 23), so the 31 entry is -y^{13}.
template <Variance V>
std::array<double, 3> cyclic_triple(const Graded<V>& g) {
  if (g.ambient_dim() != 3 || g.degree() != 2) {
    throw DomainError("cyclic triple is defined for n=3, p=2 only");
  }
  return {g.component({1, 2}), g.component({2, 3}), g.component({3, 1})};
}

template <Variance V = Variance::kContravariant>
Graded<V> from_cyclic_triple(double c12, double c23, double c31) {
  Graded<V> g(3, 2);
  g.set_component({1, 2}, c12);
  g.set_component({2, 3}, c23);
  g.set_component({3, 1}, c31);
  return g;
}

// Exterior product of graded elements of the same variance.
template <Variance V>
Graded<V> wedge(const Graded<V>& a, const Graded<V>& b);

// u_1 ^ ... ^ u_p for the columns of an n x p matrix. Each coordinate is the
// p x p minor on the rows of its multi-index.
KVector wedge_vectors(const Eigen::MatrixXd& columns);
KVector wedge_vectors(std::span<const Eigen::VectorXd> vectors);

// Duality pairing sum_I alpha_I u^I.
double pair(const KCovector& alpha, const KVector& u);

// alpha(v_1, ..., v_p) for the columns of an n x p matrix.
double evaluate(const KCovector& alpha, const Eigen::MatrixXd& columns);

// dx^1 ^ ... ^ dx^n.
KCovector volume_form(int n);

// Oriented basis of ker(u -| omega) for a nonzero bivector of R^3.
// wedge_vectors of the returned pair is a positive multiple of u; rescaling
// omega by any nonzero factor leaves the kernel unchanged.
std::array<Eigen::Vector3d, 2> plane_from_bivector(
    const KVector& u, const KCovector& omega = volume_form(3));

// Degrees 1, n-1 and n are always decomposable; degree 2 is tested through
// |u ^ u| <= tol |u|^2. Other degrees raise UnsupportedDegreeError.
bool is_decomposable(const KVector& u, double tol = kDefaultTolerance);

// Nonzero p-vector modulo positive rescaling.
class OrientedRay {
 public:
  explicit OrientedRay(KVector representative);
  const KVector& representative() const noexcept { return rep_; }
  KVector unit() const { return rep_ / rep_.norm(); }

 private:
  KVector rep_;
};

// Oriented p-plane: an oriented ray whose representative is decomposable.
class GrassmannPoint {
 public:
  explicit GrassmannPoint(KVector representative,
                          double tol = kDefaultTolerance);
  const KVector& representative() const noexcept { return ray_.representative(); }
  const OrientedRay& ray() const noexcept { return ray_; }

 private:
  OrientedRay ray_;
};

// True iff b = lambda a for some lambda > 0, compared after normalizing both
// to unit norm.
bool same_ray(const KVector& a, const KVector& b, double tol = kDefaultTolerance);
bool grassmann_eq(const OrientedRay& a, const OrientedRay& b,
                  double tol = kDefaultTolerance);
bool grassmann_eq(const GrassmannPoint& a, const GrassmannPoint& b,
                  double tol = kDefaultTolerance);

}  // namespace multisym
