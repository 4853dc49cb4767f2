#include "multisym/exterior_algebra.hpp"

#include "detail/determinant.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace multisym {

std::size_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::size_t result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<std::size_t>(n - k + i) /
             static_cast<std::size_t>(i);
  }
  return result;
}

MultiIndex::MultiIndex(int n, std::vector<int> axes)
    : n_(n), axes_(std::move(axes)) {
  if (n < 1 || static_cast<int>(axes_.size()) > n) {
    throw DomainError("multi-index of degree " + std::to_string(axes_.size()) +
                      " in dimension " + std::to_string(n));
  }
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (axes_[i] < 1 || axes_[i] > n) {
      throw DomainError("axis " + std::to_string(axes_[i]) +
                        " outside 1.." + std::to_string(n));
    }
    if (i > 0 && axes_[i] <= axes_[i - 1]) {
      throw DomainError("multi-index axes must be strictly increasing");
    }
  }
}

bool MultiIndex::contains(int axis) const {
  return std::binary_search(axes_.begin(), axes_.end(), axis);
}

std::size_t MultiIndex::position() const {
  const int p = degree();
  std::size_t rank = 0;
  int previous = 0;
  for (int i = 0; i < p; ++i) {
    for (int v = previous + 1; v < axes_[i]; ++v) {
      rank += binomial(n_ - v, p - i - 1);
    }
    previous = axes_[i];
  }
  return rank;
}

MultiIndex MultiIndex::from_position(int n, int p, std::size_t position) {
  if (position >= binomial(n, p)) {
    throw DomainError("position " + std::to_string(position) +
                      " outside the basis of degree " + std::to_string(p));
  }
  std::vector<int> axes;
  axes.reserve(static_cast<std::size_t>(p));
  int v = 1;
  for (int i = 0; i < p; ++i) {
    for (;; ++v) {
      const std::size_t block = binomial(n - v, p - i - 1);
      if (position < block) break;
      position -= block;
    }
    axes.push_back(v++);
  }
  return MultiIndex(n, std::move(axes));
}

std::string MultiIndex::label(std::string_view separator) const {
  std::ostringstream out;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (i > 0 && n_ > 9) out << separator;
    out << axes_[i];
  }
  return out.str();
}

std::vector<MultiIndex> enumerate_multi_indices(int n, int p) {
  std::vector<MultiIndex> out;
  const std::size_t count = binomial(n, p);
  out.reserve(count);
  if (count == 0) return out;
  std::vector<int> axes(static_cast<std::size_t>(p));
  for (int i = 0; i < p; ++i) axes[i] = i + 1;
  while (true) {
    out.emplace_back(n, axes);
    int i = p - 1;
    while (i >= 0 && axes[i] == n - p + i + 1) --i;
    if (i < 0) break;
    ++axes[i];
    for (int j = i + 1; j < p; ++j) axes[j] = axes[j - 1] + 1;
  }
  return out;
}

CanonicalIndex canonicalize_index(int n, std::span<const int> sequence) {
  for (int a : sequence) {
    if (a < 1 || a > n) {
      throw DomainError("axis " + std::to_string(a) + " outside 1.." +
                        std::to_string(n));
    }
  }
  std::vector<int> sorted(sequence.begin(), sequence.end());
  int inversions = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      if (sorted[i] == sorted[j]) return {};
      if (sorted[i] > sorted[j]) ++inversions;
    }
  }
  std::sort(sorted.begin(), sorted.end());
  return {MultiIndex(n, std::move(sorted)), inversions % 2 == 0 ? 1 : -1};
}

template <Variance V>
Graded<V> wedge(const Graded<V>& a, const Graded<V>& b) {
  if (a.ambient_dim() != b.ambient_dim()) {
    throw DomainError("wedge of elements over different ambient dimensions");
  }
  const int n = a.ambient_dim();
  const int p = a.degree();
  const int q = b.degree();
  if (p + q > n) {
    throw DomainError("wedge degree exceeds ambient dimension");
  }
  Graded<V> out(n, p + q);
  Eigen::VectorXd coords = Eigen::VectorXd::Zero(out.size());
  const auto left = enumerate_multi_indices(n, p);
  const auto right = enumerate_multi_indices(n, q);
  std::vector<int> joined(static_cast<std::size_t>(p + q));
  for (std::size_t i = 0; i < left.size(); ++i) {
    const double ai = a.coords()[static_cast<Eigen::Index>(i)];
    if (ai == 0.0) continue;
    for (std::size_t j = 0; j < right.size(); ++j) {
      const double bj = b.coords()[static_cast<Eigen::Index>(j)];
      if (bj == 0.0) continue;
      std::copy(left[i].axes().begin(), left[i].axes().end(), joined.begin());
      std::copy(right[j].axes().begin(), right[j].axes().end(),
                joined.begin() + p);
      const auto c = canonicalize_index(n, joined);
      if (c.sign == 0) continue;
      coords[static_cast<Eigen::Index>(c.index->position())] +=
          c.sign * ai * bj;
    }
  }
  return Graded<V>(n, p + q, std::move(coords));
}

template KVector wedge(const KVector&, const KVector&);
template KCovector wedge(const KCovector&, const KCovector&);

namespace {

double minor_determinant(const Eigen::MatrixXd& columns,
                         std::span<const int> rows) {
  const auto k = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd sub(k, columns.cols());
  for (Eigen::Index i = 0; i < k; ++i) sub.row(i) = columns.row(rows[i] - 1);
  return detail::determinant(sub);
}

}  // namespace

KVector wedge_vectors(const Eigen::MatrixXd& columns) {
  const int n = static_cast<int>(columns.rows());
  const int p = static_cast<int>(columns.cols());
  if (n < 1 || p > n) {
    throw DomainError("cannot wedge " + std::to_string(p) +
                      " vectors in dimension " + std::to_string(n));
  }
  if (!columns.allFinite()) {
    throw DomainError("non-finite vector entries");
  }
  const auto basis = enumerate_multi_indices(n, p);
  Eigen::VectorXd coords(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    coords[static_cast<Eigen::Index>(i)] =
        minor_determinant(columns, basis[i].axes());
  }
  return KVector(n, p, std::move(coords));
}

KVector wedge_vectors(std::span<const Eigen::VectorXd> vectors) {
  if (vectors.empty()) {
    throw DomainError("wedge of an empty vector list");
  }
  const Eigen::Index n = vectors.front().size();
  Eigen::MatrixXd columns(n, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].size() != n) {
      throw DomainError("vectors of different dimensions");
    }
    columns.col(static_cast<Eigen::Index>(j)) = vectors[j];
  }
  return wedge_vectors(columns);
}

double pair(const KCovector& alpha, const KVector& u) {
  if (alpha.ambient_dim() != u.ambient_dim() || alpha.degree() != u.degree()) {
    throw DomainError("pairing of mismatched shapes");
  }
  return alpha.coords().dot(u.coords());
}

double evaluate(const KCovector& alpha, const Eigen::MatrixXd& columns) {
  if (columns.rows() != alpha.ambient_dim() ||
      columns.cols() != alpha.degree()) {
    throw DomainError("form of degree " + std::to_string(alpha.degree()) +
                      " evaluated on " + std::to_string(columns.cols()) +
                      " vectors of dimension " +
                      std::to_string(columns.rows()));
  }
  return pair(alpha, wedge_vectors(columns));
}

KCovector volume_form(int n) {
  return KCovector(n, n, Eigen::VectorXd::Ones(1));
}

std::array<Eigen::Vector3d, 2> plane_from_bivector(const KVector& u,
                                                   const KCovector& omega) {
  if (u.ambient_dim() != 3 || u.degree() != 2) {
    throw DomainError("plane_from_bivector expects a bivector of R^3");
  }
  if (omega.ambient_dim() != 3 || omega.degree() != 3) {
    throw DomainError("omega must be a 3-form on R^3");
  }
  if (u.is_zero()) {
    throw ZeroSectionError("zero bivector has no plane");
  }
  const double w = omega.coords()[0];
  if (w == 0.0) {
    throw DomainError("omega must be a volume form");
  }
  // (u -| omega)(v) = w (y^23 v1 - y^13 v2 + y^12 v3).
  const Eigen::Vector3d contraction =
      w * Eigen::Vector3d(u.component({2, 3}), -u.component({1, 3}),
                          u.component({1, 2}));
  const Eigen::Vector3d normal = (w > 0 ? 1.0 : -1.0) * contraction.normalized();

  Eigen::Index axis = 0;
  normal.cwiseAbs().minCoeff(&axis);
  Eigen::Vector3d a = Eigen::Vector3d::Unit(axis);
  a = (a - a.dot(normal) * normal).normalized();
  Eigen::Vector3d b = normal.cross(a);
  return {a, b};
}

bool is_decomposable(const KVector& u, double tol) {
  if (u.is_zero()) {
    throw ZeroSectionError("decomposability is undefined on the zero section");
  }
  const int n = u.ambient_dim();
  const int p = u.degree();
  if (p <= 1 || p >= n - 1) return true;
  if (p == 2) {
    const double norm = u.norm();
    return wedge(u, u).norm() <= tol * norm * norm;
  }
  throw UnsupportedDegreeError("no decomposability test for degree " +
                               std::to_string(p) + " in dimension " +
                               std::to_string(n));
}

OrientedRay::OrientedRay(KVector representative)
    : rep_(std::move(representative)) {
  if (!rep_.is_finite()) {
    throw DomainError("non-finite p-vector");
  }
  if (rep_.is_zero()) {
    throw ZeroSectionError("the zero p-vector does not define a ray");
  }
}

GrassmannPoint::GrassmannPoint(KVector representative, double tol)
    : ray_(std::move(representative)) {
  if (!is_decomposable(ray_.representative(), tol)) {
    throw DomainError("representative is not decomposable");
  }
}

bool same_ray(const KVector& a, const KVector& b, double tol) {
  a.check_same_shape(b);
  if (a.is_zero() || b.is_zero()) {
    throw ZeroSectionError("comparison with the zero section");
  }
  return (a.coords() / a.norm() - b.coords() / b.norm()).norm() <= tol;
}

bool grassmann_eq(const OrientedRay& a, const OrientedRay& b, double tol) {
  return same_ray(a.representative(), b.representative(), tol);
}

bool grassmann_eq(const GrassmannPoint& a, const GrassmannPoint& b,
                  double tol) {
  return grassmann_eq(a.ray(), b.ray(), tol);
}

}  // namespace multisym
