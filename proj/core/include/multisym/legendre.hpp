#pragma once

// Fiberwise Legendre transform y -> dL/dy of a homogeneous Lagrangian, its
// image hypersurface N_x, and numerical certificates about that image.

#include <cstdint>
#include <ostream>
#include <vector>

#include "multisym/lagrangian.hpp"
#include "multisym/sampling.hpp"

namespace multisym {

struct LegendreImagePoint {
  Point x;
  KCovector p;
  // Class of the source p-vector, represented at unit Euclidean norm.
  OrientedRay source;
};

LegendreImagePoint legendre_map(const HomogeneousLagrangian& lagrangian,
                                const Point& x, const KVector& y);

// <p, y> - L(x, y). Vanishes when p = dL/dy(x, y).
double hamiltonian(const HomogeneousLagrangian& lagrangian, const Point& x,
                   const KCovector& p, const KVector& y);

// Solves dL/dy(x, y) = p for y on S_x = {L = 1} by Gauss-Newton steps with
// backtracking, renormalizing onto S_x after every step. The initial guess is
// p read as a p-vector. Throws NoSolutionError when the residual stalls above
// tol (p off the image) and NumericalFailureError if the iterate collapses
// toward the zero section.
OrientedRay inverse_legendre(const HomogeneousLagrangian& lagrangian,
                             const Point& x, const KCovector& p,
                             double tol = 1e-8, int max_iter = 200);

// Radius r with r * direction / |direction| on N_x, i.e. the distance from
// the origin to the image along a ray. Throws NoSolutionError when the ray
// misses the image.
double image_radius(const HomogeneousLagrangian& lagrangian, const Point& x,
                    const KCovector& direction, double tol = 1e-10,
                    int max_iter = 200);

enum class LevelSetMode { kSphere, kBall };

// Samples S_x = {L = 1} or B_x = {L <= 1} through Gaussian directions.
// Directions outside the Lagrangian's chart are reflected through the origin.
class LevelSetSampler {
 public:
  LevelSetSampler(HomogeneousLagrangian lagrangian, Point x,
                  LevelSetMode mode = LevelSetMode::kSphere);

  KVector sample(Rng& rng) const;
  // Sample i is drawn from sample_stream(seed, i).
  std::vector<KVector> sample(std::size_t count, std::uint64_t seed) const;

  const HomogeneousLagrangian& lagrangian() const noexcept { return lagrangian_; }
  const Point& base_point() const noexcept { return x_; }
  LevelSetMode mode() const noexcept { return mode_; }

 private:
  HomogeneousLagrangian lagrangian_;
  Point x_;
  LevelSetMode mode_;
};

std::vector<LegendreImagePoint> sample_image(
    const HomogeneousLagrangian& lagrangian, const Point& x, std::size_t count,
    std::uint64_t seed);

struct RankReport {
  int rank_square = 0;   // numerical rank of Hess(L^2)
  int rank_hessian = 0;  // numerical rank of Hess(L)
  // Rank of Hess(L) restricted to the tangent space of S_x at y.
  int rank_tangent = 0;
  Eigen::VectorXd singular_values_square;
  Eigen::VectorXd singular_values_hessian;
  double threshold = 0.0;

  bool holds() const noexcept { return rank_square == 1 + rank_hessian; }
};

// Ranks count singular values above threshold * sigma_max of each matrix.
RankReport rank_lemma_check(const HomogeneousLagrangian& lagrangian,
                            const Point& x, const KVector& y,
                            double threshold = 1e-8);

struct ConvexityCertificate {
  bool passed = false;
  int num_segment_checks = 0;
  int num_inversion_failures = 0;
  // max over checks of |Q| / r(Q) - 1 (clamped at 0), where r(Q) is the image
  // radius along Q. A failed inversion counts as a violation of 1.
  double worst_violation = 0.0;
  double tolerance = 0.0;
  std::uint64_t sample_seed = 0;
};

// For num_pairs random pairs P, P' of sample_image and t = k / (t_steps + 1),
// k = 1..t_steps, checks that t P + (1 - t) P' stays inside the region
// bounded by N_x.
ConvexityCertificate convexity_certificate(
    const HomogeneousLagrangian& lagrangian, const Point& x, int num_pairs,
    int t_steps, std::uint64_t seed, double tol = 1e-7);

// Header x1..xn, then p<I> in lexicographic multi-index order; one row per
// point, doubles printed with 17 significant digits.
void write_image_csv(std::ostream& out, int n, int p,
                     const std::vector<LegendreImagePoint>& points);

}  // namespace multisym
