#include <cmath>

#include "multisym/lagrangian.hpp"

namespace multisym {

HomogeneousLagrangian area_lagrangian(int n, int p) {
  if (p >= n) {
    throw DomainError("area Lagrangian needs p < n");
  }
  HomogeneousLagrangian::Parts parts;
  parts.name = "area";
  parts.smoothness = "C-infinity off the zero section";
  parts.value = [](const Point&, const KVector& y) { return y.norm(); };
  parts.gradient = [](const Point&, const KVector& y) {
    return KCovector(y.ambient_dim(), y.degree(), y.coords() / y.norm());
  };
  parts.hessian = [](const Point&, const KVector& y) {
    const double r = y.norm();
    const Eigen::VectorXd u = y.coords() / r;
    const Eigen::Index m = y.size();
    return Eigen::MatrixXd((Eigen::MatrixXd::Identity(m, m) - u * u.transpose()) / r);
  };
  return HomogeneousLagrangian(n, p, std::move(parts));
}

HomogeneousLagrangian ellipsoid_lagrangian(int n, int p,
                                           const Eigen::VectorXd& weights) {
  if (static_cast<std::size_t>(weights.size()) != binomial(n, p)) {
    throw DomainError("ellipsoid Lagrangian needs one weight per multi-index");
  }
  if (!weights.allFinite() || (weights.array() <= 0.0).any()) {
    throw DomainError("ellipsoid weights must be positive");
  }
  HomogeneousLagrangian::Parts parts;
  parts.name = "ellipsoid";
  parts.smoothness = "C-infinity off the zero section";
  parts.value = [weights](const Point&, const KVector& y) {
    return std::sqrt((weights.array() * y.coords().array().square()).sum());
  };
  parts.gradient = [weights, n, p](const Point&, const KVector& y) {
    const double l =
        std::sqrt((weights.array() * y.coords().array().square()).sum());
    return KCovector(n, p, (weights.array() * y.coords().array()).matrix() / l);
  };
  parts.hessian = [weights](const Point&, const KVector& y) {
    const double l =
        std::sqrt((weights.array() * y.coords().array().square()).sum());
    const Eigen::VectorXd g = (weights.array() * y.coords().array()).matrix() / l;
    return Eigen::MatrixXd(
        (Eigen::MatrixXd(weights.asDiagonal()) - g * g.transpose()) / l);
  };
  return HomogeneousLagrangian(n, p, std::move(parts));
}

HomogeneousLagrangian projected_volume_lagrangian(int n, int p) {
  HomogeneousLagrangian::Parts parts;
  parts.name = "projected_volume";
  parts.smoothness = "linear";
  parts.value = [](const Point&, const KVector& y) { return y.coords()[0]; };
  parts.gradient = [n, p](const Point&, const KVector& y) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(y.size());
    g[0] = 1.0;
    return KCovector(n, p, std::move(g));
  };
  parts.hessian = [](const Point&, const KVector& y) {
    return Eigen::MatrixXd(Eigen::MatrixXd::Zero(y.size(), y.size()));
  };
  return HomogeneousLagrangian(n, p, std::move(parts));
}

HomogeneousLagrangian geometric_mean_lagrangian(int n, int p) {
  const double exponent = 1.0 / static_cast<double>(binomial(n, p));
  auto value = [exponent](const KVector& y) {
    double log_sum = 0.0;
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      const double c = std::abs(y.coords()[k]);
      if (c == 0.0) return 0.0;
      log_sum += std::log(c);
    }
    return std::exp(exponent * log_sum);
  };
  HomogeneousLagrangian::Parts parts;
  parts.name = "geometric_mean";
  parts.smoothness = "smooth where every coordinate is nonzero";
  parts.value = [value](const Point&, const KVector& y) { return value(y); };
  // dL/dy^I = exponent L / y^I; undefined where a coordinate vanishes.
  parts.gradient = [value, exponent, n, p](const Point&, const KVector& y) {
    if ((y.coords().array() == 0.0).any()) {
      throw NumericalFailureError(
          "geometric mean Lagrangian is not differentiable on coordinate planes");
    }
    const double l = value(y);
    return KCovector(n, p, (exponent * l) * y.coords().cwiseInverse());
  };
  parts.hessian = [value, exponent](const Point&, const KVector& y) {
    if ((y.coords().array() == 0.0).any()) {
      throw NumericalFailureError(
          "geometric mean Lagrangian is not differentiable on coordinate planes");
    }
    const double l = value(y);
    const Eigen::VectorXd inv = y.coords().cwiseInverse();
    Eigen::MatrixXd h = (exponent * exponent * l) * inv * inv.transpose();
    h.diagonal() -= (exponent * l) * inv.cwiseAbs2();
    return h;
  };
  return HomogeneousLagrangian(n, p, std::move(parts));
}

GraphDensity unit_density(int n, int p) {
  return GraphDensity(
      n, p, "unit",
      [](const Eigen::VectorXd&, const Eigen::VectorXd&, const Eigen::MatrixXd&) {
        return 1.0;
      },
      [](const Eigen::VectorXd&, const Eigen::VectorXd&,
         const Eigen::MatrixXd& slopes) {
        return Eigen::MatrixXd(Eigen::MatrixXd::Zero(slopes.rows(), slopes.cols()));
      });
}

GraphDensity area_density(int n, int p) {
  auto gram = [](const Eigen::MatrixXd& slopes) {
    const Eigen::Index k = slopes.rows();
    return Eigen::MatrixXd(Eigen::MatrixXd::Identity(k, k) +
                           slopes * slopes.transpose());
  };
  return GraphDensity(
      n, p, "area",
      [gram](const Eigen::VectorXd&, const Eigen::VectorXd&,
             const Eigen::MatrixXd& slopes) {
        return std::sqrt(gram(slopes).determinant());
      },
      // d sqrt(det M) / dQ = sqrt(det M) M^{-1} Q for M = I + Q Q^T.
      [gram](const Eigen::VectorXd&, const Eigen::VectorXd&,
             const Eigen::MatrixXd& slopes) {
        const Eigen::MatrixXd m = gram(slopes);
        const Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
        return Eigen::MatrixXd(std::sqrt(m.determinant()) * ldlt.solve(slopes));
      });
}

GraphDensity slope_norm_density(int n, int p) {
  return GraphDensity(
      n, p, "slope_norm",
      [](const Eigen::VectorXd&, const Eigen::VectorXd&,
         const Eigen::MatrixXd& slopes) {
        return std::sqrt(1.0 + slopes.squaredNorm());
      },
      [](const Eigen::VectorXd&, const Eigen::VectorXd&,
         const Eigen::MatrixXd& slopes) {
        return Eigen::MatrixXd(slopes / std::sqrt(1.0 + slopes.squaredNorm()));
      });
}

}  // namespace multisym
