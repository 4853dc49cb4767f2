#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace multisym {

using Rng = std::mt19937_64;

// Independent engine for sample `index` of a run seeded with `seed`. Streams
// depend only on (seed, index), so per-sample work can be reordered or run
// concurrently without changing results.
Rng sample_stream(std::uint64_t seed, std::uint64_t index);

Eigen::VectorXd gaussian_vector(Rng& rng, Eigen::Index size);
Eigen::MatrixXd gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols);
double uniform(Rng& rng, double lo, double hi);

}  // namespace multisym
