#pragma once

// Deterministic randomized-sweep support. Every trial draws from an
// engine derived from (seed, trial index), so sweeps give identical
// results for any worker count.

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace calibra {

constexpr std::uint64_t kDefaultSeed = 20240717ull;

std::uint64_t splitmix64(std::uint64_t x);

/// Engine for substream `stream` of the given master seed.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream);

Eigen::VectorXd gaussianVector(int m, std::mt19937_64& rng);
Eigen::MatrixXd gaussianMatrix(int rows, int cols, std::mt19937_64& rng);

/// Uniform point on the Euclidean unit sphere S^{m-1}.
Eigen::VectorXd randomUnitVector(int m, std::mt19937_64& rng);

/// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with the
/// R diagonal sign-corrected).
Eigen::MatrixXd randomOrthogonal(int m, std::mt19937_64& rng);

/// SPD matrix with eigenvalues in [lo, hi].
Eigen::MatrixXd randomSpd(int m, std::mt19937_64& rng, double lo = 0.5, double hi = 2.0);

/// Random U(q) element embedded as a 2q x 2q real matrix commuting with
/// the standard complex structure J e_{2a-1} = e_{2a}.
Eigen::MatrixXd randomUnitaryEmbedded(int q, std::mt19937_64& rng);

/// Standard complex structure on R^{2q}: J e_{2a-1} = e_{2a}, J e_{2a} = -e_{2a-1}.
Eigen::MatrixXd standardComplexStructure(int q);

}  // namespace calibra
