#pragma once

// Seeded generators for the synthetic experiment families and the evaluation
// metrics used to score solutions on them.

#include <cstdint>

#include "sgep/core.hpp"
#include "sgep/random.hpp"

namespace sgep::datagen {

using Matrix = DenseMatrix<double>;
using Vector = DenseVector<double>;
using Pair = MatrixPair<double>;

/// m x n matrix of i.i.d. standard normals, filled row by row.
Matrix standard_normal(Index rows, Index cols, Rng& rng);

/// Centered sample covariance of the rows of `data`, divisor m - 1.
Matrix sample_covariance(const Matrix& data);

/// A = sample covariance of an m x n standard normal data matrix, B = I.
Pair gaussian_cov(Index n, Index m, std::uint64_t seed);

struct SpikeModelSpec {
  Index n = 500;
  Index m = 50;
  Index s_true = 10;
  double sigma = 0.0;
  double lambda1 = 15.0;
  std::uint64_t seed = 0;
};

void validate(const SpikeModelSpec& spec);

struct SpikeModel {
  // Sample covariance of the noisy data, B = I.
  Pair pair;
  // Population covariance V diag(lambda1, 1, ..., 1) V'.
  Matrix population;
  // Sparse leading eigenvector: 1/sqrt(s_true) on a random support.
  Vector truth;
};

/// Sparse spike covariance, m Gaussian samples from it, plus i.i.d.
/// N(0, sigma^2) noise.
SpikeModel spike_model(const SpikeModelSpec& spec);

struct BlockCovSpec {
  Index n = 1000;
  Index blocks = 5;
  double rho = 0.8;
};

void validate(const BlockCovSpec& spec);

/// Block diagonal matrix whose blocks have (j, j') entry rho^|j - j'|.
Matrix block_toeplitz_cov(const BlockCovSpec& spec);

/// A = (mu1 - mu2)(mu1 - mu2)', B = sigma1 + sigma2. mu1 = mu2 gives A = 0.
Pair fda_pair(const Vector& mu1, const Vector& mu2, const Matrix& sigma1,
              const Matrix& sigma2);

/// Second class mean of the simulated discriminant problem: 0.5 at the
/// 1-based positions 2, 4, ..., 40 (those within n), 0 elsewhere.
Vector fda_mean_shift(Index n);

struct FdaSimulationSpec {
  Index n = 100;
  // Samples per class.
  Index m = 500;
  Index blocks = 5;
  double rho = 0.8;
  std::uint64_t seed = 0;
  // Use the population means and covariances instead of sample estimates.
  bool population = false;
};

void validate(const FdaSimulationSpec& spec);
Pair fda_simulation(const FdaSimulationSpec& spec);

/// Stacked canonical-correlation pair
///   A = [[Sx, Sxy], [Sxy', Sy]], B = blockdiag(Sx, Sy),
/// with Sxy = lambda1 Sx vx vy' Sy and vx, vy rescaled to unit Sx / Sy norm.
Pair cca_pair(const Matrix& sigma_x, const Matrix& sigma_y, const Vector& v_x,
              const Vector& v_y, double lambda1 = 0.9);

struct CcaSimulationSpec {
  // Total dimension; each view has n / 2 variables.
  Index n = 100;
  Index m = 200;
  Index sparsity_each = 8;
  double lambda1 = 0.9;
  Index blocks = 5;
  double rho = 0.8;
  std::uint64_t seed = 0;
  bool population = false;
};

void validate(const CcaSimulationSpec& spec);

struct CcaModel {
  Pair pair;
  // Stacked (vx, vy) after normalization.
  Vector truth;
};

CcaModel cca_simulation(const CcaSimulationSpec& spec);

/// (x'Ax / x'x) / lambda_max(A).
double explained_variance_proportion(const Matrix& a, const Vector& x);

/// |S(estimate) & S(truth)| / s.
double recovery_rate(const Vector& estimate, const Vector& truth, Index s);

/// Pitprops correlation matrix (13 x 13).
Matrix pitprops();

}  // namespace sgep::datagen
