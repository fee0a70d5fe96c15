#include "sgep/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace sgep::datagen {

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::InvalidInput, what);
}

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

// k distinct indices out of [0, n), sorted.
IndexSet random_subset(Index n, Index k, Rng& rng) {
  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index t = 0; t < k; ++t) {
    const auto pick = t + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - t)));
    std::swap(pool[static_cast<std::size_t>(t)], pool[static_cast<std::size_t>(pick)]);
  }
  IndexSet out(pool.begin(), pool.begin() + k);
  std::sort(out.begin(), out.end());
  return out;
}

// Rows ~ N(mean, cov): Z L' + mean with cov = L L'.
Matrix gaussian_rows(Index m, const Vector& mean, const Matrix& cov, Rng& rng) {
  Eigen::LLT<Matrix> chol(cov);
  if (chol.info() != Eigen::Success) invalid("covariance is not positive definite");
  const Matrix lower = chol.matrixL();
  Matrix rows = standard_normal(m, cov.rows(), rng) * lower.transpose();
  rows.rowwise() += mean.transpose();
  return rows;
}

double lambda_max(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a, Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(a.rows() - 1);
}

}  // namespace

Matrix standard_normal(Index rows, Index cols, Rng& rng) {
  Matrix out(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) out(i, j) = rng.normal();
  }
  return out;
}

Matrix sample_covariance(const Matrix& data) {
  const Index m = data.rows();
  if (m < 2) invalid("sample covariance needs at least two rows");
  const Vector mean = data.colwise().mean().transpose();
  const Matrix centered = data.rowwise() - mean.transpose();
  return symmetrized(centered.transpose() * centered / static_cast<double>(m - 1));
}

Pair gaussian_cov(Index n, Index m, std::uint64_t seed) {
  if (n < 1) invalid("gaussian: n must be >= 1");
  if (m < 2) invalid("gaussian: m must be >= 2");
  Rng rng(seed);
  return Pair::with_identity(sample_covariance(standard_normal(m, n, rng)));
}

void validate(const SpikeModelSpec& spec) {
  if (spec.n < 1) invalid("spike: n must be >= 1");
  if (spec.m < 2) invalid("spike: m must be >= 2");
  if (spec.s_true < 1 || spec.s_true > spec.n) invalid("spike: s_true must lie in [1, n]");
  if (!(spec.sigma >= 0.0)) invalid("spike: sigma must be >= 0");
  if (!(spec.lambda1 > 1.0)) invalid("spike: lambda1 must be > 1");
}

SpikeModel spike_model(const SpikeModelSpec& spec) {
  validate(spec);
  const Index n = spec.n;
  Rng rng(spec.seed);

  Vector truth = Vector::Zero(n);
  const double level = 1.0 / std::sqrt(static_cast<double>(spec.s_true));
  for (Index i : random_subset(n, spec.s_true, rng)) truth(i) = level;

  // Orthonormal completion: QR of [v1, G] with G standard normal.
  Matrix seed_basis(n, n);
  seed_basis.col(0) = truth;
  if (n > 1) seed_basis.rightCols(n - 1) = standard_normal(n, n - 1, rng);
  Eigen::HouseholderQR<Matrix> qr(seed_basis);
  Matrix basis = qr.householderQ() * Matrix::Identity(n, n);
  basis.col(0) = truth;

  Vector eigenvalues = Vector::Ones(n);
  eigenvalues(0) = spec.lambda1;
  Matrix population = symmetrized(basis * eigenvalues.asDiagonal() * basis.transpose());

  Matrix data = gaussian_rows(spec.m, Vector::Zero(n), population, rng);
  if (spec.sigma > 0.0) data += spec.sigma * standard_normal(spec.m, n, rng);

  return SpikeModel{Pair::with_identity(sample_covariance(data)), std::move(population),
                    std::move(truth)};
}

void validate(const BlockCovSpec& spec) {
  if (spec.n < 1 || spec.blocks < 1) invalid("block: n and blocks must be >= 1");
  if (spec.n % spec.blocks != 0) {
    invalid("block: n = " + std::to_string(spec.n) + " is not divisible by blocks = " +
            std::to_string(spec.blocks));
  }
  if (!(spec.rho > 0.0 && spec.rho < 1.0)) invalid("block: rho must lie in (0, 1)");
}

Matrix block_toeplitz_cov(const BlockCovSpec& spec) {
  validate(spec);
  const Index size = spec.n / spec.blocks;
  Matrix out = Matrix::Zero(spec.n, spec.n);
  for (Index blk = 0; blk < spec.blocks; ++blk) {
    const Index base = blk * size;
    for (Index p = 0; p < size; ++p) {
      for (Index q = 0; q < size; ++q) {
        out(base + p, base + q) = std::pow(spec.rho, static_cast<double>(std::abs(p - q)));
      }
    }
  }
  return out;
}

Pair fda_pair(const Vector& mu1, const Vector& mu2, const Matrix& sigma1,
              const Matrix& sigma2) {
  if (mu1.size() != mu2.size() || sigma1.rows() != mu1.size() ||
      sigma2.rows() != mu1.size()) {
    throw Error(ErrorCode::DimensionMismatch, "fda_pair: dimension mismatch");
  }
  const Vector diff = mu1 - mu2;
  return Pair(diff * diff.transpose(), sigma1 + sigma2);
}

Vector fda_mean_shift(Index n) {
  Vector mu = Vector::Zero(n);
  for (Index j = 2; j <= std::min<Index>(40, n); j += 2) mu(j - 1) = 0.5;
  return mu;
}

void validate(const FdaSimulationSpec& spec) {
  validate(BlockCovSpec{spec.n, spec.blocks, spec.rho});
  if (!spec.population && spec.m < 2) invalid("fda: m must be >= 2");
}

Pair fda_simulation(const FdaSimulationSpec& spec) {
  validate(spec);
  const Matrix sigma = block_toeplitz_cov({spec.n, spec.blocks, spec.rho});
  const Vector mu1 = Vector::Zero(spec.n);
  const Vector mu2 = fda_mean_shift(spec.n);
  if (spec.population) return fda_pair(mu1, mu2, sigma, sigma);

  Rng rng(spec.seed);
  const Matrix class1 = gaussian_rows(spec.m, mu1, sigma, rng);
  const Matrix class2 = gaussian_rows(spec.m, mu2, sigma, rng);
  return fda_pair(class1.colwise().mean().transpose(), class2.colwise().mean().transpose(),
                  sample_covariance(class1), sample_covariance(class2));
}

Pair cca_pair(const Matrix& sigma_x, const Matrix& sigma_y, const Vector& v_x,
              const Vector& v_y, double lambda1) {
  const Index nx = sigma_x.rows();
  const Index ny = sigma_y.rows();
  if (v_x.size() != nx || v_y.size() != ny) {
    throw Error(ErrorCode::DimensionMismatch, "cca_pair: dimension mismatch");
  }
  const double qx = v_x.dot(sigma_x * v_x);
  const double qy = v_y.dot(sigma_y * v_y);
  if (!(qx > 0.0) || !(qy > 0.0)) invalid("cca_pair: canonical directions must be nonzero");
  const Vector ux = v_x / std::sqrt(qx);
  const Vector uy = v_y / std::sqrt(qy);
  const Matrix cross = lambda1 * (sigma_x * ux) * (sigma_y * uy).transpose();

  Matrix a(nx + ny, nx + ny);
  a << sigma_x, cross, cross.transpose(), sigma_y;
  Matrix b = Matrix::Zero(nx + ny, nx + ny);
  b.topLeftCorner(nx, nx) = sigma_x;
  b.bottomRightCorner(ny, ny) = sigma_y;
  return Pair(std::move(a), std::move(b));
}

void validate(const CcaSimulationSpec& spec) {
  if (spec.n < 2 || spec.n % 2 != 0) invalid("cca: n must be even and >= 2");
  validate(BlockCovSpec{spec.n / 2, spec.blocks, spec.rho});
  if (spec.sparsity_each < 1 || spec.sparsity_each > spec.n / 2) {
    invalid("cca: sparsity_each must lie in [1, n/2]");
  }
  if (!(spec.lambda1 >= 0.0 && spec.lambda1 < 1.0)) invalid("cca: lambda1 must lie in [0, 1)");
  if (!spec.population && spec.m < 2) invalid("cca: m must be >= 2");
}

CcaModel cca_simulation(const CcaSimulationSpec& spec) {
  validate(spec);
  const Index half = spec.n / 2;
  Rng rng(spec.seed);
  const Matrix sigma = block_toeplitz_cov({half, spec.blocks, spec.rho});

  auto sparse_direction = [&] {
    Vector v = Vector::Zero(half);
    for (Index i : random_subset(half, spec.sparsity_each, rng)) {
      double value = 0.0;
      while (value == 0.0) value = rng.normal();
      v(i) = value;
    }
    return v;
  };
  Vector v_x = sparse_direction();
  Vector v_y = sparse_direction();
  v_x /= std::sqrt(v_x.dot(sigma * v_x));
  v_y /= std::sqrt(v_y.dot(sigma * v_y));

  Vector truth(spec.n);
  truth << v_x, v_y;
  Pair population = cca_pair(sigma, sigma, v_x, v_y, spec.lambda1);
  if (spec.population) return CcaModel{std::move(population), std::move(truth)};

  const Matrix joint = gaussian_rows(spec.m, Vector::Zero(spec.n), population.a(), rng);
  const Matrix s = sample_covariance(joint);
  Matrix b = Matrix::Zero(spec.n, spec.n);
  b.topLeftCorner(half, half) = s.topLeftCorner(half, half);
  b.bottomRightCorner(half, half) = s.bottomRightCorner(half, half);
  return CcaModel{Pair(s, std::move(b)), std::move(truth)};
}

double explained_variance_proportion(const Matrix& a, const Vector& x) {
  if (a.rows() != x.size()) {
    throw Error(ErrorCode::DimensionMismatch, "explained variance: size mismatch");
  }
  const double norm2 = x.squaredNorm();
  if (norm2 == 0.0) throw Error(ErrorCode::ZeroVector, "explained variance: x is zero");
  return (x.dot(a * x) / norm2) / lambda_max(a);
}

double recovery_rate(const Vector& estimate, const Vector& truth, Index s) {
  if (estimate.size() != truth.size()) {
    throw Error(ErrorCode::DimensionMismatch, "recovery_rate: size mismatch");
  }
  if (s < 1) throw Error(ErrorCode::InvalidSparsity, "recovery_rate: s must be >= 1");
  Index hits = 0;
  for (Index i = 0; i < estimate.size(); ++i) {
    if (estimate(i) != 0.0 && truth(i) != 0.0) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(s);
}

}  // namespace sgep::datagen
