#pragma once

// Exact sGEP by enumeration of every size-s support. Any support of size < s
// is contained in one of size s, and the optimum over a larger support is at
// least the optimum over a subset, so size exactly s suffices.

#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>

#include "sgep/core.hpp"

namespace sgep {

template <typename Scalar>
struct GevResult {
  Scalar value = 0;
  DenseVector<Scalar> vector;
};

/// Leading generalized eigenpair via Cholesky whitening: B = LL',
/// eigensolve L^-1 A L^-T, map back. The vector satisfies v'Bv = 1 and its
/// first largest-magnitude entry is positive.
template <typename Scalar>
GevResult<Scalar> dense_gev(const DenseMatrix<Scalar>& a, const DenseMatrix<Scalar>& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows() || a.rows() < 1) {
    throw Error(ErrorCode::DimensionMismatch, "dense_gev: size mismatch");
  }
  Eigen::LLT<DenseMatrix<Scalar>> chol(b);
  if (chol.info() != Eigen::Success) {
    throw Error(ErrorCode::NotPositiveDefinite, "dense_gev: B is not positive definite");
  }
  const auto lower = chol.matrixL();
  DenseMatrix<Scalar> whitened = lower.solve(a);
  whitened = lower.solve(whitened.transpose()).transpose();
  whitened = (Scalar(0.5) * (whitened + whitened.transpose())).eval();

  Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> eig(whitened);
  const Index last = whitened.rows() - 1;
  GevResult<Scalar> out;
  out.value = eig.eigenvalues()(last);
  out.vector = chol.matrixU().solve(DenseVector<Scalar>(eig.eigenvectors().col(last)));
  out.vector /= std::sqrt(out.vector.dot(b * out.vector));
  Index pivot = 0;
  out.vector.cwiseAbs().maxCoeff(&pivot);
  if (out.vector(pivot) < Scalar(0)) out.vector = -out.vector;
  return out;
}

/// Largest generalized eigenvalue of a pair.
template <typename Scalar>
Scalar leading_generalized_eigenvalue(const MatrixPair<Scalar>& pair) {
  return dense_gev(pair.a(), pair.b()).value;
}

/// C(n, k), saturating at the uint64 maximum.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t num = n - k + i;
    // result * num / i is exact at every step; guard the multiplication.
    if (result > std::numeric_limits<std::uint64_t>::max() / num) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    result = result * num / i;
  }
  return result;
}

inline constexpr std::uint64_t kDefaultOracleBudget = 10'000'000;

template <typename Scalar>
struct OracleResult {
  Scalar value = 0;
  IndexSet support;
  DenseVector<Scalar> vector;
  std::uint64_t enumerated = 0;
};

/// Optimal value and support of max R(x) s.t. ||x||_0 <= s. Ties within
/// 1e-12 relative keep the lexicographically smallest support.
template <typename Scalar>
OracleResult<Scalar> exact_sgep(const SGepInstance<Scalar>& instance,
                                std::uint64_t budget = kDefaultOracleBudget) {
  const Index n = instance.n();
  const Index s = instance.s();
  const std::uint64_t total = binomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(s));
  if (total > budget) {
    throw Error(ErrorCode::BudgetExceeded, "oracle: C(n, s) = " + std::to_string(total) +
                                               " exceeds budget " + std::to_string(budget));
  }
  const auto& a = instance.pair().a();
  const auto& b = instance.pair().b();

  OracleResult<Scalar> best;
  bool have_best = false;
  DenseVector<Scalar> best_sub;
  IndexSet combo(static_cast<std::size_t>(s));
  for (Index k = 0; k < s; ++k) combo[static_cast<std::size_t>(k)] = k;
  DenseMatrix<Scalar> a_sub(s, s);
  DenseMatrix<Scalar> b_sub(s, s);

  while (true) {
    for (Index p = 0; p < s; ++p) {
      for (Index q = 0; q < s; ++q) {
        a_sub(p, q) = a(combo[p], combo[q]);
        b_sub(p, q) = b(combo[p], combo[q]);
      }
    }
    // B_S inherits positive definiteness from B; failure here is a bug.
    GevResult<Scalar> sub = dense_gev(a_sub, b_sub);
    ++best.enumerated;
    if (!have_best ||
        sub.value > best.value + Scalar(1e-12) * std::max<Scalar>(Scalar(1), std::abs(best.value))) {
      best.value = sub.value;
      best.support = combo;
      best_sub = sub.vector;
      have_best = true;
    }

    // Next combination in lexicographic order.
    Index pos = s - 1;
    while (pos >= 0 && combo[pos] == n - s + pos) --pos;
    if (pos < 0) break;
    ++combo[pos];
    for (Index q = pos + 1; q < s; ++q) combo[q] = combo[q - 1] + 1;
  }

  best.vector = DenseVector<Scalar>::Zero(n);
  for (Index p = 0; p < s; ++p) best.vector(best.support[p]) = best_sub(p);
  return best;
}

}  // namespace sgep
