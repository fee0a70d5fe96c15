#pragma once

// Matrix-pair and sparse-vector foundations shared by every solver.
//
// All functions are templated on the scalar type and accept any Eigen
// expression for vector arguments. Vectors produced by the library carry
// exact zeros off their support, so support and l0 distance compare against
// 0 exactly.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "sgep/error.hpp"

namespace sgep {

using Index = Eigen::Index;
using IndexSet = std::vector<Index>;

template <typename Scalar>
using DenseMatrix =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

namespace tolerance {
inline constexpr double kSymmetry = 1e-10;
inline constexpr double kPsd = 1e-8;
inline constexpr double kIdentity = 1e-12;
inline constexpr double kRayleighSlack = 1e-12;
}  // namespace tolerance

namespace detail {

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& m) {
  return m.derived().array().isFinite().all();
}

template <typename Scalar>
Scalar asymmetry(const DenseMatrix<Scalar>& m) {
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace detail

/// The (A, B) pair of one generalized eigenproblem: A symmetric positive
/// semidefinite, B symmetric positive definite, both n x n.
///
/// Construction validates and symmetrizes. Asymmetry above 1e-10 relative,
/// a failed Cholesky of B, or a failed shifted Cholesky of A is an error.
template <typename Scalar>
class MatrixPair {
 public:
  MatrixPair(DenseMatrix<Scalar> a, DenseMatrix<Scalar> b)
      : a_(std::move(a)), b_(std::move(b)) {
    validate_and_symmetrize();
  }

  static MatrixPair with_identity(DenseMatrix<Scalar> a) {
    const Index n = a.rows();
    return MatrixPair(std::move(a), DenseMatrix<Scalar>::Identity(n, n));
  }

  Index n() const noexcept { return a_.rows(); }
  const DenseMatrix<Scalar>& a() const noexcept { return a_; }
  const DenseMatrix<Scalar>& b() const noexcept { return b_; }

  /// True when B equals the identity within 1e-12 entrywise.
  bool b_is_identity() const noexcept { return b_identity_; }

 private:
  void validate_and_symmetrize() {
    if (a_.rows() < 1 || a_.rows() != a_.cols() || b_.rows() != b_.cols() ||
        a_.rows() != b_.rows()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "matrix pair must be square with equal dimension n >= 1");
    }
    if (!detail::all_finite(a_) || !detail::all_finite(b_)) {
      throw Error(ErrorCode::InvalidMatrix, "matrix entries must be finite");
    }
    check_symmetric(a_, "A");
    check_symmetric(b_, "B");
    a_ = (0.5 * (a_ + a_.transpose())).eval();
    b_ = (0.5 * (b_ + b_.transpose())).eval();

    Eigen::LLT<DenseMatrix<Scalar>> b_chol(b_);
    if (b_chol.info() != Eigen::Success) {
      throw Error(ErrorCode::InvalidMatrix, "B is not positive definite");
    }

    // The infinity norm bounds the spectral radius from above.
    const Scalar scale = std::max<Scalar>(
        Scalar(1), a_.cwiseAbs().rowwise().sum().maxCoeff());
    const Index n = a_.rows();
    DenseMatrix<Scalar> shifted =
        a_ + Scalar(tolerance::kPsd) * scale * DenseMatrix<Scalar>::Identity(n, n);
    Eigen::LLT<DenseMatrix<Scalar>> a_chol(shifted);
    if (a_chol.info() != Eigen::Success) {
      throw Error(ErrorCode::InvalidMatrix, "A is not positive semidefinite");
    }

    b_identity_ = (b_ - DenseMatrix<Scalar>::Identity(n, n)).cwiseAbs().maxCoeff() <=
                  Scalar(tolerance::kIdentity);
  }

  static void check_symmetric(const DenseMatrix<Scalar>& m, const char* name) {
    const Scalar scale = std::max<Scalar>(Scalar(1), m.cwiseAbs().maxCoeff());
    if (detail::asymmetry(m) > Scalar(tolerance::kSymmetry) * scale) {
      throw Error(ErrorCode::InvalidMatrix,
                  std::string(name) + " is not symmetric");
    }
  }

  DenseMatrix<Scalar> a_;
  DenseMatrix<Scalar> b_;
  bool b_identity_ = false;
};

/// One sGEP instance: a matrix pair plus the sparsity budget s in [1, n].
template <typename Scalar>
class SGepInstance {
 public:
  SGepInstance(MatrixPair<Scalar> pair, Index s) : pair_(std::move(pair)), s_(s) {
    if (s_ < 1 || s_ > pair_.n()) {
      throw Error(ErrorCode::InvalidSparsity,
                  "sparsity must lie in [1, " + std::to_string(pair_.n()) + "]");
    }
  }

  const MatrixPair<Scalar>& pair() const noexcept { return pair_; }
  Index s() const noexcept { return s_; }
  Index n() const noexcept { return pair_.n(); }

 private:
  MatrixPair<Scalar> pair_;
  Index s_;
};

template <typename Derived>
IndexSet support(const Eigen::MatrixBase<Derived>& x) {
  IndexSet out;
  for (Index i = 0; i < x.size(); ++i) {
    if (x(i) != typename Derived::Scalar(0)) out.push_back(i);
  }
  return out;
}

template <typename Derived>
IndexSet zero_set(const Eigen::MatrixBase<Derived>& x) {
  IndexSet out;
  for (Index i = 0; i < x.size(); ++i) {
    if (x(i) == typename Derived::Scalar(0)) out.push_back(i);
  }
  return out;
}

/// Number of nonzero entries.
template <typename Derived>
Index nnz(const Eigen::MatrixBase<Derived>& x) {
  Index count = 0;
  for (Index i = 0; i < x.size(); ++i) {
    if (x(i) != typename Derived::Scalar(0)) ++count;
  }
  return count;
}

/// The l0 metric: number of coordinates where x and y differ.
template <typename DerivedX, typename DerivedY>
Index l0_distance(const Eigen::MatrixBase<DerivedX>& x,
                  const Eigen::MatrixBase<DerivedY>& y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::DimensionMismatch, "l0_distance: size mismatch");
  }
  Index count = 0;
  for (Index i = 0; i < x.size(); ++i) {
    if (x(i) != y(i)) ++count;
  }
  return count;
}

/// Keeps the s largest-magnitude entries of x and zeroes the rest. Among
/// equal magnitudes the smaller index is kept.
template <typename Derived>
DenseVector<typename Derived::Scalar> truncate(const Eigen::MatrixBase<Derived>& x,
                                               Index s) {
  using Scalar = typename Derived::Scalar;
  const Index n = x.size();
  if (s < 1 || s > n) {
    throw Error(ErrorCode::InvalidSparsity, "truncate: s must lie in [1, n]");
  }
  DenseVector<Scalar> out = x;
  if (s == n) return out;
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  auto before = [&](Index lhs, Index rhs) {
    const Scalar l = std::abs(out(lhs));
    const Scalar r = std::abs(out(rhs));
    return l > r || (l == r && lhs < rhs);
  };
  std::nth_element(order.begin(), order.begin() + s, order.end(), before);
  for (auto it = order.begin() + s; it != order.end(); ++it) out(*it) = Scalar(0);
  return out;
}

/// Generalized Rayleigh quotient x'Ax / x'Bx.
template <typename Scalar, typename Derived>
Scalar rayleigh(const MatrixPair<Scalar>& pair, const Eigen::MatrixBase<Derived>& x) {
  if (x.size() != pair.n()) {
    throw Error(ErrorCode::DimensionMismatch, "rayleigh: size mismatch");
  }
  if (x.cwiseAbs().maxCoeff() == Scalar(0)) {
    throw Error(ErrorCode::ZeroVector, "rayleigh: x must be nonzero");
  }
  const DenseVector<Scalar> v = x;
  const Scalar num = v.dot(pair.a() * v);
  const Scalar den = v.dot(pair.b() * v);
  Scalar value = num / den;
  if (value < Scalar(0) && value >= -Scalar(tolerance::kRayleighSlack)) value = Scalar(0);
  return value;
}

/// A nonzero vector together with its exact support.
template <typename Scalar>
class SparseIterate {
 public:
  explicit SparseIterate(DenseVector<Scalar> x) : x_(std::move(x)) {
    support_ = sgep::support(x_);
    if (support_.empty()) {
      throw Error(ErrorCode::ZeroVector, "sparse iterate must be nonzero");
    }
  }

  const DenseVector<Scalar>& vector() const noexcept { return x_; }
  const IndexSet& support() const noexcept { return support_; }
  Index nnz() const noexcept { return static_cast<Index>(support_.size()); }
  Index n() const noexcept { return x_.size(); }

 private:
  DenseVector<Scalar> x_;
  IndexSet support_;
};

}  // namespace sgep
