#pragma once

// Support alteration: the closed-form one-dimensional maximizer of
//   alpha -> R(x - x_j e_j + alpha e_i),
// single swaps built from it, and the greedy and partial alteration passes
// that swap r (out, in) index pairs of a vector.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "sgep/core.hpp"

namespace sgep {

enum class AlphaCase { AllReals, AllRealsExceptZero, Finite, Infinite };

inline const char* to_string(AlphaCase c) noexcept {
  switch (c) {
    case AlphaCase::AllReals: return "AllReals";
    case AlphaCase::AllRealsExceptZero: return "AllRealsExceptZero";
    case AlphaCase::Finite: return "Finite";
    case AlphaCase::Infinite: return "Infinite";
  }
  return "Unknown";
}

/// 2x3 coefficient matrix of the quotient along e_i:
///   row 0 = (A_ii, (Ay)_i, y'Ay), row 1 = (B_ii, (By)_i, y'By).
template <typename Scalar>
using QMatrix = Eigen::Matrix<Scalar, 2, 3>;

/// The three 2x2 minors of Q and the discriminant of the derivative numerator
/// d12 a^2 + d13 a + d23.
template <typename Scalar>
struct QMinors {
  Scalar d12 = 0;
  Scalar d13 = 0;
  Scalar d23 = 0;
  Scalar discriminant = 0;
};

template <typename Scalar>
struct AlphaSolution {
  AlphaCase kind = AlphaCase::AllReals;
  // Maximizer for Finite; unused otherwise.
  Scalar value = 0;
  // Supremum of the one-dimensional quotient.
  Scalar m_value = 0;
  QMinors<Scalar> minors{};

  /// Entry written at the in-index: the maximizer, or 1 when every nonzero
  /// value is optimal. Infinite has no finite step.
  Scalar step() const noexcept {
    switch (kind) {
      case AlphaCase::Finite: return value;
      case AlphaCase::Infinite: return std::numeric_limits<Scalar>::infinity();
      default: return Scalar(1);
    }
  }
};

namespace detail {
inline constexpr double kDeterminantZero = 1e-12;
}

/// Value of the one-dimensional quotient at alpha, from Q.
template <typename Scalar>
Scalar quotient_at(const QMatrix<Scalar>& q, Scalar alpha) {
  const Scalar num = q(0, 0) * alpha * alpha + Scalar(2) * q(0, 1) * alpha + q(0, 2);
  const Scalar den = q(1, 0) * alpha * alpha + Scalar(2) * q(1, 1) * alpha + q(1, 2);
  return num / den;
}

template <typename Scalar>
QMinors<Scalar> q_minors(const QMatrix<Scalar>& q) {
  QMinors<Scalar> m;
  m.d12 = q(0, 0) * q(1, 1) - q(0, 1) * q(1, 0);
  m.d13 = q(0, 0) * q(1, 2) - q(0, 2) * q(1, 0);
  m.d23 = q(0, 1) * q(1, 2) - q(0, 2) * q(1, 1);
  m.discriminant = m.d13 * m.d13 - Scalar(4) * m.d12 * m.d23;
  return m;
}

/// Closed-form maximizer set from Q. `y_is_zero` selects the degenerate case
/// where only the in-index remains nonzero.
template <typename Scalar>
AlphaSolution<Scalar> solve_alpha(const QMatrix<Scalar>& q, bool y_is_zero) {
  AlphaSolution<Scalar> sol;
  const Scalar limit = q(0, 0) / q(1, 0);
  if (y_is_zero) {
    sol.kind = AlphaCase::AllRealsExceptZero;
    sol.m_value = limit;
    return sol;
  }
  sol.minors = q_minors(q);
  const auto& m = sol.minors;
  const Scalar qmax = std::max<Scalar>(Scalar(1), q.cwiseAbs().maxCoeff());
  const Scalar gate = Scalar(detail::kDeterminantZero) * qmax * qmax;
  const bool d12_zero = std::abs(m.d12) <= gate;
  const bool d13_zero = std::abs(m.d13) <= gate;

  if (d12_zero && d13_zero) {
    sol.kind = AlphaCase::AllReals;
    sol.m_value = limit;
  } else if (d12_zero) {
    if (m.d13 < 0) {
      sol.kind = AlphaCase::Finite;
      sol.value = -m.d23 / m.d13;
      sol.m_value = quotient_at(q, sol.value);
    } else {
      sol.kind = AlphaCase::Infinite;
      sol.m_value = limit;
    }
  } else {
    const Scalar root = std::sqrt(std::max<Scalar>(m.discriminant, Scalar(0)));
    sol.kind = AlphaCase::Finite;
    // Same root as (-d13 - sqrt(disc)) / (2 d12), evaluated without
    // cancellation when d13 < 0.
    if (m.d13 >= 0) {
      sol.value = (-m.d13 - root) / (Scalar(2) * m.d12);
    } else {
      sol.value = Scalar(2) * m.d23 / (-m.d13 + root);
    }
    sol.m_value = quotient_at(q, sol.value);
  }
  return sol;
}

/// Precomputed quantities for removing index j from x: y = x - x_j e_j, Ay,
/// By and the two quadratic forms. Q for any in-index i is then O(1).
template <typename Scalar>
class RemovalContext {
 public:
  template <typename Derived>
  RemovalContext(const MatrixPair<Scalar>& pair, const Eigen::MatrixBase<Derived>& x,
                 Index j)
      : pair_(&pair), y_(x) {
    y_(j) = Scalar(0);
    y_zero_ = (y_.array() == Scalar(0)).all();
    ay_ = pair.a() * y_;
    by_ = pair.b() * y_;
    yay_ = y_.dot(ay_);
    yby_ = y_.dot(by_);
  }

  QMatrix<Scalar> q(Index i) const {
    QMatrix<Scalar> out;
    out << pair_->a()(i, i), ay_(i), yay_, pair_->b()(i, i), by_(i), yby_;
    return out;
  }

  AlphaSolution<Scalar> solve(Index i) const { return solve_alpha(q(i), y_zero_); }

  bool y_is_zero() const noexcept { return y_zero_; }

 private:
  const MatrixPair<Scalar>* pair_;
  DenseVector<Scalar> y_;
  DenseVector<Scalar> ay_;
  DenseVector<Scalar> by_;
  Scalar yay_ = 0;
  Scalar yby_ = 0;
  bool y_zero_ = false;
};

namespace detail {

template <typename Scalar, typename Derived>
void check_swap_indices(const MatrixPair<Scalar>& pair,
                        const Eigen::MatrixBase<Derived>& x, Index j, Index i) {
  const Index n = pair.n();
  if (x.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "swap: vector size mismatch");
  }
  if (j < 0 || j >= n || i < 0 || i >= n) {
    throw Error(ErrorCode::IndexOutOfRange, "swap: index out of range");
  }
  if (j == i) {
    throw Error(ErrorCode::IndexOutOfRange, "swap: out-index equals in-index");
  }
  if (x(i) != Scalar(0)) {
    throw Error(ErrorCode::IntoSupportNotZero, "swap: in-index must be zero in x");
  }
}

}  // namespace detail

/// Maximizer set of alpha -> R(x - x_j e_j + alpha e_i) for i in Z(x), j != i.
template <typename Scalar, typename Derived>
AlphaSolution<Scalar> best_alpha(const MatrixPair<Scalar>& pair,
                                 const Eigen::MatrixBase<Derived>& x, Index j, Index i) {
  detail::check_swap_indices(pair, x, j, i);
  if (x.cwiseAbs().maxCoeff() == Scalar(0)) {
    throw Error(ErrorCode::ZeroVector, "best_alpha: x must be nonzero");
  }
  return RemovalContext<Scalar>(pair, x, j).solve(i);
}

/// x - x_j e_j + alpha e_i for the chosen solution; e_i when the supremum is
/// only reached at infinity.
template <typename Derived, typename Scalar = typename Derived::Scalar>
DenseVector<Scalar> apply_swap(const Eigen::MatrixBase<Derived>& x, Index j, Index i,
                               const AlphaSolution<Scalar>& sol) {
  const Index n = x.size();
  if (j < 0 || j >= n || i < 0 || i >= n || j == i) {
    throw Error(ErrorCode::IndexOutOfRange, "apply_swap: index out of range");
  }
  if (x(i) != Scalar(0)) {
    throw Error(ErrorCode::IntoSupportNotZero, "apply_swap: in-index must be zero");
  }
  if (sol.kind == AlphaCase::Infinite) {
    return DenseVector<Scalar>::Unit(n, i);
  }
  DenseVector<Scalar> out = x;
  out(j) = Scalar(0);
  out(i) = sol.step();
  return out;
}

enum class AlterationVariant { Partial, Greedy };

struct SwapPair {
  Index out = 0;
  Index in = 0;
};

/// The swaps one alteration pass performed, in order.
template <typename Scalar>
struct SwapPlan {
  std::vector<SwapPair> swaps;
  std::vector<AlphaSolution<Scalar>> steps;

  IndexSet out_indices() const {
    IndexSet out;
    for (const auto& s : swaps) out.push_back(s.out);
    return out;
  }
  IndexSet in_indices() const {
    IndexSet out;
    for (const auto& s : swaps) out.push_back(s.in);
    return out;
  }
};

template <typename Scalar>
struct AlterationResult {
  DenseVector<Scalar> x;
  SwapPlan<Scalar> plan;
  std::size_t best_alpha_calls = 0;
};

struct GreedyOptions {
  // Recompute the selection scores at the current iterate every round
  // instead of freezing them at the input vector.
  bool refresh_scores = false;
};

namespace detail {

template <typename Scalar, typename Derived>
void check_alteration_input(const MatrixPair<Scalar>& pair,
                            const Eigen::MatrixBase<Derived>& x, Index r) {
  if (x.size() != pair.n()) {
    throw Error(ErrorCode::DimensionMismatch, "alteration: vector size mismatch");
  }
  const Index k = nnz(x);
  if (k == 0) throw Error(ErrorCode::ZeroVector, "alteration: x must be nonzero");
  if (r < 0 || r > std::min(k, pair.n() - k)) {
    throw Error(ErrorCode::InvalidR,
                "alteration: r must lie in [0, min(||x||_0, n - ||x||_0)]");
  }
}

inline bool contains(const IndexSet& set, Index v) {
  return std::find(set.begin(), set.end(), v) != set.end();
}

}  // namespace detail

/// Greedy support alteration: scores every (j, i) in S(x) x Z(x) once, then
/// applies the r best non-overlapping pairs, each with alpha recomputed at the
/// current iterate. Ties on the score go to the smallest (j, i).
template <typename Scalar, typename Derived>
AlterationResult<Scalar> greedy_sa(const MatrixPair<Scalar>& pair,
                                   const Eigen::MatrixBase<Derived>& x, Index r,
                                   GreedyOptions options = {}) {
  detail::check_alteration_input(pair, x, r);
  AlterationResult<Scalar> result;
  result.x = x;
  if (r == 0) return result;

  const IndexSet out_set = support(x);
  const IndexSet in_set = zero_set(x);
  const std::size_t n_in = in_set.size();
  std::vector<Scalar> scores(out_set.size() * n_in);

  auto score_all = [&](const DenseVector<Scalar>& at, const IndexSet& used_out,
                       const IndexSet& used_in) {
    for (std::size_t a = 0; a < out_set.size(); ++a) {
      if (detail::contains(used_out, out_set[a])) continue;
      RemovalContext<Scalar> ctx(pair, at, out_set[a]);
      for (std::size_t b = 0; b < n_in; ++b) {
        if (detail::contains(used_in, in_set[b])) continue;
        scores[a * n_in + b] = ctx.solve(in_set[b]).m_value;
        ++result.best_alpha_calls;
      }
    }
  };

  IndexSet used_out;
  IndexSet used_in;
  score_all(result.x, used_out, used_in);

  for (Index t = 0; t < r; ++t) {
    if (t > 0 && options.refresh_scores) score_all(result.x, used_out, used_in);
    std::size_t best_a = 0;
    std::size_t best_b = 0;
    bool found = false;
    for (std::size_t a = 0; a < out_set.size(); ++a) {
      if (detail::contains(used_out, out_set[a])) continue;
      for (std::size_t b = 0; b < n_in; ++b) {
        if (detail::contains(used_in, in_set[b])) continue;
        // Strict comparison over (j, i) in lexicographic order keeps the
        // smallest pair among ties.
        if (!found || scores[a * n_in + b] > scores[best_a * n_in + best_b]) {
          best_a = a;
          best_b = b;
          found = true;
        }
      }
    }
    const Index j = out_set[best_a];
    const Index i = in_set[best_b];
    const AlphaSolution<Scalar> sol = RemovalContext<Scalar>(pair, result.x, j).solve(i);
    ++result.best_alpha_calls;
    result.x = apply_swap(result.x, j, i, sol);
    result.plan.swaps.push_back({j, i});
    result.plan.steps.push_back(sol);
    used_out.push_back(j);
    used_in.push_back(i);
  }
  return result;
}

/// Partial support alteration: the r smallest-magnitude nonzeros of x leave
/// the support in order of increasing magnitude; each is replaced by the
/// in-index with the best one-dimensional value at the current iterate.
template <typename Scalar, typename Derived>
AlterationResult<Scalar> partial_sa(const MatrixPair<Scalar>& pair,
                                    const Eigen::MatrixBase<Derived>& x, Index r) {
  detail::check_alteration_input(pair, x, r);
  AlterationResult<Scalar> result;
  result.x = x;
  if (r == 0) return result;

  IndexSet out_order = support(x);
  std::stable_sort(out_order.begin(), out_order.end(), [&](Index lhs, Index rhs) {
    return std::abs(x(lhs)) < std::abs(x(rhs));
  });
  const IndexSet in_set = zero_set(x);
  IndexSet used_in;

  for (Index t = 0; t < r; ++t) {
    const Index j = out_order[static_cast<std::size_t>(t)];
    RemovalContext<Scalar> ctx(pair, result.x, j);
    bool found = false;
    Index best_i = 0;
    AlphaSolution<Scalar> best_sol;
    for (Index i : in_set) {
      if (detail::contains(used_in, i)) continue;
      const AlphaSolution<Scalar> sol = ctx.solve(i);
      ++result.best_alpha_calls;
      if (!found || sol.m_value > best_sol.m_value) {
        best_sol = sol;
        best_i = i;
        found = true;
      }
    }
    result.x = apply_swap(result.x, j, best_i, best_sol);
    result.plan.swaps.push_back({j, best_i});
    result.plan.steps.push_back(best_sol);
    used_in.push_back(best_i);
  }
  return result;
}

template <typename Scalar, typename Derived>
AlterationResult<Scalar> support_alteration(const MatrixPair<Scalar>& pair,
                                            const Eigen::MatrixBase<Derived>& x, Index r,
                                            AlterationVariant variant,
                                            GreedyOptions options = {}) {
  if (variant == AlterationVariant::Greedy) return greedy_sa(pair, x, r, options);
  return partial_sa(pair, x, r);
}

}  // namespace sgep
