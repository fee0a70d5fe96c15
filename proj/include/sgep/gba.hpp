#pragma once

// Gradient-based Stage-1 solvers: the proximity-gradient ascent with monotone
// line search (PGSA_ML) and its two fixed-step special cases, the truncated
// power method (TPM, B = I) and truncated Rayleigh flow (rifle).

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "sgep/core.hpp"

namespace sgep {

enum class GbaVariant { PgsaMl, Tpm, Rifle };

inline const char* to_string(GbaVariant v) noexcept {
  switch (v) {
    case GbaVariant::PgsaMl: return "pgsa-ml";
    case GbaVariant::Tpm: return "tpm";
    case GbaVariant::Rifle: return "rifle";
  }
  return "unknown";
}

struct GbaConfig {
  GbaVariant variant = GbaVariant::PgsaMl;
  // Line-search strength; acceptance requires
  // 1/R(trial) <= 1/R(x) - (a/2) ||trial - x||^2.
  double a = 0.0;
  double eta = 0.5;
  double alpha_lo = 1e-10;
  double alpha_hi = 1e10;
  // When set, PGSA_ML starts every line search from this step instead of the
  // Barzilai-Borwein guess.
  std::optional<double> fixed_alpha;
  // Fixed rifle step; 0 selects 1 / (4 ||B||_2^2).
  double rifle_alpha = 0.0;
  double tol = 1e-10;
  int max_iter = 5000;
  double alpha_abort = 1e-15;
  bool record_iterates = false;
};

inline void validate(const GbaConfig& cfg) {
  auto fail = [](const char* what) { throw Error(ErrorCode::InvalidConfig, what); };
  if (!(cfg.a >= 0.0)) fail("a must be >= 0");
  if (!(cfg.eta > 0.0 && cfg.eta < 1.0)) fail("eta must lie in (0, 1)");
  if (!(cfg.alpha_lo > 0.0 && cfg.alpha_lo < cfg.alpha_hi)) {
    fail("need 0 < alpha_lo < alpha_hi");
  }
  if (cfg.fixed_alpha && !(*cfg.fixed_alpha > 0.0)) fail("fixed_alpha must be > 0");
  if (!(cfg.rifle_alpha >= 0.0)) fail("rifle_alpha must be >= 0");
  if (!(cfg.tol > 0.0)) fail("tol must be > 0");
  if (cfg.max_iter < 1) fail("max_iter must be >= 1");
  if (!(cfg.alpha_abort > 0.0)) fail("alpha_abort must be > 0");
}

template <typename Scalar>
struct GbaTrace {
  int iterations = 0;
  // R of the starting point followed by R of every accepted iterate.
  std::vector<Scalar> objective_history;
  SparseIterate<Scalar> final;
  // Populated only with GbaConfig::record_iterates; starts at the
  // normalized initial point.
  std::vector<DenseVector<Scalar>> iterates;
  // Backtracking fell below alpha_abort before an acceptable trial.
  bool stagnated = false;

  Scalar objective() const { return objective_history.back(); }
};

namespace detail {

// Acceptance slack relative to 1/R: absorbs rounding in the two quotients so
// that a fixed point is not rejected as a decrease.
inline constexpr double kAcceptSlack = 1e-14;

template <typename Scalar>
bool converged(Scalar prev, Scalar cur, double tol) {
  return std::abs(cur - prev) <= Scalar(tol) * std::max<Scalar>(Scalar(1), cur);
}

}  // namespace detail

/// Barzilai-Borwein style initial step:
/// clamp(||dx||^2 / |<dx, 2B dx>|, alpha_lo, alpha_hi), or alpha_hi when the
/// inner product vanishes or there is no previous pair.
template <typename Scalar>
Scalar bb_alpha_init(const DenseVector<Scalar>& x_prev, const DenseVector<Scalar>* x_prev2,
                     const MatrixPair<Scalar>& pair, const GbaConfig& cfg) {
  if (x_prev2 == nullptr) return Scalar(cfg.alpha_hi);
  if (x_prev.size() != pair.n() || x_prev2->size() != pair.n()) {
    throw Error(ErrorCode::DimensionMismatch, "bb_alpha_init: size mismatch");
  }
  const DenseVector<Scalar> dx = x_prev - *x_prev2;
  const Scalar inner = dx.dot(Scalar(2) * (pair.b() * dx));
  if (inner == Scalar(0)) return Scalar(cfg.alpha_hi);
  const Scalar ratio = dx.squaredNorm() / std::abs(inner);
  return std::clamp(ratio, Scalar(cfg.alpha_lo), Scalar(cfg.alpha_hi));
}

/// One projected ascent step:
///   normalize(truncate(x + 2 alpha (-Bx + Ax / R(x)), s)).
/// Empty when the truncated point is zero.
template <typename Scalar>
std::optional<DenseVector<Scalar>> ascent_step(const MatrixPair<Scalar>& pair,
                                               const DenseVector<Scalar>& x,
                                               Scalar rx, Scalar alpha, Index s) {
  const DenseVector<Scalar> ax = pair.a() * x;
  const DenseVector<Scalar> bx = pair.b() * x;
  const DenseVector<Scalar> moved = x + Scalar(2) * alpha * (-bx + ax / rx);
  DenseVector<Scalar> trial = truncate(moved, s);
  const Scalar norm = trial.norm();
  if (!(norm > Scalar(0)) || !std::isfinite(norm)) return std::nullopt;
  trial /= norm;
  return trial;
}

/// Largest eigenvalue magnitude of a symmetric matrix by power iteration.
template <typename Scalar>
Scalar spectral_norm_estimate(const DenseMatrix<Scalar>& m, int max_iter = 50,
                              double tol = 1e-10) {
  const Index n = m.rows();
  DenseVector<Scalar> v = DenseVector<Scalar>::Constant(n, Scalar(1) / std::sqrt(Scalar(n)));
  Scalar estimate = 0;
  for (int k = 0; k < max_iter; ++k) {
    DenseVector<Scalar> w = m * v;
    const Scalar norm = w.norm();
    if (norm == Scalar(0)) return Scalar(0);
    v = w / norm;
    const bool done = std::abs(norm - estimate) <= Scalar(tol) * norm;
    estimate = norm;
    if (done) break;
  }
  return estimate;
}

/// e_i with i the smallest index maximizing A_ii / B_ii.
template <typename Scalar>
DenseVector<Scalar> default_initial_point(const MatrixPair<Scalar>& pair) {
  const Index n = pair.n();
  Index best = 0;
  Scalar best_ratio = pair.a()(0, 0) / pair.b()(0, 0);
  for (Index i = 1; i < n; ++i) {
    const Scalar ratio = pair.a()(i, i) / pair.b()(i, i);
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = i;
    }
  }
  return DenseVector<Scalar>::Unit(n, best);
}

namespace detail {

// Common validation of x0. `require_sparse` enforces ||x0||_0 <= s.
template <typename Scalar>
DenseVector<Scalar> prepare_start(const SGepInstance<Scalar>& instance,
                                  const DenseVector<Scalar>& x0, bool require_sparse,
                                  Scalar& r0) {
  if (x0.size() != instance.n()) {
    throw Error(ErrorCode::DimensionMismatch, "initial point has wrong dimension");
  }
  if (!all_finite(x0)) throw Error(ErrorCode::BadInitialPoint, "initial point not finite");
  const Index k = nnz(x0);
  if (k == 0) throw Error(ErrorCode::BadInitialPoint, "initial point is zero");
  if (require_sparse && k > instance.s()) {
    throw Error(ErrorCode::BadInitialPoint, "initial point has more than s nonzeros");
  }
  const DenseVector<Scalar> x = x0 / x0.norm();
  if (x.dot(instance.pair().a() * x) == Scalar(0)) {
    throw Error(ErrorCode::BadInitialPoint, "initial point has x'Ax = 0");
  }
  r0 = rayleigh(instance.pair(), x);
  return x;
}

template <typename Scalar>
GbaTrace<Scalar> make_trace(DenseVector<Scalar> x, int iterations,
                            std::vector<Scalar> history,
                            std::vector<DenseVector<Scalar>> iterates, bool stagnated) {
  return GbaTrace<Scalar>{iterations, std::move(history), SparseIterate<Scalar>(std::move(x)),
                          std::move(iterates), stagnated};
}

template <typename Scalar>
bool accepts(Scalar r_prev, Scalar r_trial, Scalar dist2, double a) {
  if (!(r_trial > Scalar(0))) return false;
  const Scalar inv_prev = Scalar(1) / r_prev;
  return Scalar(1) / r_trial <=
         inv_prev - Scalar(a / 2) * dist2 + Scalar(kAcceptSlack) * inv_prev;
}

}  // namespace detail

/// PGSA with monotone line search. Requires x0 != 0, ||x0||_0 <= s and
/// x0'Ax0 != 0. Every iterate is unit-norm with at most s nonzeros and the
/// objective never decreases.
template <typename Scalar>
GbaTrace<Scalar> pgsa_ml(const SGepInstance<Scalar>& instance, const DenseVector<Scalar>& x0,
                         const GbaConfig& cfg) {
  validate(cfg);
  const auto& pair = instance.pair();
  Scalar r = 0;
  DenseVector<Scalar> x = detail::prepare_start(instance, x0, true, r);
  std::vector<Scalar> history{r};
  std::vector<DenseVector<Scalar>> iterates;
  if (cfg.record_iterates) iterates.push_back(x);
  std::optional<DenseVector<Scalar>> x_prev2;
  bool stagnated = false;
  int k = 0;

  while (k < cfg.max_iter) {
    if (!(r > Scalar(0))) {
      throw Error(ErrorCode::DegenerateIterate, "iterate has x'Ax = 0");
    }
    Scalar alpha = cfg.fixed_alpha ? Scalar(*cfg.fixed_alpha)
                                   : bb_alpha_init(x, x_prev2 ? &*x_prev2 : nullptr, pair, cfg);
    std::optional<DenseVector<Scalar>> accepted;
    Scalar r_trial = 0;
    while (true) {
      auto trial = ascent_step(pair, x, r, alpha, instance.s());
      if (trial) {
        r_trial = rayleigh(pair, *trial);
        if (detail::accepts(r, r_trial, (*trial - x).squaredNorm(), cfg.a)) {
          accepted = std::move(trial);
          break;
        }
      }
      alpha *= Scalar(cfg.eta);
      if (alpha < Scalar(cfg.alpha_abort)) break;
    }
    if (!accepted) {
      stagnated = true;
      break;
    }
    ++k;
    x_prev2 = std::move(x);
    x = std::move(*accepted);
    const Scalar r_prev = r;
    r = r_trial;
    history.push_back(r);
    if (cfg.record_iterates) iterates.push_back(x);
    if (detail::converged(r_prev, r, cfg.tol)) break;
  }
  return detail::make_trace(std::move(x), k, std::move(history), std::move(iterates),
                            stagnated);
}

/// Truncated power method: x <- normalize(truncate(A x, s)), computed through
/// the same ascent step with alpha = 1/2. Requires B = I. Dense starting
/// points are accepted; the first step truncates them.
template <typename Scalar>
GbaTrace<Scalar> tpm(const SGepInstance<Scalar>& instance, const DenseVector<Scalar>& x0,
                     const GbaConfig& cfg = {}) {
  validate(cfg);
  const auto& pair = instance.pair();
  if (!pair.b_is_identity()) {
    throw Error(ErrorCode::NotIdentityB, "tpm requires B = I");
  }
  Scalar r = 0;
  DenseVector<Scalar> x = detail::prepare_start(instance, x0, false, r);
  std::vector<Scalar> history{r};
  std::vector<DenseVector<Scalar>> iterates;
  if (cfg.record_iterates) iterates.push_back(x);
  int k = 0;
  while (k < cfg.max_iter) {
    if (!(r > Scalar(0))) {
      throw Error(ErrorCode::DegenerateIterate, "iterate has x'Ax = 0");
    }
    auto next = ascent_step(pair, x, r, Scalar(0.5), instance.s());
    if (!next) break;
    ++k;
    x = std::move(*next);
    const Scalar r_prev = r;
    r = rayleigh(pair, x);
    history.push_back(r);
    if (cfg.record_iterates) iterates.push_back(x);
    if (detail::converged(r_prev, r, cfg.tol)) break;
  }
  return detail::make_trace(std::move(x), k, std::move(history), std::move(iterates), false);
}

/// Largest admissible rifle step, 1 / (2 ||B||_2^2).
template <typename Scalar>
Scalar rifle_step_bound(const MatrixPair<Scalar>& pair) {
  const Scalar norm_b = spectral_norm_estimate(pair.b());
  return Scalar(1) / (Scalar(2) * norm_b * norm_b);
}

/// Truncated Rayleigh flow: the ascent step with a fixed alpha and no line
/// search. A step that lowers R is retried once at half the step, which is
/// kept for the rest of the run; a second failure ends the run.
template <typename Scalar>
GbaTrace<Scalar> rifle(const SGepInstance<Scalar>& instance, const DenseVector<Scalar>& x0,
                       const GbaConfig& cfg) {
  validate(cfg);
  const auto& pair = instance.pair();
  const Scalar bound = rifle_step_bound(pair);
  Scalar alpha = cfg.rifle_alpha > 0.0 ? Scalar(cfg.rifle_alpha) : bound / Scalar(2);
  if (!(alpha > Scalar(0) && alpha < bound)) {
    throw Error(ErrorCode::InvalidStep, "rifle step must lie in (0, 1/(2||B||^2))");
  }
  Scalar r = 0;
  DenseVector<Scalar> x = detail::prepare_start(instance, x0, false, r);
  std::vector<Scalar> history{r};
  std::vector<DenseVector<Scalar>> iterates;
  if (cfg.record_iterates) iterates.push_back(x);
  bool halved = false;
  bool stagnated = false;
  int k = 0;
  while (k < cfg.max_iter) {
    if (!(r > Scalar(0))) {
      throw Error(ErrorCode::DegenerateIterate, "iterate has x'Ax = 0");
    }
    auto trial = ascent_step(pair, x, r, alpha, instance.s());
    Scalar r_trial = trial ? rayleigh(pair, *trial) : Scalar(0);
    if (!trial || !detail::accepts(r, r_trial, Scalar(0), 0.0)) {
      if (halved) {
        stagnated = true;
        break;
      }
      halved = true;
      alpha /= Scalar(2);
      continue;
    }
    ++k;
    x = std::move(*trial);
    const Scalar r_prev = r;
    r = r_trial;
    history.push_back(r);
    if (cfg.record_iterates) iterates.push_back(x);
    if (detail::converged(r_prev, r, cfg.tol)) break;
  }
  return detail::make_trace(std::move(x), k, std::move(history), std::move(iterates),
                            stagnated);
}

/// Runs the solver selected by cfg.variant.
template <typename Scalar>
GbaTrace<Scalar> run_gba(const SGepInstance<Scalar>& instance, const DenseVector<Scalar>& x0,
                         const GbaConfig& cfg) {
  switch (cfg.variant) {
    case GbaVariant::Tpm: return tpm(instance, x0, cfg);
    case GbaVariant::Rifle: return rifle(instance, x0, cfg);
    case GbaVariant::PgsaMl: break;
  }
  return pgsa_ml(instance, x0, cfg);
}

}  // namespace sgep
