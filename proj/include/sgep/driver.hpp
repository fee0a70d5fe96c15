#pragma once

// The successive two-stage driver: Stage-1 runs a gradient-based solver,
// Stage-2 alters the support of its output by r swapped pairs, where r is
// chosen by a descending search for the largest step that still improves the
// objective after re-solving.

#include <algorithm>
#include <cstddef>
#include <future>
#include <optional>
#include <type_traits>
#include <vector>

#include "sgep/alteration.hpp"
#include "sgep/gba.hpp"

namespace sgep {

struct DriverConfig {
  GbaConfig gba;
  AlterationVariant sa_variant = AlterationVariant::Partial;
  // Cap on Stage-1 rounds; s + 1 when unset.
  std::optional<int> max_outer;
  // Iteration cap for the re-solves inside the step-size search; off by default.
  std::optional<int> ss_gba_max_iter;
  GreedyOptions greedy;
  // Evaluate every candidate r concurrently and keep the largest improving
  // one. Same answer as the sequential descending search.
  bool parallel_ss = false;
};

/// Improvement below this fraction of max(1, R) does not count.
inline constexpr double kStrictImprovement = 1e-12;

template <typename Scalar>
bool strictly_improves(Scalar candidate, Scalar current) {
  return candidate > current + Scalar(kStrictImprovement) * std::max<Scalar>(Scalar(1), current);
}

template <typename Scalar>
struct StepSizeResult {
  Index r = 0;
  // Re-solved altered vector for the chosen r.
  std::optional<GbaTrace<Scalar>> winner;
  int trials = 0;
  int gba_iterations = 0;
  std::size_t best_alpha_calls = 0;
};

namespace detail {

template <typename Scalar>
struct Trial {
  std::optional<GbaTrace<Scalar>> trace;
  std::size_t best_alpha_calls = 0;
};

// SA then a full Stage-1 solve. A Stage-1 precondition failure on the altered
// vector (for instance x'Ax = 0) counts as no improvement.
template <typename Scalar>
Trial<Scalar> alter_and_resolve(const SGepInstance<Scalar>& instance,
                                const DenseVector<Scalar>& x, Index r,
                                const DriverConfig& cfg) {
  Trial<Scalar> out;
  AlterationResult<Scalar> altered =
      support_alteration(instance.pair(), x, r, cfg.sa_variant, cfg.greedy);
  out.best_alpha_calls = altered.best_alpha_calls;
  GbaConfig gba = cfg.gba;
  if (cfg.ss_gba_max_iter) gba.max_iter = *cfg.ss_gba_max_iter;
  try {
    out.trace = run_gba(instance, altered.x, gba);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::BadInitialPoint && e.code() != ErrorCode::DegenerateIterate) {
      throw;
    }
  }
  return out;
}

template <typename Scalar>
Index max_step(const SparseIterate<Scalar>& x) {
  return std::min(x.nnz(), x.n() - x.nnz());
}

}  // namespace detail

/// Largest r <= r_hat for which re-solving SA(x, r) strictly beats R(x), or 0.
template <typename Scalar>
StepSizeResult<Scalar> select_step_size_detailed(const SGepInstance<Scalar>& instance,
                                                 const SparseIterate<Scalar>& x, Index r_hat,
                                                 const DriverConfig& cfg) {
  if (x.n() != instance.n()) {
    throw Error(ErrorCode::DimensionMismatch, "select_step_size: size mismatch");
  }
  if (r_hat < 0 || r_hat > detail::max_step(x)) {
    throw Error(ErrorCode::InvalidR, "select_step_size: r_hat out of range");
  }
  const Scalar current = rayleigh(instance.pair(), x.vector());
  StepSizeResult<Scalar> result;

  auto improving = [&](const detail::Trial<Scalar>& trial) {
    return trial.trace && strictly_improves(trial.trace->objective(), current);
  };
  auto account = [&](const detail::Trial<Scalar>& trial) {
    ++result.trials;
    result.best_alpha_calls += trial.best_alpha_calls;
    if (trial.trace) result.gba_iterations += trial.trace->iterations;
  };

  if (cfg.parallel_ss && r_hat > 1) {
    std::vector<std::future<detail::Trial<Scalar>>> jobs;
    for (Index r = r_hat; r >= 1; --r) {
      jobs.push_back(std::async(std::launch::async, [&, r] {
        return detail::alter_and_resolve(instance, x.vector(), r, cfg);
      }));
    }
    bool done = false;
    for (auto& job : jobs) {
      detail::Trial<Scalar> trial = job.get();
      account(trial);
      if (!done && improving(trial)) {
        result.r = r_hat - static_cast<Index>(&job - jobs.data());
        result.winner = std::move(trial.trace);
        done = true;
      }
    }
    return result;
  }

  for (Index r = r_hat; r >= 1; --r) {
    detail::Trial<Scalar> trial = detail::alter_and_resolve(instance, x.vector(), r, cfg);
    account(trial);
    if (improving(trial)) {
      result.r = r;
      result.winner = std::move(trial.trace);
      break;
    }
  }
  return result;
}

template <typename Scalar>
Index select_step_size(const SGepInstance<Scalar>& instance, const SparseIterate<Scalar>& x,
                       Index r_hat, const DriverConfig& cfg) {
  return select_step_size_detailed(instance, x, r_hat, cfg).r;
}

template <typename Scalar>
struct OuterRecord {
  int t = 0;
  Index r_hat = 0;
  Index r = 0;
  Scalar objective = 0;
  int gba_iterations = 0;
  int ss_trials = 0;
};

template <typename Scalar>
struct OuterTrace {
  // One record per Stage-1 output x^(t); the last has r = 0 unless the
  // round cap stopped the run.
  std::vector<OuterRecord<Scalar>> records;
  SparseIterate<Scalar> final;
  int gba_iterations_total = 0;
  int ss_trials_total = 0;
  std::size_t best_alpha_calls = 0;

  /// Rounds that ended in an accepted alteration, i.e. produced a strictly
  /// better iterate.
  int completed_iterations() const {
    int count = 0;
    for (const auto& rec : records) count += rec.r > 0 ? 1 : 0;
    return count;
  }
  Scalar objective() const { return records.back().objective; }
};

/// SA_GBA. `x0` defaults to default_initial_point.
template <typename Scalar>
OuterTrace<Scalar> sa_gba(const SGepInstance<Scalar>& instance,
                          const std::type_identity_t<std::optional<DenseVector<Scalar>>>& x0,
                          const DriverConfig& cfg) {
  const int max_rounds =
      cfg.max_outer ? *cfg.max_outer : static_cast<int>(instance.s()) + 1;
  if (max_rounds < 1) throw Error(ErrorCode::InvalidConfig, "max_outer must be >= 1");

  const DenseVector<Scalar> start = x0 ? *x0 : default_initial_point(instance.pair());
  GbaTrace<Scalar> stage1 = run_gba(instance, start, cfg.gba);

  std::vector<OuterRecord<Scalar>> records;
  int gba_total = stage1.iterations;
  int trials_total = 0;
  std::size_t calls_total = 0;
  Index prev_r = 0;

  for (int t = 1;; ++t) {
    const SparseIterate<Scalar>& xt = stage1.final;
    const Index feasible = detail::max_step(xt);
    const Index r_hat = t == 1 ? feasible : std::min(prev_r - 1, feasible);

    OuterRecord<Scalar> rec;
    rec.t = t;
    rec.r_hat = r_hat;
    rec.objective = rayleigh(instance.pair(), xt.vector());
    rec.gba_iterations = stage1.iterations;

    if (t >= max_rounds) {
      records.push_back(rec);
      break;
    }
    StepSizeResult<Scalar> ss = select_step_size_detailed(instance, xt, r_hat, cfg);
    rec.r = ss.r;
    rec.ss_trials = ss.trials;
    trials_total += ss.trials;
    calls_total += ss.best_alpha_calls;
    gba_total += ss.gba_iterations;
    records.push_back(rec);
    if (ss.r == 0) break;
    prev_r = ss.r;
    stage1 = std::move(*ss.winner);
  }

  return OuterTrace<Scalar>{std::move(records), stage1.final, gba_total, trials_total,
                            calls_total};
}

}  // namespace sgep
