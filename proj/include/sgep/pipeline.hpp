#pragma once

// Named solver pipelines shared by the CLI, the benchmark harness and the
// acceptance suite.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sgep/driver.hpp"
#include "sgep/oracle.hpp"

namespace sgep {

enum class SolverKind { Tpm, Rifle, PgsaMl, SaTpm, SaRifle, SaPgsaMl, Oracle };

const char* to_string(SolverKind kind) noexcept;
std::optional<SolverKind> parse_solver(std::string_view name);

/// Stage-1 variant a pipeline runs; Oracle has none.
std::optional<GbaVariant> stage1_variant(SolverKind kind) noexcept;
bool uses_alteration(SolverKind kind) noexcept;

struct SolveOptions {
  // gba.variant is overwritten from the solver kind.
  DriverConfig driver;
  std::uint64_t oracle_budget = kDefaultOracleBudget;
};

struct SolveOutcome {
  SolverKind solver = SolverKind::Tpm;
  DenseVector<double> vector;
  double objective = 0.0;
  IndexSet support;
  int outer_iterations = 0;
  int gba_iterations_total = 0;
  int ss_trials = 0;
  std::size_t best_alpha_calls = 0;
  std::uint64_t enumerated = 0;
  // Objective of every Stage-1 round, in order (one entry for plain solvers).
  std::vector<double> round_objectives;
  double wall_time_ms = 0.0;
};

SolveOutcome solve(const SGepInstance<double>& instance, SolverKind kind,
                   const std::optional<DenseVector<double>>& x0, const SolveOptions& options);

}  // namespace sgep
