#include "sgep/pipeline.hpp"

#include <chrono>

namespace sgep {

const char* to_string(SolverKind kind) noexcept {
  switch (kind) {
    case SolverKind::Tpm: return "tpm";
    case SolverKind::Rifle: return "rifle";
    case SolverKind::PgsaMl: return "pgsa-ml";
    case SolverKind::SaTpm: return "sa-tpm";
    case SolverKind::SaRifle: return "sa-rifle";
    case SolverKind::SaPgsaMl: return "sa-pgsa-ml";
    case SolverKind::Oracle: return "oracle";
  }
  return "unknown";
}

std::optional<SolverKind> parse_solver(std::string_view name) {
  for (SolverKind kind : {SolverKind::Tpm, SolverKind::Rifle, SolverKind::PgsaMl,
                          SolverKind::SaTpm, SolverKind::SaRifle, SolverKind::SaPgsaMl,
                          SolverKind::Oracle}) {
    if (name == to_string(kind)) return kind;
  }
  return std::nullopt;
}

std::optional<GbaVariant> stage1_variant(SolverKind kind) noexcept {
  switch (kind) {
    case SolverKind::Tpm:
    case SolverKind::SaTpm: return GbaVariant::Tpm;
    case SolverKind::Rifle:
    case SolverKind::SaRifle: return GbaVariant::Rifle;
    case SolverKind::PgsaMl:
    case SolverKind::SaPgsaMl: return GbaVariant::PgsaMl;
    case SolverKind::Oracle: break;
  }
  return std::nullopt;
}

bool uses_alteration(SolverKind kind) noexcept {
  return kind == SolverKind::SaTpm || kind == SolverKind::SaRifle ||
         kind == SolverKind::SaPgsaMl;
}

SolveOutcome solve(const SGepInstance<double>& instance, SolverKind kind,
                   const std::optional<DenseVector<double>>& x0, const SolveOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  SolveOutcome out;
  out.solver = kind;

  if (kind == SolverKind::Oracle) {
    OracleResult<double> res = exact_sgep(instance, options.oracle_budget);
    out.vector = std::move(res.vector);
    out.enumerated = res.enumerated;
  } else {
    DriverConfig cfg = options.driver;
    cfg.gba.variant = *stage1_variant(kind);
    if (uses_alteration(kind)) {
      OuterTrace<double> trace = sa_gba(instance, x0, cfg);
      out.vector = trace.final.vector();
      out.outer_iterations = trace.completed_iterations();
      out.gba_iterations_total = trace.gba_iterations_total;
      out.ss_trials = trace.ss_trials_total;
      out.best_alpha_calls = trace.best_alpha_calls;
      for (const auto& rec : trace.records) out.round_objectives.push_back(rec.objective);
    } else {
      const DenseVector<double> start = x0 ? *x0 : default_initial_point(instance.pair());
      GbaTrace<double> trace = run_gba(instance, start, cfg.gba);
      out.vector = trace.final.vector();
      out.gba_iterations_total = trace.iterations;
      out.round_objectives.push_back(trace.objective());
    }
  }
  out.objective = rayleigh(instance.pair(), out.vector);
  out.support = support(out.vector);
  out.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
          .count();
  return out;
}

}  // namespace sgep
