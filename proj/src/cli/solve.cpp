#include <string>

#include "commands.hpp"
#include "sgep/io.hpp"
#include "sgep/random.hpp"

namespace sgep::cli {

namespace {

// s random coordinates with standard normal values.
DenseVector<double> seeded_random_start(Index n, Index s, std::uint64_t seed) {
  Rng rng(seed);
  DenseVector<double> x = DenseVector<double>::Zero(n);
  Index placed = 0;
  while (placed < s) {
    const auto i = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
    if (x(i) != 0.0) continue;
    double value = 0.0;
    while (value == 0.0) value = rng.normal();
    x(i) = value;
    ++placed;
  }
  return x / x.norm();
}

std::optional<DenseVector<double>> initial_point(const SolveFlags& flags,
                                                 const SGepInstance<double>& instance) {
  const std::string& init = flags.init;
  if (init == "default") return std::nullopt;
  if (init == "seeded-random") return seeded_random_start(instance.n(), instance.s(), flags.seed);
  if (init.rfind("csv:", 0) == 0) {
    DenseVector<double> x = io::read_vector_csv(init.substr(4));
    if (x.size() != instance.n()) {
      throw Error(ErrorCode::DimensionMismatch, "initial vector has length " +
                                                    std::to_string(x.size()) + ", expected " +
                                                    std::to_string(instance.n()));
    }
    return io::snap_to_zero(std::move(x), flags.zero_tol);
  }
  throw Error(ErrorCode::InvalidInput, "unknown --init '" + init + "'");
}

}  // namespace

void add_solve_command(CLI::App& app, SolveFlags& flags) {
  CLI::App* cmd = app.add_subcommand("solve", "Solve one sGEP instance");
  add_instance_flags(*cmd, flags.instance);
  cmd->add_option("--solver", flags.solver, "Pipeline")
      ->check(CLI::IsMember({"tpm", "rifle", "pgsa-ml", "sa-tpm", "sa-rifle", "sa-pgsa-ml",
                             "oracle"}));
  cmd->add_option("--init", flags.init, "default | csv:<path> | seeded-random");
  cmd->add_option("--seed", flags.seed, "Seed for seeded-random init");
  cmd->add_option("--zero-tol", flags.zero_tol,
                  "Entries of a loaded init vector at or below this magnitude become 0")
      ->check(CLI::NonNegativeNumber);
  add_tuning_flags(*cmd, flags.tuning);
}

int run_solve(const SolveFlags& flags, std::ostream& out) {
  const SGepInstance<double> instance = load_instance(flags.instance);
  const SolveOptions options = flags.tuning.to_options();
  const SolverKind kind = *parse_solver(flags.solver);
  const auto x0 = initial_point(flags, instance);

  const SolveOutcome res = solve(instance, kind, x0, options);
  json report = {{"schema", kSchemaVersion},
                 {"solver", to_string(kind)},
                 {"n", instance.n()},
                 {"s", instance.s()},
                 {"objective", res.objective},
                 {"support", index_list_1based(res.support)},
                 {"vector", vector_json(res.vector)},
                 {"outer_iterations", res.outer_iterations},
                 {"gba_iterations_total", res.gba_iterations_total},
                 {"ss_trials", res.ss_trials},
                 {"best_alpha_calls", res.best_alpha_calls},
                 {"wall_time_ms", res.wall_time_ms},
                 {"seed", flags.seed},
                 {"init", flags.init},
                 {"config", flags.tuning.to_json()}};
  if (kind == SolverKind::Oracle) report["enumerated"] = res.enumerated;
  out << report.dump() << '\n';
  return kOk;
}

}  // namespace sgep::cli
