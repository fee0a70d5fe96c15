#include "sgep/cli.hpp"

#include <cstdlib>
#include <string>

#include "commands.hpp"
#include "sgep/datagen.hpp"
#include "sgep/io.hpp"

namespace sgep::cli {

namespace {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::BudgetExceeded: return kBudgetExceeded;
    case ErrorCode::BadInitialPoint:
    case ErrorCode::NotIdentityB:
    case ErrorCode::InvalidStep:
    case ErrorCode::DegenerateIterate:
    case ErrorCode::InvalidR:
    case ErrorCode::IntoSupportNotZero:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::NotPositiveDefinite: return kSolverPrecondition;
    default: return kUsage;
  }
}

void print_error(std::ostream& out, const std::string& kind, const std::string& message,
                 int code) {
  json err = {{"schema", kSchemaVersion}, {"error", kind}, {"message", message},
              {"exit_code", code}};
  out << err.dump() << '\n';
}

}  // namespace

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SGEP_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidInput, "SGEP_SEED is not an unsigned integer");
    }
  }
  return 0;
}

json index_list_1based(const IndexSet& set) {
  json out = json::array();
  for (Index i : set) out.push_back(i + 1);
  return out;
}

json vector_json(const DenseVector<double>& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

void add_instance_flags(CLI::App& cmd, InstanceFlags& flags) {
  cmd.add_option("--matrix-a", flags.matrix_a, "CSV file holding A");
  cmd.add_option("--matrix-b", flags.matrix_b, "CSV file holding B (default: identity)");
  cmd.add_option("--dataset", flags.dataset, "Built-in matrix used as A (pitprops)");
  cmd.add_option("--sparsity,-s", flags.sparsity, "Sparsity budget s")->required();
}

void add_tuning_flags(CLI::App& cmd, TuningFlags& flags) {
  GbaConfig& g = flags.gba;
  cmd.add_option("--a", g.a, "Line-search strength a >= 0");
  cmd.add_option("--eta", g.eta, "Backtracking factor in (0,1)");
  cmd.add_option("--alpha-lo", g.alpha_lo, "Lower step bound");
  cmd.add_option("--alpha-hi", g.alpha_hi, "Upper step bound");
  cmd.add_option("--fixed-alpha", flags.fixed_alpha, "Fixed initial PGSA_ML step");
  cmd.add_option("--rifle-alpha", g.rifle_alpha, "Fixed rifle step (0 = 1/(4||B||^2))");
  cmd.add_option("--tol", g.tol, "Relative objective-change tolerance");
  cmd.add_option("--max-iter", g.max_iter, "Stage-1 iteration cap");
  cmd.add_option("--alpha-abort", g.alpha_abort, "Smallest backtracked step");
  cmd.add_option("--sa-variant", flags.sa_variant, "Support alteration: partial|greedy")
      ->check(CLI::IsMember({"partial", "greedy"}));
  cmd.add_option("--max-outer", flags.max_outer, "Cap on Stage-1 rounds (default s+1)");
  cmd.add_option("--ss-gba-max-iter", flags.ss_gba_max_iter,
                 "Iteration cap for re-solves inside the step-size search");
  cmd.add_flag("--refresh-scores", flags.refresh_scores,
               "Greedy alteration: rescore pairs every round");
  cmd.add_flag("--parallel-ss", flags.parallel_ss, "Evaluate step-size candidates concurrently");
  cmd.add_option("--budget", flags.budget, "Oracle enumeration budget");
}

SolveOptions TuningFlags::to_options() const {
  SolveOptions opts;
  opts.driver.gba = gba;
  opts.driver.gba.fixed_alpha = fixed_alpha;
  opts.driver.sa_variant =
      sa_variant == "greedy" ? AlterationVariant::Greedy : AlterationVariant::Partial;
  opts.driver.max_outer = max_outer;
  opts.driver.ss_gba_max_iter = ss_gba_max_iter;
  opts.driver.greedy.refresh_scores = refresh_scores;
  opts.driver.parallel_ss = parallel_ss;
  opts.oracle_budget = budget;
  validate(opts.driver.gba);
  return opts;
}

json TuningFlags::to_json() const {
  json cfg = {{"a", gba.a},
              {"eta", gba.eta},
              {"alpha_lo", gba.alpha_lo},
              {"alpha_hi", gba.alpha_hi},
              {"rifle_alpha", gba.rifle_alpha},
              {"tol", gba.tol},
              {"max_iter", gba.max_iter},
              {"alpha_abort", gba.alpha_abort},
              {"sa_variant", sa_variant},
              {"refresh_scores", refresh_scores},
              {"parallel_ss", parallel_ss},
              {"budget", budget}};
  cfg["fixed_alpha"] = fixed_alpha ? json(*fixed_alpha) : json(nullptr);
  cfg["max_outer"] = max_outer ? json(*max_outer) : json(nullptr);
  cfg["ss_gba_max_iter"] = ss_gba_max_iter ? json(*ss_gba_max_iter) : json(nullptr);
  return cfg;
}

SGepInstance<double> load_instance(const InstanceFlags& flags) {
  if (flags.matrix_a.empty() == flags.dataset.empty()) {
    throw Error(ErrorCode::InvalidInput, "give exactly one of --matrix-a or --dataset");
  }
  DenseMatrix<double> a;
  if (!flags.dataset.empty()) {
    if (flags.dataset != "pitprops") {
      throw Error(ErrorCode::InvalidInput, "unknown dataset '" + flags.dataset + "'");
    }
    a = datagen::pitprops();
  } else {
    a = io::read_matrix_csv(flags.matrix_a);
  }
  DenseMatrix<double> b = flags.matrix_b.empty()
                              ? DenseMatrix<double>::Identity(a.rows(), a.rows())
                              : io::read_matrix_csv(flags.matrix_b);
  return SGepInstance<double>(MatrixPair<double>(std::move(a), std::move(b)),
                              static_cast<Index>(*flags.sparsity));
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse generalized eigenvalue problem solver", "sgep"};
  app.require_subcommand(1);

  SolveFlags solve_flags;
  OracleFlags oracle_flags;
  GenFlags gen_flags;
  BenchFlags bench_flags;

  try {
    const std::uint64_t seed = default_seed();
    solve_flags.seed = seed;
    gen_flags.seed = seed;
    bench_flags.seed = seed;
  } catch (const Error& e) {
    print_error(out, to_string(e.code()), e.what(), kUsage);
    return kUsage;
  }

  add_solve_command(app, solve_flags);
  add_oracle_command(app, oracle_flags);
  add_gen_command(app, gen_flags);
  add_bench_command(app, bench_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    print_error(out, "UsageError", e.what(), kUsage);
    return kUsage;
  }

  try {
    if (app.got_subcommand("solve")) return run_solve(solve_flags, out);
    if (app.got_subcommand("oracle")) return run_oracle(oracle_flags, out);
    if (app.got_subcommand("gen")) return run_gen(gen_flags, out);
    if (app.got_subcommand("bench")) return run_bench(bench_flags, out);
  } catch (const Error& e) {
    const int code = exit_code_for(e.code());
    print_error(out, to_string(e.code()), e.what(), code);
    return code;
  } catch (const json::exception& e) {
    print_error(out, "InvalidInput", e.what(), kUsage);
    return kUsage;
  }
  return kUsage;
}

}  // namespace sgep::cli
