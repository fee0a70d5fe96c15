#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sgep/cli.hpp"
#include "sgep/pipeline.hpp"

namespace sgep::cli {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// Where the (A, B) pair of a command comes from.
struct InstanceFlags {
  std::string matrix_a;
  std::string matrix_b;
  std::string dataset;
  std::optional<long long> sparsity;
};

/// Solver tunables shared by `solve` and `bench`.
struct TuningFlags {
  GbaConfig gba;
  std::optional<double> fixed_alpha;
  std::string sa_variant = "partial";
  std::optional<int> max_outer;
  std::optional<int> ss_gba_max_iter;
  bool refresh_scores = false;
  bool parallel_ss = false;
  std::uint64_t budget = kDefaultOracleBudget;

  SolveOptions to_options() const;
  json to_json() const;
};

void add_instance_flags(CLI::App& cmd, InstanceFlags& flags);
void add_tuning_flags(CLI::App& cmd, TuningFlags& flags);
SGepInstance<double> load_instance(const InstanceFlags& flags);

/// Seed default: $SGEP_SEED when set, else 0.
std::uint64_t default_seed();

json index_list_1based(const IndexSet& set);
json vector_json(const DenseVector<double>& v);

struct SolveFlags {
  InstanceFlags instance;
  TuningFlags tuning;
  std::string solver = "sa-pgsa-ml";
  std::string init = "default";
  std::uint64_t seed = 0;
  double zero_tol = 0.0;
};
void add_solve_command(CLI::App& app, SolveFlags& flags);
int run_solve(const SolveFlags& flags, std::ostream& out);

struct OracleFlags {
  InstanceFlags instance;
  std::uint64_t budget = kDefaultOracleBudget;
};
void add_oracle_command(CLI::App& app, OracleFlags& flags);
int run_oracle(const OracleFlags& flags, std::ostream& out);

struct GenFlags {
  std::string spec;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
};
void add_gen_command(CLI::App& app, GenFlags& flags);
int run_gen(const GenFlags& flags, std::ostream& out);

struct BenchFlags {
  std::string suite;
  TuningFlags tuning;
  std::uint64_t seed = 0;
  int trials = 0;
  std::optional<long long> n;
  std::optional<long long> m;
  std::optional<long long> s_true;
  std::string s_grid;
  std::string sigma_grid;
  std::string solvers;
  int max_s = 12;
  int jobs = 1;
  bool population = false;
  bool no_timing = false;
};
void add_bench_command(CLI::App& app, BenchFlags& flags);
int run_bench(const BenchFlags& flags, std::ostream& out);

}  // namespace sgep::cli
