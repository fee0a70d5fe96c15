#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <sstream>
#include <thread>

#include "commands.hpp"
#include "sgep/datagen.hpp"
#include "sgep/io.hpp"

namespace sgep::cli {

namespace {

struct Row {
  std::string suite;
  std::uint64_t seed = 0;
  std::string solver;
  Index n = 0;
  Index m = 0;
  Index s = 0;
  double sigma = 0.0;
  std::string metric;
  double value = 0.0;
  double wall_time_ms = 0.0;
};

// One unit of work: builds an instance and runs every solver on it.
using Task = std::function<std::vector<Row>()>;

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream cell(item);
    T value{};
    if (!(cell >> value) || !(cell >> std::ws).eof()) {
      throw Error(ErrorCode::InvalidInput, std::string("bad ") + what + " entry '" + item + "'");
    }
    out.push_back(value);
  }
  if (out.empty()) throw Error(ErrorCode::InvalidInput, std::string("empty ") + what);
  return out;
}

std::vector<SolverKind> parse_solvers(const std::string& text,
                                      std::vector<SolverKind> fallback) {
  if (text.empty()) return fallback;
  std::vector<SolverKind> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto kind = parse_solver(item);
    if (!kind) throw Error(ErrorCode::InvalidInput, "unknown solver '" + item + "'");
    out.push_back(*kind);
  }
  return out;
}

std::vector<Index> s_grid(const BenchFlags& flags, std::vector<Index> fallback) {
  return flags.s_grid.empty() ? fallback : parse_list<Index>(flags.s_grid, "--s-grid");
}

class Bench {
 public:
  explicit Bench(const BenchFlags& flags) : flags_(flags), options_(flags.tuning.to_options()) {}

  std::vector<Task> tasks() const {
    const std::string& suite = flags_.suite;
    if (suite == "pitprops") return pitprops();
    if (suite == "gaussian") return gaussian();
    if (suite == "spike") return spike();
    if (suite == "fda") return fda();
    if (suite == "cca") return cca();
    throw Error(ErrorCode::InvalidInput, "unknown suite '" + suite + "'");
  }

 private:
  Index n_or(Index fallback) const { return flags_.n ? static_cast<Index>(*flags_.n) : fallback; }
  Index m_or(Index fallback) const { return flags_.m ? static_cast<Index>(*flags_.m) : fallback; }
  int trials_or(int fallback) const { return flags_.trials > 0 ? flags_.trials : fallback; }

  Row base(std::uint64_t seed, SolverKind kind, Index n, Index m, Index s, double sigma) const {
    Row r;
    r.suite = flags_.suite;
    r.seed = seed;
    r.solver = to_string(kind);
    r.n = n;
    r.m = m;
    r.s = s;
    r.sigma = sigma;
    return r;
  }

  SolveOutcome run(const datagen::Pair& pair, Index s, SolverKind kind) const {
    return solve(SGepInstance<double>(pair, s), kind, std::nullopt, options_);
  }

  std::vector<Task> pitprops() const {
    std::vector<Index> fallback;
    for (Index s = 1; s <= flags_.max_s; ++s) fallback.push_back(s);
    const auto solvers = parse_solvers(flags_.solvers, {SolverKind::Tpm, SolverKind::SaTpm});
    std::vector<Task> out;
    for (Index s : s_grid(flags_, fallback)) {
      out.push_back([this, s, solvers] {
        const datagen::Pair pair = datagen::Pair::with_identity(datagen::pitprops());
        std::vector<Row> rows;
        for (SolverKind kind : solvers) {
          const SolveOutcome res = run(pair, s, kind);
          Row r = base(flags_.seed, kind, pair.n(), 180, s, 0.0);
          r.metric = "explained_variance";
          r.value = datagen::explained_variance_proportion(pair.a(), res.vector);
          r.wall_time_ms = res.wall_time_ms;
          rows.push_back(r);
        }
        return rows;
      });
    }
    return out;
  }

  std::vector<Task> gaussian() const {
    const Index n = n_or(50);
    const Index m = m_or(25);
    const auto solvers = parse_solvers(flags_.solvers, {SolverKind::Tpm, SolverKind::SaTpm});
    std::vector<Task> out;
    for (int t = 0; t < trials_or(10); ++t) {
      const std::uint64_t seed = flags_.seed + static_cast<std::uint64_t>(t);
      for (Index s : s_grid(flags_, {5, 10})) {
        out.push_back([this, seed, n, m, s, solvers] {
          const datagen::Pair pair = datagen::gaussian_cov(n, m, seed);
          std::vector<Row> rows;
          for (SolverKind kind : solvers) {
            const SolveOutcome res = run(pair, s, kind);
            Row r = base(seed, kind, n, m, s, 0.0);
            r.metric = "objective";
            r.value = res.objective;
            r.wall_time_ms = res.wall_time_ms;
            rows.push_back(r);
          }
          return rows;
        });
      }
    }
    return out;
  }

  std::vector<Task> spike() const {
    const Index n = n_or(500);
    const Index m = m_or(50);
    const Index s_true = flags_.s_true ? static_cast<Index>(*flags_.s_true) : 10;
    const auto sigmas = flags_.sigma_grid.empty()
                            ? std::vector<double>{0.0, 0.1, 0.2, 0.3, 0.4, 0.5}
                            : parse_list<double>(flags_.sigma_grid, "--sigma-grid");
    const auto solvers = parse_solvers(flags_.solvers, {SolverKind::Tpm, SolverKind::SaTpm});
    const bool population = flags_.population;
    std::vector<Task> out;
    for (int t = 0; t < trials_or(100); ++t) {
      const std::uint64_t seed = flags_.seed + static_cast<std::uint64_t>(t);
      for (double sigma : sigmas) {
        for (Index s : s_grid(flags_, {s_true})) {
          out.push_back([this, seed, n, m, s, s_true, sigma, solvers, population] {
            datagen::SpikeModelSpec spec;
            spec.n = n;
            spec.m = m;
            spec.s_true = s_true;
            spec.sigma = sigma;
            spec.seed = seed;
            datagen::SpikeModel model = datagen::spike_model(spec);
            // Population mode: covariance of the noisy data, Sigma + sigma^2 I.
            datagen::Matrix pop = model.population;
            pop.diagonal().array() += sigma * sigma;
            const datagen::Pair pair =
                population ? datagen::Pair::with_identity(pop) : model.pair;
            std::vector<Row> rows;
            for (SolverKind kind : solvers) {
              const SolveOutcome res = run(pair, s, kind);
              Row r = base(seed, kind, n, population ? 0 : m, s, sigma);
              r.metric = "recovery";
              r.value = datagen::recovery_rate(res.vector, model.truth, s);
              r.wall_time_ms = res.wall_time_ms;
              rows.push_back(r);
            }
            return rows;
          });
        }
      }
    }
    return out;
  }

  std::vector<Task> fda() const {
    const Index n = n_or(100);
    const Index m = m_or(500);
    const auto solvers =
        parse_solvers(flags_.solvers, {SolverKind::PgsaMl, SolverKind::SaPgsaMl});
    const bool population = flags_.population;
    std::vector<Task> out;
    for (int t = 0; t < trials_or(10); ++t) {
      const std::uint64_t seed = flags_.seed + static_cast<std::uint64_t>(t);
      for (Index s : s_grid(flags_, {10, 20})) {
        out.push_back([this, seed, n, m, s, solvers, population] {
          datagen::FdaSimulationSpec spec;
          spec.n = n;
          spec.m = m;
          spec.seed = seed;
          spec.population = population;
          const datagen::Pair pair = datagen::fda_simulation(spec);
          std::vector<Row> rows;
          for (SolverKind kind : solvers) {
            const SolveOutcome res = run(pair, s, kind);
            Row r = base(seed, kind, n, population ? 0 : m, s, 0.0);
            r.metric = "objective";
            r.value = res.objective;
            r.wall_time_ms = res.wall_time_ms;
            rows.push_back(r);
          }
          return rows;
        });
      }
    }
    return out;
  }

  std::vector<Task> cca() const {
    const Index n = n_or(100);
    const Index m = m_or(200);
    const auto solvers =
        parse_solvers(flags_.solvers, {SolverKind::PgsaMl, SolverKind::SaPgsaMl});
    const bool population = flags_.population;
    std::vector<Task> out;
    for (int t = 0; t < trials_or(10); ++t) {
      const std::uint64_t seed = flags_.seed + static_cast<std::uint64_t>(t);
      for (Index s : s_grid(flags_, {16})) {
        out.push_back([this, seed, n, m, s, solvers, population] {
          datagen::CcaSimulationSpec spec;
          spec.n = n;
          spec.m = m;
          spec.seed = seed;
          spec.population = population;
          const datagen::CcaModel model = datagen::cca_simulation(spec);
          std::vector<Row> rows;
          for (SolverKind kind : solvers) {
            const SolveOutcome res = run(model.pair, s, kind);
            Row r = base(seed, kind, n, population ? 0 : m, s, 0.0);
            r.metric = "objective";
            r.value = res.objective;
            r.wall_time_ms = res.wall_time_ms;
            rows.push_back(r);
            r.metric = "recovery";
            r.value = datagen::recovery_rate(res.vector, model.truth, s);
            rows.push_back(r);
          }
          return rows;
        });
      }
    }
    return out;
  }

  const BenchFlags& flags_;
  SolveOptions options_;
};

std::vector<std::vector<Row>> execute(const std::vector<Task>& tasks, int jobs) {
  std::vector<std::vector<Row>> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < tasks.size(); k = next++) {
      try {
        results[k] = tasks[k]();
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const auto threads = static_cast<std::size_t>(std::max(1, jobs));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(threads, tasks.size()); ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace

void add_bench_command(CLI::App& app, BenchFlags& flags) {
  CLI::App* cmd = app.add_subcommand("bench", "Run a benchmark suite, CSV on stdout");
  cmd->add_option("--suite", flags.suite, "pitprops | gaussian | spike | fda | cca")->required();
  cmd->add_option("--seed", flags.seed, "Base seed; trial t uses seed + t");
  cmd->add_option("--trials", flags.trials, "Trials per grid point (suite default when 0)");
  cmd->add_option("--n", flags.n, "Dimension");
  cmd->add_option("--m", flags.m, "Sample size");
  cmd->add_option("--s-true", flags.s_true, "Spike support size");
  cmd->add_option("--s-grid", flags.s_grid, "Comma-separated sparsity levels");
  cmd->add_option("--sigma-grid", flags.sigma_grid, "Comma-separated noise levels (spike)");
  cmd->add_option("--solvers", flags.solvers, "Comma-separated solver names");
  cmd->add_option("--max-s", flags.max_s, "Largest s of the pitprops sweep");
  cmd->add_option("--jobs,-j", flags.jobs, "Worker threads for independent trials")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--population", flags.population, "Use population matrices instead of samples");
  cmd->add_flag("--no-timing", flags.no_timing, "Print 0 in the wall_time_ms column");
  add_tuning_flags(*cmd, flags.tuning);
}

int run_bench(const BenchFlags& flags, std::ostream& out) {
  const Bench bench(flags);
  const std::vector<Task> tasks = bench.tasks();
  const auto results = execute(tasks, flags.jobs);

  out << "suite,seed,solver,n,m,s,sigma,metric,value,wall_time_ms\n";
  for (const auto& rows : results) {
    for (const Row& r : rows) {
      out << r.suite << ',' << r.seed << ',' << r.solver << ',' << r.n << ',' << r.m << ','
          << r.s << ',' << io::format_double(r.sigma) << ',' << r.metric << ','
          << io::format_double(r.value) << ','
          << io::format_double(flags.no_timing ? 0.0 : r.wall_time_ms) << '\n';
    }
  }
  return kOk;
}

}  // namespace sgep::cli
