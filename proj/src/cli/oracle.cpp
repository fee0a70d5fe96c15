#include "commands.hpp"

namespace sgep::cli {

void add_oracle_command(CLI::App& app, OracleFlags& flags) {
  CLI::App* cmd = app.add_subcommand("oracle", "Exact solve by support enumeration");
  add_instance_flags(*cmd, flags.instance);
  cmd->add_option("--budget", flags.budget, "Refuse when C(n, s) exceeds this");
}

int run_oracle(const OracleFlags& flags, std::ostream& out) {
  const SGepInstance<double> instance = load_instance(flags.instance);
  const OracleResult<double> res = exact_sgep(instance, flags.budget);
  json report = {{"schema", kSchemaVersion},
                 {"n", instance.n()},
                 {"s", instance.s()},
                 {"value", res.value},
                 {"objective", rayleigh(instance.pair(), res.vector)},
                 {"support", index_list_1based(res.support)},
                 {"vector", vector_json(res.vector)},
                 {"enumerated", res.enumerated},
                 {"budget", flags.budget}};
  out << report.dump() << '\n';
  return kOk;
}

}  // namespace sgep::cli
