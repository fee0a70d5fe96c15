#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "sgep/datagen.hpp"
#include "sgep/io.hpp"

namespace sgep::cli {

namespace fs = std::filesystem;

namespace {

json read_spec(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return json::parse(text);
  std::ifstream in(text);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open spec file '" + text + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return json::parse(buf.str());
}

template <typename T>
T field(const json& spec, const char* key, T fallback) {
  return spec.contains(key) ? spec.at(key).get<T>() : fallback;
}

struct Generated {
  datagen::Pair pair;
  std::optional<datagen::Vector> truth;
  // Spec with defaults filled in.
  json resolved;
};

Generated generate(const json& spec, std::uint64_t seed) {
  if (!spec.is_object() || !spec.contains("kind")) {
    throw Error(ErrorCode::InvalidInput, "spec must be a JSON object with a \"kind\" field");
  }
  const std::string kind = spec.at("kind").get<std::string>();
  json resolved = {{"kind", kind}, {"seed", seed}};

  if (kind == "gaussian") {
    const Index n = field<Index>(spec, "n", 100);
    const Index m = field<Index>(spec, "m", 50);
    resolved.update({{"n", n}, {"m", m}});
    return {datagen::gaussian_cov(n, m, seed), std::nullopt, resolved};
  }
  if (kind == "spike") {
    datagen::SpikeModelSpec s;
    s.n = field(spec, "n", s.n);
    s.m = field(spec, "m", s.m);
    s.s_true = field(spec, "s_true", s.s_true);
    s.sigma = field(spec, "sigma", s.sigma);
    s.lambda1 = field(spec, "lambda1", s.lambda1);
    s.seed = seed;
    const bool population = field(spec, "population", false);
    resolved.update({{"n", s.n}, {"m", s.m}, {"s_true", s.s_true}, {"sigma", s.sigma},
                     {"lambda1", s.lambda1}, {"population", population}});
    datagen::SpikeModel model = datagen::spike_model(s);
    datagen::Pair pair = population ? datagen::Pair::with_identity(model.population)
                                    : std::move(model.pair);
    return {std::move(pair), std::move(model.truth), resolved};
  }
  if (kind == "block") {
    datagen::BlockCovSpec s;
    s.n = field(spec, "n", s.n);
    s.blocks = field(spec, "blocks", s.blocks);
    s.rho = field(spec, "rho", s.rho);
    resolved.update({{"n", s.n}, {"blocks", s.blocks}, {"rho", s.rho}});
    return {datagen::Pair::with_identity(datagen::block_toeplitz_cov(s)), std::nullopt,
            resolved};
  }
  if (kind == "fda") {
    datagen::FdaSimulationSpec s;
    s.n = field(spec, "n", s.n);
    s.m = field(spec, "m", s.m);
    s.blocks = field(spec, "blocks", s.blocks);
    s.rho = field(spec, "rho", s.rho);
    s.population = field(spec, "population", s.population);
    s.seed = seed;
    resolved.update({{"n", s.n}, {"m", s.m}, {"blocks", s.blocks}, {"rho", s.rho},
                     {"population", s.population}});
    return {datagen::fda_simulation(s), std::nullopt, resolved};
  }
  if (kind == "cca") {
    datagen::CcaSimulationSpec s;
    s.n = field(spec, "n", s.n);
    s.m = field(spec, "m", s.m);
    s.sparsity_each = field(spec, "sparsity_each", s.sparsity_each);
    s.lambda1 = field(spec, "lambda1", s.lambda1);
    s.blocks = field(spec, "blocks", s.blocks);
    s.rho = field(spec, "rho", s.rho);
    s.population = field(spec, "population", s.population);
    s.seed = seed;
    resolved.update({{"n", s.n}, {"m", s.m}, {"sparsity_each", s.sparsity_each},
                     {"lambda1", s.lambda1}, {"blocks", s.blocks}, {"rho", s.rho},
                     {"population", s.population}});
    datagen::CcaModel model = datagen::cca_simulation(s);
    return {std::move(model.pair), std::move(model.truth), resolved};
  }
  if (kind == "pitprops") {
    return {datagen::Pair::with_identity(datagen::pitprops()), std::nullopt, resolved};
  }
  throw Error(ErrorCode::InvalidInput, "unknown spec kind '" + kind + "'");
}

}  // namespace

void add_gen_command(CLI::App& app, GenFlags& flags) {
  CLI::App* cmd = app.add_subcommand("gen", "Write a generated (A, B) pair as CSV");
  cmd->add_option("--spec", flags.spec, "Spec JSON file, or inline JSON")->required();
  cmd->add_option("--out-dir", flags.out_dir, "Output directory");
  cmd->add_option("--seed", flags.seed, "Seed (a \"seed\" field in the spec wins)");
}

int run_gen(const GenFlags& flags, std::ostream& out) {
  const json spec = read_spec(flags.spec);
  const std::uint64_t seed =
      spec.is_object() && spec.contains("seed") ? spec.at("seed").get<std::uint64_t>() : flags.seed;
  const Generated gen = generate(spec, seed);

  const fs::path dir(flags.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::InvalidInput, "cannot create '" + flags.out_dir + "'");

  json files = {{"a", (dir / "a.csv").string()}, {"b", (dir / "b.csv").string()}};
  io::write_matrix_csv((dir / "a.csv").string(), gen.pair.a());
  io::write_matrix_csv((dir / "b.csv").string(), gen.pair.b());
  if (gen.truth) {
    io::write_vector_csv((dir / "truth.csv").string(), *gen.truth);
    files["truth"] = (dir / "truth.csv").string();
  }
  json sidecar = {{"schema", kSchemaVersion}, {"spec", gen.resolved}, {"files", files}};
  {
    std::ofstream meta(dir / "spec.json");
    if (!meta) throw Error(ErrorCode::InvalidInput, "cannot write spec.json");
    meta << sidecar.dump(2) << '\n';
  }
  out << sidecar.dump() << '\n';
  return kOk;
}

}  // namespace sgep::cli
