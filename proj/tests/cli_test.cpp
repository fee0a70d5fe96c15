#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"
#include "sgep/cli.hpp"
#include "sgep/datagen.hpp"
#include "sgep/io.hpp"
#include "sgep/oracle.hpp"

using namespace sgep;
using namespace sgep::testing;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  json report() const { return json::parse(out); }
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sgep");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("sgep_cli_test_" + std::to_string(++counter));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Rows of a bench CSV keyed by column name.
std::vector<std::map<std::string, std::string>> parse_rows(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  {
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) header.push_back(cell);
  }
  std::vector<std::map<std::string, std::string>> rows;
  while (std::getline(in, line)) {
    std::stringstream ls(line);
    std::string cell;
    std::map<std::string, std::string> row;
    for (const auto& h : header) {
      std::getline(ls, cell, ',');
      row[h] = cell;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("solve a diagonal instance") {
  TempDir dir;
  io::write_matrix_csv(dir.file("a.csv"), diag({3, 2, 1}));
  io::write_vector_csv(dir.file("x0.csv"), vec({0, 0, 1}));
  for (const std::string& init : std::vector<std::string>{"default", "csv:" + dir.file("x0.csv")}) {
    const Result r = run_cli({"solve", "--matrix-a", dir.file("a.csv"), "--sparsity", "1",
                              "--solver", "sa-tpm", "--init", init});
    REQUIRE(r.code == 0);
    const json rep = r.report();
    CHECK(rep["schema"] == 1);
    CHECK(rep["objective"].get<double>() == doctest::Approx(3.0));
    CHECK(rep["support"] == json::array({1}));
    CHECK(rep["solver"] == "sa-tpm");
  }
}

TEST_CASE("unconstrained solve matches the oracle") {
  TempDir dir;
  Rng rng(5);
  const Pair p = random_pair(5, rng);
  io::write_matrix_csv(dir.file("a.csv"), p.a());
  io::write_matrix_csv(dir.file("b.csv"), p.b());
  const Result g = run_cli({"solve", "--matrix-a", dir.file("a.csv"), "--matrix-b",
                            dir.file("b.csv"), "--sparsity", "5", "--solver", "pgsa-ml"});
  const Result o = run_cli({"solve", "--matrix-a", dir.file("a.csv"), "--matrix-b",
                            dir.file("b.csv"), "--sparsity", "5", "--solver", "oracle"});
  REQUIRE(g.code == 0);
  REQUIRE(o.code == 0);
  CHECK(std::abs(g.report()["objective"].get<double>() - o.report()["objective"].get<double>()) <=
        1e-8);
}

TEST_CASE("reports round trip") {
  TempDir dir;
  Rng rng(6);
  const Pair p = random_pair(7, rng);
  io::write_matrix_csv(dir.file("a.csv"), p.a());
  io::write_matrix_csv(dir.file("b.csv"), p.b());
  for (const char* solver : {"pgsa-ml", "rifle", "sa-pgsa-ml", "sa-rifle", "oracle"}) {
    const Result r = run_cli({"solve", "--matrix-a", dir.file("a.csv"), "--matrix-b",
                              dir.file("b.csv"), "-s", "3", "--solver", solver});
    REQUIRE(r.code == 0);
    const json rep = r.report();
    const Pair reread(io::read_matrix_csv(dir.file("a.csv")), io::read_matrix_csv(dir.file("b.csv")));
    Vec x(7);
    for (Index i = 0; i < 7; ++i) x(i) = rep["vector"][static_cast<std::size_t>(i)].get<double>();
    CHECK(close(rayleigh(reread, x), rep["objective"].get<double>(), 1e-10));
    CHECK(rep["support"].size() <= 3);
  }
}

TEST_CASE("seeded random init is reproducible") {
  TempDir dir;
  Rng rng(7);
  io::write_matrix_csv(dir.file("a.csv"), random_psd(8, 8, rng));
  const std::vector<std::string> args{"solve", "--matrix-a", dir.file("a.csv"), "-s", "3",
                                      "--solver", "tpm", "--init", "seeded-random", "--seed", "9"};
  const json a = run_cli(args).report();
  const json b = run_cli(args).report();
  CHECK(a["vector"] == b["vector"]);
  CHECK(a["seed"] == 9);

  setenv("SGEP_SEED", "9", 1);
  const json c = run_cli({"solve", "--matrix-a", dir.file("a.csv"), "-s", "3", "--solver", "tpm",
                          "--init", "seeded-random"})
                     .report();
  unsetenv("SGEP_SEED");
  CHECK(c["vector"] == a["vector"]);
}

TEST_CASE("exit codes") {
  TempDir dir;
  io::write_matrix_csv(dir.file("a.csv"), diag({3, 2, 1}));
  io::write_matrix_csv(dir.file("b.csv"), diag({1, 2, 1}));
  io::write_vector_csv(dir.file("zero.csv"), vec({0, 0, 0}));
  Mat asym = diag({1, 1, 1});
  asym(0, 1) = 0.3;
  io::write_matrix_csv(dir.file("asym.csv"), asym);

  Result r = run_cli({"solve", "--matrix-a", dir.file("a.csv")});
  CHECK(r.code == 2);
  CHECK(r.report()["schema"] == 1);
  CHECK(r.report().contains("error"));

  CHECK(run_cli({"solve", "--matrix-a", dir.file("a.csv"), "-s", "4"}).code == 2);
  CHECK(run_cli({"solve", "--matrix-a", dir.file("asym.csv"), "-s", "1"}).code == 2);
  CHECK(run_cli({"solve", "--matrix-a", dir.file("missing.csv"), "-s", "1"}).code == 2);
  CHECK(run_cli({"solve", "--matrix-a", dir.file("a.csv"), "-s", "1", "--solver", "nope"}).code ==
        2);
  CHECK(run_cli({"solve", "--matrix-a", dir.file("a.csv"), "-s", "1", "--eta", "2"}).code == 2);
  CHECK(run_cli({"solve"}).code == 2);
  CHECK(run_cli({}).code == 2);

  r = run_cli({"solve", "--matrix-a", dir.file("a.csv"), "-s", "1", "--init",
               "csv:" + dir.file("zero.csv")});
  CHECK(r.code == 3);
  CHECK(r.report()["error"] == "BadInitialPoint");
  CHECK(run_cli({"solve", "--matrix-a", dir.file("a.csv"), "--matrix-b", dir.file("b.csv"), "-s",
                 "1", "--solver", "tpm"})
            .code == 3);

  r = run_cli({"oracle", "--dataset", "pitprops", "-s", "6", "--budget", "100"});
  CHECK(r.code == 4);
  CHECK(r.report()["error"] == "BudgetExceeded");

  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("oracle command on pitprops") {
  const Result r = run_cli({"oracle", "--dataset", "pitprops", "--sparsity", "3"});
  REQUIRE(r.code == 0);
  const json rep = r.report();
  CHECK(rep["enumerated"] == 286);
  CHECK(rep["support"].size() == 3);
}

TEST_CASE("gen is deterministic and validates") {
  TempDir a;
  TempDir b;
  const std::string spec = R"({"kind":"spike","n":20,"m":15,"s_true":4,"sigma":0.1})";
  REQUIRE(run_cli({"gen", "--spec", spec, "--out-dir", a.path.string(), "--seed", "5"}).code == 0);
  REQUIRE(run_cli({"gen", "--spec", spec, "--out-dir", b.path.string(), "--seed", "5"}).code == 0);
  for (const char* f : {"a.csv", "b.csv", "truth.csv"}) CHECK(slurp(a.file(f)) == slurp(b.file(f)));
  const json sidecar = json::parse(slurp(a.file("spec.json")));
  CHECK(sidecar["spec"]["seed"] == 5);
  CHECK(sidecar["spec"]["lambda1"] == 15.0);

  // Spec from a file, then the generated pair feeds solve.
  std::ofstream(a.file("spec_in.json")) << R"({"kind":"block","n":12,"blocks":3,"seed":1})";
  TempDir c;
  REQUIRE(run_cli({"gen", "--spec", a.file("spec_in.json"), "--out-dir", c.path.string()}).code == 0);
  CHECK(run_cli({"solve", "--matrix-a", c.file("a.csv"), "--matrix-b", c.file("b.csv"), "-s", "2"})
            .code == 0);

  CHECK(run_cli({"gen", "--spec", R"({"kind":"block","n":10,"blocks":3})", "--out-dir",
                 c.path.string()})
            .code == 2);
  CHECK(run_cli({"gen", "--spec", R"({"kind":"nope"})", "--out-dir", c.path.string()}).code == 2);
  CHECK(run_cli({"gen", "--spec", R"({"kind":"spike","n":"x"})", "--out-dir", c.path.string()})
            .code == 2);
  CHECK(run_cli({"gen", "--spec", "{not json", "--out-dir", c.path.string()}).code == 2);
}

TEST_CASE("bench pitprops extended sweep") {
  const Result r = run_cli({"bench", "--suite", "pitprops", "--s-grid", "12,13", "--no-timing"});
  REQUIRE(r.code == 0);
  const auto rows = parse_rows(r.out);
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) {
    CHECK(row.at("metric") == "explained_variance");
    CHECK(row.at("wall_time_ms") == "0");
    if (row.at("s") == "13") CHECK(std::abs(std::stod(row.at("value")) - 1.0) <= 1e-10);
  }
}

TEST_CASE("bench spike population recovery") {
  const Result r = run_cli({"bench", "--suite", "spike", "--n", "30", "--s-true", "5",
                            "--sigma-grid", "0", "--trials", "3", "--population", "--solvers",
                            "sa-tpm,oracle"});
  REQUIRE(r.code == 0);
  const auto rows = parse_rows(r.out);
  REQUIRE(rows.size() == 6);
  for (const auto& row : rows) CHECK(std::stod(row.at("value")) == 1.0);
}

TEST_CASE("bench gaussian dominance and reruns") {
  const std::vector<std::string> args{"bench", "--suite", "gaussian", "--n", "20", "--m", "10",
                                      "--s-grid", "3,6", "--trials", "4", "--no-timing"};
  const Result r = run_cli(args);
  REQUIRE(r.code == 0);
  const auto rows = parse_rows(r.out);
  REQUIRE(rows.size() == 16);
  for (std::size_t k = 0; k + 1 < rows.size(); k += 2) {
    REQUIRE(rows[k].at("solver") == "tpm");
    REQUIRE(rows[k + 1].at("solver") == "sa-tpm");
    CHECK(std::stod(rows[k + 1].at("value")) >= std::stod(rows[k].at("value")));
  }
  CHECK(run_cli(args).out == r.out);
  auto threaded = args;
  threaded.push_back("--jobs");
  threaded.push_back("3");
  CHECK(run_cli(threaded).out == r.out);
}

TEST_CASE("bench other suites") {
  const Result fda = run_cli({"bench", "--suite", "fda", "--n", "20", "--m", "30", "--s-grid",
                              "4", "--trials", "1"});
  REQUIRE(fda.code == 0);
  CHECK(parse_rows(fda.out).size() == 2);
  const Result cca = run_cli({"bench", "--suite", "cca", "--n", "20", "--m", "50", "--s-grid",
                              "4", "--trials", "1"});
  REQUIRE(cca.code == 0);
  CHECK(parse_rows(cca.out).size() == 4);
  CHECK(run_cli({"bench", "--suite", "nope"}).code == 2);
  CHECK(run_cli({"bench", "--suite", "gaussian", "--s-grid", "a"}).code == 2);
}

}
