#include "doctest.h"
#include "helpers.hpp"
#include "sgep/driver.hpp"
#include "sgep/oracle.hpp"

using namespace sgep;
using namespace sgep::testing;

namespace {

DriverConfig tpm_config() {
  DriverConfig cfg;
  cfg.gba.variant = GbaVariant::Tpm;
  return cfg;
}

}  // namespace

TEST_SUITE("driver") {

TEST_CASE("step size search on a diagonal pair") {
  const SGepInstance<double> inst(Pair::with_identity(diag({3, 2, 1})), 1);
  for (const DriverConfig& cfg : {DriverConfig{}, tpm_config()}) {
    CHECK(select_step_size(inst, SparseIterate<double>(vec({0, 0, 1})), 1, cfg) == 1);
    CHECK(select_step_size(inst, SparseIterate<double>(vec({1, 0, 0})), 1, cfg) == 0);
    CHECK(select_step_size(inst, SparseIterate<double>(vec({0, 0, 1})), 0, cfg) == 0);
  }
  const auto detailed =
      select_step_size_detailed(inst, SparseIterate<double>(vec({0, 0, 1})), 1, DriverConfig{});
  REQUIRE(detailed.winner);
  CHECK(detailed.winner->objective() == doctest::Approx(3.0));
  CHECK_THROWS_AS(select_step_size(inst, SparseIterate<double>(vec({0, 0, 1})), 2, DriverConfig{}),
                  Error);
}

TEST_CASE("outer loop from the worst coordinate") {
  const SGepInstance<double> inst(Pair::with_identity(diag({3, 2, 1})), 1);
  for (const DriverConfig& cfg : {DriverConfig{}, tpm_config()}) {
    const auto tr = sa_gba(inst, std::optional<Vec>(vec({0, 0, 1})), cfg);
    REQUIRE(tr.records.size() == 2);
    CHECK(tr.records[0].objective == doctest::Approx(1.0));
    CHECK(tr.records[1].objective == doctest::Approx(3.0));
    CHECK(tr.records[1].r == 0);
    CHECK(std::abs(tr.final.vector()(0)) == doctest::Approx(1.0));
    CHECK(tr.completed_iterations() == 1);
  }
}

TEST_CASE("outer loop without sparsity pressure") {
  const SGepInstance<double> inst(Pair::with_identity(diag({3, 2, 1})), 3);
  const auto tr = sa_gba(inst, std::nullopt, DriverConfig{});
  CHECK(tr.objective() == doctest::Approx(3.0));
}

TEST_CASE("outer loop dominates plain stage one") {
  Rng rng(7);
  const Pair p = random_pair(12, rng);
  const SGepInstance<double> inst(p, 3);
  const Vec x0 = default_initial_point(p);
  const double plain = pgsa_ml(inst, x0, GbaConfig{}).objective();
  const auto tr = sa_gba(inst, std::optional<Vec>(x0), DriverConfig{});
  CHECK(tr.objective() >= plain);
  CHECK(tr.objective() <= exact_sgep(inst).value + 1e-8);
}

TEST_CASE("outer iterates ascend, shrink r and stay feasible") {
  Rng rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    const Index n = 6 + static_cast<Index>(rng.below(8));
    const Index s = 1 + static_cast<Index>(rng.below(4));
    const bool identity = trial % 2 == 0;
    const Pair p = identity ? Pair::with_identity(random_psd(n, n, rng)) : random_pair(n, rng);
    const SGepInstance<double> inst(p, s);
    DriverConfig cfg = identity ? tpm_config() : DriverConfig{};
    cfg.sa_variant = trial % 3 == 0 ? AlterationVariant::Greedy : AlterationVariant::Partial;
    const auto tr = sa_gba(inst, std::nullopt, cfg);

    CHECK(tr.completed_iterations() <= s);
    CHECK(static_cast<Index>(tr.records.size()) <= s + 1);
    for (std::size_t t = 1; t < tr.records.size(); ++t) {
      const double prev = tr.records[t - 1].objective;
      CHECK(tr.records[t].objective > prev + kStrictImprovement * std::max(1.0, prev));
      if (t >= 2 && tr.records[t - 1].r > 0) {
        CHECK(tr.records[t - 1].r <= tr.records[t - 2].r - 1);
      }
    }
    CHECK(tr.final.nnz() <= s);
    CHECK(std::abs(tr.final.vector().norm() - 1.0) <= 1e-12);

    const double stage1 = run_gba(inst, default_initial_point(p), cfg.gba).objective();
    CHECK(tr.objective() >= stage1);
  }
}

TEST_CASE("parallel step size search agrees with the sequential one") {
  Rng rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    const Pair p = random_pair(10, rng);
    const SGepInstance<double> inst(p, 4);
    DriverConfig seq;
    DriverConfig par;
    par.parallel_ss = true;
    const auto a = sa_gba(inst, std::nullopt, seq);
    const auto b = sa_gba(inst, std::nullopt, par);
    CHECK(a.final.vector() == b.final.vector());
    CHECK(a.records.size() == b.records.size());
  }
}

TEST_CASE("round cap") {
  const SGepInstance<double> inst(Pair::with_identity(diag({3, 2, 1})), 1);
  DriverConfig cfg;
  cfg.max_outer = 1;
  const auto tr = sa_gba(inst, std::optional<Vec>(vec({0, 0, 1})), cfg);
  CHECK(tr.records.size() == 1);
  CHECK(tr.objective() == doctest::Approx(1.0));
  cfg.max_outer = 0;
  CHECK_THROWS_AS(sa_gba(inst, std::nullopt, cfg), Error);
}

}
