#include <algorithm>

#include "doctest.h"
#include "helpers.hpp"
#include "sgep/alteration.hpp"
#include "sgep/oracle.hpp"

using namespace sgep;
using namespace sgep::testing;

namespace {

// Coefficients of alpha -> R(y + alpha e_i) computed straight from the
// matrices: (p2 a^2 + 2 p1 a + p0) / (q2 a^2 + 2 q1 a + q0).
struct Line {
  double p2, p1, p0, q2, q1, q0;
  double at(double a) const { return (p2 * a * a + 2 * p1 * a + p0) / (q2 * a * a + 2 * q1 * a + q0); }
};

Line line_of(const Pair& p, const Vec& x, Index j, Index i) {
  Vec y = x;
  y(j) = 0.0;
  Line l{};
  l.p2 = p.a()(i, i);
  l.q2 = p.b()(i, i);
  for (Index k = 0; k < y.size(); ++k) {
    l.p1 += p.a()(i, k) * y(k);
    l.q1 += p.b()(i, k) * y(k);
    for (Index m = 0; m < y.size(); ++m) {
      l.p0 += y(k) * p.a()(k, m) * y(m);
      l.q0 += y(k) * p.b()(k, m) * y(m);
    }
  }
  return l;
}

double grid_max(const Line& l, double lo, double hi, long points) {
  double best = -1e300;
  for (long k = 0; k < points; ++k) {
    const double a = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
    if (a == 0.0 && l.p0 == 0.0 && l.q0 == 0.0) continue;
    best = std::max(best, l.at(a));
  }
  return best;
}

}  // namespace

TEST_SUITE("alteration") {

TEST_CASE("identity pair gives every alpha") {
  const Pair p = Pair::with_identity(diag({1, 1, 1}));
  const auto sol = best_alpha(p, vec({1, 0, 1}), 0, 1);
  CHECK(sol.kind == AlphaCase::AllReals);
  CHECK(sol.m_value == doctest::Approx(1.0));
  CHECK(sol.step() == 1.0);
}

TEST_CASE("removing the only support entry") {
  const Pair p(diag({3, 2, 1}), diag({1, 4, 1}));
  const auto sol = best_alpha(p, vec({0, 0, 7}), 2, 1);
  CHECK(sol.kind == AlphaCase::AllRealsExceptZero);
  CHECK(sol.m_value == doctest::Approx(0.5));
}

TEST_CASE("finite maximizer at the golden ratio") {
  Mat a(3, 3);
  a << 4, 1, 0, 1, 3, 2, 0, 2, 5;
  const Pair p = Pair::with_identity(a);
  const Vec x = vec({1, 0, 1});
  const auto sol = best_alpha(p, x, 0, 1);
  CHECK(sol.kind == AlphaCase::Finite);
  CHECK(sol.minors.d12 == doctest::Approx(-2.0));
  CHECK(sol.value == doctest::Approx((std::sqrt(5.0) - 1.0) / 2.0).epsilon(1e-12));
  CHECK(sol.m_value == doctest::Approx(4.0 + std::sqrt(5.0)).epsilon(1e-12));

  // Grid over [-10, 10] at step 1e-5.
  const Line l = line_of(p, x, 0, 1);
  double best = -1e300;
  double arg = 0;
  for (long k = 0; k <= 2'000'000; ++k) {
    const double alpha = -10.0 + 1e-5 * static_cast<double>(k);
    if (l.at(alpha) > best) {
      best = l.at(alpha);
      arg = alpha;
    }
  }
  CHECK(std::abs(arg - sol.value) <= 1e-5);
  CHECK(sol.m_value >= best - 1e-12);
  // Derivative numerator changes sign across the maximizer.
  auto numer = [&](double t) { return sol.minors.d12 * t * t + sol.minors.d13 * t + sol.minors.d23; };
  CHECK(numer(sol.value - 1e-3) * numer(sol.value + 1e-3) < 0);
}

TEST_CASE("best_alpha argument checks") {
  const Pair p = Pair::with_identity(diag({1, 2, 3}));
  auto code = [&](Index j, Index i, const Vec& x) {
    try {
      best_alpha(p, x, j, i);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidInput;
  };
  CHECK(code(0, 3, vec({1, 0, 0})) == ErrorCode::IndexOutOfRange);
  CHECK(code(-1, 1, vec({1, 0, 0})) == ErrorCode::IndexOutOfRange);
  CHECK(code(1, 1, vec({1, 0, 0})) == ErrorCode::IndexOutOfRange);
  CHECK(code(0, 2, vec({1, 0, 1})) == ErrorCode::IntoSupportNotZero);
  CHECK(code(0, 1, vec({0, 0, 0})) == ErrorCode::ZeroVector);
}

TEST_CASE("apply_swap branches") {
  AlphaSolution<double> finite;
  finite.kind = AlphaCase::Finite;
  finite.value = 3.0;
  CHECK(apply_swap(vec({5, 0}), 0, 1, finite) == vec({0, 3}));

  AlphaSolution<double> inf;
  inf.kind = AlphaCase::Infinite;
  CHECK(apply_swap(vec({0.1, 0, 5, 0}), 0, 1, inf) == vec({0, 1, 0, 0}));

  AlphaSolution<double> except_zero;
  except_zero.kind = AlphaCase::AllRealsExceptZero;
  CHECK(apply_swap(vec({2, 0}), 0, 1, except_zero) == vec({0, 1}));

  CHECK_THROWS_AS(apply_swap(vec({2, 1}), 0, 1, finite), Error);
}

TEST_CASE("greedy alteration on a diagonal pair") {
  const Pair p = Pair::with_identity(diag({3, 2, 1}));
  const auto res = greedy_sa(p, vec({0, 0, 1}), 1);
  CHECK(res.x == vec({1, 0, 0}));
  REQUIRE(res.plan.swaps.size() == 1);
  CHECK(res.plan.swaps[0].out == 2);
  CHECK(res.plan.swaps[0].in == 0);
  CHECK(res.plan.steps[0].kind == AlphaCase::AllRealsExceptZero);
  CHECK(exact_sgep(SGepInstance<double>(p, 1)).value == doctest::Approx(3.0));

  CHECK(greedy_sa(p, vec({0, 0, 1}), 0).x == vec({0, 0, 1}));
}

TEST_CASE("greedy alteration on the identity pair") {
  const Pair p = Pair::with_identity(diag({1, 1, 1, 1}));
  const Vec x = vec({0.5, 0, -2, 0});
  const auto res = greedy_sa(p, x, 1);
  // All scores tie; lexicographic (j, i) picks j = 0, i = 1.
  CHECK(res.plan.swaps[0].out == 0);
  CHECK(res.plan.swaps[0].in == 1);
  CHECK(l0_distance(res.x, x) == 2);
  CHECK(res.x(2) == -2.0);
  CHECK(rayleigh(p, res.x) == doctest::Approx(1.0));
}

TEST_CASE("partial alteration prefers the infinite branch") {
  const Pair p = Pair::with_identity(diag({1, 4, 3, 2}));
  const auto res = partial_sa(p, vec({0.1, 0, 5, 0}), 1);
  CHECK(res.x == vec({0, 1, 0, 0}));
  CHECK(res.plan.steps[0].kind == AlphaCase::Infinite);
  CHECK(res.plan.steps[0].m_value == doctest::Approx(4.0));
  CHECK(rayleigh(p, res.x) == doctest::Approx(4.0));
  CHECK(best_alpha(p, vec({0.1, 0, 5, 0}), 0, 3).kind == AlphaCase::Finite);
  CHECK(best_alpha(p, vec({0.1, 0, 5, 0}), 0, 3).value == doctest::Approx(0.0));
  CHECK(best_alpha(p, vec({0.1, 0, 5, 0}), 0, 3).m_value == doctest::Approx(3.0));
  CHECK(exact_sgep(SGepInstance<double>(p, 2)).value == doctest::Approx(4.0));
}

TEST_CASE("partial alteration call counts") {
  const Pair p = Pair::with_identity(diag({5, 4, 3, 2, 1}));
  const Vec x = vec({0, 1, 0, 2, 0});
  CHECK(partial_sa(p, x, 0).best_alpha_calls == 0);
  CHECK(partial_sa(p, x, 0).x == x);
  CHECK(partial_sa(p, x, 2).best_alpha_calls == 5);
  CHECK_THROWS_AS(partial_sa(p, x, 3), Error);
  CHECK_THROWS_AS(greedy_sa(p, x, -1), Error);
}

TEST_CASE("closed form beats a grid on random lines") {
  Rng rng(31);
  int finite = 0;
  int infinite = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const Index n = 3 + static_cast<Index>(rng.below(6));
    const Pair p = random_pair(n, rng);
    const Index k = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - 1)));
    const Vec x = truncate(gaussian(n, 1, rng).col(0).eval(), k);
    for (Index j : support(x)) {
      for (Index i : zero_set(x)) {
        const auto sol = best_alpha(p, x, j, i);
        const Line l = line_of(p, x, j, i);
        if (std::abs(sol.minors.d12) > 0) CHECK(sol.minors.discriminant > 0);
        const double grid = grid_max(l, -1e3, 1e3, 20001);
        CHECK(sol.m_value >= grid - 1e-9 * std::max(1.0, std::abs(sol.m_value)));
        if (sol.kind == AlphaCase::Finite) {
          ++finite;
          CHECK(close(l.at(sol.value), sol.m_value, 1e-12));
          const double d = sol.minors.d12 * sol.value * sol.value + sol.minors.d13 * sol.value +
                           sol.minors.d23;
          const double scale = std::abs(sol.minors.d12 * sol.value * sol.value) +
                               std::abs(sol.minors.d13 * sol.value) + std::abs(sol.minors.d23);
          CHECK(std::abs(d) <= 1e-6 * std::max(1e-300, scale));
        } else if (sol.kind == AlphaCase::Infinite) {
          ++infinite;
          CHECK(close(l.at(1e8), sol.m_value, 1e-6));
          CHECK(close(l.at(-1e8), sol.m_value, 1e-6));
        }
      }
    }
  }
  CHECK(finite > 0);
  (void)infinite;
}

TEST_CASE("alteration keeps feasibility") {
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 4 + static_cast<Index>(rng.below(10));
    const Pair p = random_pair(n, rng);
    const Index k = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - 1)));
    const Vec x = truncate(gaussian(n, 1, rng).col(0).eval(), k);
    const Index r_max = std::min(k, n - k);
    const Index r = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(r_max)));
    for (auto variant : {AlterationVariant::Partial, AlterationVariant::Greedy}) {
      const auto res = support_alteration(p, x, r, variant);
      CHECK(nnz(res.x) >= 1);
      CHECK(nnz(res.x) <= k);
      const IndexSet s = support(x);
      const IndexSet z = zero_set(x);
      for (const auto& sw : res.plan.swaps) {
        CHECK(std::find(s.begin(), s.end(), sw.out) != s.end());
        CHECK(std::find(z.begin(), z.end(), sw.in) != z.end());
      }
      if (nnz(res.x) == k) CHECK(l0_distance(res.x, x) == 2 * r);
      CHECK(l0_distance(res.x, x) <= 2 * r);
    }
  }
}

TEST_CASE("refreshed greedy scores still swap r pairs") {
  Rng rng(43);
  const Pair p = random_pair(8, rng);
  const Vec x = truncate(gaussian(8, 1, rng).col(0).eval(), 3);
  GreedyOptions opts;
  opts.refresh_scores = true;
  const auto res = greedy_sa(p, x, 3, opts);
  CHECK(res.plan.swaps.size() == 3);
  CHECK(res.plan.out_indices().size() == 3);
}

TEST_CASE("witness vector reaches the optimum") {
  Rng rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 8;
    const Index s = 3;
    const Pair p = random_pair(n, rng);
    const auto opt = exact_sgep(SGepInstance<double>(p, s));
    const IndexSet star = opt.support;
    // Keep a random sub-support of size 1..s-1, fill the rest with junk
    // outside the optimal support.
    const Index kept = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(s - 1)));
    const double scale = 0.5 + rng.uniform();
    Vec x = Vec::Zero(n);
    IndexSet keep(star.begin(), star.begin() + kept);
    for (Index t : keep) x(t) = scale * opt.vector(t);
    IndexSet outside;
    for (Index t = 0; t < n; ++t)
      if (std::find(star.begin(), star.end(), t) == star.end()) outside.push_back(t);
    for (Index q = 0; q < s - kept; ++q) x(outside[static_cast<std::size_t>(q)]) = rng.normal() + 3.0;
    REQUIRE(nnz(x) == s);

    Vec witness = x;
    for (Index t : support(x))
      if (std::find(keep.begin(), keep.end(), t) == keep.end()) witness(t) = 0.0;
    for (Index t : star)
      if (std::find(keep.begin(), keep.end(), t) == keep.end()) witness(t) = scale * opt.vector(t);

    const Index r = nnz(x) - kept;
    CHECK(l0_distance(witness, x) == 2 * r);
    for (Index t : keep) CHECK(witness(t) == x(t));
    CHECK(close(rayleigh(p, witness), opt.value, 1e-10));
  }
}

}
