#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "driftbound/chains.hpp"
#include "driftbound/core.hpp"
#include "driftbound/exact_sum.hpp"
#include "driftbound/rng.hpp"
#include "golden.hpp"

using namespace driftbound;

TEST_CASE("mix64 reference vector") {
  CHECK(derive_stream(0, 0) == golden::kMixGamma);
  CHECK(mix64(kGoldenGamma) == golden::kMixGamma);
  static_assert(derive_stream(0, 0) == 0xE220A8397B1DCDAFull);
}

TEST_CASE("derive_stream is deterministic and injective on small index sets") {
  for (std::uint64_t s : {0ull, 1ull, 42ull, 0xFFFFFFFFFFFFFFFFull}) {
    CHECK(derive_stream(s, 0) != derive_stream(s, 1));
    CHECK(derive_stream(s, 7) == derive_stream(s, 7));
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(derive_stream(s, i));
    CHECK(seen.size() == 10000);
  }
}

TEST_CASE("rng uniforms stay in range and look uniform") {
  Rng rng(derive_stream(123, 4));
  double sum = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    const double v = rng.uniform_pos();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    REQUIRE(v > 0.0);
    REQUIRE(v <= 1.0);
    sum += u;
  }
  CHECK(std::fabs(sum / n - 0.5) < 4 * std::sqrt(1.0 / 12.0 / n));
}

TEST_CASE("rng replays bit for bit") {
  Rng a(RngContract{99, 3}.stream());
  Rng b(derive_stream(99, 3));
  for (int i = 0; i < 1000; ++i) CHECK(a() == b());
}

TEST_CASE("exact sum is order independent") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> mant(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(-60, 60);
  std::vector<double> xs;
  for (int i = 0; i < 5000; ++i) xs.push_back(std::ldexp(mant(gen), expo(gen)));
  ExactSum fwd;
  for (double x : xs) fwd.add(x);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(xs.begin(), xs.end(), gen);
    ExactSum a, b;
    for (std::size_t i = 0; i < xs.size(); ++i) (i % 3 ? a : b).add(xs[i]);
    a.merge(b);
    CHECK(a.value() == fwd.value());
  }
}

TEST_CASE("exact sum cancels catastrophically ill-conditioned sums") {
  ExactSum s;
  s.add(1e100);
  s.add(1.0);
  s.add(-1e100);
  CHECK(s.value() == 1.0);
  ExactSum t;
  for (int i = 0; i < 10; ++i) t.add(0.1);
  CHECK(t.value() == 1.0);
}

TEST_CASE("validate_params reports violations") {
  CHECK(validate_params({1, 0, 3, 1, 1}).empty());
  CHECK(theorem1_applicable({1, 0, 3, 1, 1}));
  auto bad = validate_params({1, 0, 3, 1, 2});
  REQUIRE(bad.size() == 1);
  CHECK(bad[0] == "r ≥ p−1");
  bad = validate_params({1, 0, 2, 4, 0.5});
  REQUIRE(!bad.empty());
  CHECK(bad[0] == "p ≤ 2");
  CHECK_FALSE(theorem1_applicable({1, 0, 2, 4, 0.5}));
  CHECK(join_violations(validate_params({0, 0, 3, -1, 1})) == "a ≤ 0; V ≤ 0");
}

TEST_CASE("check_invariants accepts diagnostic orders above one") {
  CHECK(check_invariants({1, 0, 1.5, 1, 1}).empty());
  CHECK(check_invariants({1, 0, 1.0, 1, 1}).size() == 1);
  CHECK(check_invariants({-1, 0, 3, 0, 0}).size() == 3);
}

TEST_CASE("trajectory increments") {
  Trajectory t;
  t.values = {0, 2, 1, 5};
  CHECK(t.horizon() == 3);
  CHECK(t.increment(0) == 2);
  CHECK(t.increment(2) == 4);
  CHECK_THROWS(t.increment(3));
}

namespace {

std::vector<std::pair<std::string, Kernel>> shipped_kernels() {
  return {{"sudan", build_sudan()},
          {"amassed-2", build_amassed(2)},
          {"amassed-50", build_amassed(50)},
          {"amassed-concat", build_amassed_concat({5, 10, 20})},
          {"reset-0.5", build_reset_walk(0.5)},
          {"reset-0.01", build_reset_walk(0.01)},
          {"positive-0.3", build_positive_part_walk(0.3)},
          {"positive-2.5", build_positive_part_walk(2.5)},
          {"identity", build_identity(3)},
          {"two-point-3", theorem4_martingale().kernel()},
          {"two-point-7", lemma8_martingale().kernel()},
          {"fair", fair_walk().kernel()}};
}

}  // namespace

TEST_CASE("kernel rows are probability vectors") {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<std::int64_t> time(0, 5000);
  std::uniform_int_distribution<std::int64_t> state(-20, 20000);
  Row row;
  for (const auto& [name, k] : shipped_kernels()) {
    CAPTURE(name);
    double worst = 0;
    bool nonneg = true;
    for (int q = 0; q < 10000; ++q) {
      const std::int64_t n = time(gen);
      const std::int64_t x = q % 4 == 0 ? 0 : state(gen);
      k.row(n, x, row);
      double s = 0;
      for (const auto& tr : row) {
        nonneg = nonneg && tr.prob >= 0.0;
        s += tr.prob;
      }
      worst = std::max(worst, std::fabs(s - 1.0));
    }
    CHECK(nonneg);
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("kernel sampling follows the row") {
  const Kernel k = build_reset_walk(0.5);
  Rng rng(derive_stream(5, 0));
  Row scratch;
  int resets = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) resets += k.sample(0, 4, rng, scratch) == 0;
  const double p = 1.5 / 5.0;
  CHECK(std::fabs(resets / double(n) - p) < 4 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("describe names the process") {
  Process p = build_sudan();
  CHECK(describe(p) == "sudan");
}
