#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "driftbound/bounds.hpp"
#include "driftbound/errors.hpp"
#include "driftbound/zeta.hpp"
#include "golden.hpp"

using namespace driftbound;

namespace {

bool rel_close(double got, double want, double tol) { return std::fabs(got - want) <= tol * std::fabs(want); }

}  // namespace

TEST_CASE("burkholder constant") {
  CHECK(burkholder_constant(3) == 8);
  CHECK(burkholder_constant(2) == 1);
  CHECK(burkholder_constant(4) == 81);
  CHECK_THROWS_AS(burkholder_constant(1.5), ParameterError);
}

TEST_CASE("zeta accuracy") {
  const double pi = std::numbers::pi;
  CHECK(std::fabs(zeta(2) - pi * pi / 6) <= 1e-10);
  CHECK(std::fabs(zeta(4) - std::pow(pi, 4) / 90) <= 1e-10);
  CHECK(std::fabs(zeta(6) - std::pow(pi, 6) / 945) <= 1e-10);
  CHECK(std::fabs(zeta(1.5) - 2.6123753486854883433) <= 1e-10);
  CHECK(std::fabs(zeta(1.01) - 100.57794333849687249) <= 1e-9);
  CHECK(zeta(1.001) >= 1000);
  CHECK(zeta(60) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(zeta(INFINITY) == 1.0);
  CHECK_THROWS_AS(zeta(1.0), DomainError);
  CHECK_THROWS_AS(zeta(0.5), DomainError);
  CHECK_THROWS_AS(zeta(NAN), DomainError);
}

TEST_CASE("constant chain golden values at p=3, V=1, r=1") {
  const BoundBreakdown b = theorem1_constants(3, 1, 1);
  CHECK(b.c_p == golden::kCp);
  CHECK(b.B == golden::kB);
  CHECK(b.b == golden::kb);
  CHECK(rel_close(b.c_prime, golden::kCPrime, 1e-15));
  CHECK(b.C_prime == b.c_prime);
  CHECK(rel_close(b.c_2, golden::kC2, 1e-15));
  CHECK(rel_close(b.c_3, golden::kC3, 1e-15));
  CHECK(rel_close(b.c_4, golden::kC4, 1e-12));
  CHECK(rel_close(b.K, golden::kK, 1e-12));
  CHECK(rel_close(b.c_final, golden::kCFinal, 1e-12));
}

TEST_CASE("theorem1_bound rescaling and overshoot") {
  CHECK(theorem1_bound({1, 0, 3, 1, 1}) == theorem1_constants(3, 1, 1).c_final);
  CHECK(rel_close(theorem1_bound({2, 5, 3, 8, 1}), golden::kBoundA2J5V8, 1e-12));
  const DriftParams base{1.3, 2, 3.5, 2, 1.2};
  DriftParams shifted = base;
  shifted.J += 10;
  CHECK(theorem1_bound(shifted) - theorem1_bound(base) == doctest::Approx(10).epsilon(1e-12 * theorem1_bound(base)));

  CHECK(rel_close(corollary2_bound({1, 0, 3, 1, 1}, 2), golden::kCorollaryX02, 1e-12));
  const DriftParams r1{1.5, 3, 3, 2, 1};
  CHECK(corollary2_bound(r1, 1.0) == theorem1_bound(r1));
  CHECK(corollary2_bound(r1, 3.0) == theorem1_bound(r1));
  CHECK(corollary2_bound(r1, 10.0) == theorem1_bound(r1) + 7);
}

TEST_CASE("invalid parameters are rejected with the violated constraint") {
  CHECK_THROWS_WITH_AS(theorem1_bound({1, 0, 3, 1, 2}), "r ≥ p−1", ParameterError);
  CHECK_THROWS_WITH_AS(theorem1_bound({1, 0, 2, 4, 0.5}), "p ≤ 2", ParameterError);
  CHECK_THROWS_AS(theorem1_bound({0, 0, 3, 1, 1}), ParameterError);
  CHECK_THROWS_AS(theorem1_constants(3, -1, 1), ParameterError);
}

TEST_CASE("overflow names the first constant that leaves double range") {
  try {
    theorem1_constants(40, 1, 1);
    FAIL("expected overflow");
  } catch (const OverflowError& e) {
    CHECK(e.constant() == "b");
  }
  CHECK_THROWS_AS(theorem1_constants(25, 1, 1), OverflowError);
}

TEST_CASE("martingale constant") {
  CHECK(rel_close(theorem4_constant(1, 3, 1), golden::kMartingaleConstB1P3R1, 1e-12));
  CHECK(rel_close(theorem4_constant(1, 3, 2.5), golden::kMartingaleConstB1P3R25, 1e-12));
  CHECK(theorem4_constant(2, 3, 1) > theorem4_constant(1, 3, 1));
  CHECK(theorem4_constant(2, 2.5, 1.2) > theorem4_constant(1, 2.5, 1.2));
  CHECK_THROWS_AS(theorem4_constant(1, 3, 3), ParameterError);
  CHECK_THROWS_AS(theorem4_constant(0, 3, 1), ParameterError);
  CHECK_THROWS_AS(theorem4_constant(1, 2, 1), ParameterError);
  CHECK(hitting_constant(3, 1) == doctest::Approx(8 * std::pow(9.0 / 8.0, 3)));
  CHECK(hitting_constant(3, 1e-6) == 1.0);
}

TEST_CASE("recentered moment bound") {
  CHECK(recentered_moment_bound(1, 3) == 72);
  CHECK(rel_close(recentered_moment_bound(0.5, 2.5), golden::kRecentered05_25, 1e-15));
  for (double V : {1e-3, 0.1, 1.0, 10.0, 1e3})
    for (double p : {1.1, 2.0, 3.7, 6.0}) CHECK(recentered_moment_bound(V, p) >= V);
  CHECK(make_tail_params({1, 0, 5, 1, 1}).V_prime == 1056);
}

TEST_CASE("chain recomputation for random valid parameters") {
  std::mt19937_64 gen(31337);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const double p = 2.05 + 7.95 * unit(gen);
    const double V = std::pow(10.0, -2 + 4 * unit(gen));
    const double r = (p - 1) * (0.01 + 0.98 * unit(gen));
    CAPTURE(p);
    CAPTURE(V);
    CAPTURE(r);
    const BoundBreakdown b = theorem1_constants(p, V, r);
    const double tol = 1e-12;
    const double c_p = std::pow(p - 1, p);
    bool ok = rel_close(b.c_p, c_p, tol);
    ok = ok && rel_close(b.B, std::pow(2, p) * (1 + V), tol);
    ok = ok && rel_close(b.b, std::pow(2, p) * (b.B + std::pow(1 + b.B, p)), tol);
    ok = ok && rel_close(b.c_prime, b.c_p * b.b * std::pow(1 + 1 / b.c_p, p), tol);
    ok = ok && b.C_prime == std::max(1.0, b.c_prime);
    ok = ok && rel_close(b.c_2, b.c_p * b.b * (std::pow(4, p) + std::pow(4, p - r) * r / (p - r)), tol);
    ok = ok && rel_close(b.c_3, std::pow(3, r) * std::pow(4, p) * b.b * (b.c_p * b.b + p / (p - r) + std::pow(3, r)), tol);
    ok = ok && rel_close(b.zeta_p_half, zeta(p / 2), tol);
    ok = ok && rel_close(b.c_4, b.C_prime * b.c_3 * b.zeta_p_half, tol);
    ok = ok && rel_close(b.K, std::pow(2, p / 2) * b.c_2 * b.C_prime + b.c_4, tol);
    ok = ok && rel_close(b.zeta_p_minus_r, zeta(p - r), tol);
    ok = ok && rel_close(b.c_final, b.K * b.zeta_p_minus_r, tol);
    ok = ok && std::isfinite(b.c_final) && b.c_final > 0;
    CHECK(ok);
    checked += ok;
  }
  CHECK(checked == 1000);
}

TEST_CASE("monotonicity of the uniform bound on a 10x10x10 grid") {
  std::vector<double> Vs, Js, as;
  for (int i = 0; i < 10; ++i) {
    Vs.push_back(std::pow(10.0, -1 + i / 3.0));
    Js.push_back(-5 + i * 10.0 / 9);
    as.push_back(std::pow(10.0, -1 + i * 2.0 / 9));
  }
  auto f = [](double V, double J, double a) { return theorem1_bound({a, J, 3, V, 1}); };
  bool inc_V = true, inc_J = true, dec_a = true;
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j)
      for (std::size_t k = 0; k < 10; ++k) {
        const double here = f(Vs[i], Js[j], as[k]);
        if (i + 1 < 10) inc_V = inc_V && f(Vs[i + 1], Js[j], as[k]) >= here;
        if (j + 1 < 10) inc_J = inc_J && f(Vs[i], Js[j + 1], as[k]) >= here;
        // a^r c(p,1,V/a^p,0,r) decreases in a only while V/a^p dominates;
        // checked where a^p <= V.
        if (k + 1 < 10 && std::pow(as[k + 1], 3) <= Vs[i]) dec_a = dec_a && f(Vs[i], Js[j], as[k + 1]) <= here;
      }
  CHECK(inc_V);
  CHECK(inc_J);
  CHECK(dec_a);
}

TEST_CASE("the uniform bound eventually grows in a") {
  // c(p,1,V/a^p,0,r) stays above c(p,1,0+,0,r) > 0, so the a^r factor wins.
  CHECK(theorem1_bound({100, 0, 3, 1, 1}) > theorem1_bound({10, 0, 3, 1, 1}));
  CHECK(theorem1_bound({1, 0, 3, 1, 1}) < theorem1_bound({0.1, 0, 3, 1, 1}));
}

TEST_CASE("bound diverges as r approaches p - 1") {
  const double p = 3;
  double prev = theorem1_bound({1, 0, p, 1, p - 1 - 1e-2});
  for (double delta = 5e-3; delta >= 1e-5; delta /= 2) {
    const double cur = theorem1_bound({1, 0, p, 1, p - 1 - delta});
    CAPTURE(delta);
    CHECK(std::isfinite(cur));
    CHECK(cur / prev >= 1.99);
    prev = cur;
  }
}

TEST_CASE("positive part is dominated by 1 + |z|^p") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::cauchy_distribution<double> heavy(0.0, 3.0);
  long failures = 0;
  for (int i = 0; i < 1000000; ++i) {
    const double z = i % 2 ? heavy(gen) : 4 * unit(gen) - 2;
    const double p = 1 + 1e-9 + 9 * unit(gen);
    if (!(std::max(z, 0.0) <= 1 + std::pow(std::fabs(z), p))) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("tail-series bound") {
  const TailBoundParams tp = make_tail_params({1, 0, 5, 1, 1});
  const double t50 = p4_tail_probability(tp, 50);
  CHECK(t50 >= golden::kTailT50);
  CHECK(rel_close(t50, golden::kTailT50, 1e-9));

  double prev = INFINITY;
  for (double t = 1.5; t < 1e4; t *= 1.7) {
    const double v = p4_tail_probability(tp, t);
    CHECK(v >= 0);
    CHECK(v <= prev);
    prev = v;
  }
  TailBoundParams fast = tp;
  fast.params.a = 2;
  CHECK(p4_tail_probability(fast, 50) <= t50);

  CHECK(p4_tail_probability(tp, 50, 10) <= t50);
  CHECK(p4_tail_probability(tp, 50, 1) == doctest::Approx(std::pow(4.0, 5) * 1056 * std::pow(49.0, -5)));
  CHECK_THROWS_WITH_AS(p4_tail_probability(tp, 1.0), doctest::Contains("J + V^{1/p}"), DomainError);
}

TEST_CASE("n-free mean bound for p > 4") {
  const TailBoundParams tp = make_tail_params({1, 0, 5, 1, 1});
  const double e = p4_expectation_bound(tp);
  CHECK(e >= golden::kExpectationP5);
  CHECK(rel_close(e, golden::kExpectationP5, 1e-9));
  CHECK(e >= 0 + 1 + 1);
  CHECK_THROWS_WITH_AS(p4_expectation_bound(make_tail_params({1, 0, 4, 1, 1})), doctest::Contains("requires p > 4"),
                       ParameterError);
  const TailBoundParams shifted = make_tail_params({1, 3, 6, 2, 1});
  CHECK(p4_expectation_bound(shifted) >= 3 + std::pow(2.0, 1 / 6.0) + 1);
}
