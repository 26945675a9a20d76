#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cbcdbd/bounds.hpp"
#include "cbcdbd/construct.hpp"
#include "support/oracles.hpp"

using namespace cbcdbd;

namespace {

GeneratingVector built(int n, const WeightScheme& weights, int s) {
  return construct({.n = n, .s = s, .weights = weights, .limits = {}}).vector;
}

}  // namespace

TEST_CASE("within_bound slack") {
  CHECK(within_bound(1.0, 1.0));
  CHECK(within_bound(1.0 + 5e-10, 1.0));
  CHECK_FALSE(within_bound(1.0 + 2e-9, 1.0));
  CHECK(within_bound(1e-10, 0.0));
}

TEST_CASE("truncation factor") {
  const double c = 4 * std::riemann_zeta(2.0);
  CHECK(prop1_factor(2, WeightScheme::product({1}), 1) == doctest::Approx(2 * std::numbers::pi * std::numbers::pi / 3));
  CHECK(prop1_factor(2, WeightScheme::product({1, 1}), 2) ==
        doctest::Approx(56.4524018832313392).epsilon(1e-14));
  CHECK(prop1_factor(2, WeightScheme::product({1, 1}), 2) == doctest::Approx(2 * c + c * c));
  CHECK(prop1_factor(2, WeightScheme::product({1e-300, 1e-300}), 2) < 1e-290);
  CHECK_THROWS_AS(prop1_factor(1, WeightScheme::product({1}), 1), ValidationError);
}

TEST_CASE("T_1 bound right-hand side") {
  const auto one = WeightScheme::product({1});
  CHECK(thm2_rhs(one, 1, 1, 0.0) == doctest::Approx(5.04034756951623878).epsilon(1e-14));
  CHECK(thm2_rhs(one, 1, 3, 8.0) - thm2_rhs(one, 1, 3, 0.0) == doctest::Approx(1.0));

  const auto weights = WeightScheme::product({0.3, 0.5});
  const auto doubled = WeightScheme::general(2, {{{1}, 0.6}, {{2}, 1.0}, {{1, 2}, 0.3}});
  const GeneratingVector gv(4, {1, 5});
  const double base = thm2_rhs(weights, 2, 4, h_direct(weights, gv));
  CHECK(thm2_rhs(doubled, 2, 4, h_direct(doubled, gv)) == doctest::Approx(2 * base));
}

TEST_CASE("T_1 bound holds on constructed vectors") {
  CHECK(check_thm2(WeightScheme::product({1}), GeneratingVector(3, {1})).lhs == 0.0);
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    const int s = 2 + trial % 2;
    const int n = 1 + trial % 5;
    const auto weights = trial % 2 ? oracle::random_product(s, rng) : oracle::random_pod(s, rng);
    const auto report = check_thm2(weights, built(n, weights, s));
    CHECK(report.satisfied);
    CHECK(report.name == "thm2");
  }
}

TEST_CASE("H induction inequality") {
  const auto ones = WeightScheme::product({1, 1});
  const auto report = check_h_induction(ones, built(2, ones, 2), 2);
  CHECK(report.satisfied);
  CHECK(report.annotation.empty());
  // n = 1: every H vanishes and the right side is log 4 * gamma_{r} * 2
  const auto flat = check_h_induction(ones, built(1, ones, 2), 2);
  CHECK(flat.lhs == 0.0);
  CHECK(flat.rhs == doctest::Approx(2 * std::log(4.0)));

  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2 + trial % 5;
    const auto pod = oracle::random_pod(4, rng);
    const auto gv = built(n, pod, 4);
    for (int r = 2; r <= 4; ++r) CHECK(check_h_induction(pod, gv, r).satisfied);
  }
  CHECK_FALSE(check_h_induction(ones, GeneratingVector(3, {1, 3}), 2).annotation.empty());
  CHECK_THROWS_AS(check_h_induction(ones, GeneratingVector(3, {1, 3}), 1), ValidationError);
}

TEST_CASE("general H bound") {
  const auto one = WeightScheme::product({1});
  const auto report = check_h_bound_general(one, built(3, one, 1));
  CHECK(report.lhs == doctest::Approx(4 * std::log(4.0)));
  CHECK(report.rhs == doctest::Approx(8 * std::log(4.0)));
  CHECK(report.satisfied);

  const std::vector<double> gammas{0.2, 0.9, 0.5, 0.1};
  double product = 1.0;
  for (double g : gammas) product *= 1 + g * std::log(4.0);
  CHECK(h_bound_general_rhs(WeightScheme::product(gammas), 4, 6) ==
        doctest::Approx(64 * (product - 1)));

  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    const int s = 1 + trial % 6;
    const int n = 2 + trial % 7;
    const auto pod = oracle::random_pod(s, rng);
    CHECK(check_h_bound_general(pod, built(n, pod, s)).satisfied);
  }
}

TEST_CASE("truncation estimate at alpha = 2") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 8; ++trial) {
    const int s = 1 + trial % 3;
    const int n = 1 + trial % 5;
    const auto weights = oracle::random_pod(s, rng);
    const auto report = check_prop1(2, weights, built(n, weights, s));
    CHECK(report.satisfied);
    CHECK(report.lhs >= -1e-12);
  }
}

TEST_CASE("summability diagnostic") {
  std::vector<double> inv_sq, ones(100, 1.0), halves;
  for (int j = 1; j <= 100; ++j) inv_sq.push_back(1.0 / (static_cast<double>(j) * j));
  for (int j = 1; j <= 20; ++j) halves.push_back(std::ldexp(1.0, -j));
  CHECK(summability_diagnostic(WeightScheme::product(inv_sq), 100) ==
        doctest::Approx(1.63498390018489287).epsilon(1e-13));
  CHECK(summability_diagnostic(WeightScheme::product(ones), 100) == doctest::Approx(100.0));
  CHECK(summability_diagnostic(WeightScheme::pod(std::vector<double>(21, 1.0), halves), 20) ==
        doctest::Approx(1.0 - std::ldexp(1.0, -20)));
}
