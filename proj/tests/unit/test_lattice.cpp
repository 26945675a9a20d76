#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cbcdbd/lattice.hpp"
#include "support/oracles.hpp"

using namespace cbcdbd;

TEST_CASE("generating vector invariants") {
  CHECK_THROWS_AS(GeneratingVector(2, {1, 2}), ValidationError);
  CHECK_THROWS_AS(GeneratingVector(2, {5}), ValidationError);
  CHECK_THROWS_AS(GeneratingVector(0, {1}), ValidationError);
  CHECK_THROWS_AS(GeneratingVector(2, {}), ValidationError);
  // history must end in z and satisfy z_{r,v} = z mod 2^v
  CHECK_NOTHROW(GeneratingVector(3, {5}, {{1, 1, 5}}));
  CHECK_THROWS_AS(GeneratingVector(3, {5}, {{1, 3, 5}}), ValidationError);
  CHECK_THROWS_AS(GeneratingVector(3, {5}, {{1, 1}}), ValidationError);
  const GeneratingVector gv(3, {1, 3, 5});
  CHECK(gv.points() == 8);
  CHECK(gv[2] == 3);
  CHECK(gv.leading(2) == GeneratingVector(3, {1, 3}));
}

TEST_CASE("lattice points") {
  const auto two = lattice_points(GeneratingVector(1, {1}));
  CHECK(two == std::vector<std::vector<double>>{{0.0}, {0.5}});
  const GeneratingVector gv(2, {1, 3});
  CHECK(lattice_point(gv, 1) == std::vector<double>{0.25, 0.75});
  CHECK(lattice_point(gv, 0) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("lattice points are the rationals k z / N reduced mod 1") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto gv = oracle::random_vector(6, 4, rng);
    const auto points = lattice_points(gv);
    for (std::uint64_t k = 0; k < gv.points(); ++k) {
      for (int j = 1; j <= 4; ++j) {
        const double scaled = points[k][j - 1] * static_cast<double>(gv.points());
        CHECK(scaled == static_cast<double>((k * gv[j]) % gv.points()));
      }
    }
  }
}

TEST_CASE("r_alpha_gamma") {
  const auto product = WeightScheme::product({0.5, 1.0});
  const std::vector<std::int64_t> zero{0, 0}, m1{3, 0}, m2{2, -3};
  CHECK(r_alpha_gamma(2, product, zero) == 1.0);
  CHECK(r_alpha_gamma(2, product, m1) == doctest::Approx(18.0));
  const auto general = WeightScheme::general(2, {{{1}, 1.0}, {{2}, 1.0}, {{1, 2}, 2.0}});
  CHECK(r_alpha_gamma(1, general, m2) == doctest::Approx(3.0));
  CHECK(support(m2) == 0b11);
}

TEST_CASE("log_inv_sin2 is symmetric and exact at quarter points") {
  CHECK(log_inv_sin2(1, 1) == 0.0);
  CHECK(log_inv_sin2(1, 2) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  for (int t = 2; t <= 20; ++t) {
    const std::uint64_t modulus = std::uint64_t{1} << t;
    for (std::uint64_t a : {std::uint64_t{1}, modulus / 2 - 1, modulus / 4 + 1}) {
      CHECK(log_inv_sin2(a, t) == log_inv_sin2(modulus - a, t));
      CHECK(log_inv_sin2(a, t) == log_inv_sin2(a + 3 * modulus, t));
    }
  }
  CHECK_THROWS_AS(log_inv_sin2(8, 3), ValidationError);
}

TEST_CASE("T brute force") {
  const auto ones = WeightScheme::product({1, 1});
  std::mt19937_64 rng(5);
  for (int n = 1; n <= 5; ++n) {
    CHECK(t_brute_force(1, WeightScheme::product({0.7}), oracle::random_vector(n, 1, rng)) == 0.0);
  }
  CHECK(t_brute_force(1, ones, GeneratingVector(1, {1, 1})) == doctest::Approx(4.0));
  CHECK(t_brute_force(2, ones, GeneratingVector(2, {1, 3})) ==
        doctest::Approx(2.71913580246913580).epsilon(1e-14));
  Limits tight;
  tight.brute_force_budget = 1000;
  CHECK_THROWS_AS(t_brute_force(1, ones, GeneratingVector(5, {1, 3}), tight), BudgetExceeded);
}

TEST_CASE("H direct") {
  CHECK(h_direct(WeightScheme::product({1}), GeneratingVector(1, {1})) == 0.0);
  CHECK(h_direct(WeightScheme::product({1}), GeneratingVector(3, {1})) ==
        doctest::Approx(5.54517744447956248).epsilon(1e-14));
  CHECK(h_direct(WeightScheme::product({0.5, 1.0 / 3}), GeneratingVector(2, {1, 3})) ==
        doctest::Approx(1.31539630557264266).epsilon(1e-14));
}

TEST_CASE("H factored, enumerated and by definition agree") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 15; ++trial) {
    const int s = 1 + trial % 5;
    const int n = 2 + trial % 6;
    const auto gv = oracle::random_vector(n, s, rng);
    const auto pod = oracle::random_pod(s, rng);
    const auto product = oracle::random_product(s, rng);
    for (const auto& scheme : {pod, product}) {
      const double reference = oracle::h_sum(scheme, gv);
      CHECK(h_direct(scheme, gv) == doctest::Approx(reference).epsilon(1e-11));
      CHECK(h_direct_enumerated(scheme, gv) == doctest::Approx(reference).epsilon(1e-11));
    }
    const auto general = WeightScheme::general_from_table(s, subset_table(pod, s));
    CHECK(h_direct(general, gv) == doctest::Approx(oracle::h_sum(pod, gv)).epsilon(1e-11));
  }
}

TEST_CASE("H closed form in dimension one") {
  for (int n = 1; n <= 12; ++n) {
    const double big_n = std::ldexp(1.0, n);
    CHECK(h_direct(WeightScheme::product({1}), GeneratingVector(n, {1})) ==
          doctest::Approx(std::log(4.0) * (big_n - n - 1)).epsilon(1e-12));
  }
}

TEST_CASE("Bernoulli kernel") {
  // b_2(x) = 2 pi^2 B_2(x), B_2(0) = 1/6
  CHECK(bernoulli_kernel(2, 0.0) == doctest::Approx(std::numbers::pi * std::numbers::pi / 3));
  CHECK(bernoulli_kernel(4, 0.0) == doctest::Approx(2 * std::riemann_zeta(4.0)));
  CHECK(bernoulli_kernel(6, 0.0) == doctest::Approx(2 * std::riemann_zeta(6.0)));
  CHECK(bernoulli_kernel(2, 0.5) == doctest::Approx(-std::numbers::pi * std::numbers::pi / 6));
  CHECK_THROWS_AS(bernoulli_kernel(3, 0.0), ValidationError);
  CHECK_THROWS_AS(bernoulli_kernel(8, 0.0), ValidationError);
}

TEST_CASE("dual error closed form") {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  CHECK(dual_error_even_alpha(2, WeightScheme::product({1}), GeneratingVector(1, {1})) ==
        doctest::Approx(pi2 / 12).epsilon(1e-14));
  const auto ones = WeightScheme::product({1, 1});
  const GeneratingVector gv(2, {1, 3});
  CHECK(dual_error_even_alpha(2, ones, gv) == doctest::Approx(3.87805012469304613).epsilon(1e-13));
  CHECK(dual_error_even_alpha(4, ones, gv) == doctest::Approx(2.092212868998118).epsilon(1e-12));
  CHECK(oracle::dual_sum_alpha2_residues(ones, gv) ==
        doctest::Approx(3.87805012469304613).epsilon(1e-13));
  CHECK_THROWS_AS(dual_error_even_alpha(3, ones, gv), ValidationError);
}

TEST_CASE("dual error agrees with independent sums") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 8; ++trial) {
    const int s = 1 + trial % 3;
    const int n = 2 + trial % 4;
    const auto gv = oracle::random_vector(n, s, rng);
    const auto pod = oracle::random_pod(s, rng);
    CHECK(dual_error_even_alpha(2, pod, gv) ==
          doctest::Approx(oracle::dual_sum_alpha2_residues(pod, gv)).epsilon(1e-10));
    if (s <= 2) {
      for (int alpha : {4, 6}) {
        CHECK(dual_error_even_alpha(alpha, pod, gv) ==
              doctest::Approx(oracle::truncated_dual_sum(alpha, pod, gv, 300)).epsilon(1e-7));
      }
    }
  }
}

TEST_CASE("truncated dual sum is dominated by the dual error") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const int s = 1 + trial % 3;
    const int n = 1 + trial % 4;
    const auto gv = oracle::random_vector(n, s, rng);
    const auto weights = oracle::random_pod(s, rng);
    CHECK(t_brute_force(2, weights, gv) <= dual_error_even_alpha(2, weights, gv) + 1e-12);
  }
}

TEST_CASE("qmc integration") {
  const GeneratingVector gv(4, {1, 5, 7});
  CHECK(qmc_integrate(gv, [](std::span<const double>) { return 1.0; }) == doctest::Approx(1.0));
  CHECK(qmc_integrate(GeneratingVector(1, {1}), [](std::span<const double> x) { return x[0]; }) ==
        doctest::Approx(0.25));
  // The lattice rule error on prod (1 + b_2) equals the dual sum with unit product weights.
  const auto product = [](std::span<const double> x) {
    double value = 1.0;
    for (double xj : x) value *= 1.0 + bernoulli_kernel(2, xj);
    return value;
  };
  CHECK(qmc_integrate(gv, product) - 1.0 ==
        doctest::Approx(dual_error_even_alpha(2, WeightScheme::product({1, 1, 1}), gv))
            .epsilon(1e-12));
}

TEST_CASE("characters sum to N exactly on the dual lattice") {
  std::mt19937_64 rng(13);
  const auto gv = oracle::random_vector(5, 3, rng);
  std::uniform_int_distribution<std::int64_t> freq(-40, 40);
  for (int trial = 0; trial < 50; ++trial) {
    const std::int64_t m[] = {freq(rng), freq(rng), freq(rng)};
    std::uint64_t dot = 0;
    for (int j = 0; j < 3; ++j) dot += static_cast<std::uint64_t>(m[j]) * gv[j + 1];
    const auto f = [&](std::span<const double> x) {
      double phase = 0.0;
      for (int j = 0; j < 3; ++j) phase += static_cast<double>(m[j]) * x[j];
      return std::cos(2 * std::numbers::pi * phase);
    };
    const double expected = (dot % gv.points() == 0) ? 1.0 : 0.0;
    CHECK(qmc_integrate(gv, f) == doctest::Approx(expected).epsilon(1e-9).scale(1.0));
  }
}
