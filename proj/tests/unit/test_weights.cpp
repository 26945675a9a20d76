#include <doctest.h>

#include <cmath>
#include <random>

#include "cbcdbd/weights.hpp"

using namespace cbcdbd;

namespace {

Subset set_of(std::initializer_list<int> members) {
  const std::vector<int> v(members);
  return make_subset(v);
}

}  // namespace

TEST_CASE("subset helpers") {
  CHECK(set_of({1, 3}) == 0b101);
  CHECK(subset_members(0b1010) == std::vector<int>{2, 4});
  CHECK(subset_size(0b1011) == 3);
  CHECK(leading_subset(3) == 0b111);
  CHECK_THROWS_AS(set_of({0}), ValidationError);
  CHECK_THROWS_AS(set_of({64}), ValidationError);
}

TEST_CASE("gamma of each scheme kind") {
  const auto product = WeightScheme::product({0.5, 0.25});
  CHECK(product.gamma(set_of({1, 2})) == doctest::Approx(0.125));
  const auto pod = WeightScheme::pod({1, 1, 2}, {0.5, 0.25});
  CHECK(pod.gamma(set_of({1, 2})) == doctest::Approx(0.25));
  const auto general = WeightScheme::general(2, {{{1}, 2.0}, {{2}, 1.0}, {{1, 2}, 4.0}});
  CHECK(general.gamma(set_of({1, 2})) == 4.0);
  for (const auto& scheme : {product, pod, general}) CHECK(scheme.gamma(Subset{0}) == 1.0);
  CHECK_THROWS_AS(product.gamma(set_of({3})), ValidationError);
}

TEST_CASE("weight validation") {
  CHECK_THROWS_AS(WeightScheme::product({}), ValidationError);
  CHECK_THROWS_AS(WeightScheme::product({1.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(WeightScheme::product({1.0, -2.0}), ValidationError);
  CHECK_THROWS_AS(WeightScheme::product({NAN}), ValidationError);
  CHECK_THROWS_AS(WeightScheme::pod({2, 1}, {1}), ValidationError);
  CHECK_THROWS_AS(WeightScheme::pod({1, 1}, {1, 1}), ValidationError);
  // incomplete, duplicated and out-of-range general tables
  CHECK_THROWS_AS(WeightScheme::general(2, {{{1}, 1.0}, {{2}, 1.0}}), ValidationError);
  CHECK_THROWS_AS(WeightScheme::general(2, {{{1}, 1.0}, {{1}, 1.0}, {{2}, 1.0}, {{1, 2}, 1.0}}),
                  ValidationError);
  CHECK_THROWS_AS(WeightScheme::general(2, {{{1}, 1.0}, {{2}, 1.0}, {{1, 3}, 1.0}}),
                  ValidationError);
  CHECK_THROWS_AS(WeightScheme::general(2, {{{}, 1.0}, {{1}, 1.0}, {{2}, 1.0}, {{1, 2}, 1.0}}),
                  ValidationError);
  Limits tight;
  tight.subset_enumeration_cap = 3;
  CHECK_THROWS_AS(WeightScheme::general_from_table(4, std::vector<double>(16, 1.0), tight),
                  BudgetExceeded);
}

TEST_CASE("tilde_gamma") {
  std::vector<double> inv_sq;
  for (int j = 1; j <= 5; ++j) inv_sq.push_back(1.0 / (j * j));
  CHECK(tilde_gamma(WeightScheme::product(inv_sq), 3) == doctest::Approx(1.0 / 9));
  CHECK(tilde_gamma(WeightScheme::pod({1, 1, 3, 3}, {1, 1, 1}), 2) == doctest::Approx(3.0));
  const auto general = WeightScheme::general(2, {{{1}, 2.0}, {{2}, 1.0}, {{1, 2}, 4.0}});
  CHECK(tilde_gamma(general, 2) == doctest::Approx(2.0));
  CHECK(tilde_gamma(general, 1) == doctest::Approx(2.0));
}

TEST_CASE("tilde_gamma of POD weights agrees with subset enumeration") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.05, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int s = 6;
    std::vector<double> order(s + 1, 1.0), gammas(s);
    for (int l = 1; l <= s; ++l) order[l] = unit(rng);
    for (double& g : gammas) g = unit(rng);
    const auto pod = WeightScheme::pod(order, gammas);
    const auto table = WeightScheme::general_from_table(s, subset_table(pod, s));
    for (int j = 1; j <= s; ++j) {
      CHECK(tilde_gamma(pod, j) == doctest::Approx(tilde_gamma(table, j)).epsilon(1e-12));
    }
  }
}

TEST_CASE("pow_weights") {
  const auto root = pow_weights(WeightScheme::product({4, 9}), 0.5);
  REQUIRE(root.kind() == WeightScheme::Kind::product);
  CHECK(root.as_product().gammas[0] == doctest::Approx(2.0));
  CHECK(root.as_product().gammas[1] == doctest::Approx(3.0));

  const auto pod = pow_weights(WeightScheme::pod({1, 1, 4}, {1, 1}), 0.5);
  REQUIRE(pod.kind() == WeightScheme::Kind::pod);
  CHECK(pod.as_pod().order_weights[2] == doctest::Approx(2.0));

  const auto general = WeightScheme::general(2, {{{1}, 2.0}, {{2}, 1.5}, {{1, 2}, 4.0}});
  const auto same = pow_weights(general, 1.0);
  for (Subset u = 0; u < 4; ++u) CHECK(same.gamma(u) == general.gamma(u));
  CHECK_THROWS_AS(pow_weights(general, 0.0), ValidationError);
}

TEST_CASE("shifted views") {
  const auto pod = WeightScheme::pod({1, 0.5, 2, 6}, {0.3, 0.7, 0.2});
  const Subset v = set_of({2});
  const auto view = pod.shifted(v);
  CHECK(view.kind() == WeightScheme::Kind::shifted);
  CHECK(view.gamma(Subset{0}) == doctest::Approx(pod.gamma(v)));
  for (Subset u = 0; u < 8; ++u) CHECK(view.gamma(u) == doctest::Approx(pod.gamma(u | v)));
  // composition: (gamma ∪ a) ∪ b == gamma ∪ (a ∪ b)
  const auto twice = view.shifted(set_of({3}));
  for (Subset u = 0; u < 8; ++u) {
    CHECK(twice.gamma(u) == doctest::Approx(pod.gamma(u | set_of({2, 3}))));
  }
}

TEST_CASE("POD with unit order weights is the product scheme") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unit(0.01, 1.0);
  std::vector<double> gammas(7);
  for (double& g : gammas) g = unit(rng);
  const auto product = WeightScheme::product(gammas);
  const auto pod = WeightScheme::pod(std::vector<double>(8, 1.0), gammas);
  for (Subset u = 0; u < (Subset{1} << 7); ++u) {
    CHECK(pod.gamma(u) == doctest::Approx(product.gamma(u)).epsilon(1e-14));
  }
}

TEST_CASE("order_profile matches enumeration") {
  const auto pod = WeightScheme::pod({1, 0.5, 2, 6, 1}, {0.3, 0.7, 0.2, 0.9});
  const auto general = WeightScheme::general_from_table(4, subset_table(pod, 4));
  const auto fast = order_profile(pod, 4, 1.7);
  const auto slow = order_profile(general, 4, 1.7);
  REQUIRE(fast.size() == 5);
  for (std::size_t l = 0; l < fast.size(); ++l) CHECK(fast[l] == doctest::Approx(slow[l]));
  CHECK(fast[0] == 1.0);
}

TEST_CASE("fingerprints identify schemes") {
  CHECK(fingerprint(WeightScheme::product({1, 2})) == fingerprint(WeightScheme::product({1, 2})));
  CHECK(fingerprint(WeightScheme::product({1, 2})) != fingerprint(WeightScheme::product({2, 1})));
  CHECK(fingerprint(WeightScheme::product({1, 1})) !=
        fingerprint(WeightScheme::pod({1, 1, 1}, {1, 1})));
}
