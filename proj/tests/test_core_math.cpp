#include "fracstab/core_math.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>
#include <vector>

using namespace fracstab;

TEST_CASE("gamma_ratio basics") {
  CHECK(gamma_ratio(5, 3) == doctest::Approx(12.0).epsilon(1e-15));
  for (double x : {0.3, 1.0, 7.5, 1e5}) CHECK(gamma_ratio(x, x) == 1.0);
  CHECK(gamma_ratio(3.5, 1.5) == doctest::Approx(3.75).epsilon(1e-14));
  CHECK(gamma_ratio(3.5, 1.5) == doctest::Approx(std::tgamma(3.5) / std::tgamma(1.5)).epsilon(1e-14));
  CHECK_THROWS_AS(gamma_ratio(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(gamma_ratio(1.0, -2.0), std::domain_error);
}

TEST_CASE("gamma_ratio(x+1, x) = x") {
  for (double x : {0.5, 1.5, 10.0, 100.0, 1e4}) {
    CHECK(std::abs(gamma_ratio(x + 1, x) - x) / x <= 1e-13);
  }
  // far past the overflow point of Gamma itself
  // Gamma(x + 1/2) / Gamma(x) = sqrt(x) (1 - 1/(8x) + 1/(128x^2) + ...)
  CHECK(gamma_ratio(1e6 + 0.5, 1e6) == doctest::Approx(1e3 * (1.0 - 1.0 / 8e6 + 1.0 / 1.28e14)).epsilon(1e-14));
}

TEST_CASE("reciprocal gamma vanishes at the poles") {
  for (double x : {0.0, -1.0, -2.0, -7.0}) CHECK(reciprocal_gamma(x) == 0.0);
  CHECK(reciprocal_gamma(0.5) == doctest::Approx(1.0 / std::sqrt(std::numbers::pi)).epsilon(1e-15));
  CHECK(reciprocal_gamma(-0.5) == doctest::Approx(1.0 / std::tgamma(-0.5)).epsilon(1e-14));
}

TEST_CASE("binom_phi values") {
  CHECK(binom_phi(0.5, 0) == 1.0);
  CHECK(binom_phi(0.5, 1) == doctest::Approx(0.5).epsilon(1e-15));
  for (double mu : {0.5, -0.3, 2.0, 0.0, -1.0}) CHECK(binom_phi(mu, -3) == 0.0);
  for (long n = 0; n <= 200; ++n) CHECK(binom_phi(1.0, n) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(binom_phi(0.0, 0) == 1.0);
  CHECK_THROWS_AS(binom_phi(0.0, 1), std::domain_error);
  CHECK_THROWS_AS(binom_phi(-2.0, 5), std::domain_error);
  // negative non-integer mu, both branches of the direct formula
  CHECK(binom_phi(-1.9, 1) == doctest::Approx(-1.9).epsilon(1e-14));
  CHECK(binom_phi(-1.9, 2) == doctest::Approx(-1.9 * -0.9 / 2).epsilon(1e-14));
  CHECK(binom_phi(-1.9, 3) == doctest::Approx(-1.9 * -0.9 * 0.1 / 6).epsilon(1e-13));
}

TEST_CASE("binom_phi against the log-gamma oracle") {
  for (double mu : {0.1, 0.55, 1.3, 4.7}) {
    for (long n : {1L, 2L, 17L, 300L, 1000L}) {
      CHECK(binom_phi(mu, n) == doctest::Approx(oracle::phi(mu, n)).epsilon(1e-11));
    }
  }
}

TEST_CASE("iterator form agrees with the direct formula up to n = 1000") {
  for (double mu : {0.1, 0.55, 1.0, 1.3, 4.7}) {
    PhiSequence seq(mu);
    double worst = 0.0;
    for (long n = 1; n <= 1000; ++n) {
      const double it = seq.next();
      const double direct = binom_phi(mu, n);
      worst = std::max(worst, std::abs(it - direct) / std::abs(direct));
    }
    INFO("mu = " << mu);
    CHECK(worst <= 1e-12);
  }
  const auto table = binom_phi_table(0.55, 50);
  REQUIRE(table.size() == 50);
  CHECK(table[0] == 1.0);
  CHECK(table[49] == doctest::Approx(binom_phi(0.55, 49)).epsilon(1e-12));
}

TEST_CASE("PhiSequence covers mu = 0 as a Kronecker delta") {
  PhiSequence seq(0.0);
  CHECK(seq.value() == 1.0);
  for (int i = 0; i < 20; ++i) CHECK(seq.next() == 0.0);
}

TEST_CASE("two_term_weight") {
  const auto integer = FractionalOrderPair::make(2.0, 1.0);
  for (double a : {0.0, 1.0, 5.0}) {
    for (long k = 3; k <= 60; ++k) CHECK(two_term_weight(integer, a, k) == 0.0);
  }
  const auto o = FractionalOrderPair::make(1.9, 0.2);
  // hand evaluation of the bracket with std::tgamma
  const double g = std::tgamma(0.1);
  const double second = (-std::tgamma(1.1) / std::tgamma(2) + 2 * std::tgamma(2.1) / std::tgamma(3) -
                         std::tgamma(3.1) / std::tgamma(4)) / g;
  const double first = 2.0 / std::tgamma(0.8) * (-std::tgamma(1.8) / std::tgamma(2) + std::tgamma(2.8) / std::tgamma(3));
  CHECK(two_term_weight(o, 2.0, 3) == doctest::Approx(second - first).epsilon(1e-13));
  CHECK(two_term_weight(o, 2.0, 3) == doctest::Approx(0.1315).epsilon(1e-12));
  CHECK_THROWS_AS(two_term_weight(o, 2.0, 2), std::domain_error);
}

TEST_CASE("weight table matches the gamma-ratio form") {
  for (auto [alpha, beta, a] : {std::tuple{1.9, 0.2, 2.0}, std::tuple{1.2, 0.8, 0.5}, std::tuple{1.5, 1.0, 3.0},
                                std::tuple{2.0, 0.4, 1.0}}) {
    const auto o = FractionalOrderPair::make(alpha, beta);
    WeightTable table(o, a);
    CHECK(table(0) == 0.0);
    CHECK(table(2) == 0.0);
    for (std::size_t k = 3; k <= 200; ++k) {
      const double exact = oracle::two_term_weight(alpha, beta, a, static_cast<long>(k));
      CHECK(std::abs(table(k) - exact) <= 1e-13 * std::abs(exact));
      // the gamma-ratio form cancels three terms and keeps fewer digits
      const double direct = two_term_weight(o, a, static_cast<long>(k));
      CHECK(std::abs(direct - exact) <= 1e-8 * std::abs(exact));
    }
    CHECK(table.size() == 201);
  }
}

TEST_CASE("weights vary continuously in the orders") {
  // a jump between neighbouring samples far above its neighbours' steps would flag a branch error
  for (long k : {3L, 10L, 100L}) {
    auto scan = [&](auto weight_at) {
      std::vector<double> w;
      for (int i = 0; i <= 200; ++i) w.push_back(weight_at(i / 200.0));
      for (std::size_t i = 2; i + 1 < w.size(); ++i) {
        const double here = std::abs(w[i] - w[i - 1]);
        const double around = std::max(std::abs(w[i - 1] - w[i - 2]), std::abs(w[i + 1] - w[i]));
        CHECK(here <= 10.0 * around + 1e-12);
      }
    };
    scan([&](double t) { return two_term_weight({1.0 + 0.002 + 0.996 * t, 0.4}, 1.5, k); });
    scan([&](double t) { return two_term_weight({1.6, 0.002 + 0.996 * t}, 1.5, k); });
  }
}

TEST_CASE("order pair validation") {
  CHECK_NOTHROW(FractionalOrderPair::make(2.0, 1.0));
  CHECK_THROWS_AS(FractionalOrderPair::make(1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(FractionalOrderPair::make(2.1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(FractionalOrderPair::make(1.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(FractionalOrderPair::make(1.5, 1.2), std::invalid_argument);
  CHECK_FALSE(FractionalOrderPair{1.5, std::nan("")}.valid());
}
