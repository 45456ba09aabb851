#include <doctest.h>

#include <random>

#include "exactrank/distengine.hpp"
#include "exactrank/errors.hpp"
#include "exactrank/polycore.hpp"
#include "oracles.hpp"

using namespace exactrank;

namespace {

IntPoly binomial_factor(std::size_t exponent) { return IntPoly::one() + IntPoly::monomial(exponent); }

IntPoly random_poly(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(0, 6);
  std::uniform_int_distribution<long> coeff(0, 1000);
  std::vector<BigInt> c(static_cast<std::size_t>(len(rng)));
  for (auto& x : c) x = coeff(rng);
  return IntPoly(std::move(c));
}

}  // namespace

TEST_CASE("IntPoly keeps a nonzero leading coefficient") {
  IntPoly p({1, 2, 0, 0});
  CHECK(p.degree() == 1);
  CHECK(IntPoly({0, 0}).is_zero());
  CHECK(IntPoly().degree() == -1);
  CHECK_THROWS_AS(IntPoly({1, -1}), InputError);
  CHECK(IntPoly({0, 0, 3}).low_degree() == 2);
}

TEST_CASE("poly_mul") {
  SUBCASE("binomial square") { CHECK(poly_mul({1, 1}, {1, 1}) == IntPoly({1, 2, 1})); }
  SUBCASE("identity") {
    const IntPoly p({3, 0, 7, 1});
    CHECK(poly_mul(IntPoly::one(), p) == p);
    CHECK(poly_mul(p, IntPoly()).is_zero());
  }
  SUBCASE("tied-rank product matches subset enumeration") {
    IntPoly prod = IntPoly::one();
    for (std::size_t d : {2, 5, 5, 8, 10}) prod = poly_mul(prod, binomial_factor(d));
    const auto expected = oracle::all_subset_sums({2, 5, 5, 8, 10});
    for (std::size_t e = 0; e <= 30; ++e) {
      auto it = expected.find(static_cast<std::int64_t>(e));
      CHECK(prod.coeff(e) == (it == expected.end() ? 0UL : it->second));
    }
    // {10}, {2, 8}, {5_1, 5_2}
    CHECK(prod.coeff(10) == 3);
    CHECK(prod.degree() == 30);
  }
  SUBCASE("degree adds") {
    CHECK(poly_mul({1, 0, 2}, {0, 1, 1, 4}).degree() == 5);
  }
}

TEST_CASE("poly_mul is commutative and associative") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const IntPoly a = random_poly(rng), b = random_poly(rng), c = random_poly(rng);
    CHECK(poly_mul(a, b) == poly_mul(b, a));
    CHECK(poly_mul(poly_mul(a, b), c) == poly_mul(a, poly_mul(b, c)));
  }
}

TEST_CASE("qbinomial") {
  CHECK(qbinomial(5, 2) == IntPoly({1, 1, 2, 2, 2, 1, 1}));
  CHECK(qbinomial(9, 0) == IntPoly::one());
  CHECK(qbinomial(0, 0) == IntPoly::one());
  CHECK(qbinomial(7, 3).sum() == 35);
  CHECK(qbinomial(7, 3).degree() == 12);
  CHECK_THROWS_AS(qbinomial(3, 4), InputError);
  CHECK_THROWS_AS(qbinomial(3, -1), InputError);
  CHECK(qbinomial(70, 35).sum() == binomial(70, 35));
}

TEST_CASE("qbinomial agrees with the rational product formula") {
  const std::vector<Rational> points{Rational(2), Rational(-3), Rational(1, 2), Rational(5, 7)};
  for (int n = 0; n <= 14; ++n) {
    for (int k = 0; k <= n; ++k) {
      const IntPoly g = qbinomial(n, k);
      for (const auto& q : points) CHECK(g.eval(q) == oracle::qbinomial_product(n, k, q));
    }
  }
}

TEST_CASE("qbinomial is palindromic and satisfies the q-Pascal recurrence") {
  for (int n = 1; n <= 20; ++n) {
    for (int k = 0; k <= n; ++k) {
      const IntPoly g = qbinomial(n, k);
      const auto degree = static_cast<std::size_t>(k * (n - k));
      CHECK(g.degree() == static_cast<std::ptrdiff_t>(degree));
      CHECK(g.reflected(degree) == g);
      if (k >= 1 && k <= n - 1) {
        const IntPoly rhs = qbinomial(n - 1, k) + qbinomial(n - 1, k - 1).shifted(static_cast<std::size_t>(n - k));
        CHECK(g == rhs);
      }
    }
  }
}

TEST_CASE("rothe_row") {
  CHECK(rothe_row(5, 2) == IntPoly({0, 0, 0, 1, 1, 2, 2, 2, 1, 1}));
  CHECK(rothe_row(5, 5) == IntPoly::monomial(15));
  CHECK(rothe_row(8, 0) == IntPoly::one());
  CHECK_THROWS_AS(rothe_row(2, 3), InputError);
  CHECK(rothe_row(5, 2).to_string() == "q^3 + q^4 + 2q^5 + 2q^6 + 2q^7 + q^8 + q^9");
}

TEST_CASE("rothe rows sum to 2^N and match the Euler expansion") {
  for (int n = 1; n <= 12; ++n) {
    const CoeffTable table = euler_expand(RankMultiset::untied(n), n);
    BigInt total = 0;
    for (int k = 0; k <= n; ++k) {
      const IntPoly rothe = rothe_row(n, k);
      total += rothe.sum();
      // The expansion runs on doubled exponents; undouble before comparing.
      const auto& doubled = table.row(k).coeffs();
      std::vector<BigInt> undoubled((doubled.size() + 1) / 2);
      for (std::size_t e = 0; e < doubled.size(); ++e) {
        if (e % 2 == 0) {
          undoubled[e / 2] = doubled[e];
        } else {
          CHECK(doubled[e] == 0);
        }
      }
      CHECK(IntPoly(undoubled) == rothe);
    }
    CHECK(total == BigInt(1) << n);
  }
}

TEST_CASE("partition counts") {
  CHECK(strict_partition_count(5, 2, 4) == 2);
  CHECK(bounded_partition_count(5, 3, 4) == 4);
  CHECK(strict_partition_count(3, 2, 5) == 1);
  CHECK(strict_partition_count(5, 3, 4) == 0);
  CHECK(strict_partition_count(-4, 2, 5) == 0);
  CHECK(strict_partition_count(100, 2, 5) == 0);
  CHECK(strict_partition_count(3, 6, 5) == 0);

  for (int m = 0; m <= 9; ++m) {
    std::vector<std::int64_t> values;
    for (int i = 1; i <= m; ++i) values.push_back(i);
    for (int l = 0; l <= m; ++l) {
      const auto sums = oracle::subset_sums(values, l);
      for (int w = -1; w <= m * (m + 1) / 2 + 1; ++w) {
        auto it = sums.find(w);
        CHECK(strict_partition_count(w, l, m) == (it == sums.end() ? 0UL : it->second));
      }
    }
    for (int l = 0; l <= 5; ++l) {
      for (int w = 0; w <= l * m; ++w) CHECK(bounded_partition_count(w, l, m) == oracle::partitions(w, l, m));
    }
  }
}
