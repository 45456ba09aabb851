#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "exactrank/errors.hpp"
#include "exactrank/ranks.hpp"

using namespace exactrank;

using Doubled = std::vector<std::int64_t>;

namespace {
Doubled as_vector(const RankMultiset& r) { return {r.doubled().begin(), r.doubled().end()}; }
}  // namespace

TEST_CASE("midranks") {
  SUBCASE("one tie") {
    const std::vector<double> v{10, 12, 12, 15, 20};
    const Ranking r = midranks(v);
    CHECK(as_vector(r.ranks) == Doubled{2, 5, 5, 8, 10});
    CHECK(r.by_position == Doubled{2, 5, 5, 8, 10});
  }
  SUBCASE("distinct, unsorted") {
    const std::vector<double> v{3, 1, 2};
    const Ranking r = midranks(v);
    CHECK(as_vector(r.ranks) == Doubled{2, 4, 6});
    CHECK(r.by_position == Doubled{6, 2, 4});
  }
  SUBCASE("all tied") {
    const std::vector<double> v{7, 7, 7};
    CHECK(as_vector(midranks(v).ranks) == Doubled{4, 4, 4});
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(midranks(std::vector<double>{}), InputError);
    CHECK_THROWS_AS(midranks(std::vector<double>{1, std::nan("")}), InputError);
    CHECK_THROWS_AS(midranks(std::vector<double>{std::numeric_limits<double>::infinity()}), InputError);
  }
  SUBCASE("equality is exact") {
    const std::vector<double> v{0.1 + 0.2, 0.3};
    CHECK(as_vector(midranks(v).ranks) == Doubled{2, 4});
  }
}

TEST_CASE("midranks is invariant under increasing transforms") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> value(0, 6);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(12), w(12);
    for (std::size_t i = 0; i < v.size(); ++i) {
      v[i] = value(rng);
      w[i] = std::exp(v[i]) * 3 - 100;
    }
    const Ranking a = midranks(v);
    const Ranking b = midranks(w);
    CHECK(a.by_position == b.by_position);
    CHECK(a.ranks == b.ranks);
  }
}

TEST_CASE("tie-epsilon coalescing chains close neighbours") {
  const std::vector<double> v{1.0, 1.05, 1.1, 2.0, 3.0, 3.001};
  const auto c = coalesce_ties(v, 0.06);
  CHECK(c == std::vector<double>{1.0, 1.0, 1.0, 2.0, 3.0, 3.0});
  CHECK(coalesce_ties(v, 0.0) == v);
  CHECK_THROWS_AS(coalesce_ties(v, -1), InputError);
}

TEST_CASE("RankMultiset validation") {
  CHECK_NOTHROW(RankMultiset::from_doubled({10, 2, 5, 8, 5}));
  CHECK(as_vector(RankMultiset::from_doubled({10, 2, 5, 8, 5})) == Doubled{2, 5, 5, 8, 10});
  CHECK_THROWS_AS(RankMultiset::from_doubled({}), InputError);
  CHECK_THROWS_AS(RankMultiset::from_doubled({2, 4, 8}), InputError);      // wrong total
  CHECK_THROWS_AS(RankMultiset::from_doubled({0, 6, 6}), InputError);      // below 1
  CHECK_THROWS_AS(RankMultiset::from_doubled({3, 4, 5}), InputError);      // lone half-integer
  CHECK(RankMultiset::parse("1,2.5,2.5,4,5") == RankMultiset::from_doubled({2, 5, 5, 8, 10}));
  CHECK_THROWS_AS(RankMultiset::parse("1,2.25,2.75,4,5"), InputError);     // denominator 4
  CHECK_THROWS_AS(RankMultiset::parse("1,2,3,4,6"), InputError);
  CHECK(RankMultiset::parse("1 2.5 2.5 4 5").as_decimal() ==
        std::vector<std::string>{"1", "2.5", "2.5", "4", "5"});
}

TEST_CASE("pattern_to_ranks reproduces the N=5 table rows") {
  CHECK(as_vector(pattern_to_ranks(TiePattern::parse("0010"))) == Doubled{4, 4, 4, 9, 9});
  CHECK(as_vector(pattern_to_ranks(TiePattern::parse("1111"))) == Doubled{2, 4, 6, 8, 10});
  CHECK(as_vector(pattern_to_ranks(TiePattern::parse("0000"))) == Doubled{6, 6, 6, 6, 6});
  CHECK(as_vector(pattern_to_ranks(TiePattern::parse("0001"))) == Doubled{5, 5, 5, 5, 10});
  CHECK(as_vector(pattern_to_ranks(TiePattern::parse("1000"))) == Doubled{2, 7, 7, 7, 7});
  CHECK(as_vector(pattern_to_ranks(TiePattern::parse("0110"))) == Doubled{3, 3, 6, 9, 9});
  CHECK(as_vector(pattern_to_ranks(TiePattern::parse(""))) == Doubled{2});
}

TEST_CASE("ranks_to_pattern") {
  CHECK(ranks_to_pattern(RankMultiset::from_doubled({4, 4, 4, 9, 9})).to_string() == "0010");
  CHECK(ranks_to_pattern(RankMultiset::untied(5)).to_string() == "1111");
  CHECK(ranks_to_pattern(RankMultiset::from_doubled({2, 5, 5, 8, 10})).to_string() == "1011");
  CHECK(ranks_to_pattern(RankMultiset::from_doubled({2, 5, 5, 8, 10})).label() == 11);
  // valid multiset, but no tie pattern assigns 1,1,4,4,5
  CHECK_THROWS_AS(ranks_to_pattern(RankMultiset::from_doubled({2, 2, 8, 8, 10})), InputError);
}

TEST_CASE("every pattern up to N=10 keeps the rank total and round-trips") {
  for (int n = 1; n <= 10; ++n) {
    for (std::uint64_t label = 0; label < (std::uint64_t{1} << (n - 1)); ++label) {
      const TiePattern p = TiePattern::from_label(label, n);
      CHECK(p.label() == label);
      const RankMultiset r = pattern_to_ranks(p);
      const auto sum = std::accumulate(r.doubled().begin(), r.doubled().end(), std::int64_t{0});
      CHECK(sum == static_cast<std::int64_t>(n) * (n + 1));
      CHECK(ranks_to_pattern(r) == p);
    }
    CHECK(as_vector(pattern_to_ranks(TiePattern::all_distinct(n))) == as_vector(RankMultiset::untied(n)));
  }
}

TEST_CASE("TiePattern labels") {
  CHECK(TiePattern::from_label(2, 5).to_string() == "0010");
  CHECK(TiePattern::parse("1010").label() == 10);
  CHECK_THROWS_AS(TiePattern::from_label(16, 5), InputError);
  CHECK_THROWS_AS(TiePattern::parse("01a"), InputError);
}
