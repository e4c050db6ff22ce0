#include <gtest/gtest.h>

#include "exsieve/legendre.hpp"
#include "exsieve/prime_table.hpp"
#include "oracles.hpp"

using namespace exsieve;

TEST(Legendre, Examples) {
  EXPECT_EQ(legendre_count(30), 10u);
  EXPECT_EQ(legendre_count(4), 2u);
  EXPECT_EQ(legendre_count(10'000), 1229u);
  EXPECT_THROW(legendre_count(3), exsieve::invalid_argument);
}

TEST(Legendre, PhiMatchesTermByTermSum) {
  // The recursion with primorial tables must equal the raw Mobius sum.
  const auto primes = oracle::primes_upto(40);  // 12 primes, 4096 terms
  for (std::uint64_t x : {1ull, 2ull, 29ull, 30ull, 31ull, 1000ull, 30029ull, 30030ull, 30031ull, 123457ull}) {
    for (std::size_t a = 0; a <= primes.size(); ++a) {
      const auto naive = legendre_sum_naive(x, std::span(primes).first(a));
      ASSERT_EQ(static_cast<std::int64_t>(legendre_phi(x, a, primes)), naive) << "x=" << x << " a=" << a;
    }
  }
}

TEST(Legendre, MatchesPrimePiUpTo20000) {
  const auto t = PrimeTable::build(20'000);
  for (std::uint64_t n = 4; n <= 20'000; ++n) ASSERT_EQ(legendre_count(n), t.pi(n)) << n;
}

TEST(Legendre, LargeSpotValues) {
  EXPECT_EQ(legendre_count(1'000'000), 78498u);
  EXPECT_EQ(legendre_count(100'000'000), 5761455u);
}

TEST(Legendre, RejectsShortPrimeList) {
  const std::vector<std::uint64_t> primes{2, 3, 5};
  EXPECT_THROW(legendre_count(100, primes), exsieve::invalid_argument);
  EXPECT_EQ(legendre_count(48, primes), 15u);
}
