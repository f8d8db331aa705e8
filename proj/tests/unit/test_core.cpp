#include "doctest.h"
#include "oracles.hpp"

#include "walsh/group.hpp"
#include "walsh/index_stats.hpp"
#include "walsh/scalar.hpp"

#include <random>
#include <sstream>
#include <stdexcept>

using namespace walsh;

TEST_SUITE("dyadic") {
  TEST_CASE("parse and print") {
    CHECK(Dyadic::parse("3/4").to_string() == "3/4");
    CHECK(Dyadic::parse("-6/8").to_string() == "-3/4");
    CHECK(Dyadic::parse("12").to_string() == "12");
    CHECK(Dyadic::parse("0.375") == Dyadic::parse("3/8"));
    CHECK(Dyadic::parse("0/16") == Dyadic(0));
    CHECK_THROWS_AS(Dyadic::parse("1/3"), std::invalid_argument);
    CHECK_THROWS_AS(Dyadic::parse("abc"), std::invalid_argument);
  }

  TEST_CASE("normal form makes equality structural") {
    const Dyadic a = Dyadic::from_parts(12, -4);  // 3/4
    CHECK(a.mantissa() == 3);
    CHECK(a.exponent() == -2);
    CHECK(Dyadic(0).exponent() == 0);
    CHECK(Dyadic::from_parts(0, 7) == Dyadic(0));
  }

  TEST_CASE("arithmetic matches doubles on representable values") {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<long long> num(-(1LL << 20), 1LL << 20);
    std::uniform_int_distribution<int> sh(-10, 10);
    for (int i = 0; i < 2000; ++i) {
      const Dyadic a = ldexp(Dyadic(num(rng)), sh(rng));
      const Dyadic b = ldexp(Dyadic(num(rng)), sh(rng));
      CHECK((a + b).to_double() == a.to_double() + b.to_double());
      CHECK((a - b).to_double() == a.to_double() - b.to_double());
      CHECK((a * b).to_double() == a.to_double() * b.to_double());
      CHECK((a < b) == (a.to_double() < b.to_double()));
      CHECK(Dyadic::from_double(a.to_double()) == a);
    }
  }

  TEST_CASE("overflow is reported, never rounded") {
    const Dyadic big = Dyadic::pow2(100) + Dyadic(1);
    CHECK_THROWS_AS(big * big, std::overflow_error);
  }

  TEST_CASE("ldexp and abs") {
    CHECK(ldexp(Dyadic(3), -5).to_string() == "3/32");
    CHECK(abs(Dyadic(-7)) == Dyadic(7));
    std::ostringstream os;
    os << Dyadic::parse("-5/2");
    CHECK(os.str() == "-5/2");
  }

  TEST_CASE("scalar helpers") {
    CHECK(parse_scalar<double>("0.1") == 0.1);
    CHECK(parse_scalar<double>("3/4") == 0.75);
    CHECK(parse_scalar<std::int64_t>("12") == 12);
    CHECK_THROWS(parse_scalar<std::int64_t>("1/2"));
    CHECK_THROWS(parse_scalar<double>("1.5x"));
    CHECK(format_scalar(0.1) == "0.10000000000000001");
    CHECK(format_scalar(Dyadic::parse("1/4")) == "1/4");
    CHECK_THROWS_AS(scale_pow2(std::int64_t{3}, -1), std::domain_error);
  }
}

TEST_SUITE("group") {
  TEST_CASE("resolution bounds") {
    CHECK_THROWS_AS(Resolution(0), std::out_of_range);
    CHECK_THROWS_AS(Resolution(25), std::out_of_range);
    CHECK(Resolution(24).size() == (std::size_t{1} << 24));
  }

  TEST_CASE("points e_k") {
    CHECK(point_e(0, Resolution(3)).index() == 4);
    CHECK(point_e(2, Resolution(3)).index() == 1);
    CHECK_THROWS_AS(point_e(3, Resolution(3)), std::out_of_range);
  }

  TEST_CASE("coordinates round trip") {
    const Resolution m(5);
    for (Index i = 0; i < 32; ++i) {
      const GroupPoint x(m, i);
      const auto c = x.coordinates();
      for (int j = 0; j < 5; ++j) CHECK(c[static_cast<std::size_t>(j)] == oracle::coord(i, j, 5));
      CHECK(GroupPoint::from_coordinates(m, c) == x);
    }
  }

  TEST_CASE("interval examples") {
    const DyadicInterval all = interval(GroupPoint(Resolution(4), 9), 0);
    CHECK(all.begin() == 0);
    CHECK(all.end() == 16);
    const DyadicInterval half = interval(point_e(0, Resolution(3)), 1);
    CHECK(half.begin() == 4);
    CHECK(half.end() == 8);
    const DyadicInterval q = interval(GroupPoint(Resolution(3), 5), 2);
    CHECK(q.begin() == 4);
    CHECK(q.end() == 6);
    CHECK(q.measure() == Dyadic::parse("1/4"));
    CHECK_THROWS_AS(interval(GroupPoint(Resolution(3), 5), 4), std::out_of_range);
  }

  TEST_CASE("interval membership agrees with coordinate agreement") {
    for (int m = 1; m <= 8; ++m) {
      const Resolution R(m);
      for (Index x = 0; x < R.size(); ++x) {
        for (int n = 0; n <= m; ++n) {
          const DyadicInterval I = interval(GroupPoint(R, x), n);
          CHECK(I.contains(x));
          CHECK(I.length() == (std::size_t{1} << (m - n)));
          if (n < m) CHECK(I.measure() == ldexp(interval(GroupPoint(R, x), n + 1).measure(), 1));
          for (Index y = 0; y < R.size(); y += (m > 5 ? 7 : 1)) {
            CHECK(I.contains(y) == oracle::same_block(x, y, n, m));
          }
        }
      }
    }
  }

  TEST_CASE("same-level intervals are disjoint or identical") {
    const Resolution R(6);
    for (int n = 0; n <= 6; ++n) {
      for (Index x = 0; x < 64; ++x) {
        for (Index y = 0; y < 64; ++y) {
          const auto a = interval(GroupPoint(R, x), n);
          const auto b = interval(GroupPoint(R, y), n);
          const bool overlap = a.begin() < b.end() && b.begin() < a.end();
          CHECK(overlap == (a == b));
        }
      }
    }
  }

  TEST_CASE("shells") {
    const auto d2 = shell_decomposition(Resolution(2));
    REQUIRE(d2.shells.size() == 2);
    CHECK(d2.shells[0].begin == 2);
    CHECK(d2.shells[0].end == 4);
    CHECK(d2.shells[0].measure == Dyadic::parse("1/2"));
    CHECK(d2.shells[1].begin == 1);
    CHECK(d2.shells[1].end == 2);
    CHECK(d2.shells[1].measure == Dyadic::parse("1/4"));
    CHECK(shell_decomposition(Resolution(1)).shells.size() == 1);

    for (int m = 1; m <= 8; ++m) {
      const Resolution R(m);
      const auto d = shell_decomposition(R);
      std::vector<int> hits(R.size(), 0);
      hits[0] = 1;  // I_m(0)
      Dyadic total(0);
      for (const auto& s : d.shells) {
        total += s.measure;
        for (Index i = s.begin; i < s.end; ++i) {
          ++hits[i];
          CHECK(shell_of(i, 0, R) == s.s);
        }
      }
      for (int h : hits) CHECK(h == 1);
      CHECK(total == Dyadic(1) - Dyadic::pow2(-m));
    }
  }

  TEST_CASE("shell_of is translation invariant under XOR") {
    const Resolution R(7);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 500; ++t) {
      const Index x = static_cast<Index>(rng() % 128);
      const Index b = static_cast<Index>(rng() % 128);
      const Index h = static_cast<Index>(rng() % 128);
      CHECK(shell_of(x ^ h, b ^ h, R) == shell_of(x, b, R));
      CHECK(shell_of(x, b, R) == shell_of(x ^ b, 0, R));
    }
    CHECK(shell_of(5, 5, R) == 7);
  }

  TEST_CASE("measure of index sets") {
    const Resolution R(5);
    CHECK(measure(std::span<const Index>{}, R) == Dyadic(0));
    std::vector<Index> all(32);
    for (Index i = 0; i < 32; ++i) all[i] = i;
    CHECK(measure(all, R) == Dyadic(1));
    std::vector<Index> quarter{0, 1, 2, 3, 4, 5, 6, 7, 7, 0};
    CHECK(measure(quarter, R) == Dyadic::parse("1/4"));
    std::vector<Index> bad{40};
    CHECK_THROWS_AS(measure(bad, R), std::out_of_range);
  }
}

TEST_SUITE("index_stats") {
  TEST_CASE("examples") {
    const auto s5 = index_stats(5);
    CHECK(s5.low == 0);
    CHECK(s5.high == 2);
    CHECK(s5.rho == 2);
    CHECK(s5.variation == 4);
    const auto s6 = index_stats(6);
    CHECK(s6.low == 1);
    CHECK(s6.high == 2);
    CHECK(s6.rho == 1);
    CHECK(s6.variation == 2);
    for (int k = 1; k < 63; ++k) {
      const auto s = index_stats(std::uint64_t{1} << k);
      CHECK(s.rho == 0);
      CHECK(s.variation == 2);
    }
    CHECK_THROWS_AS(index_stats(0), std::domain_error);
    CHECK(binary_string(18) == "10010");
  }

  TEST_CASE("agrees with the bit-list oracle") {
    std::mt19937_64 rng(5);
    for (std::uint64_t n = 1; n < 5000; ++n) {
      const std::uint64_t v = n < 4096 ? n : (rng() >> 1) | 1u;
      const auto a = index_stats(v);
      const auto b = oracle::index_stats(v);
      CHECK(a.low == b.low);
      CHECK(a.high == b.high);
      CHECK(a.rho == b.rho);
      CHECK(a.variation == b.V);
    }
  }
}
