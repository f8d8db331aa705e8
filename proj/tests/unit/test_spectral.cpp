#include "doctest.h"
#include "oracles.hpp"

#include "walsh/spectral.hpp"

#include <random>

using namespace walsh;

namespace {

std::vector<Dyadic> values_of(const DyadicFunction<Dyadic>& f) {
  return std::vector<Dyadic>(f.values().begin(), f.values().end());
}

template <typename S>
std::vector<long long> ints_of(const DyadicFunction<S>& f) {
  std::vector<long long> out;
  for (Index i = 0; i < f.size(); ++i) out.push_back(static_cast<long long>(f[i]));
  return out;
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("rademacher and walsh examples") {
    const Resolution m(2);
    CHECK(ints_of(rademacher<std::int64_t>(0, m)) == std::vector<long long>{1, 1, -1, -1});
    CHECK(ints_of(rademacher<std::int64_t>(1, m)) == std::vector<long long>{1, -1, 1, -1});
    CHECK(ints_of(walsh<std::int64_t>(3, m)) == std::vector<long long>{1, -1, -1, 1});
    CHECK(ints_of(walsh<std::int64_t>(0, m)) == std::vector<long long>{1, 1, 1, 1});
    CHECK_THROWS_AS(walsh<double>(4, m), std::out_of_range);
    CHECK_THROWS_AS(rademacher<double>(2, m), std::out_of_range);
  }

  TEST_CASE("walsh values match the product definition") {
    for (int m = 1; m <= 7; ++m) {
      for (std::uint64_t n = 0; n < (1u << m); ++n) {
        const auto w = walsh<std::int64_t>(n, Resolution(m));
        for (Index x = 0; x < w.size(); ++x) {
          CHECK(w[x] == oracle::walsh_value(n, x, m));
          CHECK(w[x] == (walsh_parity(n, x, m) ? -1 : 1));
        }
      }
    }
  }

  TEST_CASE("walsh system is orthonormal and multiplicative") {
    const int m = 5;
    const Resolution R(m);
    for (std::uint64_t a = 0; a < 32; ++a) {
      const auto wa = walsh<std::int64_t>(a, R);
      for (std::uint64_t b = 0; b < 32; ++b) {
        const auto wb = walsh<std::int64_t>(b, R);
        const auto prod = wa * wb;
        CHECK(prod.sum() == (a == b ? 32 : 0));
        CHECK(prod == walsh<std::int64_t>(a ^ b, R));
      }
    }
  }

  TEST_CASE("butterfly matches the Walsh matrix") {
    std::mt19937_64 rng(11);
    for (int m = 1; m <= 6; ++m) {
      const Eigen::MatrixXd W = oracle::walsh_matrix(m);
      const int N = 1 << m;
      for (int t = 0; t < 20; ++t) {
        Eigen::VectorXd f(N);
        for (int i = 0; i < N; ++i) f(i) = static_cast<double>(static_cast<int>(rng() % 201) - 100);
        DyadicFunction<double> g(Resolution(m), f.array());
        const auto c = fwht_forward(g);
        const Eigen::VectorXd expect = W * f / N;
        for (int k = 0; k < N; ++k) CHECK(c[static_cast<std::size_t>(k)] == doctest::Approx(expect(k)).epsilon(1e-13));
      }
    }
  }

  TEST_CASE("exact forward transform matches the term-by-term oracle") {
    std::mt19937_64 rng(12);
    for (int m = 1; m <= 6; ++m) {
      const auto v = oracle::random_dyadic(rng, m);
      const auto f = oracle::to_function<Dyadic>(v, m);
      const auto c = fwht_forward(f);
      const auto expect = oracle::coefficients(v, m);
      for (std::size_t k = 0; k < expect.size(); ++k) CHECK(c[k] == expect[k]);
      CHECK(fwht_inverse(c) == f);
    }
  }

  TEST_CASE("double round trip at large resolution") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Resolution R(16);
    DyadicFunction<double> f(R);
    for (Index i = 0; i < f.size(); ++i) f[i] = u(rng);
    const auto back = fwht_inverse(fwht_forward(f));
    CHECK((back.values() - f.values()).abs().maxCoeff() <= 1e-12);
  }

  TEST_CASE("Parseval holds exactly") {
    std::mt19937_64 rng(14);
    for (int m = 1; m <= 8; ++m) {
      const auto f = oracle::to_function<Dyadic>(oracle::random_dyadic(rng, m), m);
      const auto c = fwht_forward(f);
      const Dyadic lhs = ldexp((f.values() * f.values()).sum(), -m);
      const Dyadic rhs = (c.coeffs() * c.coeffs()).sum();
      CHECK(lhs == rhs);
    }
  }

  TEST_CASE("Dirichlet kernel examples") {
    const Resolution m(2);
    const auto d3 = dirichlet_direct<std::int64_t>(3, m);
    CHECK(ints_of(d3) == std::vector<long long>{3, 1, 1, -1});
    CHECK(ldexp(Dyadic(static_cast<long long>(d3.values().abs().sum())), -2) == Dyadic::parse("3/2"));
    CHECK(ints_of(dirichlet_dyadic<std::int64_t>(2, Resolution(3))) == std::vector<long long>{4, 4, 0, 0, 0, 0, 0, 0});
    CHECK_THROWS_AS(dirichlet_fast<double>(0, m), std::out_of_range);
    CHECK_THROWS_AS(dirichlet_fast<double>(5, m), std::out_of_range);
    CHECK_THROWS_AS(dirichlet_dyadic<double>(3, m), std::out_of_range);
  }

  TEST_CASE("kernel forms agree with the oracle") {
    for (int m = 1; m <= 7; ++m) {
      const Resolution R(m);
      for (std::uint64_t n = 1; n <= R.size(); ++n) {
        const auto expect = oracle::dirichlet(n, m);
        CHECK(ints_of(dirichlet_direct<std::int64_t>(n, R)) == expect);
        CHECK(ints_of(dirichlet_fast<std::int64_t>(n, R)) == expect);
      }
      for (int k = 0; k <= m; ++k) {
        CHECK(ints_of(dirichlet_dyadic<std::int64_t>(k, R)) == oracle::dirichlet(std::uint64_t{1} << k, m));
      }
    }
  }

  TEST_CASE("Lp quasi-norm of dyadic kernels is a power of two") {
    const Resolution R(10);
    for (double p : {0.25, 0.5, 1.0}) {
      for (int n = 0; n <= 10; ++n) {
        const double expect = std::exp2(n * (1.0 - 1.0 / p));
        CHECK(oracle::lp(oracle::to_doubles(dirichlet_dyadic<double>(n, R)), p) == doctest::Approx(expect));
      }
    }
  }

  TEST_CASE("partial sums match the oracle and clamp past 2^m") {
    std::mt19937_64 rng(15);
    for (int m = 1; m <= 5; ++m) {
      const auto v = oracle::random_dyadic(rng, m);
      const auto f = oracle::to_function<Dyadic>(v, m);
      const auto c = oracle::coefficients(v, m);
      for (std::uint64_t n = 1; n <= (2u << m); ++n) {
        const auto ps = partial_sum_with_info(f, n);
        CHECK(values_of(ps.values) == oracle::synthesize(c, n, m));
        CHECK(ps.tail_clamped == (n > f.size()));
      }
    }
    CHECK_THROWS_AS(partial_sum(DyadicFunction<double>(Resolution(2)), 0), std::domain_error);
  }

  TEST_CASE("partial sum is convolution with the kernel") {
    // S_n f(x) = 2^-m sum_y f(y) D_n(x ^ y)
    std::mt19937_64 rng(16);
    const int m = 5;
    const auto v = oracle::random_dyadic(rng, m);
    const auto f = oracle::to_function<Dyadic>(v, m);
    for (std::uint64_t n = 1; n <= 32; ++n) {
      const auto D = oracle::dirichlet(n, m);
      const auto S = partial_sum(f, n);
      for (Index x = 0; x < 32; ++x) {
        Dyadic acc(0);
        for (Index y = 0; y < 32; ++y) acc += v[y] * Dyadic(D[x ^ y]);
        CHECK(S[x] == ldexp(acc, -m));
      }
    }
  }

  TEST_CASE("L1 norm of S_n f is bounded by the kernel norm") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 30; ++t) {
      const int m = 3 + t % 5;
      const auto f = oracle::to_function<double>(oracle::random_dyadic(rng, m), m);
      const double fl1 = oracle::lp(oracle::to_doubles(f), 1.0);
      for (std::uint64_t n = 1; n <= f.size(); ++n) {
        const double dl1 = oracle::lp(oracle::to_doubles(dirichlet_fast<double>(n, Resolution(m))), 1.0);
        const double sl1 = oracle::lp(oracle::to_doubles(partial_sum(f, n)), 1.0);
        CHECK(sl1 <= dl1 * fl1 * (1 + 1e-12));
      }
    }
  }
}
