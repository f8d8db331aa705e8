#include "doctest.h"
#include "oracles.hpp"

#include "walsh/analysis.hpp"
#include "walsh/constructions.hpp"

#include "json.hpp"

#include <random>

using namespace walsh;

namespace {

DyadicFunction<double> random_signs(std::mt19937_64& rng, int m) {
  DyadicFunction<double> f{Resolution(m)};
  for (Index i = 0; i < f.size(); ++i) f[i] = (rng() & 1u) ? 1.0 : -1.0;
  return f;
}

}  // namespace

TEST_SUITE("analysis") {
  TEST_CASE("PExponent") {
    const auto half = PExponent::parse("1/2");
    CHECK(half.value() == 0.5);
    CHECK(half.alpha() == 1.0);
    CHECK(half.integer_alpha() == 1);
    CHECK(PExponent::parse("0.25").integer_alpha() == 3);
    CHECK_FALSE(PExponent::parse("3/4").integer_alpha().has_value());
    CHECK(PExponent::parse("3/4").integer_multiple_of_reciprocal(3) == 4);
    CHECK_FALSE(PExponent::parse("3/4").integer_multiple_of_reciprocal(2).has_value());
    CHECK(PExponent::ratio(1, 3).reciprocal() == 3.0);
    CHECK(PExponent(1.0).integer_alpha() == 0);
    CHECK_THROWS(PExponent(0.0));
    CHECK_THROWS(PExponent(1.5));
    CHECK_THROWS(PExponent::parse("x"));
  }

  TEST_CASE("Lp examples") {
    const Resolution R(2);
    const auto d3 = dirichlet_direct<std::int64_t>(3, R);
    CHECK(lp_quasinorm(d3, 1.0) == 1.5);
    DyadicFunction<double> c(Resolution(5));
    c.values().setConstant(-3.0);
    for (double p : {0.2, 0.5, 0.9, 1.0}) CHECK(lp_quasinorm(c, p) == doctest::Approx(3.0));
    CHECK_THROWS_AS(lp_quasinorm(c, 0.0), std::domain_error);
    CHECK_THROWS_AS(weak_lp_quasinorm(c, -1.0), std::domain_error);
    CHECK(weak_lp_quasinorm(DyadicFunction<double>(Resolution(3)), 0.5) == 0.0);
  }

  TEST_CASE("single-level functions have equal Lp and weak norms, exactly") {
    const Resolution R(12);
    for (const auto& p : {PExponent::ratio(1, 2), PExponent::ratio(1, 4), PExponent::ratio(1, 1)}) {
      for (int n = 0; n <= 12; ++n) {
        const auto d = dirichlet_dyadic<Dyadic>(n, R);
        const double expect = std::exp2(n * (1.0 - p.reciprocal()));
        CHECK(lp_quasinorm(d, p.value()) == expect);
        CHECK(weak_lp_quasinorm(d, p.value()) == expect);
      }
    }
  }

  TEST_CASE("Lp agrees with the oracle") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 50; ++t) {
      const int m = 1 + t % 8;
      const auto f = oracle::to_function<double>(oracle::random_dyadic(rng, m), m);
      for (double p : {0.25, 0.5, 0.75, 1.0}) {
        CHECK(lp_quasinorm(f, p) == doctest::Approx(oracle::lp(oracle::to_doubles(f), p)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("weak norm matches the oracle and is below the strong norm") {
    std::mt19937_64 rng(22);
    for (int t = 0; t < 100; ++t) {
      const int m = 8;
      const auto f = oracle::to_function<double>(oracle::random_dyadic(rng, m), m);
      std::vector<double> a = oracle::to_doubles(f);
      for (auto& v : a) v = std::fabs(v);
      for (double p : {0.25, 0.5, 1.0}) {
        const double weak = weak_lp_quasinorm(f, p);
        CHECK(std::pow(weak, p) == doctest::Approx(oracle::weak_constant(a, p)).epsilon(1e-12));
        CHECK(weak <= lp_quasinorm(f, p) * (1 + 1e-12));
      }
    }
    // every +-1 pattern at m <= 4 is exhaustive; larger m sampled
    for (int m = 1; m <= 4; ++m) {
      const std::size_t N = std::size_t{1} << m;
      for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << N); ++bits) {
        DyadicFunction<double> f{Resolution(m)};
        for (Index i = 0; i < N; ++i) f[i] = ((bits >> i) & 1u) ? 1.0 : -1.0;
        CHECK(weak_lp_quasinorm(f, 0.5) <= lp_quasinorm(f, 0.5));
      }
    }
    for (int m = 5; m <= 12; ++m) {
      const auto f = random_signs(rng, m);
      CHECK(weak_lp_quasinorm(f, 0.5) <= lp_quasinorm(f, 0.5) * (1 + 1e-12));
    }
  }

  TEST_CASE("homogeneity of the quasi-norms") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 30; ++t) {
      const int m = 2 + t % 7;
      const auto f = oracle::to_function<Dyadic>(oracle::random_dyadic(rng, m), m);
      const Dyadic c = ldexp(Dyadic(static_cast<long long>(rng() % 41) - 20), -3);
      const auto cf = c * f;
      const double ac = std::fabs(c.to_double());
      const auto p = PExponent::ratio(1, 2);
      CHECK(lp_quasinorm(cf, 0.5) == doctest::Approx(ac * lp_quasinorm(f, 0.5)));
      CHECK(weak_lp_quasinorm(cf, 0.5) == doctest::Approx(ac * weak_lp_quasinorm(f, 0.5)));
      CHECK(hardy_quasinorm(cf, p) == doctest::Approx(ac * hardy_quasinorm(f, p)));
      CHECK(maximal_function(cf) == abs(c) * maximal_function(f));
    }
  }

  TEST_CASE("maximal function examples") {
    DyadicFunction<Dyadic> c(Resolution(4));
    c.values().setConstant(Dyadic(3));
    CHECK(maximal_function(c) == c);

    const Resolution R(6);
    for (int n = 0; n < 6; ++n) {
      const auto f = dirichlet_dyadic<Dyadic>(n + 1, R) - dirichlet_dyadic<Dyadic>(n, R);
      const auto expect = dirichlet_dyadic<Dyadic>(n, R);
      CHECK(maximal_function(f) == expect);
    }
  }

  TEST_CASE("maximal function matches interval averages and dominates |f|") {
    std::mt19937_64 rng(24);
    for (int m = 1; m <= 6; ++m) {
      for (int t = 0; t < 4; ++t) {
        const auto v = oracle::random_dyadic(rng, m);
        const auto f = oracle::to_function<Dyadic>(v, m);
        const auto F = maximal_function(f);
        const auto expect = oracle::maximal(v, m);
        for (Index i = 0; i < f.size(); ++i) {
          CHECK(F[i] == expect[i]);
          CHECK(abs(f[i]) <= F[i]);
        }
      }
    }
    for (std::uint64_t k = 1; k < 16; ++k) {
      const auto w = walsh<Dyadic>(k, Resolution(4));
      const auto F = maximal_function(w);
      const auto expect = oracle::maximal(std::vector<Dyadic>(w.values().begin(), w.values().end()), 4);
      for (Index i = 0; i < 16; ++i) CHECK(F[i] == expect[i]);
    }
  }

  TEST_CASE("maximal function is the sup of dyadic partial sums") {
    std::mt19937_64 rng(25);
    const int m = 6;
    const auto f = oracle::to_function<Dyadic>(oracle::random_dyadic(rng, m), m);
    DyadicFunction<Dyadic> sup{Resolution(m)};
    for (int n = 0; n <= m; ++n) {
      const auto S = partial_sum(f, std::uint64_t{1} << n);
      for (Index i = 0; i < f.size(); ++i) {
        if (sup[i] < abs(S[i])) sup[i] = abs(S[i]);
      }
    }
    CHECK(sup == maximal_function(f));
  }

  TEST_CASE("Hardy norm examples") {
    for (const auto& p : {PExponent::ratio(1, 2), PExponent::ratio(1, 3), PExponent::ratio(1, 4)}) {
      for (int n = 1; n < 10; ++n) {
        const auto f = counterexample_fn<Dyadic>(n, Resolution(10));
        CHECK(hardy_quasinorm(f, p) == std::exp2(n * (1.0 - p.reciprocal())));
      }
    }
    DyadicFunction<double> one(Resolution(5));
    one.values().setConstant(1.0);
    CHECK(hardy_quasinorm(one, PExponent::ratio(1, 2)) == 1.0);

    std::mt19937_64 rng(26);
    for (int t = 0; t < 20; ++t) {
      const int m = 3 + t % 6;
      auto f = oracle::to_function<double>(oracle::random_dyadic(rng, m), m);
      f.values() = f.values().abs();
      CHECK(hardy_quasinorm(f, PExponent::ratio(1, 2)) >= lp_quasinorm(f, 0.5));
    }
  }

  TEST_CASE("atom validation") {
    const Resolution R(6);
    for (int M = 0; M < 6; ++M) {
      const auto I = interval(GroupPoint(R, 0), M);
      const auto p = PExponent::ratio(1, 2);
      // 2^{M/p} (1_{I_{M+1}(0)} - 1_{I_{M+1}(e_M)})
      DyadicFunction<Dyadic> a(R);
      const Index half = Index{1} << (6 - M - 1);
      for (Index i = 0; i < half; ++i) {
        a[i] = Dyadic::pow2(2 * M);
        a[half + i] = -Dyadic::pow2(2 * M);
      }
      const auto ok = validate_atom(AtomSpec<Dyadic>{I, a, p});
      CHECK(ok.ok());
      CHECK(ok.worst_violation == 0.0);

      DyadicFunction<Dyadic> flat(R);
      for (Index i = I.begin(); i < I.end(); ++i) flat[i] = Dyadic::pow2(2 * M);
      const auto bad = validate_atom(AtomSpec<Dyadic>{I, flat, p});
      CHECK_FALSE(bad.zero_mean);
      CHECK(bad.sup_bound);
      CHECK(bad.support);

      CHECK(validate_atom(AtomSpec<Dyadic>{I, DyadicFunction<Dyadic>(R), p}).ok());
    }

    const auto I = interval(GroupPoint(Resolution(4), 8), 1);
    DyadicFunction<double> leak(Resolution(4));
    leak[0] = 0.5;
    const auto r = validate_atom(AtomSpec<double>{I, leak, PExponent::ratio(1, 2)});
    CHECK_FALSE(r.support);
    CHECK(r.worst_violation == 0.5);

    DyadicFunction<double> big(Resolution(4));
    big[8] = 5.0;
    big[9] = -5.0;
    const auto r2 = validate_atom(AtomSpec<double>{I, big, PExponent::ratio(1, 2)});
    CHECK(r2.zero_mean);
    CHECK_FALSE(r2.sup_bound);
    CHECK(r2.worst_violation == 1.0);

    const auto j = nlohmann::json::parse(r2.to_json());
    CHECK(j.at("zero_mean") == true);
    CHECK(j.at("sup_bound") == false);
    CHECK(j.at("support") == true);
    CHECK(j.at("worst_violation") == 1.0);
  }
}
