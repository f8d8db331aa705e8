#pragma once

// Test objects: p-atoms, the sharpness functions f_n = D_{2^(n+1)} - D_{2^n},
// and the probe indices q = 2^n + 2^s.

#include "walsh/analysis.hpp"
#include "walsh/spectral.hpp"

#include "json.hpp"

#include <bit>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace walsh {

/// Reproducible stream of 64-bit draws keyed by (seed, stream). The engine is
/// std::mt19937_64 (its output sequence is fixed by the standard); bounded
/// draws avoid std distributions, whose algorithms vary across libraries.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);

 private:
  std::mt19937_64 engine_;
};

enum class AtomGenerator { HaarPair, RandomSigns, RandomBounded };

std::string to_string(AtomGenerator g);
AtomGenerator parse_atom_generator(std::string_view text);

struct AtomRecipe {
  int M = 0;               // support level
  std::uint64_t base = 0;  // first M coordinates of the support, as an M-bit index
  PExponent p{0.5};
  AtomGenerator generator = AtomGenerator::HaarPair;
  std::uint64_t seed = 0;

  nlohmann::ordered_json to_json() const;
  static AtomRecipe from_json(const nlohmann::json& j);
};

/// The support I_M of a recipe at resolution m.
DyadicInterval atom_support(const AtomRecipe& r, Resolution m);

namespace detail {
void check_atom_recipe(const AtomRecipe& r, Resolution m);
}  // namespace detail

/// Builds a p-atom on I_M at resolution m. Exact scalars require
/// mu(I_M)^(-1/p) to be a power of two.
template <HalvableScalar S>
AtomSpec<S> make_atom(const AtomRecipe& r, Resolution m) {
  detail::check_atom_recipe(r, m);
  const DyadicInterval I = atom_support(r, m);
  const auto exact_exp = r.p.integer_multiple_of_reciprocal(r.M);
  if constexpr (is_exact_scalar_v<S>) {
    if (!exact_exp) {
      throw std::domain_error("exact atoms need M/p to be an integer; p = " + r.p.to_string());
    }
  }
  S bound;
  if constexpr (is_exact_scalar_v<S>) {
    bound = pow2_scalar<S>(*exact_exp);
  } else {
    bound = detail::atom_bound(r.M, r.p);
  }
  const std::size_t cells = I.length();
  const Index b = I.begin();
  DyadicFunction<S> f(m);
  Rng rng(r.seed, 0);

  switch (r.generator) {
    case AtomGenerator::HaarPair:
      for (std::size_t i = 0; i < cells; ++i) f[b + Index(i)] = i < cells / 2 ? bound : S(-bound);
      break;
    case AtomGenerator::RandomSigns: {
      // Half plus, half minus, in random order.
      std::vector<int> signs(cells);
      for (std::size_t i = 0; i < cells; ++i) signs[i] = i < cells / 2 ? 1 : -1;
      for (std::size_t i = cells - 1; i > 0; --i) std::swap(signs[i], signs[rng.below(i + 1)]);
      for (std::size_t i = 0; i < cells; ++i) f[b + Index(i)] = signs[i] > 0 ? bound : S(-bound);
      break;
    }
    case AtomGenerator::RandomBounded: {
      // Integers in [-2^16, 2^16], centered (exact: the count is a power of
      // two), so every centered value lies in [-2^17, 2^17].
      constexpr int kBits = 16;
      std::vector<std::int64_t> raw(cells);
      std::int64_t total = 0;
      for (auto& v : raw) {
        v = rng.between(-(std::int64_t{1} << kBits), std::int64_t{1} << kBits);
        total += v;
      }
      const int log_cells = std::countr_zero(cells);
      const Dyadic mean = ldexp(Dyadic(static_cast<long long>(total)), -log_cells);
      for (std::size_t i = 0; i < cells; ++i) {
        const Dyadic unit = ldexp(Dyadic(static_cast<long long>(raw[i])) - mean, -(kBits + 1));
        if constexpr (std::same_as<S, Dyadic>) {
          f[b + Index(i)] = unit * bound;
        } else {
          f[b + Index(i)] = unit.to_double() * bound;
        }
      }
      break;
    }
  }
  return AtomSpec<S>{I, std::move(f), r.p};
}

/// f_n = D_{2^(n+1)} - D_{2^n}: 2^n on I_(n+1), -2^n on I_n \ I_(n+1).
template <WalshScalar S>
DyadicFunction<S> counterexample_fn(int n, Resolution m) {
  if (n < 1) throw std::out_of_range("sharpness function index must be >= 1");
  if (n + 1 > m.value()) throw std::out_of_range("sharpness function f_n needs n + 1 <= m");
  DyadicFunction<S> f(m);
  const S amp = pow2_scalar<S>(n);
  const Eigen::Index inner = Eigen::Index{1} << (m.value() - n - 1);
  f.values().head(inner).setConstant(amp);
  f.values().segment(inner, inner).setConstant(S(-amp));
  return f;
}

struct ProbeIndex {
  int n = 0;
  int s = 0;
  std::uint64_t q = 0;  // 2^n + 2^s
};

/// Throws std::out_of_range unless 0 <= s < n <= 62.
ProbeIndex probe_index(int n, int s);

/// S_q f_n with q = 2^n + 2^s.
template <HalvableScalar S>
DyadicFunction<S> partial_sum_probe(int n, int s, Resolution m) {
  const ProbeIndex q = probe_index(n, s);
  return partial_sum(counterexample_fn<S>(n, m), q.q);
}

}  // namespace walsh
