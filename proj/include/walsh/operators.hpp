#pragma once

// Weighted and restricted maximal operators of the partial sums, and the
// weak-type level measurement applied to their outputs.

#include "walsh/analysis.hpp"
#include "walsh/spectral.hpp"

#include "json.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace walsh {

struct UnitWeight {};
/// 2^(rho(n)(1/p - 1)).
struct RhoWeight {
  PExponent p;
};
/// (n + 1)^(1/p - 1).
struct PolyWeight {
  PExponent p;
};
/// phi(n) given at sample points, extended as a right-continuous step
/// function (value of the largest key <= n, and 1 below the first key).
struct TableWeight {
  std::map<std::uint64_t, double> samples;
};

/// A rule n -> weight(n) >= 1 for the denominator of a maximal operator.
class WeightScheme {
 public:
  using Kind = std::variant<UnitWeight, RhoWeight, PolyWeight, TableWeight>;

  static WeightScheme unit() { return WeightScheme(UnitWeight{}); }
  static WeightScheme rho(PExponent p) { return WeightScheme(RhoWeight{p}); }
  static WeightScheme poly(PExponent p) { return WeightScheme(PolyWeight{p}); }
  /// Throws std::invalid_argument unless every value is >= 1 and the values
  /// are nondecreasing in n.
  static WeightScheme table(std::map<std::uint64_t, double> samples);

  const Kind& kind() const { return kind_; }
  std::string name() const;
  nlohmann::ordered_json to_json() const;

  /// Throws std::domain_error for n = 0.
  double operator()(std::uint64_t n) const;
  /// log2 of the weight when it is an exact power of two.
  std::optional<int> exact_log2(std::uint64_t n) const;

 private:
  explicit WeightScheme(Kind k) : kind_(std::move(k)) {}
  Kind kind_;
};

inline double weight(const WeightScheme& scheme, std::uint64_t n) { return scheme(n); }

/// Strictly increasing positive indices n_0 < n_1 < ...
class Subsequence {
 public:
  explicit Subsequence(std::vector<std::uint64_t> indices);

  const std::vector<std::uint64_t>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  /// sup_k rho(n_k).
  int sup_rho() const;

 private:
  std::vector<std::uint64_t> indices_;
};

namespace detail {

// |v| / w, exact for Dyadic when w is a power of two.
template <HalvableScalar S>
void divide_into_max(Samples<S>& out, const Samples<S>& cur, const WeightScheme& scheme, std::uint64_t n) {
  if constexpr (std::same_as<S, Dyadic>) {
    const auto e = scheme.exact_log2(n);
    if (!e) throw std::domain_error("exact scalars need power-of-two weights; weight(" + std::to_string(n) + ") is not");
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      const Dyadic cand = ldexp(abs(cur(i)), -*e);
      if (out(i) < cand) out(i) = cand;
    }
  } else {
    const double w = scheme(n);
    out = out.max(cur.abs() / w);
  }
}

}  // namespace detail

struct MaximalOptions {
  /// Largest n in the supremum; 0 means 2^m. For n > 2^m, S_n f = f.
  std::uint64_t upper = 0;
  /// Worker threads. The result does not depend on this value.
  int jobs = 1;
};

/// sup over n in [1, upper] of |S_n f| / weight(n).
///
/// Partial sums are accumulated one coefficient at a time. Consecutive n with
/// a zero coefficient share the same S_n, so only the smallest weight of such
/// a run is applied. The range of n is cut into a fixed set of chunks, each
/// starting from a synthesized S_n, so the output is identical for any jobs.
template <HalvableScalar S>
DyadicFunction<S> weighted_maximal(const DyadicFunction<S>& f, const WeightScheme& scheme,
                                   const MaximalOptions& opts = {}) {
  const int m = f.resolution().value();
  const std::uint64_t size = f.size();
  const std::uint64_t upper = opts.upper == 0 ? size : opts.upper;
  const std::uint64_t finite_upper = std::min(upper, size);
  const SpectralVector<S> spec = fwht_forward(f);

  constexpr std::uint64_t kChunks = 64;
  const std::uint64_t chunk = std::max<std::uint64_t>(1, (finite_upper + kChunks - 1) / kChunks);
  const std::uint64_t nchunks = (finite_upper + chunk - 1) / chunk;

  // Chunk c covers n in [c*chunk + 1, min((c+1)*chunk, finite_upper)].
  auto run_chunk = [&](std::uint64_t c) {
    const std::uint64_t first = c * chunk + 1;
    const std::uint64_t last = std::min((c + 1) * chunk, finite_upper);
    Samples<S> out = Samples<S>::Constant(Eigen::Index(size), S(0));
    Samples<S> cur;
    if (first == 1) {
      cur = Samples<S>::Constant(Eigen::Index(size), S(0));
    } else {
      SpectralVector<S> head = spec;
      head.coeffs().tail(Eigen::Index(size - (first - 1))).setConstant(S(0));
      cur = fwht_inverse(head).values();
    }
    Samples<S> w;
    std::uint64_t run_best = 0;
    double run_best_weight = std::numeric_limits<double>::infinity();
    auto flush = [&] {
      if (run_best != 0) detail::divide_into_max(out, cur, scheme, run_best);
      run_best = 0;
      run_best_weight = std::numeric_limits<double>::infinity();
    };
    for (std::uint64_t n = first; n <= last; ++n) {
      // S_n = S_(n-1) + f^(n-1) w_(n-1).
      const S coeff = spec[n - 1];
      if (coeff != S(0)) {
        if (n != first) flush();
        detail::fill_walsh(w, n - 1, m);
        cur += coeff * w;
      }
      const double wn = scheme(n);
      if (wn < run_best_weight) {
        run_best_weight = wn;
        run_best = n;
      }
    }
    // The last chunk also absorbs n in (2^m, upper], where S_n f = f.
    if (last == finite_upper) {
      for (std::uint64_t n = size + 1; n <= upper; ++n) {
        const double wn = scheme(n);
        if (wn < run_best_weight) {
          run_best_weight = wn;
          run_best = n;
        }
      }
    }
    flush();
    return out;
  };

  std::vector<Samples<S>> partial(nchunks);
  const auto jobs = static_cast<std::uint64_t>(std::max(1, opts.jobs));
  if (jobs == 1 || nchunks == 1) {
    for (std::uint64_t c = 0; c < nchunks; ++c) partial[c] = run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (std::uint64_t t = 0; t < std::min(jobs, nchunks); ++t) {
      pool.emplace_back([&, t] {
        for (std::uint64_t c = t; c < nchunks; c += jobs) partial[c] = run_chunk(c);
      });
    }
    for (auto& th : pool) th.join();
  }
  Samples<S> result = Samples<S>::Constant(Eigen::Index(size), S(0));
  for (const auto& p : partial) {
    for (Eigen::Index i = 0; i < result.size(); ++i) {
      if (result(i) < p(i)) result(i) = p(i);
    }
  }
  return DyadicFunction<S>(f.resolution(), std::move(result));
}

/// sup_k |S_{n_k} f| / weight(n_k). Indices beyond 2^m give S_n f = f.
template <HalvableScalar S>
DyadicFunction<S> restricted_maximal(const DyadicFunction<S>& f, const Subsequence& seq, const WeightScheme& scheme) {
  if (seq.empty()) throw std::invalid_argument("restricted maximal operator needs a nonempty subsequence");
  const std::uint64_t size = f.size();
  const SpectralVector<S> spec = fwht_forward(f);
  Samples<S> out = Samples<S>::Constant(Eigen::Index(size), S(0));
  for (const std::uint64_t n : seq.indices()) {
    Samples<S> cur;
    if (n >= size) {
      cur = f.values();
    } else {
      SpectralVector<S> head = spec;
      head.coeffs().tail(Eigen::Index(size - n)).setConstant(S(0));
      cur = fwht_inverse(head).values();
    }
    detail::divide_into_max(out, cur, scheme, n);
  }
  return DyadicFunction<S>(f.resolution(), std::move(out));
}

/// Indicator of the complement of an interval.
std::vector<bool> complement_mask(const DyadicInterval& I);

struct WeakTypeReport {
  double p = 0.0;
  double value = 0.0;            // sup_t t^p mu{g >= t} (over the restriction set)
  double attaining_level = 0.0;  // t where the sup is attained; 0 when g == 0
  std::string restricted_to = "G";
  nlohmann::ordered_json function_meta = nlohmann::ordered_json::object();

  nlohmann::ordered_json to_json() const;
};

/// sup_t t^p mu{x in set : g(x) >= t}, exactly over the levels of g.
template <WalshScalar S>
WeakTypeReport weak_type_constant(const DyadicFunction<S>& g, const PExponent& p,
                                  const std::vector<bool>* restrict_to = nullptr,
                                  std::string restricted_label = "G") {
  WeakTypeReport r;
  r.p = p.value();
  r.restricted_to = restrict_to ? std::move(restricted_label) : std::string("G");
  const auto levels = absolute_levels(g, restrict_to);
  const int m = g.resolution().value();
  std::size_t cumulative = 0;
  for (const auto& [v, count] : levels) {
    cumulative += count;
    if (v == 0.0) break;
    const double cand = std::pow(v, p.value()) * std::ldexp(static_cast<double>(cumulative), -m);
    if (cand > r.value) {
      r.value = cand;
      r.attaining_level = v;
    }
  }
  r.function_meta["resolution"] = m;
  return r;
}

}  // namespace walsh
