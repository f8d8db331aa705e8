#pragma once

// Quasi-norms, the martingale maximal function, H_p and p-atoms.

#include "walsh/function.hpp"
#include "walsh/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace walsh {

/// Exponent p in (0, 1]. Remembers 1/p exactly when p = 1/k.
class PExponent {
 public:
  explicit PExponent(double p);
  /// p = num/den.
  static PExponent ratio(int num, int den);
  /// "0.5", "1/2", "3/4".
  static PExponent parse(std::string_view text);

  double value() const { return p_; }
  double reciprocal() const { return num_ > 0 ? static_cast<double>(den_) / num_ : 1.0 / p_; }
  /// 1/p - 1.
  double alpha() const { return num_ > 0 ? static_cast<double>(den_ - num_) / num_ : 1.0 / p_ - 1.0; }
  /// 1/p - 1 when it is a nonnegative integer (p in {1, 1/2, 1/3, ...}).
  std::optional<int> integer_alpha() const;
  /// level/p when it is an integer.
  std::optional<int> integer_multiple_of_reciprocal(int level) const;

  std::string to_string() const;

  friend bool operator==(const PExponent& a, const PExponent& b) { return a.p_ == b.p_; }

 private:
  double p_;
  int num_ = 0;  // 0 when p is only known as a double
  int den_ = 0;
};

/// Distinct absolute levels of f, descending, each with the number of points
/// where |f| equals it. Optionally restricted to a mask.
template <WalshScalar S>
std::vector<std::pair<double, std::size_t>> absolute_levels(const DyadicFunction<S>& f,
                                                            const std::vector<bool>* mask = nullptr) {
  std::vector<double> a;
  a.reserve(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (mask && !(*mask)[i]) continue;
    a.push_back(std::fabs(to_double(f[static_cast<Index>(i)])));
  }
  std::sort(a.begin(), a.end(), std::greater<>());
  std::vector<std::pair<double, std::size_t>> levels;
  for (double v : a) {
    if (!levels.empty() && levels.back().first == v) {
      ++levels.back().second;
    } else {
      levels.emplace_back(v, 1);
    }
  }
  return levels;
}

namespace detail {
void check_positive_p(double p);
double lp_from_levels(const std::vector<std::pair<double, std::size_t>>& levels, int m, double p);
double weak_from_levels(const std::vector<std::pair<double, std::size_t>>& levels, int m, double p,
                        double* attaining_level);
}  // namespace detail

/// (2^-m sum |f|^p)^(1/p). Computed as max|f| * (sum mu_v (v/max)^p)^(1/p)
/// so single-level functions with power-of-two measure come out exact.
template <WalshScalar S>
double lp_quasinorm(const DyadicFunction<S>& f, double p) {
  detail::check_positive_p(p);
  return detail::lp_from_levels(absolute_levels(f), f.resolution().value(), p);
}

/// sup_lambda lambda mu(|f| > lambda)^(1/p), evaluated exactly as the max over
/// levels v of v * mu(|f| >= v)^(1/p).
template <WalshScalar S>
double weak_lp_quasinorm(const DyadicFunction<S>& f, double p) {
  detail::check_positive_p(p);
  return detail::weak_from_levels(absolute_levels(f), f.resolution().value(), p, nullptr);
}

/// Averages of f over the blocks I_j(x), for every level j = 0..m; entry j has
/// 2^j values.
template <HalvableScalar S>
std::vector<Samples<S>> block_averages(const DyadicFunction<S>& f) {
  const int m = f.resolution().value();
  std::vector<Samples<S>> avg(static_cast<std::size_t>(m + 1));
  avg[static_cast<std::size_t>(m)] = f.values();
  for (int j = m - 1; j >= 0; --j) {
    const auto& fine = avg[static_cast<std::size_t>(j + 1)];
    Samples<S> coarse(Eigen::Index{1} << j);
    for (Eigen::Index i = 0; i < coarse.size(); ++i) coarse(i) = scale_pow2(S(fine(2 * i) + fine(2 * i + 1)), -1);
    avg[static_cast<std::size_t>(j)] = std::move(coarse);
  }
  return avg;
}

/// F* = sup_n |S_{2^n} f| = sup_n |average of f over I_n(x)|.
template <HalvableScalar S>
DyadicFunction<S> maximal_function(const DyadicFunction<S>& f) {
  const int m = f.resolution().value();
  const auto avg = block_averages(f);
  DyadicFunction<S> out(f.resolution(), f.values().abs());
  auto& v = out.values();
  for (int j = 0; j < m; ++j) {
    const auto& a = avg[static_cast<std::size_t>(j)];
    const int shift = m - j;
    for (Eigen::Index x = 0; x < v.size(); ++x) {
      const S cand = abs(S(a(x >> shift)));
      if (v(x) < cand) v(x) = cand;
    }
  }
  return out;
}

/// ||F||_{H_p} = ||F*||_p for the regular martingale (S_{2^n} f).
template <HalvableScalar S>
double hardy_quasinorm(const DyadicFunction<S>& f, const PExponent& p) {
  return lp_quasinorm(maximal_function(f), p.value());
}

template <WalshScalar S>
struct AtomSpec {
  DyadicInterval support;
  DyadicFunction<S> values;
  PExponent p;
};

struct AtomReport {
  bool zero_mean = false;
  bool sup_bound = false;
  bool support = false;
  double worst_violation = 0.0;

  bool ok() const { return zero_mean && sup_bound && support; }
  std::string to_json() const;
};

namespace detail {
// mu(I)^(-1/p) for an interval of the given level.
double atom_bound(int level, const PExponent& p);
}  // namespace detail

/// Checks the three atom conditions. Exact scalars are checked with zero
/// tolerance; double values get a relative tolerance of 2^-40 on the mean,
/// which only matters when mu(I)^(-1/p) is not a power of two.
template <WalshScalar S>
AtomReport validate_atom(const AtomSpec<S>& a) {
  AtomReport r;
  const auto& f = a.values;
  const auto& I = a.support;
  if (!(f.resolution() == I.resolution())) throw std::invalid_argument("atom support and values differ in resolution");

  double off_support = 0.0;
  S sum_in = S(0);
  double sup_in = 0.0;
  S max_abs = S(0);
  for (Index i = 0; i < f.size(); ++i) {
    const S v = f[i];
    if (I.contains(i)) {
      sum_in += v;
      const S av = abs(v);
      if (max_abs < av) max_abs = av;
    } else {
      off_support = std::max(off_support, std::fabs(to_double(v)));
    }
  }
  sup_in = to_double(max_abs);
  const double bound = detail::atom_bound(I.level(), a.p);
  const double mean_in = std::ldexp(to_double(sum_in), -(I.resolution().value() - I.level()));

  r.support = off_support == 0.0;
  if constexpr (is_exact_scalar_v<S>) {
    r.zero_mean = sum_in == S(0);
    if (const auto e = a.p.integer_multiple_of_reciprocal(I.level())) {
      r.sup_bound = !(Dyadic::pow2(*e) < Dyadic(max_abs));
    } else {
      r.sup_bound = sup_in <= bound;
    }
  } else {
    r.zero_mean = std::fabs(mean_in) <= std::ldexp(bound, -40);
    r.sup_bound = sup_in <= bound;
  }
  r.worst_violation = std::max({std::fabs(mean_in), std::max(sup_in - bound, 0.0), off_support});
  return r;
}

}  // namespace walsh
