#pragma once

// Walsh system in Paley order, the fast Walsh-Hadamard transform, Dirichlet
// kernels and partial sums.

#include "walsh/function.hpp"
#include "walsh/index_stats.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace walsh {

namespace detail {

inline void check_frequency(std::uint64_t n, Resolution m) {
  if (n >= m.size()) throw std::out_of_range("frequency index must be < 2^m, got " + std::to_string(n));
}

inline void check_kernel_index(std::uint64_t n, Resolution m) {
  if (n < 1 || n > m.size()) {
    throw std::out_of_range("kernel index must lie in [1, 2^m], got " + std::to_string(n));
  }
}

// Writes w_n into w (length 2^m) by doubling over index bits:
// w_n(idx) = (-1)^popcount(rev_m(n) & idx).
template <WalshScalar S>
void fill_walsh(Samples<S>& w, std::uint64_t n, int m) {
  const Index r = reverse_bits(static_cast<Index>(n), m);
  w.resize(Eigen::Index{1} << m);
  w(0) = S(1);
  for (int b = 0; b < m; ++b) {
    const Eigen::Index half = Eigen::Index{1} << b;
    if ((r >> b) & 1u) {
      w.segment(half, half) = -w.head(half);
    } else {
      w.segment(half, half) = w.head(half);
    }
  }
}

template <WalshScalar S>
void multiply_by_walsh(Samples<S>& v, std::uint64_t n, int m) {
  if (n == 0) return;
  Samples<S> w;
  fill_walsh(w, n, m);
  v *= w;
}

}  // namespace detail

/// Unnormalized Paley-ordered butterfly, in place. Applying it twice scales
/// by 2^m. Produces Paley order directly: at each stage the two halves of a
/// block are combined and interleaved, so no bit-reversal pass is needed.
template <WalshScalar S>
void paley_butterfly(std::span<S> data) {
  const std::size_t n = data.size();
  if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("butterfly length must be a power of two");
  std::vector<S> scratch(n);
  S* in = data.data();
  S* out = scratch.data();
  bool in_scratch = false;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    for (std::size_t start = 0; start < n; start += len) {
      const S* a = in + start;
      const S* c = in + start + half;
      S* o = out + start;
      for (std::size_t i = 0; i < half; ++i) {
        o[2 * i] = a[i] + c[i];
        o[2 * i + 1] = a[i] - c[i];
      }
    }
    std::swap(in, out);
    in_scratch = !in_scratch;
  }
  if (in_scratch) std::copy(scratch.begin(), scratch.end(), data.begin());
}

/// r_k(x) = (-1)^(x_k).
template <WalshScalar S>
DyadicFunction<S> rademacher(int k, Resolution m) {
  if (k < 0 || k >= m.value()) throw std::out_of_range("rademacher index must lie in [0, m)");
  Samples<S> v;
  detail::fill_walsh(v, std::uint64_t{1} << k, m.value());
  return DyadicFunction<S>(m, std::move(v));
}

/// w_n = product of r_k over the set bits k of n.
template <WalshScalar S>
DyadicFunction<S> walsh(std::uint64_t n, Resolution m) {
  detail::check_frequency(n, m);
  Samples<S> v;
  detail::fill_walsh(v, n, m.value());
  return DyadicFunction<S>(m, std::move(v));
}

/// f^(k) = 2^-m sum_x f(x) w_k(x), in O(m 2^m).
template <HalvableScalar S>
SpectralVector<S> fwht_forward(const DyadicFunction<S>& f) {
  Samples<S> c = f.values();
  paley_butterfly(std::span<S>(c.data(), static_cast<std::size_t>(c.size())));
  const int m = f.resolution().value();
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = scale_pow2(c(i), -m);
  return SpectralVector<S>(f.resolution(), std::move(c));
}

/// Synthesis sum_k c(k) w_k.
template <WalshScalar S>
DyadicFunction<S> fwht_inverse(const SpectralVector<S>& c) {
  Samples<S> v = c.coeffs();
  paley_butterfly(std::span<S>(v.data(), static_cast<std::size_t>(v.size())));
  return DyadicFunction<S>(c.resolution(), std::move(v));
}

/// D_n = sum_{k<n} w_k, evaluated term by term.
template <WalshScalar S>
DyadicFunction<S> dirichlet_direct(std::uint64_t n, Resolution m) {
  detail::check_kernel_index(n, m);
  Samples<S> acc = Samples<S>::Constant(Eigen::Index(m.size()), S(0));
  Samples<S> w;
  for (std::uint64_t k = 0; k < n; ++k) {
    detail::fill_walsh(w, k, m.value());
    acc += w;
  }
  return DyadicFunction<S>(m, std::move(acc));
}

/// D_{2^k} = 2^k on I_k, 0 elsewhere.
template <WalshScalar S>
DyadicFunction<S> dirichlet_dyadic(int k, Resolution m) {
  if (k < 0 || k > m.value()) throw std::out_of_range("dyadic kernel level must lie in [0, m]");
  DyadicFunction<S> out(m);
  out.values().head(Eigen::Index{1} << (m.value() - k)).setConstant(pow2_scalar<S>(k));
  return out;
}

/// D_n = w_n sum_k n_k (D_{2^(k+1)} - D_{2^k}), with each difference written
/// as +2^k on I_(k+1) and -2^k on I_k \ I_(k+1).
template <WalshScalar S>
DyadicFunction<S> dirichlet_fast(std::uint64_t n, Resolution m) {
  detail::check_kernel_index(n, m);
  const int mm = m.value();
  if (n == m.size()) return dirichlet_dyadic<S>(mm, m);
  DyadicFunction<S> out(m);
  auto& v = out.values();
  for (int k = 0; k < mm; ++k) {
    if (((n >> k) & 1u) == 0) continue;
    const S amp = pow2_scalar<S>(k);
    const Eigen::Index inner = Eigen::Index{1} << (mm - k - 1);
    v.head(inner) += amp;
    v.segment(inner, inner) -= amp;
  }
  detail::multiply_by_walsh(v, n, mm);
  return out;
}

template <WalshScalar S>
struct PartialSum {
  DyadicFunction<S> values;
  bool tail_clamped = false;  // n > 2^m: every remaining coefficient is zero
};

/// S_n f = sum_{k<n} f^(k) w_k via truncate-then-synthesize, with the clamp flag.
template <HalvableScalar S>
PartialSum<S> partial_sum_with_info(const DyadicFunction<S>& f, std::uint64_t n) {
  if (n < 1) throw std::domain_error("partial sums are defined for n >= 1");
  if (n >= f.size()) return PartialSum<S>{f, n > f.size()};
  SpectralVector<S> c = fwht_forward(f);
  c.coeffs().tail(Eigen::Index(f.size() - n)).setConstant(S(0));
  return PartialSum<S>{fwht_inverse(c), false};
}

template <HalvableScalar S>
DyadicFunction<S> partial_sum(const DyadicFunction<S>& f, std::uint64_t n) {
  return partial_sum_with_info(f, n).values;
}

}  // namespace walsh
