#pragma once

// Brute-force reference implementations written from the definitions, used to
// check the library. Nothing here calls into the library's algorithms.

#include "walsh/function.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using walsh::Dyadic;

// x_j of the point with this index.
inline int coord(std::uint64_t idx, int j, int m) { return static_cast<int>((idx >> (m - 1 - j)) & 1u); }

// w_n(x) = prod_k r_k(x)^(n_k), r_k(x) = (-1)^(x_k).
inline int walsh_value(std::uint64_t n, std::uint64_t idx, int m) {
  int v = 1;
  for (int k = 0; k < m; ++k) {
    if ((n >> k) & 1u) v *= coord(idx, k, m) ? -1 : 1;
  }
  return v;
}

inline Eigen::MatrixXd walsh_matrix(int m) {
  const int N = 1 << m;
  Eigen::MatrixXd W(N, N);
  for (int k = 0; k < N; ++k) {
    for (int x = 0; x < N; ++x) W(k, x) = walsh_value(static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(x), m);
  }
  return W;
}

// f^(k) = 2^-m sum_x f(x) w_k(x), term by term in exact arithmetic.
inline std::vector<Dyadic> coefficients(const std::vector<Dyadic>& f, int m) {
  const std::size_t N = f.size();
  std::vector<Dyadic> c(N);
  for (std::size_t k = 0; k < N; ++k) {
    Dyadic acc(0);
    for (std::size_t x = 0; x < N; ++x) {
      acc += walsh_value(k, x, m) > 0 ? f[x] : -f[x];
    }
    c[k] = walsh::ldexp(acc, -m);
  }
  return c;
}

inline std::vector<Dyadic> synthesize(const std::vector<Dyadic>& c, std::uint64_t upto, int m) {
  const std::size_t N = c.size();
  std::vector<Dyadic> f(N, Dyadic(0));
  for (std::size_t k = 0; k < upto && k < N; ++k) {
    for (std::size_t x = 0; x < N; ++x) f[x] += walsh_value(k, x, m) > 0 ? c[k] : -c[k];
  }
  return f;
}

inline std::vector<long long> dirichlet(std::uint64_t n, int m) {
  const std::size_t N = std::size_t{1} << m;
  std::vector<long long> d(N, 0);
  for (std::uint64_t k = 0; k < n; ++k) {
    for (std::size_t x = 0; x < N; ++x) d[x] += walsh_value(k, x, m);
  }
  return d;
}

struct Stats {
  int low, high, rho, V;
};

inline Stats index_stats(std::uint64_t n) {
  std::vector<int> bits;
  for (std::uint64_t v = n; v; v >>= 1) bits.push_back(static_cast<int>(v & 1u));
  Stats s{};
  s.low = -1;
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (bits[k] && s.low < 0) s.low = static_cast<int>(k);
    if (bits[k]) s.high = static_cast<int>(k);
  }
  s.rho = s.high - s.low;
  bits.push_back(0);
  s.V = bits[0];
  for (std::size_t k = 1; k < bits.size(); ++k) s.V += std::abs(bits[k] - bits[k - 1]);
  return s;
}

// y in I_n(x): first n coordinates agree.
inline bool same_block(std::uint64_t x, std::uint64_t y, int n, int m) {
  for (int j = 0; j < n; ++j) {
    if (coord(x, j, m) != coord(y, j, m)) return false;
  }
  return true;
}

// sup_n |mean of f over I_n(x)|.
inline std::vector<Dyadic> maximal(const std::vector<Dyadic>& f, int m) {
  const std::size_t N = f.size();
  std::vector<Dyadic> out(N, Dyadic(0));
  for (std::size_t x = 0; x < N; ++x) {
    for (int n = 0; n <= m; ++n) {
      Dyadic sum(0);
      for (std::size_t y = 0; y < N; ++y) {
        if (same_block(x, y, n, m)) sum += f[y];
      }
      const Dyadic avg = walsh::abs(walsh::ldexp(sum, -(m - n)));
      if (out[x] < avg) out[x] = avg;
    }
  }
  return out;
}

// sup_{1 <= n <= upper} |S_n f| / weight(n), S_n f = f beyond 2^m.
inline std::vector<double> weighted_maximal(const std::vector<Dyadic>& f, int m,
                                            const std::function<double(std::uint64_t)>& weight,
                                            std::uint64_t upper) {
  const auto c = coefficients(f, m);
  const std::size_t N = f.size();
  std::vector<double> out(N, 0.0);
  for (std::uint64_t n = 1; n <= upper; ++n) {
    const auto S = synthesize(c, n, m);
    const double w = weight(n);
    for (std::size_t x = 0; x < N; ++x) out[x] = std::max(out[x], std::fabs(S[x].to_double()) / w);
  }
  return out;
}

// sup_t t^p mu{x in mask : g(x) >= t}, trying every value of g as t.
inline double weak_constant(const std::vector<double>& g, double p, const std::vector<bool>* mask = nullptr) {
  const double N = static_cast<double>(g.size());
  double best = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double t = g[i];
    if (t <= 0.0) continue;
    std::size_t count = 0;
    for (std::size_t x = 0; x < g.size(); ++x) {
      if ((!mask || (*mask)[x]) && g[x] >= t) ++count;
    }
    best = std::max(best, std::pow(t, p) * static_cast<double>(count) / N);
  }
  return best;
}

inline double lp(const std::vector<double>& g, double p) {
  double s = 0.0;
  for (double v : g) s += std::pow(std::fabs(v), p);
  return std::pow(s / static_cast<double>(g.size()), 1.0 / p);
}

// Random dyadic values k / 2^shift with |k| <= 2^bits.
inline std::vector<Dyadic> random_dyadic(std::mt19937_64& rng, int m, int bits = 12, int shift = 4) {
  std::uniform_int_distribution<long long> dist(-(1LL << bits), 1LL << bits);
  std::vector<Dyadic> v(std::size_t{1} << m);
  for (auto& x : v) x = walsh::ldexp(Dyadic(dist(rng)), -shift);
  return v;
}

template <walsh::WalshScalar S>
walsh::DyadicFunction<S> to_function(const std::vector<Dyadic>& v, int m) {
  walsh::DyadicFunction<S> f{walsh::Resolution(m)};
  for (std::size_t i = 0; i < v.size(); ++i) f[static_cast<walsh::Index>(i)] = walsh::from_dyadic<S>(v[i]);
  return f;
}

template <walsh::WalshScalar S>
std::vector<double> to_doubles(const walsh::DyadicFunction<S>& f) {
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = walsh::to_double(f[static_cast<walsh::Index>(i)]);
  return out;
}

}  // namespace oracle
