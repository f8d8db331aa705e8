#pragma once

#include "walsh/dyadic_rational.hpp"

#include <charconv>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace walsh {

// Scalars a DyadicFunction may hold: float64, exact dyadic rationals, and
// exact integers (kernels only; integers cannot be halved).
template <typename S>
concept WalshScalar = std::same_as<S, double> || std::same_as<S, Dyadic> || std::same_as<S, std::int64_t>;

template <typename S>
concept HalvableScalar = std::same_as<S, double> || std::same_as<S, Dyadic>;

template <WalshScalar S>
inline constexpr bool is_exact_scalar_v = !std::same_as<S, double>;

inline double abs(double x) { return std::fabs(x); }
inline std::int64_t abs(std::int64_t x) { return x < 0 ? -x : x; }

inline double to_double(double x) { return x; }
inline double to_double(std::int64_t x) { return static_cast<double>(x); }
inline double to_double(const Dyadic& x) { return x.to_double(); }

/// x * 2^k. Exact for every HalvableScalar (double: barring under/overflow).
inline double scale_pow2(double x, int k) { return std::ldexp(x, k); }
inline Dyadic scale_pow2(const Dyadic& x, int k) { return ldexp(x, k); }
inline std::int64_t scale_pow2(std::int64_t x, int k) {
  if (k < 0) throw std::domain_error("integer scalar cannot be divided by a power of two");
  return x * (std::int64_t{1} << k);
}

template <WalshScalar S>
S pow2_scalar(int k) {
  if constexpr (std::same_as<S, double>) {
    return std::ldexp(1.0, k);
  } else if constexpr (std::same_as<S, Dyadic>) {
    return Dyadic::pow2(k);
  } else {
    if (k < 0 || k > 62) throw std::domain_error("integer scalar cannot hold 2^k");
    return std::int64_t{1} << k;
  }
}

/// Converts an exact dyadic value into S. Throws for integer S when the value
/// is fractional.
template <WalshScalar S>
S from_dyadic(const Dyadic& d) {
  if constexpr (std::same_as<S, double>) {
    return d.to_double();
  } else if constexpr (std::same_as<S, Dyadic>) {
    return d;
  } else {
    if (d.exponent() < 0) throw std::domain_error("fractional value in integer function");
    const Dyadic::Mantissa v = d.mantissa() * (static_cast<Dyadic::Mantissa>(1) << d.exponent());
    return static_cast<std::int64_t>(v);
  }
}

/// 17 significant digits for doubles (round-trip safe); "p/q" for exact.
inline std::string format_scalar(double x) {
  char buf[40];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, ptr);
}
inline std::string format_scalar(const Dyadic& x) { return x.to_string(); }
inline std::string format_scalar(std::int64_t x) { return std::to_string(x); }

template <WalshScalar S>
S parse_scalar(std::string_view text) {
  if constexpr (std::same_as<S, double>) {
    // Decimal input keeps its double value even if it is not exactly dyadic.
    if (text.find('/') == std::string_view::npos) {
      std::size_t used = 0;
      const std::string s(text);
      const double v = std::stod(s, &used);
      while (used < s.size() && (s[used] == ' ' || s[used] == '\r' || s[used] == '\t')) ++used;
      if (used != s.size()) throw std::invalid_argument("cannot parse value '" + s + "'");
      return v;
    }
    return Dyadic::parse(text).to_double();
  } else {
    return from_dyadic<S>(Dyadic::parse(text));
  }
}

}  // namespace walsh
