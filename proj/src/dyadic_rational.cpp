#include "walsh/dyadic_rational.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace walsh {

namespace {

using U128 = unsigned __int128;

constexpr __int128 kMax = static_cast<__int128>(~U128{0} >> 1);

int ctz128(U128 v) {
  const auto lo = static_cast<std::uint64_t>(v);
  if (lo != 0) return std::countr_zero(lo);
  return 64 + std::countr_zero(static_cast<std::uint64_t>(v >> 64));
}

U128 magnitude(__int128 v) {
  return v < 0 ? U128(0) - static_cast<U128>(v) : static_cast<U128>(v);
}

// a << k with overflow detection.
__int128 shift_left_checked(__int128 a, int k) {
  if (a == 0 || k == 0) return a;
  if (k >= 127 || magnitude(a) > (static_cast<U128>(kMax) >> k)) {
    throw std::overflow_error("Dyadic: mantissa overflow while aligning exponents");
  }
  return a * (static_cast<__int128>(1) << k);
}

__int128 parse_int128(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("Dyadic: empty integer");
  bool neg = false;
  std::size_t i = 0;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) throw std::invalid_argument("Dyadic: bad integer");
  U128 acc = 0;
  for (; i < s.size(); ++i) {
    const char c = s[i];
    if (c < '0' || c > '9') throw std::invalid_argument("Dyadic: bad integer '" + std::string(s) + "'");
    const U128 next = acc * 10 + static_cast<unsigned>(c - '0');
    if (next / 10 != acc || next > static_cast<U128>(kMax)) {
      throw std::overflow_error("Dyadic: integer literal too large");
    }
    acc = next;
  }
  const auto v = static_cast<__int128>(acc);
  return neg ? -v : v;
}

}  // namespace

std::string int128_to_string(__int128 v) {
  if (v == 0) return "0";
  U128 m = magnitude(v);
  std::string out;
  while (m != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(m % 10)));
    m /= 10;
  }
  if (v < 0) out.push_back('-');
  std::reverse(out.begin(), out.end());
  return out;
}

Dyadic::Dyadic(long long v) : mant_(v), exp_(0) { normalize(); }

Dyadic Dyadic::from_parts(Mantissa mantissa, int exponent) {
  Dyadic d;
  d.mant_ = mantissa;
  d.exp_ = exponent;
  d.normalize();
  return d;
}

Dyadic Dyadic::from_double(double v) {
  if (!std::isfinite(v)) throw std::domain_error("Dyadic: non-finite value");
  if (v == 0.0) return Dyadic{};
  int e = 0;
  const double frac = std::frexp(v, &e);  // |frac| in [0.5, 1)
  const auto m = static_cast<long long>(std::ldexp(frac, 53));
  return from_parts(m, e - 53);
}

Dyadic Dyadic::parse(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("Dyadic: empty value");

  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const __int128 num = parse_int128(text.substr(0, slash));
    const __int128 den = parse_int128(text.substr(slash + 1));
    if (den <= 0 || (den & (den - 1)) != 0) {
      throw std::invalid_argument("Dyadic: denominator must be a positive power of two: '" +
                                  std::string(text) + "'");
    }
    return from_parts(num, -ctz128(static_cast<U128>(den)));
  }
  if (text.find_first_of(".eE") == std::string_view::npos &&
      text.find("inf") == std::string_view::npos && text.find("nan") == std::string_view::npos) {
    return from_parts(parse_int128(text), 0);
  }
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw std::invalid_argument("Dyadic: cannot parse '" + std::string(text) + "'");
  }
  return from_double(v);
}

void Dyadic::normalize() {
  if (mant_ == 0) {
    exp_ = 0;
    return;
  }
  const int tz = ctz128(magnitude(mant_));
  if (tz > 0) {
    mant_ /= (static_cast<__int128>(1) << tz);
    exp_ += tz;
  }
}

double Dyadic::to_double() const {
  return std::ldexp(static_cast<double>(mant_), exp_);
}

std::string Dyadic::to_string() const {
  if (exp_ >= 0) return int128_to_string(shift_left_checked(mant_, exp_));
  if (-exp_ > 126) throw std::overflow_error("Dyadic: denominator too large to print");
  return int128_to_string(mant_) + "/" + int128_to_string(static_cast<__int128>(1) << -exp_);
}

Dyadic Dyadic::operator-() const {
  Dyadic d = *this;
  d.mant_ = -d.mant_;
  return d;
}

Dyadic& Dyadic::operator+=(const Dyadic& o) {
  if (o.mant_ == 0) return *this;
  if (mant_ == 0) return *this = o;
  const int e = std::min(exp_, o.exp_);
  const __int128 a = shift_left_checked(mant_, exp_ - e);
  const __int128 b = shift_left_checked(o.mant_, o.exp_ - e);
  __int128 s = 0;
  if (__builtin_add_overflow(a, b, &s)) throw std::overflow_error("Dyadic: addition overflow");
  mant_ = s;
  exp_ = e;
  normalize();
  return *this;
}

Dyadic& Dyadic::operator-=(const Dyadic& o) { return *this += -o; }

Dyadic& Dyadic::operator*=(const Dyadic& o) {
  __int128 p = 0;
  if (__builtin_mul_overflow(mant_, o.mant_, &p)) throw std::overflow_error("Dyadic: multiplication overflow");
  mant_ = p;
  exp_ = p == 0 ? 0 : exp_ + o.exp_;
  normalize();
  return *this;
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  if (a.sign() != b.sign()) return a.sign() <=> b.sign();
  return (a - b).sign() <=> 0;
}

Dyadic ldexp(const Dyadic& x, int k) {
  if (x.is_zero()) return x;
  return Dyadic::from_parts(x.mantissa(), x.exponent() + k);
}

Dyadic abs(const Dyadic& x) { return x.sign() < 0 ? -x : x; }

std::ostream& operator<<(std::ostream& os, const Dyadic& x) { return os << x.to_string(); }

}  // namespace walsh
