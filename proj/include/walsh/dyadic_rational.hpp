#pragma once

#include <Eigen/Core>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace walsh {

/// Exact dyadic rational mantissa * 2^exponent.
///
/// The mantissa is a 128-bit integer kept odd (or zero, with exponent 0), so
/// every value has one representation and equality is bitwise. Every
/// operation is exact; a result whose mantissa would not fit throws
/// std::overflow_error rather than rounding. Only division by powers of two
/// is provided (ldexp), which keeps the set closed.
class Dyadic {
 public:
  using Mantissa = __int128;

  constexpr Dyadic() = default;
  // Implicit from integers so Eigen can build Scalar(0) and Scalar(1).
  Dyadic(int v) : Dyadic(static_cast<long long>(v)) {}
  Dyadic(long v) : Dyadic(static_cast<long long>(v)) {}
  Dyadic(long long v);

  static Dyadic from_parts(Mantissa mantissa, int exponent);
  /// Exact conversion; throws std::domain_error for non-finite input.
  static Dyadic from_double(double v);
  /// Accepts "p", "p/q" with q a power of two, or a decimal whose double
  /// value is taken exactly.
  static Dyadic parse(std::string_view text);
  static Dyadic pow2(int k) { return from_parts(1, k); }

  Mantissa mantissa() const { return mant_; }
  int exponent() const { return exp_; }
  bool is_zero() const { return mant_ == 0; }
  int sign() const { return mant_ > 0 ? 1 : (mant_ < 0 ? -1 : 0); }

  /// Nearest double (round-to-nearest on the mantissa).
  double to_double() const;
  /// "p" for integers, "p/q" otherwise.
  std::string to_string() const;

  Dyadic operator-() const;
  Dyadic& operator+=(const Dyadic& o);
  Dyadic& operator-=(const Dyadic& o);
  Dyadic& operator*=(const Dyadic& o);

  friend Dyadic operator+(Dyadic a, const Dyadic& b) { return a += b; }
  friend Dyadic operator-(Dyadic a, const Dyadic& b) { return a -= b; }
  friend Dyadic operator*(Dyadic a, const Dyadic& b) { return a *= b; }

  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.mant_ == b.mant_ && a.exp_ == b.exp_;
  }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

 private:
  void normalize();

  Mantissa mant_ = 0;
  int exp_ = 0;
};

/// x * 2^k, exact.
Dyadic ldexp(const Dyadic& x, int k);
Dyadic abs(const Dyadic& x);
std::ostream& operator<<(std::ostream& os, const Dyadic& x);

std::string int128_to_string(__int128 v);

}  // namespace walsh

namespace Eigen {

template <>
struct NumTraits<walsh::Dyadic> : GenericNumTraits<walsh::Dyadic> {
  using Real = walsh::Dyadic;
  using NonInteger = walsh::Dyadic;
  using Nested = walsh::Dyadic;
  using Literal = walsh::Dyadic;

  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 8,
    MulCost = 8
  };

  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 38; }
};

}  // namespace Eigen
