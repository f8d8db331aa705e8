#pragma once

#include "walsh/group.hpp"
#include "walsh/scalar.hpp"

#include <Eigen/Core>

#include <stdexcept>

namespace walsh {

template <WalshScalar S>
using Samples = Eigen::Array<S, Eigen::Dynamic, 1>;

/// A function on G constant on the cosets of I_m, stored as its 2^m values.
template <WalshScalar S>
class DyadicFunction {
 public:
  using Scalar = S;

  explicit DyadicFunction(Resolution m) : m_(m), values_(Samples<S>::Constant(Eigen::Index(m.size()), S(0))) {}
  DyadicFunction(Resolution m, Samples<S> values) : m_(m), values_(std::move(values)) {
    if (static_cast<std::size_t>(values_.size()) != m.size()) {
      throw std::invalid_argument("DyadicFunction: expected exactly 2^m values");
    }
  }

  Resolution resolution() const { return m_; }
  std::size_t size() const { return m_.size(); }

  const Samples<S>& values() const { return values_; }
  Samples<S>& values() { return values_; }

  S operator[](Index i) const { return values_(Eigen::Index(i)); }
  S& operator[](Index i) { return values_(Eigen::Index(i)); }

  /// 2^m times the integral (exact sum of values).
  S sum() const { return values_.sum(); }

  /// Integral over G in double precision.
  double integral() const { return std::ldexp(to_double(sum()), -m_.value()); }

  template <WalshScalar T>
  DyadicFunction<T> cast() const {
    Samples<T> out(values_.size());
    for (Eigen::Index i = 0; i < values_.size(); ++i) {
      if constexpr (std::same_as<T, double>) {
        out(i) = to_double(values_(i));
      } else if constexpr (std::same_as<S, T>) {
        out(i) = values_(i);
      } else if constexpr (std::same_as<S, double>) {
        out(i) = from_dyadic<T>(Dyadic::from_double(values_(i)));
      } else if constexpr (std::same_as<S, std::int64_t>) {
        out(i) = from_dyadic<T>(Dyadic(static_cast<long long>(values_(i))));
      } else {
        out(i) = from_dyadic<T>(values_(i));
      }
    }
    return DyadicFunction<T>(m_, std::move(out));
  }

  friend bool operator==(const DyadicFunction& a, const DyadicFunction& b) {
    return a.m_ == b.m_ && (a.values_ == b.values_).all();
  }

  DyadicFunction& operator+=(const DyadicFunction& o) {
    check_same(o);
    values_ += o.values_;
    return *this;
  }
  DyadicFunction& operator-=(const DyadicFunction& o) {
    check_same(o);
    values_ -= o.values_;
    return *this;
  }
  friend DyadicFunction operator+(DyadicFunction a, const DyadicFunction& b) { return a += b; }
  friend DyadicFunction operator-(DyadicFunction a, const DyadicFunction& b) { return a -= b; }
  friend DyadicFunction operator*(const S& c, DyadicFunction f) {
    f.values_ *= c;
    return f;
  }
  /// Pointwise product.
  friend DyadicFunction operator*(DyadicFunction a, const DyadicFunction& b) {
    a.check_same(b);
    a.values_ *= b.values_;
    return a;
  }

 private:
  void check_same(const DyadicFunction& o) const {
    if (!(m_ == o.m_)) throw std::invalid_argument("DyadicFunction: resolution mismatch");
  }

  Resolution m_;
  Samples<S> values_;
};

/// Walsh-Fourier coefficients f^(0..2^m-1) in Paley order.
template <WalshScalar S>
class SpectralVector {
 public:
  using Scalar = S;

  explicit SpectralVector(Resolution m) : m_(m), coeffs_(Samples<S>::Constant(Eigen::Index(m.size()), S(0))) {}
  SpectralVector(Resolution m, Samples<S> coeffs) : m_(m), coeffs_(std::move(coeffs)) {
    if (static_cast<std::size_t>(coeffs_.size()) != m.size()) {
      throw std::invalid_argument("SpectralVector: expected exactly 2^m coefficients");
    }
  }

  Resolution resolution() const { return m_; }
  std::size_t size() const { return m_.size(); }
  const Samples<S>& coeffs() const { return coeffs_; }
  Samples<S>& coeffs() { return coeffs_; }
  S operator[](std::size_t k) const { return coeffs_(Eigen::Index(k)); }
  S& operator[](std::size_t k) { return coeffs_(Eigen::Index(k)); }

  friend bool operator==(const SpectralVector& a, const SpectralVector& b) {
    return a.m_ == b.m_ && (a.coeffs_ == b.coeffs_).all();
  }

 private:
  Resolution m_;
  Samples<S> coeffs_;
};

}  // namespace walsh
