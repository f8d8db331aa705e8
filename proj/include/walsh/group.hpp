#pragma once

// Finite model of the dyadic group at resolution m.
//
// A point is an index in [0, 2^m). Coordinate x_j is bit (m-1-j) of the index,
// so x_0 is the most significant bit and every dyadic interval I_n(x) is the
// contiguous index range of length 2^(m-n) containing x. Group addition is
// XOR of indices.

#include "walsh/dyadic_rational.hpp"

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace walsh {

using Index = std::uint32_t;

inline constexpr int kMaxResolution = 24;

/// Number of binary coordinates modeled, 1 <= m <= 24.
class Resolution {
 public:
  explicit Resolution(int m);

  int value() const { return m_; }
  std::size_t size() const { return std::size_t{1} << m_; }

  friend bool operator==(Resolution, Resolution) = default;

 private:
  int m_;
};

class GroupPoint {
 public:
  GroupPoint(Resolution m, Index idx);
  static GroupPoint from_coordinates(Resolution m, std::span<const int> coords);

  Resolution resolution() const { return m_; }
  Index index() const { return idx_; }
  /// x_j, 0 <= j < m.
  int coordinate(int j) const;
  std::vector<int> coordinates() const;

  friend bool operator==(const GroupPoint&, const GroupPoint&) = default;

 private:
  Resolution m_;
  Index idx_;
};

/// I_n(x): points agreeing with x on coordinates 0..n-1.
class DyadicInterval {
 public:
  DyadicInterval(GroupPoint base, int level);

  int level() const { return level_; }
  const GroupPoint& base() const { return base_; }
  Resolution resolution() const { return base_.resolution(); }

  Index begin() const;
  Index end() const;
  std::size_t length() const { return std::size_t{end() - begin()}; }
  bool contains(Index idx) const { return idx >= begin() && idx < end(); }
  /// 2^-level.
  Dyadic measure() const { return Dyadic::pow2(-level_); }

  friend bool operator==(const DyadicInterval& a, const DyadicInterval& b) {
    return a.level_ == b.level_ && a.begin() == b.begin() && a.resolution() == b.resolution();
  }

 private:
  GroupPoint base_;
  int level_;
};

struct Shell {
  int s;          // shell I_s \ I_{s+1}
  Index begin;    // contiguous index range [begin, end)
  Index end;
  Dyadic measure;
};

/// Shells I_s \ I_{s+1}, s = 0..m-1, around the origin; together with
/// I_m(0) = {0} they partition the group.
struct ShellDecomposition {
  Resolution m;
  std::vector<Shell> shells;
};

/// e_k: coordinate k equal to 1, all others 0.
GroupPoint point_e(int k, Resolution m);
DyadicInterval interval(const GroupPoint& x, int n);
ShellDecomposition shell_decomposition(Resolution m);

/// Haar measure of a finite index set (duplicates counted once).
Dyadic measure(std::span<const Index> set, Resolution m);

/// Shell of x relative to base: the s with x in I_s(base) \ I_{s+1}(base),
/// or m when x == base.
int shell_of(Index x, Index base, Resolution m);

/// Bit reversal of the low m bits.
inline Index reverse_bits(Index v, int m) {
  Index r = 0;
  for (int i = 0; i < m; ++i) {
    r = (r << 1) | (v & 1u);
    v >>= 1;
  }
  return r;
}

/// Value of w_n at point idx as a sign bit: (-1)^walsh_parity(n, idx, m).
inline int walsh_parity(std::uint64_t n, Index idx, int m) {
  return std::popcount(n & reverse_bits(idx, m)) & 1;
}

}  // namespace walsh
