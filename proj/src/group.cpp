#include "walsh/group.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace walsh {

Resolution::Resolution(int m) : m_(m) {
  if (m < 1 || m > kMaxResolution) {
    throw std::out_of_range("resolution must lie in [1, 24], got " + std::to_string(m));
  }
}

GroupPoint::GroupPoint(Resolution m, Index idx) : m_(m), idx_(idx) {
  if (idx >= m.size()) throw std::out_of_range("point index outside [0, 2^m)");
}

GroupPoint GroupPoint::from_coordinates(Resolution m, std::span<const int> coords) {
  if (coords.size() != static_cast<std::size_t>(m.value())) {
    throw std::invalid_argument("expected exactly m coordinates");
  }
  Index idx = 0;
  for (int c : coords) {
    if (c != 0 && c != 1) throw std::invalid_argument("coordinates must be 0 or 1");
    idx = (idx << 1) | static_cast<Index>(c);
  }
  return GroupPoint(m, idx);
}

int GroupPoint::coordinate(int j) const {
  if (j < 0 || j >= m_.value()) throw std::out_of_range("coordinate index outside [0, m)");
  return static_cast<int>((idx_ >> (m_.value() - 1 - j)) & 1u);
}

std::vector<int> GroupPoint::coordinates() const {
  std::vector<int> out(static_cast<std::size_t>(m_.value()));
  for (int j = 0; j < m_.value(); ++j) out[static_cast<std::size_t>(j)] = coordinate(j);
  return out;
}

DyadicInterval::DyadicInterval(GroupPoint base, int level) : base_(base), level_(level) {
  if (level < 0 || level > base.resolution().value()) {
    throw std::out_of_range("interval level outside [0, m]");
  }
}

Index DyadicInterval::begin() const {
  const int shift = resolution().value() - level_;
  return (base_.index() >> shift) << shift;
}

Index DyadicInterval::end() const {
  return begin() + (Index{1} << (resolution().value() - level_));
}

GroupPoint point_e(int k, Resolution m) {
  if (k < 0 || k >= m.value()) throw std::out_of_range("e_k requires 0 <= k < m");
  return GroupPoint(m, Index{1} << (m.value() - 1 - k));
}

DyadicInterval interval(const GroupPoint& x, int n) { return DyadicInterval(x, n); }

ShellDecomposition shell_decomposition(Resolution m) {
  ShellDecomposition out{m, {}};
  out.shells.reserve(static_cast<std::size_t>(m.value()));
  for (int s = 0; s < m.value(); ++s) {
    const Index hi = Index{1} << (m.value() - s);
    out.shells.push_back(Shell{s, hi / 2, hi, Dyadic::pow2(-(s + 1))});
  }
  return out;
}

Dyadic measure(std::span<const Index> set, Resolution m) {
  std::vector<Index> sorted(set.begin(), set.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (!sorted.empty() && sorted.back() >= m.size()) {
    throw std::out_of_range("index set contains points outside [0, 2^m)");
  }
  return ldexp(Dyadic(static_cast<long long>(sorted.size())), -m.value());
}

int shell_of(Index x, Index base, Resolution m) {
  const Index diff = x ^ base;
  if (diff == 0) return m.value();
  return m.value() - std::bit_width(diff);
}

}  // namespace walsh
