#include "walsh/index_stats.hpp"

#include <bit>
#include <stdexcept>

namespace walsh {

IndexStats index_stats(std::uint64_t n) {
  if (n == 0) throw std::domain_error("[0] and |0| are undefined");
  IndexStats st;
  st.n = n;
  st.low = std::countr_zero(n);
  st.high = std::bit_width(n) - 1;
  st.rho = st.high - st.low;
  // Each 0/1 boundary in the expansion, including the one above the top bit,
  // contributes 1; n_0 counts the boundary below bit 0.
  st.variation = static_cast<int>(n & 1u);
  for (int k = 1; k <= st.high + 1; ++k) {
    const auto bk = (k < 64) ? (n >> k) & 1u : 0u;
    const auto bprev = (n >> (k - 1)) & 1u;
    st.variation += static_cast<int>(bk != bprev);
  }
  return st;
}

std::string binary_string(std::uint64_t n) {
  if (n == 0) return "0";
  std::string out;
  for (int k = std::bit_width(n) - 1; k >= 0; --k) out.push_back(((n >> k) & 1u) ? '1' : '0');
  return out;
}

}  // namespace walsh
