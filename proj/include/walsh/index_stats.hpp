#pragma once

#include <cstdint>
#include <string>

namespace walsh {

/// Binary characteristics of a frequency index n >= 1.
struct IndexStats {
  std::uint64_t n = 0;
  int low = 0;        // [n], lowest set bit
  int high = 0;       // |n|, highest set bit
  int rho = 0;        // |n| - [n]
  int variation = 0;  // V(n) = n_0 + sum_k |n_k - n_(k-1)|
};

/// Throws std::domain_error for n = 0.
IndexStats index_stats(std::uint64_t n);

/// Binary expansion, most significant bit first.
std::string binary_string(std::uint64_t n);

}  // namespace walsh
