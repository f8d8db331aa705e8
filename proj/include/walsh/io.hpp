#pragma once

// DyadicFunction serialization: CSV rows "index,value" (decimal or p/q) and a
// binary form of an 8-byte little-endian count followed by float64 values.

#include "walsh/function.hpp"

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace walsh {

template <WalshScalar S>
void write_csv(std::ostream& os, const DyadicFunction<S>& f) {
  os << "index,value\n";
  for (Index i = 0; i < f.size(); ++i) os << i << ',' << format_scalar(f[i]) << '\n';
}

namespace detail {
std::vector<std::string> read_csv_values(std::istream& is);
int resolution_for_count(std::size_t count);
void write_le64(std::ostream& os, std::uint64_t v);
std::uint64_t read_le64(std::istream& is);
}  // namespace detail

/// Reads rows in index order; the row count must be a power of two.
template <WalshScalar S>
DyadicFunction<S> read_csv(std::istream& is) {
  const auto cells = detail::read_csv_values(is);
  const Resolution m(detail::resolution_for_count(cells.size()));
  DyadicFunction<S> f(m);
  for (std::size_t i = 0; i < cells.size(); ++i) f[static_cast<Index>(i)] = parse_scalar<S>(cells[i]);
  return f;
}

void write_binary(std::ostream& os, const DyadicFunction<double>& f);
DyadicFunction<double> read_binary(std::istream& is);

}  // namespace walsh
