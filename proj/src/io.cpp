#include "walsh/io.hpp"

#include <cstring>

namespace walsh {

namespace detail {

std::vector<std::string> read_csv_values(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("CSV input is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "index,value") throw std::invalid_argument("CSV header must be 'index,value'");
  std::vector<std::string> values;
  std::size_t row = 0;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("CSV row " + std::to_string(row) + " has no comma");
    const std::string idx = line.substr(0, comma);
    if (idx != std::to_string(row)) {
      throw std::invalid_argument("CSV row " + std::to_string(row) + " has index '" + idx + "'");
    }
    values.push_back(line.substr(comma + 1));
    ++row;
  }
  return values;
}

int resolution_for_count(std::size_t count) {
  if (count < 2 || !std::has_single_bit(count)) {
    throw std::invalid_argument("value count must be 2^m with m >= 1, got " + std::to_string(count));
  }
  return std::countr_zero(count);
}

void write_le64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t read_le64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) throw std::invalid_argument("binary input truncated");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

}  // namespace detail

void write_binary(std::ostream& os, const DyadicFunction<double>& f) {
  detail::write_le64(os, f.size());
  for (Index i = 0; i < f.size(); ++i) detail::write_le64(os, std::bit_cast<std::uint64_t>(f[i]));
}

DyadicFunction<double> read_binary(std::istream& is) {
  const std::uint64_t count = detail::read_le64(is);
  const Resolution m(detail::resolution_for_count(count));
  DyadicFunction<double> f(m);
  for (Index i = 0; i < f.size(); ++i) f[i] = std::bit_cast<double>(detail::read_le64(is));
  return f;
}

}  // namespace walsh
