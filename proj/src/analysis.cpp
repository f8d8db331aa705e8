#include "walsh/analysis.hpp"

#include "json.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace walsh {

PExponent::PExponent(double p) : p_(p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("p must lie in (0, 1], got " + std::to_string(p));
  const double k = std::round(1.0 / p);
  if (k >= 1.0 && k < 1e6 && 1.0 / k == p) {
    num_ = 1;
    den_ = static_cast<int>(k);
  }
}

PExponent PExponent::ratio(int num, int den) {
  if (den <= 0 || num <= 0 || num > den) throw std::domain_error("p = num/den must lie in (0, 1]");
  const int g = std::gcd(num, den);
  PExponent e(static_cast<double>(num) / den);
  e.num_ = num / g;
  e.den_ = den / g;
  return e;
}

PExponent PExponent::parse(std::string_view text) {
  const std::string s(text);
  try {
    if (const auto slash = s.find('/'); slash != std::string::npos) {
      std::size_t a = 0;
      std::size_t b = 0;
      const int num = std::stoi(s.substr(0, slash), &a);
      const int den = std::stoi(s.substr(slash + 1), &b);
      if (a != slash || b != s.size() - slash - 1) throw std::invalid_argument("trailing characters");
      return ratio(num, den);
    }
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return PExponent(v);
  } catch (const std::domain_error&) {
    throw;
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse exponent p from '" + s + "'");
  }
}

std::optional<int> PExponent::integer_alpha() const {
  if (num_ == 1) return den_ - 1;
  return std::nullopt;
}

std::optional<int> PExponent::integer_multiple_of_reciprocal(int level) const {
  if (num_ > 0 && (static_cast<long long>(level) * den_) % num_ == 0) {
    return static_cast<int>(static_cast<long long>(level) * den_ / num_);
  }
  return std::nullopt;
}

std::string PExponent::to_string() const {
  if (num_ > 0) return std::to_string(num_) + "/" + std::to_string(den_);
  return format_scalar(p_);
}

std::string AtomReport::to_json() const {
  nlohmann::ordered_json j;
  j["zero_mean"] = zero_mean;
  j["sup_bound"] = sup_bound;
  j["support"] = support;
  j["worst_violation"] = worst_violation;
  return j.dump();
}

namespace detail {

void check_positive_p(double p) {
  if (!(p > 0.0)) throw std::domain_error("quasi-norm exponent must be positive");
}

double lp_from_levels(const std::vector<std::pair<double, std::size_t>>& levels, int m, double p) {
  if (levels.empty() || levels.front().first == 0.0) return 0.0;
  const double top = levels.front().first;
  double total = 0.0;
  // Smallest terms first.
  for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
    if (it->first == 0.0) continue;
    const double ratio = it->first == top ? 1.0 : std::pow(it->first / top, p);
    total += static_cast<double>(it->second) * ratio;
  }
  return top * std::pow(std::ldexp(total, -m), 1.0 / p);
}

double weak_from_levels(const std::vector<std::pair<double, std::size_t>>& levels, int m, double p,
                        double* attaining_level) {
  double best = 0.0;
  double best_level = 0.0;
  std::size_t cumulative = 0;
  for (const auto& [v, count] : levels) {
    cumulative += count;
    if (v == 0.0) break;
    const double cand = v * std::pow(std::ldexp(static_cast<double>(cumulative), -m), 1.0 / p);
    if (cand > best) {
      best = cand;
      best_level = v;
    }
  }
  if (attaining_level) *attaining_level = best_level;
  return best;
}

double atom_bound(int level, const PExponent& p) {
  if (const auto e = p.integer_multiple_of_reciprocal(level)) return std::ldexp(1.0, *e);
  return std::exp2(level * p.reciprocal());
}

}  // namespace detail

}  // namespace walsh
