#include "walsh/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace walsh {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

WeightScheme WeightScheme::table(std::map<std::uint64_t, double> samples) {
  double prev = 1.0;
  for (const auto& [n, v] : samples) {
    if (n == 0) throw std::invalid_argument("weight table keys must be >= 1");
    if (!(v >= 1.0)) throw std::invalid_argument("weight table value at n=" + std::to_string(n) + " is below 1");
    if (v < prev) throw std::invalid_argument("weight table must be nondecreasing; it drops at n=" + std::to_string(n));
    prev = v;
  }
  return WeightScheme(TableWeight{std::move(samples)});
}

std::string WeightScheme::name() const {
  return std::visit(overloaded{
                        [](const UnitWeight&) { return std::string("unit"); },
                        [](const RhoWeight&) { return std::string("rho"); },
                        [](const PolyWeight&) { return std::string("poly"); },
                        [](const TableWeight&) { return std::string("table"); },
                    },
                    kind_);
}

nlohmann::ordered_json WeightScheme::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = name();
  std::visit(overloaded{
                 [](const UnitWeight&) {},
                 [&](const RhoWeight& w) { j["p"] = w.p.to_string(); },
                 [&](const PolyWeight& w) { j["p"] = w.p.to_string(); },
                 [&](const TableWeight& w) {
                   auto& t = j["table"] = nlohmann::ordered_json::array();
                   for (const auto& [n, v] : w.samples) t.push_back({n, v});
                 },
             },
             kind_);
  return j;
}

double WeightScheme::operator()(std::uint64_t n) const {
  if (n == 0) throw std::domain_error("weight(0) is undefined");
  return std::visit(overloaded{
                        [](const UnitWeight&) { return 1.0; },
                        [&](const RhoWeight& w) {
                          const int rho = index_stats(n).rho;
                          if (const auto a = w.p.integer_alpha()) return std::ldexp(1.0, rho * *a);
                          return std::exp2(rho * w.p.alpha());
                        },
                        [&](const PolyWeight& w) {
                          if (const auto a = w.p.integer_alpha()) return std::pow(static_cast<double>(n + 1), *a);
                          return std::pow(static_cast<double>(n + 1), w.p.alpha());
                        },
                        [&](const TableWeight& w) {
                          auto it = w.samples.upper_bound(n);
                          if (it == w.samples.begin()) return 1.0;
                          return std::prev(it)->second;
                        },
                    },
                    kind_);
}

std::optional<int> WeightScheme::exact_log2(std::uint64_t n) const {
  const double v = (*this)(n);
  int e = 0;
  const double frac = std::frexp(v, &e);
  if (frac != 0.5) return std::nullopt;
  // A non-integer alpha gives an approximate power; only trust exact schemes.
  if (const auto* r = std::get_if<RhoWeight>(&kind_); r && !r->p.integer_alpha() && index_stats(n).rho != 0) {
    return std::nullopt;
  }
  if (const auto* q = std::get_if<PolyWeight>(&kind_); q && !q->p.integer_alpha()) return std::nullopt;
  return e - 1;
}

Subsequence::Subsequence(std::vector<std::uint64_t> indices) : indices_(std::move(indices)) {
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] == 0) throw std::invalid_argument("subsequence indices must be positive");
    if (i > 0 && indices_[i] <= indices_[i - 1]) throw std::invalid_argument("subsequence must be strictly increasing");
  }
}

int Subsequence::sup_rho() const {
  int best = 0;
  for (const auto n : indices_) best = std::max(best, index_stats(n).rho);
  return best;
}

std::vector<bool> complement_mask(const DyadicInterval& I) {
  std::vector<bool> mask(I.resolution().size(), true);
  for (Index i = I.begin(); i < I.end(); ++i) mask[i] = false;
  return mask;
}

nlohmann::ordered_json WeakTypeReport::to_json() const {
  nlohmann::ordered_json j;
  j["p"] = p;
  j["value"] = value;
  j["attaining_level"] = attaining_level;
  j["restricted_to"] = restricted_to;
  j["function_meta"] = function_meta;
  return j;
}

}  // namespace walsh
