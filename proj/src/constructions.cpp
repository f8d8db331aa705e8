#include "walsh/constructions.hpp"

#include <stdexcept>

namespace walsh {

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below needs a positive bound");
  // Lemire's multiply-shift with rejection.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const unsigned __int128 wide = static_cast<unsigned __int128>(engine_()) * bound;
    if (static_cast<std::uint64_t>(wide) >= threshold) return static_cast<std::uint64_t>(wide >> 64);
  }
}

std::int64_t Rng::between(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("Rng::between needs lo <= hi");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(below(span));
}

std::string to_string(AtomGenerator g) {
  switch (g) {
    case AtomGenerator::HaarPair:
      return "haar-pair";
    case AtomGenerator::RandomSigns:
      return "random-signs";
    case AtomGenerator::RandomBounded:
      return "random-bounded";
  }
  return "?";
}

AtomGenerator parse_atom_generator(std::string_view text) {
  if (text == "haar-pair") return AtomGenerator::HaarPair;
  if (text == "random-signs") return AtomGenerator::RandomSigns;
  if (text == "random-bounded") return AtomGenerator::RandomBounded;
  throw std::invalid_argument("unknown atom generator '" + std::string(text) + "'");
}

nlohmann::ordered_json AtomRecipe::to_json() const {
  nlohmann::ordered_json j;
  j["M"] = M;
  j["base"] = base;
  j["p"] = p.to_string();
  j["generator"] = to_string(generator);
  j["seed"] = seed;
  return j;
}

AtomRecipe AtomRecipe::from_json(const nlohmann::json& j) {
  AtomRecipe r;
  r.M = j.at("M").get<int>();
  r.base = j.value("base", std::uint64_t{0});
  const auto& p = j.at("p");
  r.p = p.is_string() ? PExponent::parse(p.get<std::string>()) : PExponent(p.get<double>());
  r.generator = parse_atom_generator(j.value("generator", std::string("haar-pair")));
  r.seed = j.value("seed", std::uint64_t{0});
  return r;
}

namespace detail {

void check_atom_recipe(const AtomRecipe& r, Resolution m) {
  if (r.M < 0 || r.M > m.value()) throw std::out_of_range("atom level M must lie in [0, m]");
  if (r.M == m.value()) throw std::invalid_argument("atom support of a single cell cannot have zero mean");
  if (r.M < 64 && (r.base >> r.M) != 0) throw std::out_of_range("atom base must be an M-bit index");
}

}  // namespace detail

DyadicInterval atom_support(const AtomRecipe& r, Resolution m) {
  detail::check_atom_recipe(r, m);
  const auto idx = static_cast<Index>(r.base << (m.value() - r.M));
  return DyadicInterval(GroupPoint(m, idx), r.M);
}

ProbeIndex probe_index(int n, int s) {
  if (s < 0 || s >= n || n > 62) throw std::out_of_range("probe index needs 0 <= s < n <= 62");
  return ProbeIndex{n, s, (std::uint64_t{1} << n) + (std::uint64_t{1} << s)};
}

}  // namespace walsh
