#pragma once

// Named, reproducible experiments with machine-readable verdicts.

#include "walsh/constructions.hpp"
#include "walsh/operators.hpp"

#include "json.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace walsh {

/// Raised when a config fails validation; lists every offending field.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// Weight scheme as written in a config; "rho" and "poly" take p per case.
struct SchemeSpec {
  std::string kind = "rho";  // unit | rho | poly | table
  std::map<std::uint64_t, double> table;

  WeightScheme build(const PExponent& p) const;
  nlohmann::ordered_json to_json() const;
};

struct ExperimentConfig {
  std::string name;  // thm1 | thm2 | thm2b | corollaries | kernels | lemma1 | sandwich
  std::vector<PExponent> p;
  std::vector<int> resolutions;
  int trials = 1;
  std::uint64_t seed = 0;
  SchemeSpec scheme;
  std::optional<std::vector<std::uint64_t>> subsequence;
  std::optional<std::vector<std::pair<int, int>>> probes;  // (n, s)
  int detail = 3;  // atom resolution m = M + detail
  int jobs = 1;
  std::string output;

  nlohmann::ordered_json to_json() const;
  /// Throws ConfigError naming every invalid field.
  static ExperimentConfig from_json(const nlohmann::json& j);
};

/// Plot-ready columns.
struct Series {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ExperimentReport {
  std::string name;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::vector<nlohmann::ordered_json> cases;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  bool verdict = false;
  std::vector<Series> series;

  nlohmann::ordered_json to_json() const;
  /// One row per case, columns from the first case's keys.
  std::string to_csv() const;
  /// Every series, each preceded by a "# name" line.
  std::string to_tsv() const;
};

inline constexpr int kMaxExhaustiveResolution = 12;
inline constexpr int kMaxSandwichResolution = 14;
inline constexpr int kMaxExperimentResolution = 14;

/// Bit-exact agreement of the direct sum, the fast form, the D_{2^k} closed
/// form, the Rademacher-product form, and the shift identity
/// D_{2^K + j} = D_{2^K} + w_{2^K} D_j.
ExperimentReport verify_kernels(Resolution m);

/// |D_n| = |D_{n - 2^|n|}| and |D_n| >= 2^[n] / 4 on I_{[n]+1}(e_[n]).
ExperimentReport verify_lemma1(Resolution m);

/// V(n)/8 <= ||D_n||_1 <= V(n), exactly, for all n <= 2^m.
ExperimentReport verify_kernel_l1_sandwich(Resolution m);

/// Weak-type constants of the weighted maximal operator on random atoms.
ExperimentReport theorem1_weak_type(const ExperimentConfig& cfg);

/// Growth of ||weighted maximal f_n||_p / ||f_n||_{H_p} in n.
ExperimentReport theorem2_growth(const ExperimentConfig& cfg);

/// Weak-L_p ratio along probe indices for a weight phi.
ExperimentReport theorem2_weak_divergence(const ExperimentConfig& cfg, const WeightScheme& phi);

/// Weak-type constants of the corollary operators.
ExperimentReport corollary_suite(const ExperimentConfig& cfg);

/// Dispatches on cfg.name.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Least-squares slope of y against x.
double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace walsh
