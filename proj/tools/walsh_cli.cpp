// Command-line front end. Exit codes: 0 pass, 1 verified-false, 2 usage or
// config error.

#include "walsh/experiments.hpp"
#include "walsh/io.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace walsh;
using ojson = nlohmann::ordered_json;

constexpr int kPass = 0;
constexpr int kFalse = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string resolution;
  std::string p;
  int trials = 0;
  std::uint64_t seed = 42;
  bool exact = false;
  int jobs = 1;
  std::string output;
  std::string format;  // empty: the subcommand default

  std::string format_or(const char* fallback) const { return format.empty() ? fallback : format; }
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--resolution,-m", c.resolution, "Resolution m, or a list like 4..9 or 4,6,8");
  cmd->add_option("--p", c.p, "Exponent(s) p, e.g. 1/2 or 1/4,1/2,3/4");
  cmd->add_option("--trials", c.trials, "Atoms per cell")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "Random seed");
  cmd->add_flag("--exact", c.exact, "Exact dyadic arithmetic");
  cmd->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--output,-o", c.output, "Output path");
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv", "tsv", "table"}));
}

std::vector<int> parse_int_list(const std::string& text, const char* what) {
  std::vector<int> out;
  try {
    if (const auto dots = text.find(".."); dots != std::string::npos) {
      const int a = std::stoi(text.substr(0, dots));
      const int b = std::stoi(text.substr(dots + 2));
      if (b < a) throw std::invalid_argument("empty range");
      for (int v = a; v <= b; ++v) out.push_back(v);
      return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing characters");
    }
  } catch (const std::exception&) {
    throw UsageError(std::string("cannot parse ") + what + " '" + text + "'");
  }
  if (out.empty()) throw UsageError(std::string("empty ") + what);
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

int single_resolution(const Common& c, int fallback) {
  if (c.resolution.empty()) return fallback;
  const auto v = parse_int_list(c.resolution, "resolution");
  if (v.size() != 1) throw UsageError("expected a single resolution");
  return v.front();
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw UsageError("cannot open output file '" + path + "'");
  return file;
}

// Cases as aligned columns, then the verdict.
std::string render_table(const ExperimentReport& r) {
  std::vector<std::string> cols;
  if (!r.cases.empty()) {
    for (const auto& [k, _] : r.cases.front().items()) cols.push_back(k);
  }
  auto cell = [](const ojson& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  std::vector<std::size_t> width(cols.size());
  for (std::size_t i = 0; i < cols.size(); ++i) {
    width[i] = cols[i].size();
    for (const auto& c : r.cases) {
      if (c.contains(cols[i])) width[i] = std::max(width[i], cell(c[cols[i]]).size());
    }
  }
  std::ostringstream os;
  auto row = [&](auto get) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      const std::string v = get(i);
      os << v;
      if (i + 1 < cols.size()) os << std::string(width[i] - v.size() + 2, ' ');
    }
    os << '\n';
  };
  os << r.name << '\n';
  row([&](std::size_t i) { return cols[i]; });
  for (const auto& c : r.cases) row([&](std::size_t i) { return c.contains(cols[i]) ? cell(c[cols[i]]) : ""; });
  os << "verdict: " << (r.verdict ? "pass" : "fail") << '\n';
  return os.str();
}

// JSON to stdout or --output in the requested format; when writing an
// experiment to a file, the sibling .csv and .tsv files are written too.
void emit_report(const ExperimentReport& r, const std::string& output, const std::string& format) {
  auto render = [&](const std::string& fmt) {
    if (fmt == "csv") return r.to_csv();
    if (fmt == "tsv") return r.to_tsv();
    if (fmt == "table") return render_table(r);
    return r.to_json().dump(2) + "\n";
  };
  if (output.empty() || output == "-") {
    std::cout << render(format);
    return;
  }
  std::filesystem::path base(output);
  const std::string ext = base.extension().string();
  if (ext == ".json" || ext == ".csv" || ext == ".tsv") base.replace_extension();
  for (const std::string fmt : {"json", "csv", "tsv"}) {
    std::filesystem::path p = base;
    p += "." + fmt;
    std::ofstream f(p, std::ios::binary);
    if (!f) throw UsageError("cannot open output file '" + p.string() + "'");
    f << render(fmt);
  }
}

ojson base_config(const std::string& name, const Common& c) {
  ojson j;
  j["name"] = name;
  if (!c.p.empty()) j["p"] = split_list(c.p);
  if (!c.resolution.empty()) j["resolutions"] = parse_int_list(c.resolution, "resolution");
  if (c.trials > 0) j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["jobs"] = c.jobs;
  if (!c.output.empty()) j["output"] = c.output;
  return j;
}

ExperimentConfig validated(const ojson& j) {
  return ExperimentConfig::from_json(nlohmann::json::parse(j.dump()));
}

int run_and_emit(const ExperimentConfig& cfg, const Common& c) {
  const auto report = run_experiment(cfg);
  emit_report(report, c.output.empty() ? cfg.output : c.output, c.format_or("json"));
  return report.verdict ? kPass : kFalse;
}

// ---------------------------------------------------------------------------

int cmd_stats(std::uint64_t n, const Common& c) {
  if (n == 0) throw UsageError("stats needs n >= 1");
  const IndexStats st = index_stats(n);
  std::ofstream file;
  std::ostream& os = open_output(c.output, file);
  if (c.format_or("json") == "table") {
    os << "n\t" << st.n << "\nbinary\t" << binary_string(n) << "\n[n]\t" << st.low << "\n|n|\t" << st.high
       << "\nrho\t" << st.rho << "\nV\t" << st.variation << '\n';
  } else {
    ojson j;
    j["n"] = st.n;
    j["binary"] = binary_string(n);
    j["low"] = st.low;
    j["high"] = st.high;
    j["rho"] = st.rho;
    j["V"] = st.variation;
    os << j.dump() << '\n';
  }
  return kPass;
}

template <WalshScalar S>
void write_function(std::ostream& os, const DyadicFunction<S>& f, const std::string& format) {
  if (format == "json") {
    ojson j;
    j["resolution"] = f.resolution().value();
    ojson vals = ojson::array();
    for (Index i = 0; i < f.size(); ++i) vals.push_back(format_scalar(f[i]));
    j["values"] = vals;
    os << j.dump() << '\n';
  } else {
    write_csv(os, f);
  }
}

int cmd_kernel(std::uint64_t n, const Common& c) {
  const int mm = single_resolution(c, 0);
  if (mm < 1 || mm > kMaxResolution) throw UsageError("kernel needs --resolution in [1, 24]");
  const Resolution m(mm);
  if (n < 1 || n > m.size()) throw UsageError("kernel index must lie in [1, 2^m]");
  std::ofstream file;
  std::ostream& os = open_output(c.output, file);
  const std::string fmt = c.format_or("csv");
  if (c.exact) {
    write_function(os, dirichlet_fast<std::int64_t>(n, m), fmt);
  } else {
    write_function(os, dirichlet_fast<double>(n, m), fmt);
  }
  return kPass;
}

int cmd_transform(const std::string& input, bool inverse, const Common& c) {
  std::ifstream in(input, std::ios::binary);
  if (!in) throw UsageError("cannot read input file '" + input + "'");
  const bool binary = std::filesystem::path(input).extension() == ".bin";
  if (binary && c.exact) throw UsageError("binary input holds float64 values; --exact needs CSV input");
  std::ofstream file;
  std::ostream& os = open_output(c.output, file);
  const std::string fmt = c.format_or("csv");
  auto run = [&]<HalvableScalar S>(DyadicFunction<S> f) {
    if (inverse) {
      write_function(os, fwht_inverse(SpectralVector<S>(f.resolution(), f.values())), fmt);
    } else {
      const auto spec = fwht_forward(f);
      write_function(os, DyadicFunction<S>(spec.resolution(), spec.coeffs()), fmt);
    }
  };
  try {
    if (binary) {
      run(read_binary(in));
    } else if (c.exact) {
      run(read_csv<Dyadic>(in));
    } else {
      run(read_csv<double>(in));
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  } catch (const std::out_of_range& e) {
    throw UsageError(e.what());
  }
  return kPass;
}

int cmd_verify(const std::string& which, const Common& c) {
  const int mm = single_resolution(c, 10);
  const int cap = which == "sandwich" ? kMaxSandwichResolution : kMaxExhaustiveResolution;
  if (mm < 1 || mm > cap) {
    throw UsageError("verify " + which + " supports --resolution in [1, " + std::to_string(cap) + "]");
  }
  const Resolution m(mm);
  std::vector<ExperimentReport> reports;
  if (which == "all" || which == "kernels") reports.push_back(verify_kernels(m));
  if (which == "all" || which == "lemma1") reports.push_back(verify_lemma1(m));
  if (which == "all" || which == "sandwich") reports.push_back(verify_kernel_l1_sandwich(m));
  bool ok = true;
  for (const auto& r : reports) ok = ok && r.verdict;
  if (reports.size() == 1) {
    emit_report(reports.front(), c.output, c.format_or("json"));
  } else {
    ExperimentReport all;
    all.name = "verify-all";
    all.config = {{"resolution", mm}};
    for (const auto& r : reports) {
      ojson row;
      row["experiment"] = r.name;
      row["verdict"] = r.verdict ? "pass" : "fail";
      all.cases.push_back(row);
      all.summary[r.name] = r.to_json();
    }
    all.verdict = ok;
    emit_report(all, c.output, c.format_or("json"));
  }
  return ok ? kPass : kFalse;
}

int cmd_thm1(const Common& c) {
  ojson j = base_config("thm1", c);
  if (!j.contains("p")) j["p"] = {"1/4", "1/2", "3/4"};
  if (!j.contains("resolutions")) j["resolutions"] = {4, 5, 6, 7, 8, 9};
  if (!j.contains("trials")) j["trials"] = 500;
  return run_and_emit(validated(j), c);
}

int cmd_thm2(const std::string& part, const std::string& phi, const Common& c) {
  if (part == "a") {
    ojson j = base_config("thm2", c);
    if (!j.contains("p")) j["p"] = {"1/2"};
    if (!j.contains("resolutions")) j["resolutions"] = {12};
    return run_and_emit(validated(j), c);
  }
  ojson j = base_config("thm2b", c);
  if (!j.contains("p")) j["p"] = {"1/2"};
  if (!j.contains("resolutions")) j["resolutions"] = {11};
  j["scheme"] = phi;
  return run_and_emit(validated(j), c);
}

int cmd_corollaries(const Common& c) {
  ojson j = base_config("corollaries", c);
  if (!j.contains("p")) j["p"] = {"1/4"};
  if (!j.contains("resolutions")) j["resolutions"] = {3, 4, 5, 6, 7, 8};
  if (!j.contains("trials")) j["trials"] = 30;
  return run_and_emit(validated(j), c);
}

int cmd_report(const std::string& path, const Common& c) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(std::string("config is not valid JSON: ") + e.what());
  }
  auto cfg = ExperimentConfig::from_json(j);
  if (c.jobs > 1) cfg.jobs = c.jobs;
  return run_and_emit(cfg, c);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Walsh-Fourier analysis on the dyadic group"};
  app.require_subcommand(1);

  Common common;
  std::uint64_t n = 0;
  std::string input;
  bool inverse = false;
  std::string which = "all";
  std::string part = "a";
  std::string phi = "unit";
  std::string config;

  auto* stats = app.add_subcommand("stats", "Binary characteristics of an index n");
  stats->add_option("n", n, "Index")->required();
  add_common(stats, common);

  auto* kernel = app.add_subcommand("kernel", "Dirichlet kernel D_n values");
  kernel->add_option("n", n, "Index, 1 <= n <= 2^m")->required();
  add_common(kernel, common);

  auto* transform = app.add_subcommand("transform", "Walsh-Fourier transform of a function file");
  transform->add_option("--input,-i", input, "CSV (index,value) or .bin input")->required();
  transform->add_flag("--inverse", inverse, "Synthesize values from coefficients");
  add_common(transform, common);

  auto* verify = app.add_subcommand("verify", "Exhaustive kernel checks");
  verify->add_option("which", which, "all | kernels | lemma1 | sandwich")
      ->check(CLI::IsMember({"all", "kernels", "lemma1", "sandwich"}));
  add_common(verify, common);

  auto* thm1 = app.add_subcommand("thm1", "Weak-type constants of the weighted maximal operator on atoms");
  add_common(thm1, common);

  auto* thm2 = app.add_subcommand("thm2", "Divergence along the sharpness functions");
  thm2->add_option("--part", part, "a: growth of the L_p ratio; b: weak-L_p ratio along probes")
      ->check(CLI::IsMember({"a", "b"}));
  thm2->add_option("--phi", phi, "Weight for part b")->check(CLI::IsMember({"unit", "rho", "poly"}));
  add_common(thm2, common);

  auto* cor = app.add_subcommand("corollaries", "Weak-type constants of the corollary operators");
  add_common(cor, common);

  auto* report = app.add_subcommand("report", "Run an experiment from a JSON config");
  report->add_option("--config,-c", config, "Config path")->required();
  add_common(report, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*stats) return cmd_stats(n, common);
    if (*kernel) return cmd_kernel(n, common);
    if (*transform) return cmd_transform(input, inverse, common);
    if (common.exact && !*kernel && !*transform) throw UsageError("--exact applies to kernel and transform only");
    if (*verify) return cmd_verify(which, common);
    if (*thm1) return cmd_thm1(common);
    if (*thm2) return cmd_thm2(part, phi, common);
    if (*cor) return cmd_corollaries(common);
    if (*report) return cmd_report(config, common);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
