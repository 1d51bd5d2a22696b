// hubbard-resources: Trotter bounds, gate counts and phase-estimation budgets
// for the periodic square-lattice Hubbard model.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hubbard/report.hpp"
#include "reference_values.hpp"

namespace {

using namespace hubbard;

constexpr const char* kOutputDirEnv = "HUBBARD_OUTPUT_DIR";

struct RunConfig {
  int L = 8;
  double u_over_tau = 4.0;
  double tau = 1.0;
  std::string scheme = "plaq";
  std::optional<std::int64_t> hwp_m;
  std::optional<double> epsilon;
  bool catalysis = false;
  std::string format = "table";
  std::string output;
  int table = 0;
  std::string figure = "fig2i";
  std::vector<std::int64_t> alphas;
  std::vector<int> Ls;
  std::vector<std::string> checks;
  bool mutate_sign = false;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Resolves --output against the output-directory override; empty means stdout.
std::unique_ptr<std::ostream> open_output(const std::string& path) {
  if (path.empty()) return nullptr;
  std::filesystem::path p(path);
  if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir && p.is_relative()) {
    p = std::filesystem::path(dir) / p;
  }
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  auto f = std::make_unique<std::ofstream>(p);
  if (!*f) throw UsageError("cannot open output file " + p.string());
  return f;
}

void emit(const RunConfig& cfg, const std::string& text) {
  auto file = open_output(cfg.output);
  std::ostream& os = file ? *file : std::cout;
  os << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void validate_L(const RunConfig& cfg) {
  if (cfg.L < 4) throw UsageError("L must be at least 4");
  if (cfg.scheme == "plaq" && cfg.L % 2 != 0) {
    throw UsageError("PLAQ tiles the lattice with 2 x 2 plaquettes and needs even L; got L = " +
                     std::to_string(cfg.L));
  }
  if (cfg.scheme == "so-ffft+" && cfg.L != 4 && cfg.L != 8 && cfg.L != 16) {
    throw UsageError("SO-FFFT+ step costs exist only for L = 4, 8, 16; got L = " +
                     std::to_string(cfg.L));
  }
}

LatticeSpec spec_of(const RunConfig& cfg) {
  return {cfg.L, cfg.u_over_tau * cfg.tau, cfg.tau, true};
}

// ---------------------------------------------------------------------------

int cmd_bounds(const RunConfig& cfg) {
  std::vector<BoundsRow> rows;
  std::ostringstream os;
  if (cfg.table == 1) {
    rows = table1(cfg.u_over_tau * cfg.tau, cfg.tau);
  } else {
    validate_L(cfg);
    const LatticeSpec spec = spec_of(cfg);
    const LatticeNorms norms = lattice_norms(spec);
    if (cfg.format == "table") {
      os << "W_SO1  <= " << format_sig(w_so1(spec, norms).W) << '\n'
         << "W_SO2  <= " << format_sig(w_so2(spec, norms).W) << '\n';
      if (spec.L % 2 == 0) os << "W_PLAQ <= " << format_sig(w_plaq(spec, norms).W) << '\n';
      os << '\n';
    }
    if (cfg.scheme == "all") {
      rows = bounds_rows(spec, norms);
    } else if (cfg.scheme == "plaq") {
      rows.push_back({"PLAQ", spec.L, w_plaq(spec, norms).W, plaq_step_cost(spec.L)});
    } else if (cfg.scheme == "so-ffft+") {
      rows.push_back({"SO-FFFT+", spec.L, w_so_best(spec, norms).W,
                      so_ffft_plus_step_cost(spec.L)});
    } else {
      // Fixed orderings share the SO-FFFT+ circuit, which is only tabulated
      // for L = 4, 8, 16.
      const TrotterBound b = cfg.scheme == "so1" ? w_so1(spec, norms) : w_so2(spec, norms);
      std::optional<GateCost> cost;
      if (spec.L == 4 || spec.L == 8 || spec.L == 16) cost = so_ffft_plus_step_cost(spec.L);
      rows.push_back({std::string(to_string(b.scheme)), spec.L, b.W, cost});
    }
  }
  if (cfg.format == "json") {
    os << dump(bounds_json(rows));
  } else if (cfg.format == "csv") {
    write_bounds_csv(os, rows);
  } else {
    write_bounds_table(os, rows);
  }
  emit(cfg, os.str());
  return 0;
}

int cmd_estimate(const RunConfig& cfg) {
  std::vector<ResourceEstimate> rows;
  if (cfg.table == 2) {
    rows = table2();
  } else {
    validate_L(cfg);
    EstimateOptions opts;
    opts.hwp_m = cfg.hwp_m;
    opts.epsilon = cfg.epsilon;
    opts.catalysis_qubit = cfg.catalysis;
    const Algorithm alg =
        cfg.scheme == "so-ffft+" ? Algorithm::so_ffft_plus : Algorithm::plaq;
    if (alg == Algorithm::plaq && cfg.hwp_m) {
      const std::int64_t half = std::int64_t(cfg.L) * cfg.L / 2;
      if (*cfg.hwp_m < 1 || half % *cfg.hwp_m != 0) {
        throw UsageError("--hwp-m must divide L^2/2 = " + std::to_string(half));
      }
    }
    rows.push_back(estimate(spec_of(cfg), alg, opts));
  }
  std::ostringstream os;
  if (cfg.format == "json") {
    if (rows.size() == 1 && cfg.table == 0) {
      os << dump(to_json(rows.front()));
    } else {
      Json arr = Json::array();
      for (const auto& r : rows) arr.push_back(to_json(r));
      os << dump(arr);
    }
  } else if (cfg.format == "csv") {
    write_estimates_csv(os, rows);
  } else {
    write_estimates_table(os, rows);
  }
  emit(cfg, os.str());
  return 0;
}

int cmd_sweep(const RunConfig& cfg) {
  std::ostringstream os;
  if (cfg.figure == "fig2i") {
    if (cfg.L < 4 || cfg.L % 2 != 0) throw UsageError("the ancilla sweep needs even L >= 4");
    std::vector<std::int64_t> alphas = cfg.alphas;
    if (alphas.empty()) {
      for (std::int64_t a = 0; a <= std::int64_t(cfg.L) * cfg.L / 2; ++a) alphas.push_back(a);
    }
    write_ancilla_sweep_csv(os, ancilla_sweep(spec_of(cfg), alphas));
  } else if (cfg.figure == "fig2ii") {
    std::vector<int> Ls = cfg.Ls.empty() ? even_range(8, 32) : cfg.Ls;
    for (int L : Ls) {
      if (L < 4 || L % 2 != 0) throw UsageError("the size sweep needs even L >= 4");
    }
    write_size_sweep_csv(os, size_sweep(Ls, cfg.u_over_tau * cfg.tau, cfg.tau));
  } else {
    throw UsageError("unknown figure " + cfg.figure + " (expected fig2i or fig2ii)");
  }
  emit(cfg, os.str());
  return 0;
}

Json hhop_table_report(bool& passed) {
  const auto rows = norm_table(even_range(4, 32));
  Json out = Json::array();
  passed = true;
  for (const auto& r : rows) {
    const double ref = cli::reference_hopping_norm(r.L);
    const bool match = round_sig(r.norms.hopping_norm, 2) == ref;
    passed = passed && match;
    out.push_back({{"L", r.L},
                   {"hopping_norm", r.norms.hopping_norm},
                   {"reference", ref},
                   {"match_2sf", match},
                   {"plaquette_nested", r.norms.plaquette_nested}});
  }
  return out;
}

int cmd_verify(const RunConfig& cfg) {
  oracle::SuiteOptions opts;
  opts.u = cfg.u_over_tau * cfg.tau;
  opts.tau = cfg.tau;
  opts.flip_site = cfg.mutate_sign ? 0 : -1;

  bool want_hhop = false;
  for (const auto& c : cfg.checks) {
    if (c == "hhop-table") {
      want_hhop = true;
      continue;
    }
    const auto names = oracle::suite_check_names();
    if (std::find(names.begin(), names.end(), c) == names.end()) {
      throw UsageError("unknown check " + c);
    }
    opts.only.push_back(c);
  }
  const bool run_suite = cfg.checks.empty() || !opts.only.empty();

  Json report;
  bool all_passed = true;
  if (run_suite) {
    Json checks = Json::array();
    for (const auto& r : oracle::run_oracle_suite(opts)) {
      all_passed = all_passed && r.passed;
      checks.push_back(to_json(r));
    }
    report["checks"] = checks;
  }
  if (want_hhop) {
    bool ok = true;
    report["hhop_table"] = hhop_table_report(ok);
    all_passed = all_passed && ok;
  }
  report["passed"] = all_passed;
  emit(cfg, dump(report));
  return all_passed ? 0 : 1;
}

template <typename T>
std::vector<T> parse_list(const std::string& s) {
  std::vector<T> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(static_cast<T>(std::stoll(item)));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trotter error bounds and fault-tolerant resource estimates for the "
               "square-lattice Hubbard model"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string alphas, Ls;

  const auto common = [&cfg](CLI::App* sub) {
    sub->add_option("--L", cfg.L, "lattice side")->check(CLI::PositiveNumber);
    sub->add_option("--u", cfg.u_over_tau, "interaction strength u/tau")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--tau", cfg.tau, "hopping amplitude")->check(CLI::PositiveNumber);
    sub->add_option("--output,-o", cfg.output,
                    std::string("output file (relative to $") + kOutputDirEnv +
                        " when set); default stdout");
  };
  const std::vector<std::string> formats = {"table", "json", "csv"};

  auto* bounds = app.add_subcommand("bounds", "Trotter error constants and per-step gate costs");
  common(bounds);
  bounds->add_option("--scheme", cfg.scheme, "plaq, so1, so2, so-ffft+ or all")
      ->check(CLI::IsMember({"plaq", "so1", "so2", "so-ffft+", "all"}));
  bounds->add_option("--table", cfg.table, "reproduce a whole table (1)")
      ->check(CLI::IsMember({1}));
  bounds->add_option("--format", cfg.format)->check(CLI::IsMember(formats));

  auto* est = app.add_subcommand("estimate", "phase-estimation resource estimate");
  common(est);
  est->add_option("--algorithm,--scheme", cfg.scheme, "plaq or so-ffft+")
      ->check(CLI::IsMember({"plaq", "so-ffft+"}));
  est->add_option("--hwp-m", cfg.hwp_m, "Hamming-weight-phasing batch size (default L^2/2)");
  est->add_option("--epsilon", cfg.epsilon, "target energy error (default 0.0051 L^2)");
  est->add_flag("--catalysis", cfg.catalysis, "count the T-catalyst qubit");
  est->add_option("--table", cfg.table, "reproduce a whole table (2)")
      ->check(CLI::IsMember({2}));
  est->add_option("--format", cfg.format)->check(CLI::IsMember(formats));

  auto* sweep = app.add_subcommand("sweep", "plot-ready CSV sweeps");
  common(sweep);
  sweep->add_option("--figure", cfg.figure, "fig2i (ancilla budget) or fig2ii (lattice size)")
      ->check(CLI::IsMember({"fig2i", "fig2ii"}));
  sweep->add_option("--alphas", alphas, "comma-separated ancilla budgets (fig2i)");
  sweep->add_option("--Ls", Ls, "comma-separated lattice sides (fig2ii)");

  auto* verify = app.add_subcommand("verify", "exact small-instance verification suite");
  common(verify);
  verify->add_option("--check", cfg.checks,
                     "run only these checks (repeatable); hhop-table recomputes the "
                     "reference hopping-norm row");
  verify->add_flag("--mutate-sign", cfg.mutate_sign,
                   "inject a sign error into V-bar (the suite must fail)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (!alphas.empty()) cfg.alphas = parse_list<std::int64_t>(alphas);
    if (!Ls.empty()) cfg.Ls = parse_list<int>(Ls);
    if (*bounds) return cmd_bounds(cfg);
    if (*est) return cmd_estimate(cfg);
    if (*sweep) return cmd_sweep(cfg);
    if (*verify) return cmd_verify(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const hubbard::UnsupportedLattice& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
