#pragma once

// Table assembly and serialisation: JSON (full precision, round-trips) and
// CSV (header row, comma-delimited, '.' decimals). Row computations fan out
// with std::async; output order is fixed by the input order.

#include <cmath>
#include <cstdint>
#include <future>
#include <iomanip>
#include <locale>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hubbard/gate_costs.hpp"
#include "hubbard/oracle_suite.hpp"
#include "hubbard/pe_estimator.hpp"
#include "hubbard/trotter_bounds.hpp"

namespace hubbard {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Number formatting.

/// x rounded to `digits` significant figures.
inline double round_sig(double x, int digits) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  const double mag = std::floor(std::log10(std::abs(x)));
  const double scale = std::pow(10.0, digits - 1 - mag);
  return std::round(x * scale) / scale;
}

/// Human-readable significant-figure display: plain below 1000, else a*10^b.
inline std::string format_sig(double x, int digits = 2) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  const double r = round_sig(x, digits);
  if (r != 0.0 && std::abs(r) >= 1000.0) {
    const int e = int(std::floor(std::log10(std::abs(r))));
    os << std::fixed << std::setprecision(digits - 1) << r / std::pow(10.0, e)
       << "e" << e;
  } else {
    os << r;
  }
  return os.str();
}

/// Full-precision CSV cell.
inline std::string csv_number(double x) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << x;
  return os.str();
}

// ---------------------------------------------------------------------------
// JSON.

inline Json to_json(const GateCost& c) {
  return {{"n_tof", c.n_tof}, {"n_t", c.n_t}, {"n_rot", c.n_rot}};
}

inline GateCost gate_cost_from_json(const Json& j) {
  return {j.at("n_tof").get<std::int64_t>(), j.at("n_t").get<std::int64_t>(),
          j.at("n_rot").get<std::int64_t>()};
}

inline Json to_json(const TrotterBound& b) {
  return {{"scheme", std::string(to_string(b.scheme))},
          {"W", b.W},
          {"lemma1_term", b.contributions.lemma1_term},
          {"lemma2_term", b.contributions.lemma2_term},
          {"plaquette_extra", b.contributions.plaquette_extra}};
}

inline TrotterScheme scheme_from_string(const std::string& s) {
  if (s == "SO1" || s == "so1") return TrotterScheme::so1;
  if (s == "SO2" || s == "so2") return TrotterScheme::so2;
  if (s == "PLAQ" || s == "plaq") return TrotterScheme::plaq;
  throw ContractViolation("unknown Trotter scheme: " + s);
}

inline Algorithm algorithm_from_string(const std::string& s) {
  if (s == "PLAQ" || s == "plaq") return Algorithm::plaq;
  if (s == "SO-FFFT+" || s == "so-ffft+" || s == "so_ffft_plus") {
    return Algorithm::so_ffft_plus;
  }
  throw ContractViolation("unknown algorithm: " + s);
}

inline Json to_json(const ResourceEstimate& r) {
  return {
      {"algorithm", std::string(to_string(r.algorithm))},
      {"L", r.L},
      {"u", r.u},
      {"tau", r.tau},
      {"W", r.W},
      {"bound_scheme", std::string(to_string(r.bound_scheme))},
      {"per_step", to_json(r.per_step)},
      {"hwp", {{"m", r.hwp.m}, {"alpha", r.hwp.alpha},
               {"rotations_after", r.hwp.rotations_after}}},
      {"budget", {{"epsilon", r.budget.epsilon}, {"x", r.budget.x},
                  {"delta", r.budget.delta}, {"delta_ts", r.budget.delta_ts},
                  {"delta_pe", r.budget.delta_pe}, {"delta_ht", r.budget.delta_ht}}},
      {"t", r.t},
      {"n_pe_continuous", r.n_pe_continuous},
      {"n_pe", r.n_pe},
      {"n_ht", r.n_ht},
      {"total_t", r.total_t},
      {"total_tof", r.total_tof},
      {"total_toffoli_equivalent", r.total_toffoli_equivalent},
      {"ancilla_qubits", r.ancilla_qubits},
      {"catalysis_qubit", r.catalysis_qubit},
      {"n_q", r.n_q},
      {"validity", r.validity},
      {"validity_warning", r.validity_warning},
  };
}

inline ResourceEstimate estimate_from_json(const Json& j) {
  ResourceEstimate r;
  r.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
  r.L = j.at("L").get<int>();
  r.u = j.at("u").get<double>();
  r.tau = j.at("tau").get<double>();
  r.W = j.at("W").get<double>();
  r.bound_scheme = scheme_from_string(j.at("bound_scheme").get<std::string>());
  r.per_step = gate_cost_from_json(j.at("per_step"));
  const Json& h = j.at("hwp");
  r.hwp = {h.at("m").get<std::int64_t>(), h.at("alpha").get<std::int64_t>(),
           h.at("rotations_after").get<std::int64_t>()};
  const Json& b = j.at("budget");
  r.budget = {b.at("epsilon").get<double>(),  b.at("x").get<double>(),
              b.at("delta").get<double>(),    b.at("delta_ts").get<double>(),
              b.at("delta_pe").get<double>(), b.at("delta_ht").get<double>()};
  r.t = j.at("t").get<double>();
  r.n_pe_continuous = j.at("n_pe_continuous").get<double>();
  r.n_pe = j.at("n_pe").get<std::int64_t>();
  r.n_ht = j.at("n_ht").get<double>();
  r.total_t = j.at("total_t").get<std::int64_t>();
  r.total_tof = j.at("total_tof").get<std::int64_t>();
  r.total_toffoli_equivalent = j.at("total_toffoli_equivalent").get<std::int64_t>();
  r.ancilla_qubits = j.at("ancilla_qubits").get<std::int64_t>();
  r.catalysis_qubit = j.at("catalysis_qubit").get<bool>();
  r.n_q = j.at("n_q").get<std::int64_t>();
  r.validity = j.at("validity").get<double>();
  r.validity_warning = j.at("validity_warning").get<bool>();
  return r;
}

inline bool operator==(const ResourceEstimate& a, const ResourceEstimate& b) {
  return to_json(a) == to_json(b);
}

inline Json to_json(const oracle::CheckResult& c) {
  return {{"name", c.name},         {"instance", c.instance},
          {"passed", c.passed},     {"measured", c.measured},
          {"reference", c.reference}, {"slack", c.slack},
          {"detail", c.detail}};
}

// ---------------------------------------------------------------------------
// Parallel map with deterministic order.

template <typename In, typename Fn>
auto parallel_map(const std::vector<In>& inputs, Fn fn) {
  using Out = decltype(fn(inputs.front()));
  std::vector<std::future<Out>> futures;
  futures.reserve(inputs.size());
  for (const In& in : inputs) {
    futures.push_back(std::async(std::launch::async, [&fn, &in] { return fn(in); }));
  }
  std::vector<Out> out;
  out.reserve(inputs.size());
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

inline std::vector<int> even_range(int lo, int hi) {
  std::vector<int> out;
  for (int L = lo; L <= hi; L += 2) out.push_back(L);
  return out;
}

// ---------------------------------------------------------------------------
// Free-fermion norm table.

struct NormRow {
  int L = 0;
  LatticeNorms norms;
};

inline std::vector<NormRow> norm_table(const std::vector<int>& Ls, double tau = 1.0) {
  return parallel_map(Ls, [tau](int L) {
    return NormRow{L, lattice_norms({L, 0.0, tau, true})};
  });
}

inline void write_norm_csv(std::ostream& os, const std::vector<NormRow>& rows) {
  os << "L,hopping_norm,plaquette_nested\n";
  for (const auto& r : rows) {
    os << r.L << ',' << csv_number(r.norms.hopping_norm) << ','
       << csv_number(r.norms.plaquette_nested) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Per-step bounds and costs.

struct BoundsRow {
  std::string method;  // SO-FFFT, SO-FFFT+, PLAQ
  int L = 0;
  std::optional<double> W;
  std::optional<GateCost> cost;  // absent where no circuit is tabulated
};

inline std::vector<BoundsRow> bounds_rows(const LatticeSpec& spec,
                                          const LatticeNorms& norms) {
  std::vector<BoundsRow> rows;
  if (so_ffft_legacy_w(spec.L) && spec.u == 4.0 && spec.tau == 1.0) {
    rows.push_back({"SO-FFFT", spec.L, so_ffft_legacy_w(spec.L),
                    so_ffft_legacy_step_cost(spec.L)});
  }
  if (spec.L == 4 || spec.L == 8 || spec.L == 16) {
    rows.push_back({"SO-FFFT+", spec.L, w_so_best(spec, norms).W,
                    so_ffft_plus_step_cost(spec.L)});
  }
  if (spec.L % 2 == 0) {
    rows.push_back({"PLAQ", spec.L, w_plaq(spec, norms).W, plaq_step_cost(spec.L)});
  }
  return rows;
}

inline const std::vector<int>& table1_sizes() {
  static const std::vector<int> Ls = {4, 6, 8, 12, 16};
  return Ls;
}

inline std::vector<BoundsRow> table1(double u = 4.0, double tau = 1.0) {
  const auto per_L = parallel_map(table1_sizes(), [u, tau](int L) {
    const LatticeSpec spec{L, u, tau, true};
    return bounds_rows(spec, lattice_norms(spec));
  });
  std::vector<BoundsRow> rows;
  for (const char* method : {"SO-FFFT", "SO-FFFT+", "PLAQ"}) {
    for (const auto& group : per_L) {
      for (const auto& r : group) {
        if (r.method == method) rows.push_back(r);
      }
    }
  }
  return rows;
}

inline void write_bounds_csv(std::ostream& os, const std::vector<BoundsRow>& rows) {
  os << "method,L,W,n_tof,n_t,n_rot\n";
  for (const auto& r : rows) {
    os << r.method << ',' << r.L << ',' << (r.W ? csv_number(*r.W) : "") << ',';
    if (r.cost) {
      os << r.cost->n_tof << ',' << r.cost->n_t << ',' << r.cost->n_rot;
    } else {
      os << ",,";
    }
    os << '\n';
  }
}

inline void write_bounds_table(std::ostream& os, const std::vector<BoundsRow>& rows) {
  os << std::left << std::setw(10) << "method" << std::setw(5) << "L" << std::setw(10)
     << "W <=" << std::setw(8) << "N_TOF" << std::setw(8) << "N_T" << "N_R\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(10) << r.method << std::setw(5) << r.L
       << std::setw(10) << (r.W ? format_sig(*r.W) : "-");
    if (r.cost) {
      os << std::setw(8) << r.cost->n_tof << std::setw(8) << r.cost->n_t
         << r.cost->n_rot;
    } else {
      os << std::setw(8) << "-" << std::setw(8) << "-" << "-";
    }
    os << '\n';
  }
}

inline Json bounds_json(const std::vector<BoundsRow>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) {
    arr.push_back({{"method", r.method},
                   {"L", r.L},
                   {"W", r.W ? Json(*r.W) : Json(nullptr)},
                   {"cost", r.cost ? to_json(*r.cost) : Json(nullptr)}});
  }
  return arr;
}

// ---------------------------------------------------------------------------
// Phase-estimation table.

inline std::vector<ResourceEstimate> table2() {
  std::vector<LatticeSpec> specs;
  for (double u : {4.0, 8.0}) {
    for (int L : even_range(8, 32)) specs.push_back({L, u, 1.0, true});
  }
  // Norms depend on L only; compute each once.
  const auto norms = norm_table(even_range(8, 32));
  return parallel_map(specs, [&norms](const LatticeSpec& s) {
    EstimateOptions opts;
    opts.norms = norms[std::size_t((s.L - 8) / 2)].norms;
    return estimate(s, Algorithm::plaq, opts);
  });
}

inline void write_estimates_csv(std::ostream& os,
                                const std::vector<ResourceEstimate>& rows) {
  os << "algorithm,u_over_tau,L,n_q,n_tof,n_t,toffoli_equivalent,W,x,t,n_pe,"
        "n_ht,hwp_m,validity\n";
  for (const auto& r : rows) {
    os << to_string(r.algorithm) << ',' << csv_number(r.u / r.tau) << ',' << r.L
       << ',' << r.n_q << ',' << r.total_tof << ',' << r.total_t << ','
       << r.total_toffoli_equivalent << ',' << csv_number(r.W) << ','
       << csv_number(r.budget.x) << ',' << csv_number(r.t) << ',' << r.n_pe << ','
       << csv_number(r.n_ht) << ',' << r.hwp.m << ',' << csv_number(r.validity)
       << '\n';
  }
}

inline void write_estimates_table(std::ostream& os,
                                  const std::vector<ResourceEstimate>& rows) {
  os << std::left << std::setw(6) << "u/tau" << std::setw(5) << "L" << std::setw(8)
     << "N_Q" << std::setw(10) << "N_TOF" << std::setw(10) << "N_T"
     << "N_TOF+N_T/2\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(6) << format_sig(r.u / r.tau) << std::setw(5) << r.L
       << std::setw(8) << r.n_q << std::setw(10) << format_sig(double(r.total_tof))
       << std::setw(10) << format_sig(double(r.total_t))
       << format_sig(double(r.total_toffoli_equivalent)) << '\n';
    if (r.validity_warning) {
      os << "  warning: W t^3 = " << r.validity << " is outside the small-step regime\n";
    }
  }
}

// ---------------------------------------------------------------------------
// Sweeps.

struct AncillaSweepRow {
  std::int64_t alpha = 0;
  std::int64_t plaq_m = 0;
  std::int64_t plaq_toffoli = 0;
  std::optional<std::int64_t> so_ffft_plus_toffoli;
};

inline std::vector<AncillaSweepRow> ancilla_sweep(const LatticeSpec& spec,
                                                  const std::vector<std::int64_t>& alphas) {
  const LatticeNorms norms = lattice_norms(spec);
  const auto plaq = sweep_ancilla(spec, Algorithm::plaq, alphas, norms);
  std::optional<std::vector<AncillaPoint>> so;
  if (spec.L == 4 || spec.L == 8 || spec.L == 16) {
    so = sweep_ancilla(spec, Algorithm::so_ffft_plus, alphas, norms);
  }
  std::vector<AncillaSweepRow> rows;
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    AncillaSweepRow r{alphas[k], plaq[k].m, plaq[k].toffoli_equivalent, std::nullopt};
    if (so) r.so_ffft_plus_toffoli = (*so)[k].toffoli_equivalent;
    rows.push_back(r);
  }
  return rows;
}

inline void write_ancilla_sweep_csv(std::ostream& os,
                                    const std::vector<AncillaSweepRow>& rows) {
  os << "alpha,plaq_m,plaq_toffoli,so_ffft_plus_toffoli\n";
  for (const auto& r : rows) {
    os << r.alpha << ',' << r.plaq_m << ',' << r.plaq_toffoli << ','
       << (r.so_ffft_plus_toffoli ? std::to_string(*r.so_ffft_plus_toffoli) : "")
       << '\n';
  }
}

struct SizeSweepRow {
  int L = 0;
  std::int64_t alpha = 0;
  std::int64_t plaq_toffoli = 0;
  std::optional<std::int64_t> so_ffft_plus_toffoli;
};

/// PLAQ with ancilla budget L^2/2 (batch m = L^2/2) for each L.
inline std::vector<SizeSweepRow> size_sweep(const std::vector<int>& Ls, double u,
                                            double tau = 1.0) {
  return parallel_map(Ls, [u, tau](int L) {
    const LatticeSpec spec{L, u, tau, true};
    EstimateOptions opts;
    opts.norms = lattice_norms(spec);
    SizeSweepRow row;
    row.L = L;
    row.alpha = std::int64_t(L) * L / 2;
    row.plaq_toffoli = estimate(spec, Algorithm::plaq, opts).total_toffoli_equivalent;
    if (L == 4 || L == 8 || L == 16) {
      opts.hwp_m.reset();
      row.so_ffft_plus_toffoli =
          estimate(spec, Algorithm::so_ffft_plus, opts).total_toffoli_equivalent;
    }
    return row;
  });
}

inline void write_size_sweep_csv(std::ostream& os, const std::vector<SizeSweepRow>& rows) {
  os << "L,alpha,plaq_toffoli,so_ffft_plus_toffoli\n";
  for (const auto& r : rows) {
    os << r.L << ',' << r.alpha << ',' << r.plaq_toffoli << ','
       << (r.so_ffft_plus_toffoli ? std::to_string(*r.so_ffft_plus_toffoli) : "")
       << '\n';
  }
}

}  // namespace hubbard
