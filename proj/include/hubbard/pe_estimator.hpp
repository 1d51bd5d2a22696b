#pragma once

// Phase-estimation budget for a Trotterised Hubbard simulation.
//
// Three additive energy errors: Trotter (Delta_TS = W t^2), phase estimation
// (Delta_PE = 0.76 pi / (N_PE t)) and rotation synthesis (Delta_HT). With
// delta = Delta_TS + Delta_PE = (1 - x) eps and Delta_HT = x eps, the optimal
// step has Delta_TS = delta/3, Delta_PE = 2 delta/3, so t^2 = delta / (3W)
// and N_PE = (3^{3/2} 0.76 pi / 2) W^{1/2} / delta^{3/2}. Each rotation
// costs N_HT = 1.15 log2(N_R / (Delta_HT t)) + 9.2 T gates.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hubbard/errors.hpp"
#include "hubbard/gate_costs.hpp"
#include "hubbard/lattice.hpp"
#include "hubbard/trotter_bounds.hpp"

namespace hubbard {

enum class Algorithm { plaq, so_ffft_plus };

inline std::string_view to_string(Algorithm a) {
  return a == Algorithm::plaq ? "PLAQ" : "SO-FFFT+";
}

inline constexpr double kPhaseEstimationError = 0.76 * std::numbers::pi;
/// 3^{3/2} * 0.76 pi / 2, quoted to four figures as 6.203.
inline const double kRepetitionPrefactor =
    std::pow(3.0, 1.5) * kPhaseEstimationError / 2.0;
inline constexpr double kSynthesisSlope = 1.15;
inline constexpr double kSynthesisOffset = 9.2;
/// W t^3 above this is reported as outside the small-step regime.
inline constexpr double kValidityThreshold = 0.1;
inline constexpr double kEpsilonPerSite = 0.0051;

struct ErrorBudget {
  double epsilon = 0.0;
  double x = 0.0;
  double delta = 0.0;  // Delta_TS + Delta_PE
  double delta_ts = 0.0;
  double delta_pe = 0.0;
  double delta_ht = 0.0;
};

struct ResourceEstimate {
  Algorithm algorithm = Algorithm::plaq;
  int L = 0;
  double u = 0.0;
  double tau = 1.0;
  double W = 0.0;
  TrotterScheme bound_scheme = TrotterScheme::plaq;
  GateCost per_step;  // after HWP
  HwpConfig hwp;
  ErrorBudget budget;
  double t = 0.0;
  double n_pe_continuous = 0.0;
  std::int64_t n_pe = 0;
  double n_ht = 0.0;
  std::int64_t total_t = 0;
  std::int64_t total_tof = 0;
  std::int64_t total_toffoli_equivalent = 0;
  std::int64_t ancilla_qubits = 0;
  bool catalysis_qubit = false;
  std::int64_t n_q = 0;
  double validity = 0.0;  // W t^3
  bool validity_warning = false;
};

/// Target additive error, about half a percent of the total energy at
/// u/tau = 4 (tau = 1 units).
inline double epsilon_target(int L) {
  if (L < 4) throw UnsupportedLattice("epsilon_target needs L >= 4");
  return kEpsilonPerSite * double(L) * L;
}

/// T gates per synthesised rotation at total synthesis error delta_ht.
inline double synthesis_t_count(double n_rot_per_step, double delta_ht,
                                double t) {
  const double arg = n_rot_per_step / (delta_ht * t);
  if (!(n_rot_per_step > 0.0 && delta_ht > 0.0 && t > 0.0) ||
      !std::isfinite(arg)) {
    throw ContractViolation("synthesis_t_count needs positive arguments");
  }
  return kSynthesisSlope * std::log2(arg) + kSynthesisOffset;
}

/// Total T count for one split x of the error budget.
inline ResourceEstimate total_t_count(double W, const GateCost& per_step,
                                      double epsilon, double x) {
  if (!(W > 0.0)) throw ContractViolation("W must be positive");
  if (!(x > 0.0 && x < 1.0)) throw ContractViolation("x must lie in (0, 1)");
  if (!(epsilon > 0.0)) throw ContractViolation("epsilon must be positive");

  ResourceEstimate r;
  r.W = W;
  r.per_step = per_step;

  ErrorBudget& b = r.budget;
  b.epsilon = epsilon;
  b.x = x;
  b.delta = (1.0 - x) * epsilon;
  b.delta_ht = x * epsilon;

  r.t = std::sqrt(b.delta / (3.0 * W));
  r.n_pe_continuous = kRepetitionPrefactor * std::sqrt(W) / std::pow(b.delta, 1.5);
  r.n_pe = static_cast<std::int64_t>(std::ceil(r.n_pe_continuous));
  b.delta_ts = W * r.t * r.t;
  b.delta_pe = kPhaseEstimationError / (r.n_pe_continuous * r.t);

  r.n_ht = per_step.n_rot > 0
               ? synthesis_t_count(double(per_step.n_rot), b.delta_ht, r.t)
               : 0.0;
  const double t_per_step = double(per_step.n_rot) * r.n_ht + double(per_step.n_t);
  r.total_t = static_cast<std::int64_t>(std::ceil(double(r.n_pe) * t_per_step));
  r.total_tof = r.n_pe * per_step.n_tof;
  r.total_toffoli_equivalent = toffoli_equivalent({r.total_tof, r.total_t, 0});
  r.validity = W * r.t * r.t * r.t;
  r.validity_warning = r.validity > kValidityThreshold;
  return r;
}

inline constexpr int kSplitGridPoints = 50;
inline constexpr double kSplitGridMin = 1e-3;
inline constexpr double kSplitGridMax = 0.2;

inline std::vector<double> split_grid() {
  std::vector<double> xs(kSplitGridPoints);
  const double lo = std::log10(kSplitGridMin);
  const double hi = std::log10(kSplitGridMax);
  for (int k = 0; k < kSplitGridPoints; ++k) {
    xs[k] = std::pow(10.0, lo + (hi - lo) * k / (kSplitGridPoints - 1));
  }
  return xs;
}

/// Log-grid search over x; the first (smallest) x wins ties.
inline ResourceEstimate optimize_split(double W, const GateCost& per_step,
                                       double epsilon) {
  std::optional<ResourceEstimate> best;
  for (double x : split_grid()) {
    ResourceEstimate r = total_t_count(W, per_step, epsilon, x);
    if (!best || r.total_t < best->total_t) best = r;
  }
  return *best;
}

struct EstimateOptions {
  std::optional<std::int64_t> hwp_m;  // PLAQ only; default L^2/2
  std::optional<double> epsilon;      // default epsilon_target(L)
  bool catalysis_qubit = false;
  std::optional<LatticeNorms> norms;  // reuse across sweeps
};

/// Qubits set aside for HWP: the batch register of size m (none at m = 1).
inline std::int64_t hwp_ancilla_budget(std::int64_t m) { return m > 1 ? m : 0; }

inline ResourceEstimate estimate(const LatticeSpec& spec, Algorithm algorithm,
                                 const EstimateOptions& opts = {}) {
  const LatticeNorms norms = opts.norms ? *opts.norms : lattice_norms(spec);
  const double epsilon = opts.epsilon ? *opts.epsilon : epsilon_target(spec.L);

  TrotterBound bound;
  GateCost per_step;
  HwpConfig hwp;
  if (algorithm == Algorithm::plaq) {
    bound = w_plaq(spec, norms);
    const std::int64_t m =
        opts.hwp_m ? *opts.hwp_m : std::int64_t(spec.L) * spec.L / 2;
    hwp = hwp_config(m);
    per_step = apply_hwp(plaq_step_cost(spec.L), spec.L, m);
  } else {
    if (opts.hwp_m && *opts.hwp_m != 1) {
      throw ContractViolation("SO-FFFT+ rotations are not batched with HWP");
    }
    bound = w_so_best(spec, norms);
    per_step = so_ffft_plus_step_cost(spec.L);
  }

  ResourceEstimate r = optimize_split(bound.W, per_step, epsilon);
  r.algorithm = algorithm;
  r.L = spec.L;
  r.u = spec.u;
  r.tau = spec.tau;
  r.bound_scheme = bound.scheme;
  r.hwp = hwp;
  r.ancilla_qubits = hwp_ancilla_budget(hwp.m);
  r.catalysis_qubit = opts.catalysis_qubit;
  // System qubits, HWP register, one phase-estimation qubit and one
  // repeat-until-success qubit.
  r.n_q = 2 * std::int64_t(spec.L) * spec.L + r.ancilla_qubits + 2 +
          (opts.catalysis_qubit ? 1 : 0);
  return r;
}

/// Best admissible HWP batch for an ancilla budget: m | L^2/2 and the batch
/// register fits in alpha qubits, minimising the Toffoli-equivalent total.
struct AncillaPoint {
  std::int64_t alpha_budget = 0;
  std::int64_t m = 1;
  std::int64_t toffoli_equivalent = 0;
};

inline std::vector<AncillaPoint> sweep_ancilla(
    const LatticeSpec& spec, Algorithm algorithm,
    const std::vector<std::int64_t>& alpha_list,
    std::optional<LatticeNorms> norms = std::nullopt) {
  if (!norms) norms = lattice_norms(spec);
  EstimateOptions opts;
  opts.norms = norms;

  std::vector<AncillaPoint> out;
  if (algorithm == Algorithm::so_ffft_plus) {
    const std::int64_t total = estimate(spec, algorithm, opts).total_toffoli_equivalent;
    for (std::int64_t a : alpha_list) out.push_back({a, 1, total});
    return out;
  }

  const std::int64_t half = std::int64_t(spec.L) * spec.L / 2;
  std::vector<std::pair<std::int64_t, std::int64_t>> by_m;  // (m, cost)
  for (std::int64_t m = 1; m <= half; ++m) {
    if (half % m != 0) continue;
    opts.hwp_m = m;
    by_m.emplace_back(m, estimate(spec, algorithm, opts).total_toffoli_equivalent);
  }
  for (std::int64_t a : alpha_list) {
    AncillaPoint p{a, 0, 0};
    for (auto [m, cost] : by_m) {
      if (hwp_ancilla_budget(m) > a) continue;
      if (p.m == 0 || cost < p.toffoli_equivalent) {
        p.m = m;
        p.toffoli_equivalent = cost;
      }
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace hubbard
