#pragma once

// The default exact-verification suite: every identity and bound check on the
// 2-site chain, the 2 x 2 ring and the 2 x 3 grid, plus the single-plaquette
// circuit and Hamming-weight phasing checks. Checks run concurrently and are
// reported in a fixed order.

#include <algorithm>
#include <chrono>
#include <functional>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include "hubbard/exact_oracle.hpp"

namespace hubbard::oracle {

inline constexpr double kIdentityTolerance = 1e-10;
inline constexpr double kExponentLow = 2.9;
inline constexpr double kExponentHigh = 3.1;

inline const std::vector<double>& default_trotter_times() {
  static const std::vector<double> ts = {0.2, 0.1, 0.05, 0.025};
  return ts;
}

struct CheckResult {
  std::string name;
  std::string instance;
  bool passed = false;
  double measured = 0.0;   // deviation, exact norm or error
  double reference = 0.0;  // tolerance or bound
  double slack = 0.0;      // measured / reference, 0 when reference is 0
  double seconds = 0.0;
  std::string detail;
};

struct SuiteOptions {
  double u = 4.0;
  double tau = 1.0;
  int flip_site = -1;  // >= 0 injects a sign error into V-bar
  std::vector<std::string> only;  // check names; empty runs everything
};

namespace detail {

inline double ratio(double a, double b) { return b != 0.0 ? a / b : 0.0; }

inline CheckResult make(std::string name, std::string instance, bool passed,
                        double measured, double reference,
                        std::string detail = {}) {
  return {std::move(name), std::move(instance), passed, measured, reference,
          ratio(measured, reference), 0.0, std::move(detail)};
}

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace detail

struct NamedCheck {
  std::string name;
  std::function<std::vector<CheckResult>()> run;
};

inline std::vector<NamedCheck> suite_checks(const SuiteOptions& opt) {
  const double u = opt.u;
  const double tau = opt.tau;
  const int flip = opt.flip_site;
  const auto instances = [u, tau] {
    return std::vector<SmallHubbardInstance>{two_site_chain(u, tau),
                                             grid_2x2(u, tau), grid_2x3(u, tau)};
  };
  using detail::make;
  std::vector<NamedCheck> checks;

  checks.push_back({"free_fermion", [=] {
    std::vector<CheckResult> out;
    for (const auto& inst : instances()) {
      const auto r = verify_free_fermion(inst);
      out.push_back(make("free_fermion", inst.label(), r.passed(),
                         std::abs(r.exact_norm - r.schatten_1), 1e-10 * r.schatten_1,
                         "exact ||H_h|| = " + detail::fmt(r.exact_norm)));
    }
    return out;
  }});

  checks.push_back({"lemma1", [=] {
    std::vector<CheckResult> out;
    for (const auto& inst : instances()) {
      const auto r = verify_lemma1_identity(inst, flip);
      out.push_back(make("lemma1_identity", inst.label(), r.deviation <= r.tolerance,
                         r.deviation, r.tolerance));
      out.push_back(make("lemma1_bound", inst.label(),
                         r.exact_norm <= r.bound * (1 + kBoundSlack),
                         r.exact_norm, r.bound));
    }
    return out;
  }});

  checks.push_back({"anticommutation", [=] {
    std::vector<CheckResult> out;
    for (const auto& inst : instances()) {
      const auto r = verify_anticommutation(inst);
      out.push_back(make("anticommutation", inst.label(), r.passed(),
                         std::max({r.anticommutator, r.disjoint_commutator,
                                   r.involution}),
                         1e-12));
    }
    return out;
  }});

  checks.push_back({"lemma2", [=] {
    std::vector<CheckResult> out;
    for (const auto& inst : instances()) {
      const auto r = verify_lemma2_steps(inst);
      const double dev =
          std::max({r.first_step, r.nested_step, r.star_construction});
      out.push_back(make("lemma2_identity", inst.label(), dev <= kIdentityTolerance,
                         dev, kIdentityTolerance));
      out.push_back(make("lemma2_bound", inst.label(),
                         r.exact_norm <= r.bound * (1 + kBoundSlack),
                         r.exact_norm, r.bound));
    }
    return out;
  }});

  checks.push_back({"chemical_shift", [=] {
    std::vector<CheckResult> out;
    for (const auto& inst : instances()) {
      const double dev = verify_chemical_shift(inst, 0.37);
      out.push_back(make("chemical_shift", inst.label(), dev <= kIdentityTolerance,
                         dev, kIdentityTolerance));
    }
    return out;
  }});

  for (SplitScheme scheme : {SplitScheme::so1, SplitScheme::so2}) {
    const std::string name = scheme == SplitScheme::so1 ? "trotter_so1" : "trotter_so2";
    checks.push_back({name, [=] {
      std::vector<CheckResult> out;
      for (const auto& inst : instances()) {
        const auto r = exact_trotter_error(inst, scheme, default_trotter_times());
        double worst = 0.0;
        for (const auto& s : r.samples) worst = std::max(worst, s.error / s.bound);
        const bool scaling = r.fitted_exponent >= kExponentLow &&
                             r.fitted_exponent <= kExponentHigh;
        out.push_back(make(name + "_bound", inst.label(), r.dominated(), worst, 1.0,
                           "max err / (W t^3), W = " + detail::fmt(r.W)));
        out.push_back(make(name + "_exponent", inst.label(), scaling,
                           r.fitted_exponent, 3.0));
      }
      return out;
    }});
  }

  checks.push_back({"trotter_plaq", [=] {
    const auto inst = toy_plaquette_ring(u, tau);
    const auto r = exact_trotter_error(inst, SplitScheme::plaq, default_trotter_times());
    double worst = 0.0;
    for (const auto& s : r.samples) worst = std::max(worst, s.error / s.bound);
    const bool scaling =
        r.fitted_exponent >= kExponentLow && r.fitted_exponent <= kExponentHigh;
    return std::vector<CheckResult>{
        make("trotter_plaq_bound", inst.label(), r.dominated(), worst, 1.0,
             "max err / (W t^3), W = " + detail::fmt(r.W)),
        make("trotter_plaq_exponent", inst.label(), scaling, r.fitted_exponent, 3.0)};
  }});

  checks.push_back({"plaquette_circuit", [=] {
    std::vector<CheckResult> out;
    for (double t : {0.0, 0.3, 1.1}) {
      const auto r = verify_plaquette_circuit(tau, t);
      const double dev = std::max({r.compiled, r.local_gate, r.central_block,
                                   r.eigenphases});
      out.push_back(make("plaquette_circuit", "t=" + detail::fmt(t),
                         dev <= kIdentityTolerance, dev, kIdentityTolerance));
    }
    return out;
  }});

  checks.push_back({"hwp_phases", [=] {
    std::vector<CheckResult> out;
    for (int m = 1; m <= 12; ++m) {
      const auto r = verify_hwp_phases(m, 0.7);
      out.push_back(make("hwp_phases", "m=" + std::to_string(m),
                         r.passed(kIdentityTolerance), r.deviation,
                         kIdentityTolerance,
                         "register bits " + std::to_string(r.register_bits)));
    }
    return out;
  }});

  checks.push_back({"adder_tree", [=] {
    std::vector<CheckResult> out;
    for (int m = 1; m <= 16; ++m) {
      const std::int64_t brute = minimal_adder_toffolis(m);
      const std::int64_t model = hwp_config(m).alpha;
      out.push_back(make("adder_tree", "m=" + std::to_string(m), brute == model,
                         double(model), double(brute)));
    }
    return out;
  }});

  if (!opt.only.empty()) {
    std::vector<NamedCheck> kept;
    for (auto& c : checks) {
      if (std::find(opt.only.begin(), opt.only.end(), c.name) != opt.only.end()) {
        kept.push_back(std::move(c));
      }
    }
    checks = std::move(kept);
  }
  return checks;
}

inline std::vector<std::string> suite_check_names() {
  std::vector<std::string> names;
  for (const auto& c : suite_checks({})) names.push_back(c.name);
  return names;
}

inline std::vector<CheckResult> run_oracle_suite(const SuiteOptions& opt) {
  auto checks = suite_checks(opt);
  std::vector<std::future<std::vector<CheckResult>>> pending;
  for (auto& c : checks) {
    pending.push_back(std::async(std::launch::async, [run = c.run] {
      const auto start = std::chrono::steady_clock::now();
      auto results = run();
      const double secs = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - start)
                              .count();
      for (auto& r : results) r.seconds = secs;
      return results;
    }));
  }
  std::vector<CheckResult> out;
  for (std::size_t k = 0; k < pending.size(); ++k) {
    try {
      for (auto& r : pending[k].get()) out.push_back(std::move(r));
    } catch (const std::exception& e) {
      out.push_back({checks[k].name, "", false, 0, 0, 0, 0, e.what()});
    }
  }
  return out;
}

}  // namespace hubbard::oracle
