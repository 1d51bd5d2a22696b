#pragma once

// Non-Clifford counts per Trotter step and the Hamming-weight-phasing (HWP)
// rewrite of equal-angle rotation layers.

#include <bit>
#include <cstdint>
#include <optional>
#include <string>

#include "hubbard/errors.hpp"

namespace hubbard {

/// Toffoli, T and arbitrary-angle Z rotation counts.
struct GateCost {
  std::int64_t n_tof = 0;
  std::int64_t n_t = 0;
  std::int64_t n_rot = 0;

  GateCost& operator+=(const GateCost& o) {
    n_tof += o.n_tof;
    n_t += o.n_t;
    n_rot += o.n_rot;
    return *this;
  }
  friend GateCost operator+(GateCost a, const GateCost& b) { return a += b; }
  friend GateCost operator*(std::int64_t k, const GateCost& c) {
    return {k * c.n_tof, k * c.n_t, k * c.n_rot};
  }
  friend bool operator==(const GateCost&, const GateCost&) = default;
};

namespace detail {

inline void require_plaq_lattice(int L) {
  if (L < 4 || L % 2 != 0) {
    throw UnsupportedLattice("PLAQ needs even L >= 4, got L = " +
                             std::to_string(L));
  }
}

}  // namespace detail

/// One Z (x) Z rotation per site thanks to the shifted interaction.
inline GateCost plaq_interaction_layer_cost(int L) {
  detail::require_plaq_lattice(L);
  return {0, 0, std::int64_t(L) * L};
}

/// One colour of plaquettes in both spin sectors: L^2/2 plaquettes at
/// {0, 4, 2} each (the two rotations of a plaquette share one angle).
inline GateCost plaq_tile_layer_cost(int L) {
  detail::require_plaq_lattice(L);
  const std::int64_t plaquettes = std::int64_t(L) * L / 2;
  return plaquettes * GateCost{0, 4, 2};
}

/// Interaction layer plus three tile layers (pink/2, gold, pink/2).
inline GateCost plaq_step_cost(int L) {
  return plaq_interaction_layer_cost(L) + 3 * plaq_tile_layer_cost(L);
}

/// Tabulated SO-FFFT+ step costs; the FFFT only exists for L = 2^k and no
/// closed form is available, so anything outside the table is rejected.
inline GateCost so_ffft_plus_step_cost(int L) {
  switch (L) {
    case 4: return {0, 256, 36};
    case 8: return {0, 1664, 164};
    case 16: return {0, 10368, 708};
    default: break;
  }
  throw UnsupportedLattice("SO-FFFT+ costs are tabulated for L = 4, 8, 16 only");
}

/// Prior SO-FFFT step costs (unshifted interaction), for comparison only.
inline GateCost so_ffft_legacy_step_cost(int L) {
  switch (L) {
    case 4: return {0, 256, 68};
    case 8: return {0, 1664, 292};
    case 16: return {0, 10368, 1220};
    default: break;
  }
  throw UnsupportedLattice("SO-FFFT costs are tabulated for L = 4, 8, 16 only");
}

/// Prior SO-FFFT error constants at u/tau = 4, for comparison only.
inline std::optional<double> so_ffft_legacy_w(int L) {
  switch (L) {
    case 4: return 1.4e3;
    case 8: return 5.5e3;
    case 16: return 2.2e4;
    default: return std::nullopt;
  }
}

inline int hamming_weight(std::uint64_t m) { return std::popcount(m); }

struct HwpConfig {
  std::int64_t m = 1;                // equal-angle rotations per batch
  std::int64_t alpha = 0;            // Toffolis and clean ancillas per batch
  std::int64_t rotations_after = 1;  // rotations left per batch
};

inline HwpConfig hwp_config(std::int64_t m) {
  if (m < 1) throw ContractViolation("HWP batch size must be >= 1");
  const auto um = static_cast<std::uint64_t>(m);
  // floor(log2 m) + 1 bits hold any Hamming weight in [0, m].
  return {m, m - hamming_weight(um), std::int64_t(std::bit_width(um))};
}

/// Batches the equal-angle rotations of a step into groups of m. Every
/// batch costs alpha Toffolis and leaves rotations_after rotations.
inline GateCost apply_hwp(const GateCost& cost, int L, std::int64_t m) {
  detail::require_plaq_lattice(L);
  const std::int64_t half = std::int64_t(L) * L / 2;
  if (m < 1 || half % m != 0) {
    throw ContractViolation("HWP batch size must divide L^2/2");
  }
  if (cost.n_rot % m != 0) {
    throw ContractViolation("rotation count is not a multiple of the batch");
  }
  const HwpConfig hwp = hwp_config(m);
  const std::int64_t batches = cost.n_rot / m;
  return {cost.n_tof + batches * hwp.alpha, cost.n_t,
          batches * hwp.rotations_after};
}

/// N_TOF + ceil(N_T / 2): T gates paired through a catalysed Toffoli state.
inline std::int64_t toffoli_equivalent(const GateCost& cost) {
  if (cost.n_rot != 0) {
    throw ContractViolation(
        "toffoli_equivalent needs rotations synthesised into T gates first");
  }
  return cost.n_tof + (cost.n_t + 1) / 2;
}

inline std::int64_t t_equivalent_of_toffoli(std::int64_t n_tof) {
  return 4 * n_tof;
}

}  // namespace hubbard
