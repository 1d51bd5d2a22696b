#pragma once

// Second-order Trotter error constants W, with epsilon_step <= W s^3.
//
// For a symmetric split e^{A s/2} e^{B s} e^{A s/2} (A outside) the commutator
// bound reads W = ||[[A,B],B]|| / 12 + ||[[A,B],A]|| / 24. The two nested
// commutators of the Hubbard split are bounded by
//   lemma 1:  ||[[H_I,H_h],H_I]|| <= u^2 ||R||_1
//   lemma 2:  ||[[H_I,H_h],H_h]|| <= (u/2) sum_i (||[S_i,R]||_1 + 2 ||S_i||_1^2)
// where S_i is the star matrix of site i. On the periodic square lattice the
// second sum collapses to u tau^2 L^2 (2 sqrt5 + 16).

#include <cmath>
#include <string>
#include <string_view>

#include "hubbard/errors.hpp"
#include "hubbard/free_fermion.hpp"
#include "hubbard/lattice.hpp"

namespace hubbard {

enum class TrotterScheme {
  so1,   // hopping outside: e^{H_h/2} e^{H_I} e^{H_h/2}
  so2,   // interaction outside: e^{H_I/2} e^{H_h} e^{H_I/2}
  plaq,  // e^{H_I/2} e^{H_p/2} e^{H_g} e^{H_p/2} e^{H_I/2}
};

inline std::string_view to_string(TrotterScheme s) {
  switch (s) {
    case TrotterScheme::so1: return "SO1";
    case TrotterScheme::so2: return "SO2";
    case TrotterScheme::plaq: return "PLAQ";
  }
  return "?";
}

/// Weighted pieces of W; W is their sum.
struct BoundContributions {
  double lemma1_term = 0.0;
  double lemma2_term = 0.0;
  double plaquette_extra = 0.0;
};

struct TrotterBound {
  TrotterScheme scheme = TrotterScheme::so1;
  double W = 0.0;
  BoundContributions contributions;

  /// Upper bound on the error of one step of length s.
  double step_error(double s) const { return W * s * s * s; }
};

inline TrotterBound make_bound(TrotterScheme scheme, BoundContributions c) {
  return {scheme, c.lemma1_term + c.lemma2_term + c.plaquette_extra, c};
}

/// u^2 ||R||_1, bounding ||[[H_I,H_h],H_I]|| for any Hubbard Hamiltonian.
inline double lemma1_bound(double u, const HoppingCoefficients& R) {
  return u * u * hopping_hamiltonian_norm(R);
}

inline double lemma1_bound(double u, double hopping_norm) {
  return u * u * hopping_norm;
}

/// (u/2) sum_i (||[S_i, R]||_1 + 2 ||S_i||_1^2), bounding ||[[H_I,H_h],H_h]||.
inline double lemma2_bound_general(double u, const HoppingCoefficients& R) {
  const Eigen::SparseMatrix<double> Rs = R.sparse();
  double sum = 0.0;
  for (Index i = 0; i < R.dim(); ++i) {
    const Eigen::SparseMatrix<double> star = star_matrix(R, i).sparse();
    const double star_norm = schatten_1_norm(star);
    const double comm_norm = trace_norm(coefficient_commutator(star, Rs));
    sum += comm_norm + 2.0 * star_norm * star_norm;
  }
  return 0.5 * u * sum;
}

/// Closed form of lemma 2 on the periodic L x L lattice: per site
/// ||S_i||_1 = 4 and ||[S_i, R]||_1 = 4 sqrt5. Exact for L >= 5; at L = 4
/// wrapped next-nearest paths make the site-by-site bound about 2% larger.
inline double lemma2_bound_square(double u, double tau, int L) {
  return u * tau * tau * double(L) * L * (2.0 * std::sqrt(5.0) + 16.0);
}

/// Free-fermion norms of a periodic lattice that the bounds consume.
struct LatticeNorms {
  double hopping_norm = 0.0;      // ||R||_1 = ||H_h||
  double plaquette_nested = 0.0;  // ||[[R^p,R^g],R^g]||_1, 0 for odd L
};

inline double plaquette_nested_norm(const PlaquettePartition& part) {
  const Eigen::SparseMatrix<double> p = part.pink.sparse();
  const Eigen::SparseMatrix<double> g = part.gold.sparse();
  return nested_commutator_1norm(p, g, g);
}

inline LatticeNorms lattice_norms(const LatticeSpec& spec) {
  const HoppingCoefficients R = build_square_lattice(spec);
  LatticeNorms n;
  n.hopping_norm = hopping_hamiltonian_norm(R);
  if (spec.L % 2 == 0) {
    n.plaquette_nested = plaquette_nested_norm(plaquette_partition(R));
  }
  return n;
}

namespace detail {

inline void require_square_spec(const LatticeSpec& spec) {
  if (spec.L < 4) throw UnsupportedLattice("Trotter bounds need L >= 4");
  if (spec.u < 0.0 || spec.tau < 0.0) {
    throw ContractViolation("u and tau must be non-negative");
  }
}

}  // namespace detail

inline TrotterBound w_so1(const LatticeSpec& spec, const LatticeNorms& norms) {
  detail::require_square_spec(spec);
  return make_bound(
      TrotterScheme::so1,
      {lemma1_bound(spec.u, norms.hopping_norm) / 12.0,
       lemma2_bound_square(spec.u, spec.tau, spec.L) / 24.0, 0.0});
}

inline TrotterBound w_so2(const LatticeSpec& spec, const LatticeNorms& norms) {
  detail::require_square_spec(spec);
  return make_bound(
      TrotterScheme::so2,
      {lemma1_bound(spec.u, norms.hopping_norm) / 24.0,
       lemma2_bound_square(spec.u, spec.tau, spec.L) / 12.0, 0.0});
}

inline TrotterBound w_plaq(const LatticeSpec& spec, const LatticeNorms& norms) {
  if (spec.L % 2 != 0) {
    throw UnsupportedLattice("PLAQ needs even L, got L = " +
                             std::to_string(spec.L));
  }
  TrotterBound b = w_so2(spec, norms);
  b.contributions.plaquette_extra = 3.0 / 24.0 * norms.plaquette_nested;
  return make_bound(TrotterScheme::plaq, b.contributions);
}

inline TrotterBound w_so1(const LatticeSpec& spec) {
  detail::require_square_spec(spec);
  return w_so1(spec, lattice_norms(spec));
}

inline TrotterBound w_so2(const LatticeSpec& spec) {
  detail::require_square_spec(spec);
  return w_so2(spec, lattice_norms(spec));
}

inline TrotterBound w_plaq(const LatticeSpec& spec) {
  detail::require_square_spec(spec);
  if (spec.L % 2 != 0) {
    throw UnsupportedLattice("PLAQ needs even L, got L = " + std::to_string(spec.L));
  }
  return w_plaq(spec, lattice_norms(spec));
}

inline TrotterBound w_plaq(const LatticeSpec& spec,
                           const PlaquettePartition& part) {
  detail::require_square_spec(spec);
  LatticeNorms norms;
  norms.hopping_norm = hopping_hamiltonian_norm(
      HoppingCoefficients(part.pink.entries() + part.gold.entries(),
                          part.pink.side()));
  norms.plaquette_nested = plaquette_nested_norm(part);
  return w_plaq(spec, norms);
}

/// min(W_SO1, W_SO2): both orderings cost the same gates.
inline TrotterBound w_so_best(const LatticeSpec& spec,
                              const LatticeNorms& norms) {
  const TrotterBound a = w_so1(spec, norms);
  const TrotterBound b = w_so2(spec, norms);
  return a.W <= b.W ? a : b;
}

// Bounds on arbitrary graphs, with lemma 2 evaluated site by site. These are
// what the exact small-instance checks compare against.

inline TrotterBound so_bound_general(TrotterScheme scheme, double u,
                                     const HoppingCoefficients& R) {
  const double l1 = lemma1_bound(u, R);
  const double l2 = lemma2_bound_general(u, R);
  switch (scheme) {
    case TrotterScheme::so1:
      return make_bound(scheme, {l1 / 12.0, l2 / 24.0, 0.0});
    case TrotterScheme::so2:
      return make_bound(scheme, {l1 / 24.0, l2 / 12.0, 0.0});
    case TrotterScheme::plaq:
      break;
  }
  throw ContractViolation("so_bound_general takes SO1 or SO2");
}

/// W_SO2 plus the two pink/gold nested commutators, kept separate since a
/// general split need not be symmetric between colours.
inline TrotterBound plaq_bound_general(double u,
                                       const HoppingCoefficients& pink,
                                       const HoppingCoefficients& gold) {
  const HoppingCoefficients full(pink.entries() + gold.entries());
  BoundContributions c = so_bound_general(TrotterScheme::so2, u, full).contributions;
  const Eigen::MatrixXd& p = pink.entries();
  const Eigen::MatrixXd& g = gold.entries();
  c.plaquette_extra = nested_commutator_1norm(p, g, g) / 12.0 +
                      nested_commutator_1norm(p, g, p) / 24.0;
  return make_bound(TrotterScheme::plaq, c);
}

}  // namespace hubbard
