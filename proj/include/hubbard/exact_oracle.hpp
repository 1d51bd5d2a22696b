#pragma once

// Brute-force many-body checks on tiny Hubbard instances.
//
// Jordan-Wigner with interleaved spins: site i up is mode 2i, site i down is
// mode 2i+1, so z_{i,up} z_{i,down} is a nearest-neighbour Z (x) Z. Every
// operator used here conserves N_up and N_down separately, so all matrices are
// stored block-diagonally over (N_up, N_down) sectors. Operator norms and
// identities on the full 4^n space are maxima over sectors.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "hubbard/errors.hpp"
#include "hubbard/free_fermion.hpp"
#include "hubbard/gate_costs.hpp"
#include "hubbard/lattice.hpp"
#include "hubbard/trotter_bounds.hpp"

namespace hubbard::oracle {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using State = std::uint32_t;

inline constexpr int kMaxSites = 7;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kUnitaryTolerance = 1e-10;
/// Relative slack when comparing an exact norm to a bound; several of the
/// bounds are attained exactly on the smallest instances.
inline constexpr double kBoundSlack = 1e-10;

inline int up_mode(int site) { return 2 * site; }
inline int down_mode(int site) { return 2 * site + 1; }

/// Arbitrary-graph Hubbard model small enough for dense algebra.
class SmallHubbardInstance {
 public:
  SmallHubbardInstance(HoppingCoefficients R, double u, std::string label)
      : R_(std::move(R)), u_(u), label_(std::move(label)) {
    if (R_.dim() < 1 || R_.dim() > kMaxSites) {
      throw ContractViolation("exact instances need 1..7 sites, got " +
                              std::to_string(R_.dim()));
    }
  }

  const HoppingCoefficients& hopping() const { return R_; }
  double u() const { return u_; }
  const std::string& label() const { return label_; }
  int n_sites() const { return static_cast<int>(R_.dim()); }
  int n_qubits() const { return 2 * n_sites(); }
  std::int64_t dim() const { return std::int64_t(1) << n_qubits(); }

 private:
  HoppingCoefficients R_;
  double u_ = 0.0;
  std::string label_;
};

inline SmallHubbardInstance two_site_chain(double u, double tau) {
  return {graph_hopping(2, {{0, 1}}, tau), u, "2-site"};
}

/// 2 x 2 open grid, i.e. a 4-site ring.
inline SmallHubbardInstance grid_2x2(double u, double tau) {
  return {open_grid(2, 2, tau), u, "2x2"};
}

inline SmallHubbardInstance grid_2x3(double u, double tau) {
  return {open_grid(3, 2, tau), u, "2x3"};
}

// ---------------------------------------------------------------------------
// Fock-space plumbing.

struct Sector {
  int n_up = 0;
  int n_down = 0;
  std::vector<State> states;  // ascending

  Index size() const { return Index(states.size()); }
  Index find(State s) const {
    const auto it = std::lower_bound(states.begin(), states.end(), s);
    if (it == states.end() || *it != s) return -1;
    return Index(it - states.begin());
  }
};

inline constexpr State kUpMask = 0x55555555u;

inline std::vector<Sector> particle_sectors(int n_sites) {
  const int n_modes = 2 * n_sites;
  std::vector<Sector> out;
  for (int nu = 0; nu <= n_sites; ++nu) {
    for (int nd = 0; nd <= n_sites; ++nd) {
      Sector sec{nu, nd, {}};
      for (State s = 0; s < (State(1) << n_modes); ++s) {
        if (std::popcount(s & kUpMask) == nu &&
            std::popcount(s & ~kUpMask) == nd) {
          sec.states.push_back(s);
        }
      }
      out.push_back(std::move(sec));
    }
  }
  return out;
}

inline bool occupied(State s, int mode) { return (s >> mode) & 1u; }

/// a^dag_p a_q |s> = sign |s'>; returns sign 0 when the result vanishes.
inline std::pair<int, State> apply_hop(State s, int p, int q) {
  if (p == q) return {occupied(s, p) ? 1 : 0, s};
  if (!occupied(s, q) || occupied(s, p)) return {0, s};
  const int lo = std::min(p, q);
  const int hi = std::max(p, q);
  const State between = (State(1) << hi) - (State(1) << (lo + 1));
  const int sign = (std::popcount(s & between) % 2) ? -1 : 1;
  return {sign, s ^ (State(1) << p) ^ (State(1) << q)};
}

/// sum_{p,q} C_pq a^dag_p a_q on one sector (mode-level coefficients).
inline CMatrix mode_quadratic(const Sector& sec, const CMatrix& C) {
  CMatrix out = CMatrix::Zero(sec.size(), sec.size());
  for (Index col = 0; col < sec.size(); ++col) {
    const State s = sec.states[col];
    for (Index p = 0; p < C.rows(); ++p) {
      for (Index q = 0; q < C.cols(); ++q) {
        if (C(p, q) == Complex(0.0)) continue;
        auto [sign, t] = apply_hop(s, int(p), int(q));
        if (sign == 0) continue;
        out(sec.find(t), col) += double(sign) * C(p, q);
      }
    }
  }
  return out;
}

/// Site coefficients Q lifted to both spin species: sum_sigma Q_ij a^dag a.
inline Eigen::MatrixXcd spinful_coefficients(const Eigen::MatrixXd& Q) {
  const Index n = Q.rows();
  CMatrix C = CMatrix::Zero(2 * n, 2 * n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      C(up_mode(int(i)), up_mode(int(j))) = Q(i, j);
      C(down_mode(int(i)), down_mode(int(j))) = Q(i, j);
    }
  }
  return C;
}

inline CMatrix site_quadratic(const Sector& sec, const Eigen::MatrixXd& Q) {
  return mode_quadratic(sec, spinful_coefficients(Q));
}

/// Diagonal of z_{i,up} z_{i,down} on a sector.
inline Eigen::VectorXd site_parity(const Sector& sec, int site) {
  Eigen::VectorXd d(sec.size());
  for (Index k = 0; k < sec.size(); ++k) {
    const State s = sec.states[k];
    const bool odd = occupied(s, up_mode(site)) != occupied(s, down_mode(site));
    d(k) = odd ? -1.0 : 1.0;
  }
  return d;
}

struct PauliZZ {
  int qubit_a = 0;
  int qubit_b = 0;
  double weight = 0.0;
};

/// The shifted interaction u sum_i (n_up - 1/2)(n_down - 1/2) as Pauli terms.
inline std::vector<PauliZZ> interaction_pauli_terms(const SmallHubbardInstance& inst) {
  std::vector<PauliZZ> out;
  for (int i = 0; i < inst.n_sites(); ++i) {
    out.push_back({up_mode(i), down_mode(i), inst.u() / 4.0});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dense matrix helpers.

inline CMatrix commutator(const CMatrix& a, const CMatrix& b) {
  return a * b - b * a;
}

using Diagonal = Eigen::DiagonalMatrix<Complex, Eigen::Dynamic>;

inline Diagonal as_diagonal(const Eigen::VectorXd& d) {
  return Diagonal(d.cast<Complex>());
}

/// [D, m] for diagonal D in O(dim^2).
inline CMatrix commutator(const Diagonal& d, const CMatrix& m) {
  return d * m - m * d;
}

inline double max_abs(const CMatrix& m) {
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

inline double hermitian_deviation(const CMatrix& m) {
  return max_abs(m - m.adjoint());
}

/// Largest |eigenvalue| of a Hermitian matrix.
inline double hermitian_norm(const CMatrix& h) {
  if (h.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

/// Largest singular value. Hermitian and anti-Hermitian inputs go through a
/// Hermitian eigensolver, which stays accurate on degenerate spectra; other
/// matrices use the top eigenvalue of m^dag m.
inline double operator_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  const double scale = std::max(1.0, max_abs(m));
  const double herm_tol = 1e-13 * scale;
  if (hermitian_deviation(m) <= herm_tol) return hermitian_norm(m);
  if (max_abs(m + m.adjoint()) <= herm_tol) return hermitian_norm(Complex(0, 1) * m);
  return std::sqrt(hermitian_norm(m.adjoint() * m));
}

struct HermitianEigen {
  Eigen::VectorXd values;
  CMatrix vectors;
};

inline HermitianEigen eigh(const CMatrix& h) {
  if (hermitian_deviation(h) > kHermitianTolerance * std::max(1.0, max_abs(h))) {
    throw ContractViolation("eigh: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw ContractViolation("eigh: eigensolver failed");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// exp(i s h) from a precomputed eigendecomposition.
inline CMatrix expi(const HermitianEigen& e, double s) {
  CVector phases(e.values.size());
  for (Index k = 0; k < e.values.size(); ++k) {
    phases(k) = std::polar(1.0, s * e.values(k));
  }
  return e.vectors * phases.asDiagonal() * e.vectors.adjoint();
}

inline Diagonal expi_diagonal(const Eigen::VectorXd& d, double s) {
  CVector phases(d.size());
  for (Index k = 0; k < d.size(); ++k) phases(k) = std::polar(1.0, s * d(k));
  return Diagonal(phases);
}

inline double unitarity_deviation(const CMatrix& U) {
  return max_abs(U * U.adjoint() - CMatrix::Identity(U.rows(), U.cols()));
}

// ---------------------------------------------------------------------------
// Operators of one sector.

struct SectorOperators {
  Eigen::VectorXd H_I;             // diagonal, shifted form
  Eigen::VectorXd H_I_unshifted;   // diagonal, u n_up n_down
  CMatrix H_h;
  std::vector<Eigen::VectorXd> zz;  // per site, diagonal
  std::vector<CMatrix> star;        // T_i from sums of B_ij + B_ij^dag
  CVector V_bar;                    // diagonal prod_j (1 + i zz_j)/sqrt2
};

/// B_ij = R_ij sum_sigma a^dag_{i,sigma} a_{j,sigma}.
inline CMatrix hop_operator(const Sector& sec, const HoppingCoefficients& R,
                            int i, int j) {
  CMatrix C = CMatrix::Zero(2 * R.dim(), 2 * R.dim());
  C(up_mode(i), up_mode(j)) = R.entries()(i, j);
  C(down_mode(i), down_mode(j)) = R.entries()(i, j);
  return mode_quadratic(sec, C);
}

/// `flip_site` >= 0 replaces V_j by its conjugate on that site (mutation).
inline SectorOperators build_jw_operators(const SmallHubbardInstance& inst,
                                          const Sector& sec,
                                          int flip_site = -1) {
  const int n = inst.n_sites();
  const auto& R = inst.hopping();
  SectorOperators ops;
  const Index d = sec.size();

  ops.H_I = Eigen::VectorXd::Zero(d);
  ops.H_I_unshifted = Eigen::VectorXd::Zero(d);
  ops.V_bar = CVector::Ones(d);
  for (int i = 0; i < n; ++i) {
    ops.zz.push_back(site_parity(sec, i));
  }
  for (const PauliZZ& term : interaction_pauli_terms(inst)) {
    ops.H_I += term.weight * ops.zz[term.qubit_a / 2];
  }
  const double root_half = 1.0 / std::numbers::sqrt2;
  for (Index k = 0; k < d; ++k) {
    const State s = sec.states[k];
    for (int i = 0; i < n; ++i) {
      if (occupied(s, up_mode(i)) && occupied(s, down_mode(i))) {
        ops.H_I_unshifted(k) += inst.u();
      }
      const double sign = (i == flip_site) ? -1.0 : 1.0;
      ops.V_bar(k) *= Complex(1.0, sign * ops.zz[i](k)) * root_half;
    }
  }

  ops.H_h = site_quadratic(sec, R.entries());
  for (int i = 0; i < n; ++i) {
    CMatrix T = CMatrix::Zero(d, d);
    for (int j = 0; j < n; ++j) {
      if (j == i || R.entries()(i, j) == 0.0) continue;
      const CMatrix B = hop_operator(sec, R, i, j);
      T += B + B.adjoint();
    }
    ops.star.push_back(std::move(T));
  }
  return ops;
}

// ---------------------------------------------------------------------------
// Identity checks. Each returns the largest deviation found over all sectors.

struct Lemma1Report {
  double deviation = 0.0;    // || [[H_I,H_h],H_I] - (u^2/2)(V H_h V^dag - H_h) ||
  double tolerance = 0.0;
  double exact_norm = 0.0;   // || [[H_I,H_h],H_I] ||
  double bound = 0.0;        // u^2 ||R||_1
  double hopping_norm = 0.0; // exact || H_h ||
  bool passed() const {
    return deviation <= tolerance && exact_norm <= bound * (1 + kBoundSlack);
  }
};

inline Lemma1Report verify_lemma1_identity(const SmallHubbardInstance& inst,
                                           int flip_site = -1) {
  const double u = inst.u();
  Lemma1Report r;
  for (const Sector& sec : particle_sectors(inst.n_sites())) {
    const SectorOperators ops = build_jw_operators(inst, sec, flip_site);
    const Diagonal HI = as_diagonal(ops.H_I);
    const CMatrix inner = commutator(HI, ops.H_h);
    const CMatrix nested = inner * HI - HI * inner;
    const CMatrix conj =
        ops.V_bar.asDiagonal() * ops.H_h * ops.V_bar.conjugate().asDiagonal();
    const CMatrix rhs = 0.5 * u * u * (conj - ops.H_h);
    r.deviation = std::max(r.deviation, operator_norm(nested - rhs));
    r.exact_norm = std::max(r.exact_norm, operator_norm(nested));
    r.hopping_norm = std::max(r.hopping_norm, operator_norm(ops.H_h));
  }
  r.bound = lemma1_bound(u, inst.hopping());
  r.tolerance = 1e-10 * std::max(1.0, u * u * r.hopping_norm);
  return r;
}

struct AnticommutationReport {
  double anticommutator = 0.0;  // max || {zz_i, B_ij} ||, both orientations
  double disjoint_commutator = 0.0;  // max || [zz_k, B_ij] ||, k not in {i,j}
  double involution = 0.0;      // max || zz_i^2 - 1 ||
  bool passed() const {
    return anticommutator <= 1e-12 && disjoint_commutator <= 1e-12 &&
           involution <= 1e-12;
  }
};

inline AnticommutationReport verify_anticommutation(const SmallHubbardInstance& inst) {
  const auto& R = inst.hopping();
  const int n = inst.n_sites();
  AnticommutationReport r;
  for (const Sector& sec : particle_sectors(n)) {
    std::vector<Eigen::VectorXd> zz;
    for (int i = 0; i < n; ++i) {
      zz.push_back(site_parity(sec, i));
      r.involution = std::max(
          r.involution, (zz.back().array().square() - 1.0).abs().maxCoeff());
    }
    for (auto [i, j] : R.edges()) {
      for (auto [a, b] : {std::pair{i, j}, std::pair{j, i}}) {
        const CMatrix B = hop_operator(sec, R, int(a), int(b));
        for (int k = 0; k < n; ++k) {
          const Diagonal Z = as_diagonal(zz[k]);
          if (k == a || k == b) {
            r.anticommutator =
                std::max(r.anticommutator, max_abs(CMatrix(Z * B + B * Z)));
          } else {
            r.disjoint_commutator =
                std::max(r.disjoint_commutator, max_abs(CMatrix(Z * B - B * Z)));
          }
        }
      }
    }
  }
  return r;
}

struct Lemma2Report {
  double first_step = 0.0;   // max_i || [zz_i, H_h] - 2 zz_i T_i ||
  double nested_step = 0.0;  // max_i || [[zz_i,H_h],H_h] - 2 zz_i [T_i,H_h] - 4 zz_i T_i^2 ||
  double star_construction = 0.0;  // T_i from B sums vs lifted star matrix
  double exact_norm = 0.0;   // || [[H_I,H_h],H_h] ||
  double bound = 0.0;        // lemma2_bound_general
  bool passed(double tol = 1e-10) const {
    return first_step <= tol && nested_step <= tol && star_construction <= tol &&
           exact_norm <= bound * (1 + kBoundSlack);
  }
};

inline Lemma2Report verify_lemma2_steps(const SmallHubbardInstance& inst) {
  const int n = inst.n_sites();
  Lemma2Report r;
  for (const Sector& sec : particle_sectors(n)) {
    const SectorOperators ops = build_jw_operators(inst, sec);
    const CMatrix& H = ops.H_h;
    const double h_scale = std::max(1.0, operator_norm(H));
    for (int i = 0; i < n; ++i) {
      const Diagonal Z = as_diagonal(ops.zz[i]);
      const CMatrix& T = ops.star[i];
      const CMatrix first = commutator(Z, H);
      const CMatrix ZT = Z * T;
      r.first_step =
          std::max(r.first_step, operator_norm(first - 2.0 * ZT) / h_scale);
      const CMatrix nested = commutator(first, H);
      const CMatrix rhs = 2.0 * (Z * commutator(T, H)) + 4.0 * (ZT * T);
      r.nested_step = std::max(r.nested_step,
                               operator_norm(nested - rhs) / (h_scale * h_scale));
      const CMatrix lifted =
          site_quadratic(sec, star_matrix(inst.hopping(), i).entries());
      r.star_construction = std::max(r.star_construction, max_abs(lifted - T));
    }
    r.exact_norm = std::max(
        r.exact_norm, operator_norm(commutator(commutator(as_diagonal(ops.H_I), H), H)));
  }
  r.bound = lemma2_bound_general(inst.u(), inst.hopping());
  return r;
}

struct FreeFermionReport {
  double exact_norm = 0.0;   // dense || H_h ||
  double schatten_1 = 0.0;   // ||R||_1
  double hermiticity = 0.0;  // worst Hamiltonian asymmetry
  double trace_H_I = 0.0;
  bool passed() const {
    return std::abs(exact_norm - schatten_1) <= 1e-10 * std::max(1.0, schatten_1) &&
           hermiticity <= kHermitianTolerance && std::abs(trace_H_I) <= 1e-9;
  }
};

inline FreeFermionReport verify_free_fermion(const SmallHubbardInstance& inst) {
  FreeFermionReport r;
  for (const Sector& sec : particle_sectors(inst.n_sites())) {
    const SectorOperators ops = build_jw_operators(inst, sec);
    r.exact_norm = std::max(r.exact_norm, operator_norm(ops.H_h));
    r.hermiticity = std::max(r.hermiticity, hermitian_deviation(ops.H_h));
    r.trace_H_I += ops.H_I.sum();
  }
  r.schatten_1 = hopping_hamiltonian_norm(inst.hopping());
  return r;
}

/// Shifted and unshifted interactions differ by a number-dependent constant,
/// so within one sector their propagators differ by a global phase.
inline double verify_chemical_shift(const SmallHubbardInstance& inst, double t) {
  double worst = 0.0;
  for (const Sector& sec : particle_sectors(inst.n_sites())) {
    const SectorOperators ops = build_jw_operators(inst, sec);
    const Eigen::VectorXd gap = ops.H_I_unshifted - ops.H_I;
    for (Index k = 0; k < gap.size(); ++k) {
      const Complex ratio = std::polar(1.0, t * (gap(k) - gap(0)));
      worst = std::max(worst, std::abs(ratio - 1.0));
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Trotter error.

enum class SplitScheme {
  so1,   // hopping outside
  so2,   // interaction outside
  plaq,  // interaction outside, pink halves around gold
};

struct TrotterSample {
  double t = 0.0;
  double error = 0.0;
  double bound = 0.0;  // W t^3
};

struct TrotterReport {
  double W = 0.0;
  std::vector<TrotterSample> samples;
  double fitted_exponent = 0.0;
  double unitarity = 0.0;
  bool dominated() const {
    for (const auto& s : samples) {
      if (s.error > s.bound * (1 + kBoundSlack)) return false;
    }
    return true;
  }
};

/// Least-squares slope of log(error) against log(t).
inline double fit_exponent(const std::vector<TrotterSample>& samples) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(samples.size());
  for (const auto& s : samples) {
    const double x = std::log(s.t);
    const double y = std::log(s.error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// The 4-ring 0-1-2-3 split into pink {01, 23} and gold {12, 30}.
inline std::pair<HoppingCoefficients, HoppingCoefficients> toy_plaquette_split(
    double tau) {
  return {graph_hopping(4, {{0, 1}, {2, 3}}, tau),
          graph_hopping(4, {{1, 2}, {3, 0}}, tau)};
}

inline SmallHubbardInstance toy_plaquette_ring(double u, double tau) {
  return {graph_hopping(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, tau), u, "4-ring"};
}

inline double scheme_w(const SmallHubbardInstance& inst, SplitScheme scheme) {
  switch (scheme) {
    case SplitScheme::so1:
      return so_bound_general(TrotterScheme::so1, inst.u(), inst.hopping()).W;
    case SplitScheme::so2:
      return so_bound_general(TrotterScheme::so2, inst.u(), inst.hopping()).W;
    case SplitScheme::plaq: {
      const auto [pink, gold] = toy_plaquette_split(inst.hopping().entries()(0, 1));
      return plaq_bound_general(inst.u(), pink, gold).W;
    }
  }
  return 0.0;
}

/// err(t) = || exp(iHt) - S_2(t) || for the scheme's symmetric product.
/// PLAQ requires the 4-ring instance (see toy_plaquette_split).
inline TrotterReport exact_trotter_error(const SmallHubbardInstance& inst,
                                         SplitScheme scheme,
                                         const std::vector<double>& t_list) {
  if (scheme == SplitScheme::plaq) {
    const auto ring = toy_plaquette_ring(1.0, 1.0).hopping().entries();
    const double tau = inst.hopping().entries()(0, 1);
    if (inst.n_sites() != 4 ||
        (inst.hopping().entries() - tau * ring).cwiseAbs().maxCoeff() > 0.0) {
      throw ContractViolation("PLAQ error is defined on the 4-ring toy only");
    }
  }
  TrotterReport r;
  r.W = scheme_w(inst, scheme);
  std::vector<double> worst(t_list.size(), 0.0);

  for (const Sector& sec : particle_sectors(inst.n_sites())) {
    const SectorOperators ops = build_jw_operators(inst, sec);
    CMatrix H = ops.H_h;
    H.diagonal() += ops.H_I.cast<Complex>();
    const HermitianEigen full = eigh(H);
    const HermitianEigen hop = eigh(ops.H_h);
    HermitianEigen pink, gold;
    if (scheme == SplitScheme::plaq) {
      const auto [p, g] = toy_plaquette_split(inst.hopping().entries()(0, 1));
      pink = eigh(site_quadratic(sec, p.entries()));
      gold = eigh(site_quadratic(sec, g.entries()));
    }
    for (std::size_t k = 0; k < t_list.size(); ++k) {
      const double t = t_list[k];
      const CMatrix exact = expi(full, t);
      CMatrix step;
      switch (scheme) {
        case SplitScheme::so1: {
          const CMatrix half = expi(hop, t / 2);
          step = (half * expi_diagonal(ops.H_I, t)) * half;
          break;
        }
        case SplitScheme::so2:
          step = expi_diagonal(ops.H_I, t / 2) * expi(hop, t) *
                 expi_diagonal(ops.H_I, t / 2);
          break;
        case SplitScheme::plaq: {
          const CMatrix half = expi(pink, t / 2);
          step = expi_diagonal(ops.H_I, t / 2) * (half * expi(gold, t) * half) *
                 expi_diagonal(ops.H_I, t / 2);
          break;
        }
      }
      r.unitarity = std::max(r.unitarity, unitarity_deviation(step));
      worst[k] = std::max(worst[k], operator_norm(exact - step));
    }
  }
  for (std::size_t k = 0; k < t_list.size(); ++k) {
    const double t = t_list[k];
    r.samples.push_back({t, worst[k], r.W * t * t * t});
  }
  if (r.samples.size() >= 2 &&
      std::all_of(r.samples.begin(), r.samples.end(),
                  [](const TrotterSample& s) { return s.error > 0.0; })) {
    r.fitted_exponent = fit_exponent(r.samples);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Plaquette circuit on four modes (full 16-dim Fock space, no spin).

/// a^dag_p on n modes.
inline CMatrix creation(int n_modes, int p) {
  const State dim = State(1) << n_modes;
  CMatrix a = CMatrix::Zero(dim, dim);
  for (State s = 0; s < dim; ++s) {
    if (occupied(s, p)) continue;
    const int sign = (std::popcount(s & ((State(1) << p) - 1)) % 2) ? -1 : 1;
    a(s | (State(1) << p), s) = sign;
  }
  return a;
}

/// Number-conserving Gaussian unitary with G a^dag_k G^dag = sum_l M_lk a^dag_l
/// and G|0> = |0>.
inline CMatrix gaussian_unitary(const CMatrix& M) {
  const int n = int(M.rows());
  const State dim = State(1) << n;
  std::vector<CMatrix> a_dag;
  for (int p = 0; p < n; ++p) a_dag.push_back(creation(n, p));
  CMatrix G = CMatrix::Zero(dim, dim);
  for (State s = 0; s < dim; ++s) {
    CVector v = CVector::Zero(dim);
    v(0) = 1.0;
    for (int k = n - 1; k >= 0; --k) {
      if (!occupied(s, k)) continue;
      CMatrix mode = CMatrix::Zero(dim, dim);
      for (int l = 0; l < n; ++l) mode += M(l, k) * a_dag[l];
      v = mode * v;
    }
    G.col(s) = v;
  }
  return G;
}

/// F_{i,j}: a_i -> (a_i + a_j)/sqrt2, a_j -> (a_i - a_j)/sqrt2. Mode indices
/// are 0-based; the pair is ordered.
inline CMatrix f_gate_modes(int n_modes, int i, int j) {
  const double h = 1.0 / std::numbers::sqrt2;
  CMatrix M = CMatrix::Identity(n_modes, n_modes);
  M(i, i) = h;
  M(j, i) = h;
  M(i, j) = h;
  M(j, j) = -h;
  return M;
}

inline CMatrix f_gate(int n_modes, int i, int j) {
  return gaussian_unitary(f_gate_modes(n_modes, i, j));
}

/// Two-qubit F on the basis (empty, first mode, second mode, both).
inline Eigen::Matrix4cd f_gate_local() {
  const double h = 1.0 / std::numbers::sqrt2;
  Eigen::Matrix4cd m;
  m << 1, 0, 0, 0,  //
      0, h, h, 0,   //
      0, h, -h, 0,  //
      0, 0, 0, -1;
  return m;
}

/// Restriction of a 4-mode operator to modes (i, j) with the others empty,
/// in the basis (empty, i, j, ij).
inline Eigen::Matrix4cd pair_block(const CMatrix& U, int i, int j) {
  const State basis[4] = {0, State(1) << i, State(1) << j,
                          (State(1) << i) | (State(1) << j)};
  Eigen::Matrix4cd out;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out(r, c) = U(basis[r], basis[c]);
  }
  return out;
}

/// Mode order around the plaquette that the three-gate network diagonalises:
/// modes (0,1) and (2,3) are the two diagonals, so the cycle is 0-2-1-3.
inline std::array<int, 4> plaquette_cycle_order() { return {0, 2, 1, 3}; }

inline Eigen::MatrixXd plaquette_mode_coefficients(double tau) {
  const auto cyc = plaquette_cycle_order();
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(4, 4);
  for (int k = 0; k < 4; ++k) {
    R(cyc[k], cyc[(k + 1) % 4]) = tau;
    R(cyc[(k + 1) % 4], cyc[k]) = tau;
  }
  return R;
}

struct PlaquetteCircuitReport {
  double compiled = 0.0;        // exp(i tau t K) vs V P V^dag
  double literal_order = 0.0;   // same with the unreversed first gate
  double local_gate = 0.0;      // Gaussian F on adjacent modes vs 4x4 matrix
  double central_block = 0.0;   // F P F vs exp(i tau t XX) exp(i tau t YY)
  double eigenphases = 0.0;     // single-particle spectrum vs {e^{+-2i t tau},1,1}
  bool passed(double tol = 1e-12) const {
    return compiled <= tol && local_gate <= tol && central_block <= tol &&
           eigenphases <= tol;
  }
};

inline PlaquetteCircuitReport verify_plaquette_circuit(double tau, double t) {
  PlaquetteCircuitReport r;
  const double theta = 2.0 * t * tau;
  const CMatrix K = mode_quadratic(
      Sector{0, 0, [] {
               std::vector<State> all(16);
               for (State s = 0; s < 16; ++s) all[s] = s;
               return all;
             }()},
      plaquette_mode_coefficients(tau).cast<Complex>());
  const CMatrix exact = expi(eigh(K), t);

  // Number-operator phases on modes 1 and 2: e^{i theta n_1} e^{-i theta n_2}.
  CMatrix phases = CMatrix::Identity(16, 16);
  for (State s = 0; s < 16; ++s) {
    double angle = 0.0;
    if (occupied(s, 1)) angle += theta;
    if (occupied(s, 2)) angle -= theta;
    phases(s, s) = std::polar(1.0, angle);
  }
  const CMatrix F10 = f_gate(4, 1, 0);
  const CMatrix F01 = f_gate(4, 0, 1);
  const CMatrix F23 = f_gate(4, 2, 3);
  const CMatrix F12 = f_gate(4, 1, 2);
  const CMatrix V = F10 * F23 * F12;
  r.compiled = max_abs(exact - V * phases * V.adjoint());
  // F gates are self-inverse, so V^dag = F12 F23 F10.
  r.compiled = std::max(r.compiled, max_abs(exact - V * phases * F12 * F23 * F10));
  const CMatrix V_literal = F01 * F23 * F12;
  r.literal_order = max_abs(exact - V_literal * phases * V_literal.adjoint());

  for (auto [i, j] : {std::pair{0, 1}, std::pair{2, 3}, std::pair{1, 2}}) {
    const CMatrix F = f_gate(4, i, j);
    r.local_gate = std::max(r.local_gate,
                            (pair_block(F, i, j) - f_gate_local()).cwiseAbs().maxCoeff());
    // Adjacent modes: no Jordan-Wigner string, so F is I (x) F_local (x) I.
    for (State s = 0; s < 16; ++s) {
      for (State q = 0; q < 16; ++q) {
        const State rest = ~((State(1) << i) | (State(1) << j)) & 15u;
        if ((s & rest) != (q & rest)) {
          r.local_gate = std::max(r.local_gate, std::abs(F(s, q)));
        }
      }
    }
  }

  // Central block on two qubits, basis (00, 10, 01, 11) = (empty, a, b, ab).
  Eigen::Matrix4cd P = Eigen::Matrix4cd::Identity();
  P(1, 1) = std::polar(1.0, theta);
  P(2, 2) = std::polar(1.0, -theta);
  const Eigen::Matrix4cd F = f_gate_local();
  const Eigen::Matrix4cd central = F * P * F;
  Eigen::Matrix4cd paulis;
  {
    Eigen::Matrix4cd XX = Eigen::Matrix4cd::Zero();
    Eigen::Matrix4cd YY = Eigen::Matrix4cd::Zero();
    XX(0, 3) = XX(3, 0) = XX(1, 2) = XX(2, 1) = 1.0;
    YY(0, 3) = YY(3, 0) = -1.0;
    YY(1, 2) = YY(2, 1) = 1.0;
    const double a = tau * t;
    const auto rot = [a](const Eigen::Matrix4cd& G) -> Eigen::Matrix4cd {
      // G^2 = I, so exp(i a G) = cos a + i sin a G.
      return std::cos(a) * Eigen::Matrix4cd::Identity() +
             Complex(0.0, std::sin(a)) * G;
    };
    paulis = rot(XX) * rot(YY);
  }
  Eigen::Matrix4cd expected = Eigen::Matrix4cd::Identity();
  expected(1, 1) = expected(2, 2) = std::cos(theta);
  expected(1, 2) = expected(2, 1) = Complex(0.0, std::sin(theta));
  r.central_block = std::max((central - expected).cwiseAbs().maxCoeff(),
                             (central - paulis).cwiseAbs().maxCoeff());

  // Single-particle propagator spectrum.
  Eigen::ComplexEigenSolver<CMatrix> ces(
      expi(eigh(plaquette_mode_coefficients(tau).cast<Complex>()), t));
  std::vector<Complex> got(ces.eigenvalues().data(), ces.eigenvalues().data() + 4);
  std::vector<Complex> want = {std::polar(1.0, theta), std::polar(1.0, -theta),
                               Complex(1.0), Complex(1.0)};
  for (const Complex& w : want) {
    auto it = std::min_element(got.begin(), got.end(), [&](Complex a, Complex b) {
      return std::abs(a - w) < std::abs(b - w);
    });
    r.eigenphases = std::max(r.eigenphases, std::abs(*it - w));
    got.erase(it);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Hamming-weight phasing.

/// Greedy full/half-adder network reducing m weight-1 bits to a binary count.
/// Full adders while three or more bits share a weight, then a half adder.
struct AdderNetwork {
  struct Gate {
    bool full = false;
    int weight_level = 0;
  };
  int m = 0;
  std::vector<Gate> gates;
  int output_bits = 0;
  std::int64_t toffolis() const { return std::int64_t(gates.size()); }
};

inline AdderNetwork build_adder_network(int m) {
  AdderNetwork net;
  net.m = m;
  int count = m;
  int level = 0;
  while (count > 0) {
    int carries = 0;
    while (count > 1) {
      if (count >= 3) {
        net.gates.push_back({true, level});
        count -= 2;
      } else {
        net.gates.push_back({false, level});
        count -= 1;
      }
      ++carries;
    }
    ++level;
    count = carries;
  }
  net.output_bits = level;
  return net;
}

/// Runs the network on input bits, returning the output register value.
inline std::uint64_t evaluate_adder_network(const AdderNetwork& net,
                                            std::uint64_t x) {
  std::vector<std::vector<int>> bits(64);
  for (int k = 0; k < net.m; ++k) bits[0].push_back(int((x >> k) & 1u));
  for (const auto& g : net.gates) {
    auto& lvl = bits[g.weight_level];
    const int take = g.full ? 3 : 2;
    int ones = 0;
    for (int k = 0; k < take; ++k) {
      ones += lvl.back();
      lvl.pop_back();
    }
    lvl.push_back(ones & 1);
    bits[g.weight_level + 1].push_back(ones >> 1);
  }
  std::uint64_t out = 0;
  for (int lvl = 0; lvl < net.output_bits; ++lvl) {
    if (bits[lvl].size() != 1) {
      throw ContractViolation("adder network left unreduced bits");
    }
    out |= std::uint64_t(bits[lvl][0]) << lvl;
  }
  return out;
}

/// Fewest adders reducing c bits of one weight (and all resulting carries)
/// to one bit per weight: min over full-adder count f with 2f + h = c - 1.
inline std::int64_t minimal_adder_toffolis(std::int64_t c) {
  std::vector<std::int64_t> best(std::max<std::int64_t>(c + 1, 2), 0);
  for (std::int64_t k = 2; k <= c; ++k) {
    std::int64_t b = -1;
    for (std::int64_t f = 0; 2 * f <= k - 1; ++f) {
      const std::int64_t h = k - 1 - 2 * f;
      const std::int64_t carries = f + h;
      // carries < k for k >= 2, so best[carries] is known.
      const std::int64_t cost = f + h + best[carries];
      if (b < 0 || cost < b) b = cost;
    }
    best[k] = b;
  }
  return best[c];
}

struct HwpReport {
  double deviation = 0.0;  // after removing one global phase
  bool weights_correct = true;
  std::int64_t register_bits = 0;
  std::int64_t toffolis = 0;
  bool passed(double tol = 1e-12) const { return deviation <= tol && weights_correct; }
};

/// Compares prod_j exp(i theta Z_j) on every m-bit string with rotations
/// exp(i 2^k theta Z_k) on the computed Hamming-weight register.
inline HwpReport verify_hwp_phases(int m, double theta) {
  if (m < 1 || m > 12) throw ContractViolation("verify_hwp_phases needs 1 <= m <= 12");
  HwpReport r;
  const AdderNetwork net = build_adder_network(m);
  r.register_bits = net.output_bits;
  r.toffolis = net.toffolis();
  if (r.register_bits != hwp_config(m).rotations_after) r.weights_correct = false;

  // Global offset between the two circuits: theta (2^K - 1 - m).
  const Complex global =
      std::polar(1.0, theta * (double((std::int64_t(1) << r.register_bits) - 1) - m));
  for (std::uint64_t x = 0; x < (std::uint64_t(1) << m); ++x) {
    double direct = 0.0;
    for (int j = 0; j < m; ++j) direct += ((x >> j) & 1u) ? -theta : theta;
    const std::uint64_t w = evaluate_adder_network(net, x);
    if (w != std::uint64_t(std::popcount(x))) r.weights_correct = false;
    double reg = 0.0;
    for (int k = 0; k < r.register_bits; ++k) {
      const double angle = theta * double(std::int64_t(1) << k);
      reg += ((w >> k) & 1u) ? -angle : angle;
    }
    const Complex lhs = std::polar(1.0, direct) * global;
    const Complex rhs = std::polar(1.0, reg);
    r.deviation = std::max(r.deviation, std::abs(lhs - rhs));
  }
  return r;
}

}  // namespace hubbard::oracle
