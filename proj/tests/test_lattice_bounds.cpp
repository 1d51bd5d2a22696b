#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "hubbard/free_fermion.hpp"
#include "hubbard/lattice.hpp"
#include "hubbard/report.hpp"
#include "hubbard/trotter_bounds.hpp"

using namespace hubbard;

namespace {

// Periodic-lattice spectrum: 2 tau (cos(2 pi a / L) + cos(2 pi b / L)).
double analytic_hopping_norm(int L, double tau) {
  double sum = 0.0;
  for (int a = 0; a < L; ++a) {
    for (int b = 0; b < L; ++b) {
      sum += std::abs(2.0 * tau *
                      (std::cos(2 * std::numbers::pi * a / L) +
                       std::cos(2 * std::numbers::pi * b / L)));
    }
  }
  return sum;
}

// Independent colouring: a horizontal edge leaving (x, y) lies in the
// plaquette anchored at (x, y) when x, y share parity, else at (x, y - 1);
// a vertical edge leaving (x, y) lies at (x, y) or (x - 1, y). The anchor's x
// parity picks the colour.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> coloured_edges(int L) {
  const int n = L * L;
  Eigen::MatrixXd pink = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd gold = Eigen::MatrixXd::Zero(n, n);
  auto id = [L](int x, int y) { return ((y + L) % L) * L + (x + L) % L; };
  for (int y = 0; y < L; ++y) {
    for (int x = 0; x < L; ++x) {
      const bool same = (x % 2) == (y % 2);
      const int hx = x;
      const int vx = same ? x : x - 1;
      Eigen::MatrixXd& h = ((hx + L) % 2 == 0) ? pink : gold;
      h(id(x, y), id(x + 1, y)) = h(id(x + 1, y), id(x, y)) = 1.0;
      Eigen::MatrixXd& v = ((vx + L) % 2 == 0) ? pink : gold;
      v(id(x, y), id(x, y + 1)) = v(id(x, y + 1), id(x, y)) = 1.0;
    }
  }
  return {pink, gold};
}

double svd_trace_norm(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues().sum();
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

// ---------------------------------------------------------------------------
// lattice

TEST(Lattice, SquareLatticeIsFourRegular) {
  for (int L : {4, 5, 6, 7, 8}) {
    const auto R = build_square_lattice({L, 4.0, 0.5, true});
    const auto& m = R.entries();
    EXPECT_EQ(R.dim(), L * L);
    EXPECT_TRUE(m.isApprox(m.transpose()));
    EXPECT_EQ(m.diagonal().cwiseAbs().maxCoeff(), 0.0);
    for (Index i = 0; i < R.dim(); ++i) EXPECT_DOUBLE_EQ(m.row(i).sum(), 2.0);
    EXPECT_EQ(R.edges().size(), std::size_t(2 * L * L));
  }
}

TEST(Lattice, IndexAndSiteRoundTrip) {
  const auto R = build_square_lattice({6, 4.0, 1.0, true});
  for (Index i = 0; i < R.dim(); ++i) EXPECT_EQ(R.index(R.site(i)), i);
  EXPECT_EQ(R.index({-1, 0}), R.index({5, 0}));
  EXPECT_EQ(R.index({0, 6}), R.index({0, 0}));
}

TEST(Lattice, RejectsSmallOrOpenLattices) {
  EXPECT_THROW(build_square_lattice({3, 4.0, 1.0, true}), UnsupportedLattice);
  EXPECT_THROW(build_square_lattice({8, 4.0, 1.0, false}), UnsupportedLattice);
}

TEST(Lattice, CoefficientsAreValidated) {
  Eigen::MatrixXd asym = Eigen::MatrixXd::Zero(3, 3);
  asym(0, 1) = 1.0;
  EXPECT_THROW(HoppingCoefficients{asym}, ContractViolation);
  Eigen::MatrixXd diag = Eigen::MatrixXd::Identity(3, 3);
  EXPECT_THROW(HoppingCoefficients{diag}, ContractViolation);
  EXPECT_THROW(HoppingCoefficients(Eigen::MatrixXd::Zero(4, 4), 3), ContractViolation);
  EXPECT_THROW(graph_hopping(3, {{0, 0}}, 1.0), ContractViolation);
}

TEST(Lattice, PartitionCoversEveryEdgeOnce) {
  for (int L : {4, 6, 8, 10}) {
    const auto R = build_square_lattice({L, 4.0, 1.0, true});
    const auto part = plaquette_partition(R);
    const auto& p = part.pink.entries();
    const auto& g = part.gold.entries();
    EXPECT_TRUE((p + g).isApprox(R.entries())) << "L = " << L;
    EXPECT_EQ(p.cwiseProduct(g).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(part.pink_plaquettes.size(), std::size_t(L * L / 4));
    EXPECT_EQ(part.gold_plaquettes.size(), std::size_t(L * L / 4));
    // Every site sits on exactly one plaquette of each colour.
    for (Index i = 0; i < R.dim(); ++i) {
      EXPECT_DOUBLE_EQ(p.row(i).sum(), 2.0);
      EXPECT_DOUBLE_EQ(g.row(i).sum(), 2.0);
    }
  }
}

TEST(Lattice, PartitionMatchesIndependentColouring) {
  for (int L : {4, 6, 8}) {
    const auto part = plaquette_partition(build_square_lattice({L, 4.0, 1.0, true}));
    const auto [pink, gold] = coloured_edges(L);
    EXPECT_TRUE(part.pink.entries().isApprox(pink)) << "L = " << L;
    EXPECT_TRUE(part.gold.entries().isApprox(gold)) << "L = " << L;
  }
}

TEST(Lattice, PartitionRejectsOddL) {
  EXPECT_THROW(plaquette_partition(build_square_lattice({7, 4.0, 1.0, true})),
               UnsupportedLattice);
  EXPECT_THROW(plaquette_partition(open_grid(2, 2, 1.0)), UnsupportedLattice);
}

TEST(Lattice, StarsSumToTwiceR) {
  for (const auto& R : {build_square_lattice({4, 4.0, 1.0, true}),
                        build_square_lattice({5, 4.0, 0.7, true}), open_grid(3, 2, 1.3)}) {
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(R.dim(), R.dim());
    for (Index i = 0; i < R.dim(); ++i) sum += star_matrix(R, i).entries();
    EXPECT_TRUE(sum.isApprox(2.0 * R.entries()));
  }
  EXPECT_THROW(star_matrix(open_grid(2, 2, 1.0), 4), ContractViolation);
}

// ---------------------------------------------------------------------------
// free_fermion

TEST(FreeFermion, HoppingNormMatchesAnalyticSpectrum) {
  for (int L = 4; L <= 16; ++L) {
    const LatticeSpec spec{L, 4.0, 1.0, true};
    EXPECT_LT(rel(hopping_hamiltonian_norm(build_square_lattice(spec)),
                  analytic_hopping_norm(L, 1.0)),
              1e-10)
        << "L = " << L;
  }
}

TEST(FreeFermion, ReferenceHoppingRow) {
  const std::vector<std::pair<int, double>> reference = {
      {4, 24}, {6, 56}, {8, 100}, {10, 160}, {12, 230}, {14, 320}, {16, 410}};
  for (auto [L, value] : reference) {
    const double norm = hopping_hamiltonian_norm(build_square_lattice({L, 4.0, 1.0, true}));
    EXPECT_EQ(round_sig(norm, 2), value) << "L = " << L;
  }
}

TEST(FreeFermion, NormIsLinearInTau) {
  const double a = hopping_hamiltonian_norm(build_square_lattice({6, 4.0, 1.0, true}));
  const double b = hopping_hamiltonian_norm(build_square_lattice({6, 4.0, 2.5, true}));
  EXPECT_NEAR(b, 2.5 * a, 1e-9 * b);
}

TEST(FreeFermion, OperatorNormEqualsSchattenForBipartiteLattices) {
  for (int L : {4, 6, 8}) {
    const auto s = spectral_summary(build_square_lattice({L, 4.0, 1.0, true}).entries());
    EXPECT_NEAR(s.operator_norm, s.schatten_1, 1e-9 * s.schatten_1);
    EXPECT_NEAR(s.lambda_max, -s.lambda_min, 1e-9 * s.schatten_1);
  }
}

TEST(FreeFermion, TwoSiteChain) {
  const auto s = spectral_summary(graph_hopping(2, {{0, 1}}, 1.0).entries());
  EXPECT_NEAR(s.schatten_1, 2.0, 1e-14);
  EXPECT_NEAR(s.matrix_norm, 1.0, 1e-14);
  EXPECT_NEAR(s.operator_norm, 2.0, 1e-14);
}

TEST(FreeFermion, SparseAndDenseAgree) {
  const auto R = build_square_lattice({6, 4.0, 1.0, true});
  EXPECT_NEAR(schatten_1_norm(R.sparse()), schatten_1_norm(R.entries()), 1e-10);
}

TEST(FreeFermion, RejectsNonHermitianInput) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(schatten_1_norm(m), ContractViolation);
}

TEST(FreeFermion, TraceNormAgreesWithSvdOracle) {
  const auto part = plaquette_partition(build_square_lattice({6, 4.0, 1.0, true}));
  const Eigen::MatrixXd c =
      coefficient_commutator(part.pink.entries(), part.gold.entries());
  EXPECT_NEAR(trace_norm(c), svd_trace_norm(c), 1e-9 * svd_trace_norm(c));
  // Commutator of symmetric matrices is antisymmetric.
  EXPECT_TRUE(c.isApprox(-c.transpose()));
}

TEST(FreeFermion, NestedCommutatorMatchesIndependentOracle) {
  for (int L : {4, 6, 8}) {
    const auto [pink, gold] = coloured_edges(L);
    const Eigen::MatrixXd inner = pink * gold - gold * pink;
    const Eigen::MatrixXd nested = inner * gold - gold * inner;
    const double oracle = svd_trace_norm(nested);
    const double lib = lattice_norms({L, 4.0, 1.0, true}).plaquette_nested;
    EXPECT_NEAR(lib, oracle, 1e-9 * std::max(1.0, oracle)) << "L = " << L;
  }
}

TEST(FreeFermion, NestedCommutatorVanishesAtL4) {
  EXPECT_NEAR(lattice_norms({4, 4.0, 1.0, true}).plaquette_nested, 0.0, 1e-9);
}

TEST(FreeFermion, NestedCommutatorScalesAsTauCubed) {
  const double a = lattice_norms({6, 4.0, 1.0, true}).plaquette_nested;
  const double b = lattice_norms({6, 4.0, 2.0, true}).plaquette_nested;
  EXPECT_NEAR(b, 8.0 * a, 1e-9 * b);
}

// ---------------------------------------------------------------------------
// trotter_bounds

TEST(TrotterBounds, Lemma2GeneralMatchesClosedForm) {
  for (int L : {5, 6, 8}) {
    for (double u : {4.0, 8.0}) {
      const auto R = build_square_lattice({L, u, 1.0, true});
      EXPECT_LT(rel(lemma2_bound_general(u, R), lemma2_bound_square(u, 1.0, L)), 1e-9)
          << "L = " << L;
    }
  }
}

TEST(TrotterBounds, Lemma2GeneralExceedsClosedFormAtL4) {
  // At L = 4 the two paths to a next-nearest site wrap onto the same site,
  // enlarging ||[S_i, R]||_1 beyond the generic 4 sqrt5.
  const double general = lemma2_bound_general(4.0, build_square_lattice({4, 4.0, 1.0, true}));
  const double closed = lemma2_bound_square(4.0, 1.0, 4);
  EXPECT_GT(general, closed * 1.02);
  EXPECT_LT(general, closed * 1.03);
  // Every site is equivalent, so one star fixes the sum.
  const auto R = build_square_lattice({4, 4.0, 1.0, true});
  const Eigen::MatrixXd S = star_matrix(R, 0).entries();
  const double comm = svd_trace_norm(S * R.entries() - R.entries() * S);
  EXPECT_NEAR(general, 2.0 * 16 * (comm + 32.0), 1e-9 * general);
}

TEST(TrotterBounds, StarCommutatorNormOnDegenerateLattice) {
  const auto R = build_square_lattice({8, 4.0, 1.0, true});
  const Eigen::MatrixXd S = star_matrix(R, 9).entries();
  const Eigen::MatrixXd C = S * R.entries() - R.entries() * S;
  EXPECT_NEAR(trace_norm(C), 4.0 * std::sqrt(5.0), 1e-10);
  EXPECT_NEAR(svd_trace_norm(C), 4.0 * std::sqrt(5.0), 1e-10);
}

TEST(TrotterBounds, Lemma2ClosedFormValue) {
  EXPECT_NEAR(lemma2_bound_square(4.0, 1.0, 8), 4.0 * 64 * (2 * std::sqrt(5.0) + 16), 1e-9);
}

TEST(TrotterBounds, SchemeWeights) {
  const LatticeSpec spec{8, 4.0, 1.0, true};
  const auto norms = lattice_norms(spec);
  const double l1 = 16.0 * norms.hopping_norm;
  const double l2 = lemma2_bound_square(4.0, 1.0, 8);
  EXPECT_NEAR(w_so1(spec, norms).W, l1 / 12 + l2 / 24, 1e-9);
  EXPECT_NEAR(w_so2(spec, norms).W, l1 / 24 + l2 / 12, 1e-9);
  EXPECT_NEAR(w_plaq(spec, norms).W,
              l1 / 24 + l2 / 12 + 3.0 / 24.0 * norms.plaquette_nested, 1e-9);
  const auto best = w_so_best(spec, norms);
  EXPECT_EQ(best.W, std::min(w_so1(spec, norms).W, w_so2(spec, norms).W));
}

TEST(TrotterBounds, ContributionsSumToW) {
  const auto b = w_plaq({10, 8.0, 1.0, true});
  EXPECT_DOUBLE_EQ(b.W, b.contributions.lemma1_term + b.contributions.lemma2_term +
                            b.contributions.plaquette_extra);
  EXPECT_DOUBLE_EQ(b.step_error(0.1), b.W * 1e-3);
}

TEST(TrotterBounds, PlaqNeverBelowSo2) {
  for (int L : {4, 6, 8, 10, 12}) {
    const LatticeSpec spec{L, 4.0, 1.0, true};
    const auto norms = lattice_norms(spec);
    EXPECT_GE(w_plaq(spec, norms).W, w_so2(spec, norms).W);
  }
}

TEST(TrotterBounds, InteractionScaling) {
  const auto norms = lattice_norms({6, 1.0, 1.0, true});
  const auto a = w_so1({6, 2.0, 1.0, true}, norms).contributions;
  const auto b = w_so1({6, 4.0, 1.0, true}, norms).contributions;
  EXPECT_NEAR(b.lemma1_term, 4.0 * a.lemma1_term, 1e-9);
  EXPECT_NEAR(b.lemma2_term, 2.0 * a.lemma2_term, 1e-9);
  const auto zero = w_plaq({6, 0.0, 1.0, true}, norms);
  EXPECT_NEAR(zero.W, 3.0 / 24.0 * norms.plaquette_nested, 1e-9);
}

TEST(TrotterBounds, PartitionOverloadMatchesNorms) {
  const LatticeSpec spec{6, 4.0, 1.0, true};
  const auto part = plaquette_partition(build_square_lattice(spec));
  EXPECT_NEAR(w_plaq(spec, part).W, w_plaq(spec, lattice_norms(spec)).W, 1e-9);
}

TEST(TrotterBounds, GeneralPlaqBoundOnLatticeMatchesSquareForm) {
  // On the periodic lattice the two nested commutators have equal norm.
  const LatticeSpec spec{6, 4.0, 1.0, true};
  const auto part = plaquette_partition(build_square_lattice(spec));
  EXPECT_LT(rel(plaq_bound_general(4.0, part.pink, part.gold).W,
                w_plaq(spec, lattice_norms(spec)).W),
            1e-9);
}

TEST(TrotterBounds, GeneralSoBoundRejectsPlaq) {
  EXPECT_THROW(so_bound_general(TrotterScheme::plaq, 4.0, open_grid(2, 2, 1.0)),
               ContractViolation);
}

TEST(TrotterBounds, RejectsInvalidSpecs) {
  EXPECT_THROW(w_plaq({7, 4.0, 1.0, true}), UnsupportedLattice);
  EXPECT_THROW(w_so1({3, 4.0, 1.0, true}), UnsupportedLattice);
  EXPECT_THROW(w_so1({6, -1.0, 1.0, true}, LatticeNorms{}), ContractViolation);
  EXPECT_NO_THROW(w_so2({5, 4.0, 1.0, true}));
}

TEST(TrotterBounds, ReferenceTableOneBounds) {
  const std::vector<std::pair<int, double>> plaq = {
      {4, 130}, {6, 300}, {8, 530}, {12, 1200}, {16, 2100}};
  for (auto [L, W] : plaq) {
    EXPECT_EQ(round_sig(w_plaq({L, 4.0, 1.0, true}).W, 2), W) << "L = " << L;
  }
  const std::vector<std::pair<int, double>> so = {{4, 87}, {8, 350}, {16, 1400}};
  for (auto [L, W] : so) {
    const LatticeSpec spec{L, 4.0, 1.0, true};
    EXPECT_EQ(round_sig(w_so_best(spec, lattice_norms(spec)).W, 2), W) << "L = " << L;
  }
}

TEST(TrotterBounds, SchemeNames) {
  EXPECT_EQ(to_string(TrotterScheme::so1), "SO1");
  EXPECT_EQ(to_string(TrotterScheme::plaq), "PLAQ");
}
