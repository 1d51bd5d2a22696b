#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <numeric>
#include <vector>

#include "hubbard/exact_oracle.hpp"
#include "hubbard/oracle_suite.hpp"

using namespace hubbard;
using namespace hubbard::oracle;

namespace {

// Dense a^dag_p a_q on the full Fock space, assembled from creation matrices.
CMatrix dense_hop(int n_modes, int p, int q) {
  return creation(n_modes, p) * creation(n_modes, q).adjoint();
}

CMatrix restrict_to(const CMatrix& full, const Sector& sec) {
  CMatrix out(sec.size(), sec.size());
  for (Index r = 0; r < sec.size(); ++r) {
    for (Index c = 0; c < sec.size(); ++c) out(r, c) = full(sec.states[r], sec.states[c]);
  }
  return out;
}

}  // namespace

TEST(ExactOracle, InstanceSizes) {
  EXPECT_EQ(two_site_chain(4, 1).n_qubits(), 4);
  EXPECT_EQ(grid_2x2(4, 1).n_qubits(), 8);
  EXPECT_EQ(grid_2x3(4, 1).n_qubits(), 12);
  EXPECT_EQ(grid_2x3(4, 1).dim(), 4096);
  EXPECT_THROW(SmallHubbardInstance(open_grid(4, 2, 1.0), 4.0, "too big"),
               ContractViolation);
}

TEST(ExactOracle, SectorsPartitionFockSpace) {
  for (int n : {2, 4, 6}) {
    const auto secs = particle_sectors(n);
    EXPECT_EQ(secs.size(), std::size_t((n + 1) * (n + 1)));
    Index total = 0, largest = 0;
    for (const auto& s : secs) {
      total += s.size();
      largest = std::max(largest, s.size());
      EXPECT_TRUE(std::is_sorted(s.states.begin(), s.states.end()));
    }
    EXPECT_EQ(total, Index(1) << (2 * n));
    if (n == 6) EXPECT_EQ(largest, 400);
  }
}

TEST(ExactOracle, CreationOperatorsAnticommute) {
  const int n = 4;
  const CMatrix id = CMatrix::Identity(16, 16);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      const CMatrix ap = creation(n, p), aq = creation(n, q);
      EXPECT_LT(max_abs(ap * aq + aq * ap), 1e-14);
      const CMatrix mixed = ap * aq.adjoint() + aq.adjoint() * ap;
      EXPECT_LT(max_abs(mixed - (p == q ? id : CMatrix::Zero(16, 16))), 1e-14);
    }
  }
}

TEST(ExactOracle, SectorHopsMatchDenseJordanWigner) {
  const int n_modes = 6;
  for (const auto& sec : particle_sectors(3)) {
    for (int p = 0; p < n_modes; ++p) {
      for (int q = 0; q < n_modes; ++q) {
        if ((p % 2) != (q % 2)) continue;  // spin conserving
        CMatrix C = CMatrix::Zero(n_modes, n_modes);
        C(p, q) = 1.0;
        const CMatrix lib = mode_quadratic(sec, C);
        const CMatrix ref = restrict_to(dense_hop(n_modes, p, q), sec);
        EXPECT_LT(max_abs(lib - ref), 1e-14) << p << " " << q;
      }
    }
  }
}

TEST(ExactOracle, InteractionTermsAreOnSiteZZ) {
  const auto terms = interaction_pauli_terms(grid_2x2(6.0, 1.0));
  ASSERT_EQ(terms.size(), 4u);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(terms[i].qubit_a, 2 * i);
    EXPECT_EQ(terms[i].qubit_b, 2 * i + 1);
    EXPECT_DOUBLE_EQ(terms[i].weight, 1.5);
  }
}

TEST(ExactOracle, OperatorNormHandlesAllShapes) {
  CMatrix h(2, 2);
  h << 1, Complex(0, 2), Complex(0, -2), -1;
  EXPECT_NEAR(operator_norm(h), std::sqrt(5.0), 1e-14);
  const CMatrix ah = Complex(0, 1) * h;
  EXPECT_NEAR(operator_norm(ah), std::sqrt(5.0), 1e-14);
  CMatrix g(2, 2);
  g << 0, 3, 0, 0;
  EXPECT_NEAR(operator_norm(g), 3.0, 1e-14);
}

TEST(ExactOracle, ExponentialIsUnitary) {
  const auto inst = grid_2x2(4.0, 1.0);
  const auto secs = particle_sectors(4);
  const CMatrix H = site_quadratic(secs[7], inst.hopping().entries());
  const CMatrix U = expi(eigh(H), 0.37);
  EXPECT_LT(unitarity_deviation(U), 1e-12);
  EXPECT_LT(max_abs(U * expi(eigh(H), -0.37) - CMatrix::Identity(U.rows(), U.cols())),
            1e-12);
}

class PerInstance : public ::testing::TestWithParam<int> {
 protected:
  SmallHubbardInstance instance() const {
    switch (GetParam()) {
      case 0: return two_site_chain(4.0, 1.0);
      case 1: return grid_2x2(4.0, 1.0);
      default: return grid_2x3(8.0, 0.5);
    }
  }
};

TEST_P(PerInstance, FreeFermionNorm) {
  const auto r = verify_free_fermion(instance());
  EXPECT_TRUE(r.passed());
  EXPECT_NEAR(r.exact_norm, hopping_hamiltonian_norm(instance().hopping()), 1e-10);
}

TEST_P(PerInstance, Lemma1Identity) {
  const auto r = verify_lemma1_identity(instance());
  EXPECT_LE(r.deviation, r.tolerance);
  EXPECT_LE(r.exact_norm, r.bound * (1 + kBoundSlack));
}

TEST_P(PerInstance, Lemma1MutationIsDetected) {
  const auto r = verify_lemma1_identity(instance(), 0);
  EXPECT_GT(r.deviation, 1e3 * r.tolerance);
}

TEST_P(PerInstance, Anticommutation) {
  EXPECT_TRUE(verify_anticommutation(instance()).passed());
}

TEST_P(PerInstance, Lemma2Steps) {
  const auto r = verify_lemma2_steps(instance());
  EXPECT_TRUE(r.passed());
  EXPECT_LE(r.exact_norm, r.bound * (1 + kBoundSlack));
}

TEST_P(PerInstance, ChemicalShiftIsGlobalPhase) {
  EXPECT_LT(verify_chemical_shift(instance(), 0.9), 1e-10);
}

INSTANTIATE_TEST_SUITE_P(Instances, PerInstance, ::testing::Values(0, 1, 2));

TEST(ExactOracle, TrotterErrorDominatedOnRing) {
  const auto inst = grid_2x2(4.0, 1.0);
  for (auto scheme : {SplitScheme::so1, SplitScheme::so2}) {
    const auto r = exact_trotter_error(inst, scheme, default_trotter_times());
    EXPECT_TRUE(r.dominated());
    EXPECT_GT(r.fitted_exponent, kExponentLow);
    EXPECT_LT(r.fitted_exponent, kExponentHigh);
    EXPECT_LT(r.unitarity, kUnitaryTolerance);
  }
}

TEST(ExactOracle, PlaquetteSplitIsTheRing) {
  const auto [pink, gold] = toy_plaquette_split(1.0);
  const auto ring = toy_plaquette_ring(4.0, 1.0);
  EXPECT_TRUE((pink.entries() + gold.entries()).isApprox(ring.hopping().entries()));
  const auto r = exact_trotter_error(ring, SplitScheme::plaq, {0.1, 0.05});
  EXPECT_TRUE(r.dominated());
  EXPECT_THROW(exact_trotter_error(grid_2x3(4, 1), SplitScheme::plaq, {0.1}),
               ContractViolation);
}

TEST(ExactOracle, FitExponentOnSyntheticData) {
  std::vector<TrotterSample> s;
  for (double t : {0.4, 0.2, 0.1}) s.push_back({t, 7.0 * t * t * t, 0.0});
  EXPECT_NEAR(fit_exponent(s), 3.0, 1e-12);
}

TEST(ExactOracle, FGateMatchesLocalMatrix) {
  const CMatrix F = f_gate(2, 0, 1);
  EXPECT_LT(max_abs(F - CMatrix(f_gate_local())), 1e-14);
  EXPECT_LT(unitarity_deviation(f_gate(4, 1, 2)), 1e-14);
}

TEST(ExactOracle, PlaquetteCircuit) {
  for (double t : {0.0, 0.4, 2.0}) {
    const auto r = verify_plaquette_circuit(1.0, t);
    EXPECT_LT(r.compiled, 1e-10) << "t = " << t;
    EXPECT_LT(r.central_block, 1e-10);
    EXPECT_LT(r.local_gate, 1e-10);
    EXPECT_LT(r.eigenphases, 1e-10);
  }
  // The gate order without the reversed first gate does not diagonalise the
  // plaquette.
  EXPECT_GT(verify_plaquette_circuit(1.0, 0.4).literal_order, 1e-2);
}

TEST(ExactOracle, AdderNetworkComputesHammingWeight) {
  for (int m = 1; m <= 10; ++m) {
    const auto net = build_adder_network(m);
    EXPECT_EQ(net.toffolis(), m - std::popcount(unsigned(m)));
    EXPECT_EQ(net.output_bits, std::bit_width(unsigned(m)));
    for (std::uint64_t x = 0; x < (std::uint64_t(1) << m); ++x) {
      ASSERT_EQ(evaluate_adder_network(net, x), std::uint64_t(std::popcount(x)));
    }
  }
}

TEST(ExactOracle, MinimalAdderCount) {
  for (int m = 1; m <= 64; ++m) {
    EXPECT_EQ(minimal_adder_toffolis(m), m - std::popcount(unsigned(m))) << m;
  }
}

TEST(ExactOracle, HwpPhases) {
  for (int m = 1; m <= 12; ++m) EXPECT_TRUE(verify_hwp_phases(m, 0.3).passed(1e-12)) << m;
  EXPECT_THROW(verify_hwp_phases(13, 0.3), ContractViolation);
}

TEST(OracleSuite, NamesAreStableAndFilterWorks) {
  const auto names = suite_check_names();
  const std::vector<std::string> want = {
      "free_fermion", "lemma1",      "anticommutation", "lemma2",
      "chemical_shift", "trotter_so1", "trotter_so2", "trotter_plaq",
      "plaquette_circuit", "hwp_phases", "adder_tree"};
  EXPECT_EQ(names, want);
  SuiteOptions opt;
  opt.only = {"adder_tree", "hwp_phases"};
  const auto results = run_oracle_suite(opt);
  EXPECT_EQ(results.size(), 28u);
  EXPECT_EQ(results.front().name, "hwp_phases");
  for (const auto& r : results) EXPECT_TRUE(r.passed) << r.name << " " << r.instance;
}

TEST(OracleSuite, MutationFailsLemma1Only) {
  SuiteOptions opt;
  opt.flip_site = 0;
  opt.only = {"lemma1"};
  const auto results = run_oracle_suite(opt);
  bool identity_failed = false;
  for (const auto& r : results) {
    if (r.name == "lemma1_identity" && !r.passed) identity_failed = true;
  }
  EXPECT_TRUE(identity_failed);
}
