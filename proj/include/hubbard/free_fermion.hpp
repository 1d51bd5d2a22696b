#pragma once

// Free-fermion linear algebra. A quadratic operator H_Q = sum Q_ij a^dag_i a_j
// is handled entirely through its coefficient matrix Q: [H_Q, H_P] is the
// free operator with coefficients [Q, P], and for traceless Q the operator
// norm of the two-spin operator equals the Schatten 1-norm of Q.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <complex>
#include <type_traits>
#include <vector>

#include "hubbard/errors.hpp"
#include "hubbard/lattice.hpp"

namespace hubbard {

/// Eigenvalues with magnitude below this fraction of the infinity norm are
/// treated as exact zero modes when splitting positive and negative fills.
inline constexpr double kZeroModeTolerance = 1e-10;

struct SpectralSummary {
  std::vector<double> eigenvalues;  // ascending
  double lambda_min = 0.0;          // sum of negative modes
  double lambda_max = 0.0;          // sum of positive modes
  double schatten_1 = 0.0;
  double matrix_norm = 0.0;    // largest |eigenvalue|
  double operator_norm = 0.0;  // many-body norm of the two-spin operator
};

namespace detail {

template <typename Derived>
auto to_dense(const Eigen::MatrixBase<Derived>& m) {
  return m.eval();
}

template <typename Derived>
auto to_dense(const Eigen::SparseMatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  return Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>(m.derived());
}

template <typename Matrix>
void require_hermitian(const Matrix& m, double rel_tol) {
  if (m.rows() != m.cols()) {
    throw ContractViolation("expected a square matrix");
  }
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double err = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (err > rel_tol * scale) {
    throw ContractViolation("expected a Hermitian matrix");
  }
}

template <typename Matrix>
Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ContractViolation("eigensolver failed to converge");
  }
  return solver.eigenvalues();
}

}  // namespace detail

template <typename Derived>
SpectralSummary spectral_summary(const Eigen::MatrixBase<Derived>& m_in) {
  const auto m = m_in.eval();
  detail::require_hermitian(m, 1e-10);
  const Eigen::VectorXd ev = detail::hermitian_eigenvalues(m);
  const double cut =
      kZeroModeTolerance *
      std::max(1.0, m.cwiseAbs().rowwise().sum().maxCoeff());

  SpectralSummary s;
  s.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  for (double d : s.eigenvalues) {
    if (d < -cut) s.lambda_min += d;
    if (d > cut) s.lambda_max += d;
    s.schatten_1 += std::abs(d);
    s.matrix_norm = std::max(s.matrix_norm, std::abs(d));
  }
  // Two identical spin sectors: extremal energies fill every mode of one sign
  // in both sectors.
  s.operator_norm = 2.0 * std::max(-s.lambda_min, s.lambda_max);
  return s;
}

/// Sum of |eigenvalues| of a Hermitian matrix (dense or sparse).
template <typename Derived>
double schatten_1_norm(const Eigen::MatrixBase<Derived>& m_in) {
  const auto m = m_in.eval();
  detail::require_hermitian(m, 1e-10);
  return detail::hermitian_eigenvalues(m).cwiseAbs().sum();
}

template <typename Derived>
double schatten_1_norm(const Eigen::SparseMatrixBase<Derived>& m) {
  return schatten_1_norm(detail::to_dense(m));
}

/// Trace norm of a square matrix. Commutators of two Hermitian matrices are
/// anti-Hermitian, so i*m is Hermitian and its eigenvalues give the singular
/// values exactly; divide-and-conquer SVD loses accuracy on the degenerate
/// spectra of lattice commutators. Other inputs fall back to Jacobi SVD.
template <typename Derived>
double trace_norm(const Eigen::MatrixBase<Derived>& m_in) {
  const auto m = m_in.eval();
  if (m.rows() != m.cols()) throw ContractViolation("trace_norm needs a square matrix");
  using Complex = std::complex<double>;
  using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  const CMatrix c = m.template cast<Complex>();
  const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
  if ((c - c.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale) {
    return detail::hermitian_eigenvalues(CMatrix(c)).cwiseAbs().sum();
  }
  if ((c + c.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale) {
    return detail::hermitian_eigenvalues(CMatrix(Complex(0.0, 1.0) * c)).cwiseAbs().sum();
  }
  Eigen::JacobiSVD<CMatrix> svd(c);
  return svd.singularValues().sum();
}

template <typename Derived>
double trace_norm(const Eigen::SparseMatrixBase<Derived>& m) {
  return trace_norm(detail::to_dense(m));
}

/// Operator norm of the two-spin hopping Hamiltonian built from R.
inline double hopping_hamiltonian_norm(const HoppingCoefficients& R) {
  if (R.entries().diagonal().cwiseAbs().maxCoeff() != 0.0) {
    throw ContractViolation("hopping norm requires a zero diagonal");
  }
  return schatten_1_norm(R.entries());
}

/// QP - PQ; works for dense and sparse operands of matching type.
template <typename MatrixQ, typename MatrixP>
auto coefficient_commutator(const MatrixQ& Q, const MatrixP& P) {
  if (Q.rows() != P.rows() || Q.cols() != P.cols() || Q.rows() != Q.cols()) {
    throw ContractViolation("coefficient_commutator: dimension mismatch");
  }
  using Result = std::decay_t<decltype((Q * P).eval())>;
  Result out = Q * P;
  out -= Result(P * Q);
  return out;
}

/// || [[A, B], C] ||_1. For Hermitian A, B, C the result is Hermitian.
template <typename MatrixA, typename MatrixB, typename MatrixC>
double nested_commutator_1norm(const MatrixA& A, const MatrixB& B,
                               const MatrixC& C) {
  const auto inner = coefficient_commutator(A, B);
  return schatten_1_norm(coefficient_commutator(inner, C));
}

}  // namespace hubbard
