// Lowest eigenpairs of complex Hermitian matrices.
#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace dicke {

using SparseMatrixC = Eigen::SparseMatrix<std::complex<double>>;

struct Eigenpairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXcd vectors;  // columns aligned with values
  int iterations = 0;
  double max_residual = 0.0;
};

struct IterativeOptions {
  /// Convergence when every wanted residual ||Hx - lx|| <= tol * ||H||.
  double tol = 1e-12;
  int max_iterations = 2000;
  int filter_degree = 20;
  /// Extra search directions beyond the requested count.
  int guard_vectors = 10;
  std::uint64_t seed = 0x5eed5eedULL;
};

/// Raised when the iterative solver exhausts its iteration budget.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, int iterations, double residual)
      : std::runtime_error(what), iterations_(iterations), residual_(residual) {}
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

Eigenpairs lowest_eigenpairs_dense(const Eigen::MatrixXcd& h, int count);

/// Chebyshev-filtered subspace iteration with Rayleigh-Ritz projection.
/// Insensitive to (quasi-)degeneracies inside the wanted cluster; the rate
/// is set by the gap between the wanted states and the guard block.
Eigenpairs lowest_eigenpairs_iterative(const SparseMatrixC& h, int count,
                                       const IterativeOptions& opts = {});

/// Multiplies each column by a phase so that its largest-magnitude entry is
/// real and positive.
void fix_column_phases(Eigen::MatrixXcd& vectors);

/// Upper bound on the spectral radius from absolute column sums.
double gershgorin_bound(const SparseMatrixC& h);

}  // namespace dicke
