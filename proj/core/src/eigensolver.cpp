#include "dicke/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace dicke {

namespace {

using cd = std::complex<double>;

Eigen::MatrixXcd orthonormalize(const Eigen::MatrixXcd& x) {
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(x);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(x.rows(), x.cols());
}

// Scaled Chebyshev filter damping [lower, upper] and amplifying everything
// below lower; `lowest` estimates the bottom of the spectrum.
Eigen::MatrixXcd chebyshev_filter(const SparseMatrixC& h, const Eigen::MatrixXcd& x,
                                  int degree, double lower, double upper, double lowest) {
  const double e = 0.5 * (upper - lower);
  const double c = 0.5 * (upper + lower);
  double sigma = e / (lowest - c);
  const double tau = 2.0 / sigma;

  Eigen::MatrixXcd prev = x;
  Eigen::MatrixXcd cur = (h * x - c * x) * (sigma / e);
  for (int i = 2; i <= degree; ++i) {
    const double sigma_next = 1.0 / (tau - sigma);
    Eigen::MatrixXcd next = (h * cur - c * cur) * (2.0 * sigma_next / e) - (sigma * sigma_next) * prev;
    prev = std::move(cur);
    cur = std::move(next);
    sigma = sigma_next;
  }
  return cur;
}

}  // namespace

void fix_column_phases(Eigen::MatrixXcd& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    Eigen::Index arg = 0;
    vectors.col(j).cwiseAbs().maxCoeff(&arg);
    const cd pivot = vectors(arg, j);
    if (std::abs(pivot) > 0.0) vectors.col(j) *= std::conj(pivot) / std::abs(pivot);
  }
}

double gershgorin_bound(const SparseMatrixC& h) {
  double bound = 0.0;
  for (Eigen::Index k = 0; k < h.outerSize(); ++k) {
    double sum = 0.0;
    for (SparseMatrixC::InnerIterator it(h, k); it; ++it) sum += std::abs(it.value());
    bound = std::max(bound, sum);
  }
  return bound;
}

Eigenpairs lowest_eigenpairs_dense(const Eigen::MatrixXcd& h, int count) {
  const auto n = static_cast<int>(h.rows());
  count = std::clamp(count, 0, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success)
    throw ConvergenceError("dense Hermitian eigensolver did not converge", 0, NAN);
  Eigenpairs out;
  out.values = solver.eigenvalues().head(count);
  out.vectors = solver.eigenvectors().leftCols(count);
  fix_column_phases(out.vectors);
  return out;
}

Eigenpairs lowest_eigenpairs_iterative(const SparseMatrixC& h, int count,
                                       const IterativeOptions& opts) {
  const auto n = static_cast<int>(h.rows());
  count = std::clamp(count, 0, n);
  const int block = std::min(n, count + std::max(opts.guard_vectors, count / 2));
  if (count == 0) return {Eigen::VectorXd(0), Eigen::MatrixXcd(n, 0), 0, 0.0};
  if (block >= n) {
    // Nothing to filter against; the full space is the search space.
    return lowest_eigenpairs_dense(Eigen::MatrixXcd(h), count);
  }

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd x(n, block);
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, j) = cd(normal(rng), normal(rng));
  x = orthonormalize(x);

  const double upper = gershgorin_bound(h);
  const double scale = std::max(upper, 1e-300);

  auto rayleigh_ritz = [&](const Eigen::MatrixXcd& basis, Eigen::VectorXd& theta,
                           Eigen::MatrixXcd& ritz, Eigen::MatrixXcd& h_ritz) {
    Eigen::MatrixXcd hb = h * basis;
    Eigen::MatrixXcd small = basis.adjoint() * hb;
    small = 0.5 * (small + small.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(small);
    theta = es.eigenvalues();
    ritz = basis * es.eigenvectors();
    h_ritz = hb * es.eigenvectors();
  };

  Eigen::VectorXd theta;
  Eigen::MatrixXcd ritz, h_ritz;
  rayleigh_ritz(x, theta, ritz, h_ritz);

  double worst = INFINITY;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    worst = 0.0;
    for (int j = 0; j < count; ++j)
      worst = std::max(worst, (h_ritz.col(j) - theta(j) * ritz.col(j)).norm());
    if (worst <= opts.tol * scale) break;

    double lower = theta(block - 1);
    const double lowest = theta(0);
    if (!(lower < upper)) lower = 0.5 * (lowest + upper);
    if (lower <= lowest) lower = lowest + 1e-12 * scale;
    x = orthonormalize(chebyshev_filter(h, ritz, opts.filter_degree, lower, upper, lowest));
    rayleigh_ritz(x, theta, ritz, h_ritz);
  }
  if (it == opts.max_iterations) {
    std::ostringstream msg;
    msg << "iterative eigensolver: no convergence after " << it << " iterations (dim " << n
        << ", wanted " << count << ", worst residual " << worst << ", target "
        << opts.tol * scale << ")";
    throw ConvergenceError(msg.str(), it, worst);
  }

  Eigenpairs out;
  out.values = theta.head(count);
  out.vectors = ritz.leftCols(count);
  out.iterations = it;
  out.max_residual = worst;
  fix_column_phases(out.vectors);
  return out;
}

}  // namespace dicke
