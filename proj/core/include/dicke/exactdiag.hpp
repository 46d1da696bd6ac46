// Finite-size exact diagonalization in the maximum-spin sector
// (j_k = N_k / 2) times a truncated Fock space.
//
// Basis states |m_C, m_I, n> are stored by excitation counts
// e_k = m_k + N_k / 2 in 0..N_k; the photon number n runs fastest, then
// m_I, then m_C.
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dicke/eigensolver.hpp"
#include "dicke/model.hpp"

namespace dicke {

struct BasisSpec {
  int N_C = 1;
  int N_I = 1;
  int n_max = 0;

  std::size_t dim() const {
    return static_cast<std::size_t>(N_C + 1) * static_cast<std::size_t>(N_I + 1) *
           static_cast<std::size_t>(n_max + 1);
  }
  std::size_t index(int e_C, int e_I, int n) const {
    return (static_cast<std::size_t>(e_C) * (N_I + 1) + e_I) * (n_max + 1) + n;
  }

  struct State {
    int e_C;
    int e_I;
    int n;
    double m_C(int N) const { return e_C - 0.5 * N; }
    double m_I(int N) const { return e_I - 0.5 * N; }
  };
  State state(std::size_t idx) const {
    const int n = static_cast<int>(idx % (n_max + 1));
    idx /= (n_max + 1);
    return {static_cast<int>(idx / (N_I + 1)), static_cast<int>(idx % (N_I + 1)), n};
  }

  static BasisSpec for_params(const ModelParams& p, int n_max) { return {p.N_C, p.N_I, n_max}; }

  bool operator==(const BasisSpec&) const = default;
};

/// Refusal to build a Hamiltonian beyond the configured dimension.
class DimensionError : public std::runtime_error {
 public:
  DimensionError(const std::string& what, std::size_t dim, std::size_t bytes)
      : std::runtime_error(what), dim_(dim), bytes_(bytes) {}
  std::size_t dim() const { return dim_; }
  std::size_t required_bytes() const { return bytes_; }

 private:
  std::size_t dim_;
  std::size_t bytes_;
};

struct Hamiltonian {
  BasisSpec basis;
  SparseMatrixC matrix;

  double max_abs() const;
};

struct BuildOptions {
  std::size_t max_dim = 2'000'000;
};

/// Rough memory needed to store and diagonalize a Hamiltonian of this size.
std::size_t estimated_bytes(const BasisSpec& basis);

Hamiltonian build_hamiltonian(const ModelParams& p, const BasisSpec& basis,
                              const BuildOptions& opts = {});

enum class SolverPath { Automatic, Dense, Iterative };

struct DiagonalizeOptions {
  SolverPath path = SolverPath::Automatic;
  /// Automatic uses the dense solver up to this dimension.
  std::size_t dense_threshold = 1500;
  IterativeOptions iterative;
};

struct FiniteSizeSpectrum {
  BasisSpec basis;
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXcd eigenvectors;  // dim x n_computed
  int n_computed = 0;
  bool cutoff_converged = false;
  /// Largest eigenvalue shift observed when the cutoff was doubled.
  double cutoff_residual = 0.0;
  SolverPath path = SolverPath::Dense;
  int iterations = 0;
};

FiniteSizeSpectrum diagonalize(const Hamiltonian& h, int n_low,
                               const DiagonalizeOptions& opts = {});

/// Diagonalizes the even and odd parity blocks separately and merges the
/// results; eigenvectors are mapped back to the full basis.
FiniteSizeSpectrum diagonalize_by_parity(const Hamiltonian& h, int n_low,
                                         const DiagonalizeOptions& opts = {});

/// Diagonal of Pi = exp(i pi (a^+a + J_z^C + N_C/2 + J_z^I + N_I/2)).
Eigen::VectorXd parity_operator(const BasisSpec& basis);

/// Diagonal of U_I = exp(i pi (J_z^I + N_I/2)).  T_I acts as U_I K with K
/// entrywise complex conjugation; T_C = Pi T_I.
Eigen::VectorXd chain_I_rotation(const BasisSpec& basis);

Eigen::VectorXcd apply_parity(const Eigen::VectorXcd& v, const BasisSpec& basis);
Eigen::VectorXcd apply_T_I(const Eigen::VectorXcd& v, const BasisSpec& basis);
Eigen::VectorXcd apply_T_C(const Eigen::VectorXcd& v, const BasisSpec& basis);

struct SymmetryReport {
  double parity_commutator_norm = 0.0;
  double TI_defect_norm = 0.0;
  double TC_defect_norm = 0.0;
  /// max |H_ij|, the reference scale for the norms above.
  double hamiltonian_norm = 0.0;
  std::size_t even_dim = 0;
  std::size_t odd_dim = 0;
};

SymmetryReport check_symmetries(const ModelParams& p, const BasisSpec& basis);
SymmetryReport check_symmetries(const Hamiltonian& h);

struct GroundManifold {
  BasisSpec basis;
  int size = 0;
  std::vector<double> energies;
  Eigen::MatrixXcd vectors;  // dim x size
  /// Spread of the group and the gap to the next level.
  double spread = 0.0;
  double gap = 0.0;
  /// 1 / 2 / 2 / 4 from the mean-field phase classification.
  int expected_size = 1;
  bool ambiguous = false;
  /// Competing grouping when ambiguous, else equal to size.
  int alternative_size = 0;
};

/// Largest leading group of levels whose internal spread is below
/// gap / gap_factor.  Requires at least six computed states.
GroundManifold ground_manifold(const FiniteSizeSpectrum& spectrum, const ModelParams& p,
                               double gap_factor = 10.0);

struct OrderParameters {
  /// Eigenvalues of <G_i|a|G_j>, sorted by real then imaginary part.
  std::vector<std::complex<double>> coherences;
  /// Eigenvalues of <G_i|J_x^k|G_j>, ascending.
  std::vector<double> jx_C;
  std::vector<double> jx_I;
};

OrderParameters order_parameters(const GroundManifold& manifold);

Eigen::VectorXcd apply_annihilation(const Eigen::VectorXcd& v, const BasisSpec& basis);
Eigen::VectorXcd apply_jx_C(const Eigen::VectorXcd& v, const BasisSpec& basis);
Eigen::VectorXcd apply_jx_I(const Eigen::VectorXcd& v, const BasisSpec& basis);

struct Splittings {
  /// E_i - E_0 for i = 1, 2, 3, ascending.
  std::array<double, 3> values{};
  bool ambiguous = false;
  int manifold_size = 0;
};

/// Splittings of the four lowest levels; requires a doubly superradiant point.
Splittings ground_splittings(const ModelParams& p, const BasisSpec& basis,
                             const DiagonalizeOptions& opts = {});

/// Cutoff too small to hold a coherent amplitude.
class CutoffError : public std::runtime_error {
 public:
  CutoffError(const std::string& what, int required) : std::runtime_error(what), required_(required) {}
  int required_n_max() const { return required_; }

 private:
  int required_;
};

struct VacuaOptions {
  /// Deep-coupling precondition N_k <= ratio * (Omega_k / w_cav)^2.
  double ratio = 0.5;
};

/// Product states |alpha> (x) |eps_C N_C/2>_x (x) |eps_I N_I/2>_x with
/// alpha = -eps_C (Omega_C/w_cav) sqrt(N_C) + i eps_I (Omega_I/w_cav) sqrt(N_I),
/// in the order (++, +-, -+, --).  The coherent state is truncated at n_max
/// and renormalized.
std::array<Eigen::VectorXcd, 4> asymptotic_vacua(const ModelParams& p, const BasisSpec& basis,
                                                 const VacuaOptions& opts = {});

/// Coherent amplitude used by asymptotic_vacua for the given branch.
std::complex<double> asymptotic_coherence(const ModelParams& p, int eps_C, int eps_I);

/// Smallest cutoff that holds a coherent amplitude: |alpha|^2 + 6|alpha|.
int required_cutoff(std::complex<double> alpha);

struct CutoffResult {
  BasisSpec basis;
  FiniteSizeSpectrum spectrum;
};

/// Doubles n_max from a mean-field estimate until the lowest n_low
/// eigenvalues each move by less than tol; returns the larger cutoff of the
/// final pair with cutoff_converged set.
CutoffResult cutoff_convergence(const ModelParams& p, double tol, int n_low,
                                const DiagonalizeOptions& opts = {},
                                const BuildOptions& build = {});

/// First cutoff tried by cutoff_convergence.
int initial_cutoff(const ModelParams& p);

}  // namespace dicke
