// Quadratic fluctuation Hamiltonian around the mean-field vacuum and its
// excitation branches.  Mode order is fixed: 0 = cavity c, 1 = chain C,
// 2 = chain I.
#pragma once

#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "dicke/model.hpp"

namespace dicke {

struct EffectiveParams {
  double omega_tilde_C = 0.0;
  double omega_tilde_I = 0.0;
  double Omega_tilde_C = 0.0;
  double Omega_tilde_I = 0.0;
  double D_C = 0.0;
  double D_I = 0.0;
};

/// Renormalized frequencies, couplings and squeezing terms; reduces to the
/// bare (w0_C, w0_I, Omega_C, Omega_I, 0, 0) in the normal phase.
EffectiveParams effective_parameters(const ModelParams& p);

using Matrix3c = Eigen::Matrix<std::complex<double>, 3, 3>;
using Matrix6c = Eigen::Matrix<std::complex<double>, 6, 6>;

struct BogoliubovMatrix {
  Matrix3c P;  // Hermitian
  Matrix3c Q;  // symmetric
  Matrix6c M;  // [[P, Q], [-Q^+, -P^T]]
};

BogoliubovMatrix build_bogoliubov_matrix(const ModelParams& p);

struct SpectrumOptions {
  /// +/- pairing and reality tolerance, in units of w_cav.
  double pair_tol = 1e-9;
  /// Eigenvalues below this (units of w_cav) are snapped to exactly zero.
  /// A defective zero eigenvalue (critical line) is only resolved to about
  /// sqrt(eps * |M|) ~ 2e-8 by any backward-stable eigensolver.
  double zero_tol = 1e-7;
};

struct ExcitationSpectrum {
  double omega_l = 0.0;
  double omega_m = 0.0;
  double omega_u = 0.0;
  bool stable = false;
  /// At least one branch was snapped to zero (critical line).
  bool marginal = false;
  /// Worst |w+ + w-| over the three eigenvalue pairs.
  double residual = 0.0;
  /// Smallest |eigenvalue| of M before snapping.
  double min_abs_eigenvalue = 0.0;
};

/// Diagonalizes M with a general complex eigensolver and pairs the six
/// eigenvalues as {+w, -w}.  Throws std::runtime_error naming the parameters
/// if the eigensolver does not converge.
ExcitationSpectrum excitation_spectrum(const ModelParams& p,
                                       const SpectrumOptions& opts = {});

struct SurfaceRow {
  double Omega_C = 0.0;
  double Omega_I = 0.0;
  ExcitationSpectrum spectrum;
  /// Empty on success.
  std::string error;
};

using CouplingPoint = std::pair<double, double>;

/// One row per grid point, in input order.  Failures are recorded in the
/// row's error field; the sweep itself never throws for per-point errors.
std::vector<SurfaceRow> spectrum_surface(std::span<const CouplingPoint> grid,
                                         const ModelParams& p0,
                                         unsigned threads = 1,
                                         const SpectrumOptions& opts = {});

/// Ray through the (Omega_C, Omega_I) plane at polar angle theta.
struct RaySpec {
  double theta = 0.0;
  double r_max = 1.0;
  int n_points = 101;
};

struct RayRow {
  double r = 0.0;
  SurfaceRow row;
};

/// Uniform samples r = r_max * i / (n_points - 1) plus the exact radii where
/// the ray meets each critical line (those samples carry the critical
/// coupling exactly).  Sorted by r; r_max <= 0 yields no rows.
std::vector<RayRow> ray_cut(const RaySpec& ray, const ModelParams& p0,
                            unsigned threads = 1, const SpectrumOptions& opts = {});

/// Number of maximal runs of consecutive rows whose lower branch was snapped
/// to zero.
int count_lower_branch_zeros(std::span<const RayRow> rows);

}  // namespace dicke
