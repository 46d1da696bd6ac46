#include "dicke/bogoliubov.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include "parallel.hpp"

namespace dicke {

namespace {

using cd = std::complex<double>;

struct ChainEffective {
  double omega_tilde;
  double coupling;
  double squeeze;
};

ChainEffective chain_effective(double omega0, double coupling, double mu) {
  // mu == 1 reproduces the bare values exactly.
  return {omega0 * (1.0 + mu) / (2.0 * mu),
          std::numbers::sqrt2 * coupling * mu / std::sqrt(1.0 + mu),
          omega0 * (3.0 + mu) * (1.0 - mu) / (8.0 * mu * (1.0 + mu))};
}

std::string describe(const ModelParams& p) {
  return nlohmann::json(p).dump();
}

}  // namespace

EffectiveParams effective_parameters(const ModelParams& p) {
  const auto mu = mu_tilde(p);
  const auto c = chain_effective(p.omega0_C, p.Omega_C, mu.C);
  const auto i = chain_effective(p.omega0_I, p.Omega_I, mu.I);
  return {c.omega_tilde, i.omega_tilde, c.coupling, i.coupling, c.squeeze, i.squeeze};
}

BogoliubovMatrix build_bogoliubov_matrix(const ModelParams& p) {
  const auto e = effective_parameters(p);
  const cd I{0.0, 1.0};

  BogoliubovMatrix b;
  b.P << p.omega_cav, e.Omega_tilde_C, I * e.Omega_tilde_I,
      e.Omega_tilde_C, e.omega_tilde_C + 2.0 * e.D_C, 0.0,
      -I * e.Omega_tilde_I, 0.0, e.omega_tilde_I + 2.0 * e.D_I;
  b.Q << 0.0, -e.Omega_tilde_C, -I * e.Omega_tilde_I,
      -e.Omega_tilde_C, -2.0 * e.D_C, 0.0,
      -I * e.Omega_tilde_I, 0.0, -2.0 * e.D_I;

  b.M.topLeftCorner<3, 3>() = b.P;
  b.M.topRightCorner<3, 3>() = b.Q;
  b.M.bottomLeftCorner<3, 3>() = -b.Q.adjoint();
  b.M.bottomRightCorner<3, 3>() = -b.P.transpose();
  return b;
}

ExcitationSpectrum excitation_spectrum(const ModelParams& p, const SpectrumOptions& opts) {
  const auto b = build_bogoliubov_matrix(p);
  Eigen::ComplexEigenSolver<Matrix6c> solver(b.M, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("excitation_spectrum: eigensolver did not converge for " +
                             describe(p));
  }

  const double scale = p.omega_cav;
  const double zero_tol = opts.zero_tol * scale;
  const double pair_tol = opts.pair_tol * scale;

  ExcitationSpectrum out;
  std::array<cd, 6> ev;
  out.min_abs_eigenvalue = INFINITY;
  for (int k = 0; k < 6; ++k) {
    ev[k] = solver.eigenvalues()[k];
    out.min_abs_eigenvalue = std::min(out.min_abs_eigenvalue, std::abs(ev[k]));
    if (std::abs(ev[k]) < zero_tol) {
      ev[k] = 0.0;
      out.marginal = true;
    }
  }

  // Greedy pairing: take the eigenvalue with the largest real part and match
  // it with the unused eigenvalue closest to its negative.
  std::array<bool, 6> used{};
  std::array<double, 3> omega{};
  bool real = true;
  for (int pair = 0; pair < 3; ++pair) {
    int top = -1;
    for (int k = 0; k < 6; ++k) {
      if (!used[k] && (top < 0 || ev[k].real() > ev[top].real())) top = k;
    }
    used[top] = true;
    int partner = -1;
    for (int k = 0; k < 6; ++k) {
      if (!used[k] && (partner < 0 || std::abs(ev[k] + ev[top]) < std::abs(ev[partner] + ev[top])))
        partner = k;
    }
    used[partner] = true;
    out.residual = std::max(out.residual, std::abs(ev[top] + ev[partner]));
    real = real && std::abs(ev[top].imag()) <= pair_tol && std::abs(ev[partner].imag()) <= pair_tol;
    omega[pair] = 0.5 * (ev[top].real() - ev[partner].real());
  }
  std::sort(omega.begin(), omega.end());
  out.omega_l = omega[0];
  out.omega_m = omega[1];
  out.omega_u = omega[2];
  out.stable = real && out.residual <= pair_tol;
  return out;
}

std::vector<SurfaceRow> spectrum_surface(std::span<const CouplingPoint> grid,
                                         const ModelParams& p0, unsigned threads,
                                         const SpectrumOptions& opts) {
  std::vector<SurfaceRow> rows(grid.size());
  detail::parallel_for(grid.size(), threads, [&](std::size_t k) {
    auto& row = rows[k];
    row.Omega_C = grid[k].first;
    row.Omega_I = grid[k].second;
    try {
      const auto p = p0.with_couplings(row.Omega_C, row.Omega_I);
      p.validate();
      row.spectrum = excitation_spectrum(p, opts);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });
  return rows;
}

std::vector<RayRow> ray_cut(const RaySpec& ray, const ModelParams& p0, unsigned threads,
                            const SpectrumOptions& opts) {
  if (!(ray.r_max > 0.0) || ray.n_points <= 0) return {};

  const double c = std::cos(ray.theta);
  const double s = std::sin(ray.theta);

  struct Sample {
    double r;
    CouplingPoint point;
  };
  std::vector<Sample> samples;
  const int n = std::max(ray.n_points, 2);
  for (int i = 0; i < n; ++i) {
    const double r = ray.r_max * static_cast<double>(i) / (n - 1);
    samples.push_back({r, {std::max(0.0, r * c), std::max(0.0, r * s)}});
  }

  // Crossing radii carry the critical coupling exactly so that the lower
  // branch is sampled at its zero rather than near it.
  const auto cr = critical_couplings(p0);
  const double tiny = 1e-12;
  const bool hits_C = c > tiny && cr.C / c <= ray.r_max;
  const bool hits_I = s > tiny && cr.I / s <= ray.r_max;
  if (hits_C && hits_I && std::abs(cr.C / c - cr.I / s) <= 1e-12 * (cr.C / c)) {
    samples.push_back({cr.C / c, {cr.C, cr.I}});
  } else {
    if (hits_C) samples.push_back({cr.C / c, {cr.C, std::max(0.0, cr.C / c * s)}});
    if (hits_I) samples.push_back({cr.I / s, {std::max(0.0, cr.I / s * c), cr.I}});
  }
  std::stable_sort(samples.begin(), samples.end(),
                   [](const Sample& a, const Sample& b) { return a.r < b.r; });

  std::vector<CouplingPoint> grid;
  grid.reserve(samples.size());
  for (const auto& sm : samples) grid.push_back(sm.point);
  auto rows = spectrum_surface(grid, p0, threads, opts);

  std::vector<RayRow> out;
  out.reserve(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) out.push_back({samples[k].r, std::move(rows[k])});
  return out;
}

int count_lower_branch_zeros(std::span<const RayRow> rows) {
  int zeros = 0;
  bool in_run = false;
  for (const auto& r : rows) {
    const bool zero = r.row.error.empty() && r.row.spectrum.omega_l == 0.0;
    if (zero && !in_run) ++zeros;
    in_run = zero;
  }
  return zeros;
}

}  // namespace dicke
