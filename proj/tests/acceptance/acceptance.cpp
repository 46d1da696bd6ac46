// Runs every acceptance criterion and prints one PASS/FAIL line for each.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dicke/berry.hpp"
#include "dicke/bogoliubov.hpp"
#include "dicke/exactdiag.hpp"
#include "dicke/meanfield.hpp"
#include "oracles/oracles.hpp"

using namespace dicke;
using cd = std::complex<double>;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

Outcome critical_lines() {
  Outcome o;
  const auto cr = critical_couplings(resonant(0, 0));
  o.require(cr.C == 0.5 && cr.I == 0.5, "critical couplings at resonance");
  double worst = 0.0;
  for (double other : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.8, 1.0, 1.5}) {
    for (const auto& p : {resonant(0.5, other), resonant(other, 0.5)}) {
      const auto s = excitation_spectrum(p);
      worst = std::max(worst, s.min_abs_eigenvalue);
      o.require(s.omega_l == 0.0 && s.stable, "lower branch snapped to zero");
    }
  }
  o.require(worst < 1e-7, "raw |eigenvalue| < 1e-7");
  // Classification flips exactly at the lines.
  o.require(!classify_phase(resonant(0.5, 0.5)).superradiant_C(), "0.5 is sub-critical");
  o.require(classify_phase(resonant(std::nextafter(0.5, 1.0), 0)).superradiant_C(),
            "just above 0.5 is superradiant");
  o.detail << " max raw |lambda| on the lines = " << worst;
  return o;
}

Outcome ray_structure() {
  Outcome o;
  const auto p0 = resonant(0, 0);
  struct Ray {
    const char* name;
    double theta;
    int expected;
  };
  for (const auto& r : {Ray{"pi/7", std::numbers::pi / 7, 2}, Ray{"2pi/5", 2 * std::numbers::pi / 5, 2},
                        Ray{"pi/4", std::numbers::pi / 4, 1}}) {
    const int zeros = count_lower_branch_zeros(ray_cut({r.theta, 2.0, 401}, p0));
    o.detail << ' ' << r.name << ':' << zeros;
    o.require(zeros == r.expected, std::string("zero count on ") + r.name);
  }
  return o;
}

Outcome single_chain_reduction() {
  Outcome o;
  double worst = 0.0;
  for (int k = 0; k <= 300; ++k) {
    const double g = 0.005 * k;
    if (k == 100) continue;  // the critical point itself
    const auto s = excitation_spectrum(resonant(g, 0.0));
    const auto ref = oracle::single_chain(1, 1, g);
    std::array<double, 3> want{ref[0], ref[1], 1.0};
    std::sort(want.begin(), want.end());
    worst = std::max({worst, std::abs(s.omega_l - want[0]), std::abs(s.omega_m - want[1]),
                      std::abs(s.omega_u - want[2])});
  }
  o.require(worst < 1e-9, "branches within 1e-9");
  o.detail << " max deviation = " << worst;
  return o;
}

Outcome mean_field_vs_ed() {
  Outcome o;
  const double tol = 1e-9;
  std::vector<double> gap_err, energy_err;
  double last_rel = 0.0;
  for (int n : {2, 4, 8}) {
    const auto p = resonant(0.25, 0.25, n, n);
    const auto r = cutoff_convergence(p, tol, 4);
    const double gap = r.spectrum.eigenvalues(1) - r.spectrum.eigenvalues(0);
    const double wl = excitation_spectrum(p).omega_l;
    gap_err.push_back(std::abs(gap - wl));
    energy_err.push_back(std::abs(ground_state_energy(p) - r.spectrum.eigenvalues(0)) / (2.0 * n));
    last_rel = std::abs(gap - wl) / wl;
    o.detail << " N=" << n << " (n_max " << r.basis.n_max << ") gap=" << gap << " w_l=" << wl
             << " dE/spin=" << energy_err.back() << ';';
  }
  o.require(gap_err[0] > gap_err[1] && gap_err[1] > gap_err[2], "gap approaches w_l monotonically");
  o.require(energy_err[0] > energy_err[1] && energy_err[1] > energy_err[2],
            "per-spin energy gap shrinks monotonically");
  o.require(last_rel < 0.10, "N=8 discrepancy < 10%");
  o.detail << " N=8 relative gap discrepancy = " << last_rel;
  return o;
}

Outcome manifold_degeneracies() {
  Outcome o;
  struct Point {
    double gc, gi;
    int expected;
  };
  for (const auto& pt : {Point{0.2, 0.2, 1}, Point{1.2, 0.1, 2}, Point{0.1, 1.2, 2}, Point{1.2, 1.2, 4}}) {
    const auto p = resonant(pt.gc, pt.gi, 4, 4);
    const auto r = cutoff_convergence(p, 1e-8, 8);
    const auto m = ground_manifold(r.spectrum, p);
    o.detail << " (" << pt.gc << ',' << pt.gi << ")->" << m.size
             << (m.ambiguous ? "?" : "") << " gap/spread="
             << (m.spread > 0 ? m.gap / m.spread : INFINITY) << ';';
    o.require(m.size == pt.expected && !m.ambiguous, "degeneracy at a deep point");
  }
  return o;
}

Outcome splitting_law() {
  Outcome o;
  std::vector<double> x, y;
  for (double g : {0.9, 1.0, 1.1, 1.2}) {
    const auto p = resonant(g, g, 2, 2);
    const auto r = cutoff_convergence(p, 1e-10, 8);
    const auto s = ground_splittings(p, r.basis);
    // Total width of the four-level manifold; the individual splittings
    // oscillate because the tunneling amplitudes are complex.
    const double width = s.values[2];
    x.push_back(g * g);
    y.push_back(std::log(width));
    o.detail << " Omega=" << g << " width=" << width << ';';
  }
  const double slope = oracle::fit_slope(x, y);
  o.detail << " slope=" << slope << " (target -4)";
  o.require(std::abs(slope + 4.0) <= 0.8, "slope within 20% of -4");
  return o;
}

Outcome asymptotic_vacua_check() {
  Outcome o;
  const auto p = resonant(2.5, 2.5, 2, 2);
  const BasisSpec b{2, 2, 70};
  const auto h = build_hamiltonian(p, b);
  const auto m = ground_manifold(diagonalize_by_parity(h, 8), p);
  o.require(m.size == 4, "four-fold manifold");
  const auto v = asymptotic_vacua(p, b);
  double worst = 1.0;
  for (const auto& vac : v) worst = std::min(worst, (m.vectors.adjoint() * vac).squaredNorm());
  o.require(worst > 0.95, "fidelity > 0.95");
  o.detail << " min fidelity = " << worst;

  // Index map for (++, +-, -+, --): Pi flips both signs, T_I flips eps_I, T_C flips eps_C.
  double defect = 0.0;
  auto check = [&](auto op, std::array<int, 4> target) {
    for (int k = 0; k < 4; ++k) {
      const double ov = std::abs(v[target[k]].dot(op(v[k], b)));
      defect = std::max(defect, std::abs(1.0 - ov));
    }
  };
  check([](const Eigen::VectorXcd& x, const BasisSpec& bb) { return apply_parity(x, bb); }, {3, 2, 1, 0});
  check([](const Eigen::VectorXcd& x, const BasisSpec& bb) { return apply_T_I(x, bb); }, {1, 0, 3, 2});
  check([](const Eigen::VectorXcd& x, const BasisSpec& bb) { return apply_T_C(x, bb); }, {2, 3, 0, 1});
  o.require(defect < 1e-10, "symmetry permutation of the vacua");
  o.detail << " permutation defect = " << defect;
  return o;
}

Outcome symmetry_suite() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> freq(0.3, 2.0), g(0.0, 2.0);
  std::uniform_int_distribution<int> n(1, 4), cut(10, 24);
  double worst_sym = 0.0, worst_merge = 0.0;
  for (int k = 0; k < 20; ++k) {
    ModelParams p;
    p.omega_cav = freq(rng);
    p.omega0_C = freq(rng);
    p.omega0_I = freq(rng);
    p.Omega_C = g(rng);
    p.Omega_I = g(rng);
    p.N_C = n(rng);
    p.N_I = n(rng);
    const auto h = build_hamiltonian(p, BasisSpec::for_params(p, cut(rng)));
    const auto r = check_symmetries(h);
    worst_sym = std::max({worst_sym, r.parity_commutator_norm / r.hamiltonian_norm,
                          r.TI_defect_norm / r.hamiltonian_norm,
                          r.TC_defect_norm / r.hamiltonian_norm});
    const int dim = static_cast<int>(h.basis.dim());
    const auto full = diagonalize(h, dim, {SolverPath::Dense});
    const auto split = diagonalize_by_parity(h, dim, {SolverPath::Dense});
    worst_merge = std::max(worst_merge, (full.eigenvalues - split.eigenvalues).cwiseAbs().maxCoeff());
  }
  o.require(worst_sym < 1e-12, "symmetry defects < 1e-12 |H|_max");
  o.require(worst_merge < 1e-10, "sector merge reproduces the spectrum");
  o.detail << " max relative defect = " << worst_sym << ", max merge error = " << worst_merge;
  return o;
}

Outcome holonomy() {
  Outcome o;
  const auto p0 = resonant(0, 0, 2, 2);
  const BasisSpec b{2, 2, 60};
  const auto small = compute_frames(square_loop({2.0, 2.0}, 0.2), p0, b);
  const auto h = transport(small);
  const auto rep = compare_holonomy(h);
  const auto& a = h.measured_angles;
  o.require(a[0] > 0 && a[1] < 0 && a[2] < 0 && a[3] > 0, "sign pattern (+,-,-,+)");

  HolonomyOptions gauge;
  gauge.gauge_seed = 12345;
  const auto hg = transport(small, gauge);
  double gauge_dev = 0.0;
  for (int k = 0; k < 4; ++k) gauge_dev = std::max(gauge_dev, std::abs(hg.measured_angles[k] - a[k]));
  o.require(gauge_dev < 1e-6, "gauge invariance");

  const auto back = transport(reversed(small));
  const double inv = (back.U * h.U - Matrix4c::Identity()).norm();
  o.require(inv < 1e-8, "reversal inverts U");

  const auto big = compare_holonomy(
      wilson_loop_holonomy(square_loop({2.0, 2.0}, 0.2 * std::sqrt(2.0)), p0, b));
  const double ratio = big.best_phi / rep.best_phi;
  o.require(std::abs(ratio - 2.0) <= 0.2, "phi doubles with the area");

  o.detail << " angles=(" << a[0] << ',' << a[1] << ',' << a[2] << ',' << a[3] << ") phi=" << rep.best_phi
           << " predicted=" << rep.predicted_angle << " rel.dev="
           << (rep.best_phi - rep.predicted_angle) / rep.predicted_angle << " phi(2A)=" << big.best_phi
           << " ratio=" << ratio << " gauge dev=" << gauge_dev << " |U_rev U - 1|=" << inv
           << " leakage=" << rep.leakage;
  return o;
}

Outcome pairing() {
  Outcome o;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> freq(0.1, 3.0), g(0.0, 3.0);
  int stable = 0;
  double worst = 0.0;
  while (stable < 10000) {
    ModelParams p;
    p.omega_cav = freq(rng);
    p.omega0_C = freq(rng);
    p.omega0_I = freq(rng);
    p.Omega_C = g(rng);
    p.Omega_I = g(rng);
    const auto s = excitation_spectrum(p);
    if (!s.stable) {
      o.require(false, "unstable point");
      break;
    }
    ++stable;
    worst = std::max(worst, s.residual / p.omega_cav);
  }
  o.require(worst < 1e-10, "pairing defect < 1e-10 w_cav");
  o.detail << " points=" << stable << " max pairing defect = " << worst;
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all{
      {1, "critical lines at resonance", critical_lines},
      {2, "ray zero structure", ray_structure},
      {3, "single-chain reduction", single_chain_reduction},
      {4, "mean field vs exact diagonalization", mean_field_vs_ed},
      {5, "ground-manifold degeneracies", manifold_degeneracies},
      {6, "splitting law", splitting_law},
      {7, "asymptotic vacua", asymptotic_vacua_check},
      {8, "symmetry suite", symmetry_suite},
      {9, "holonomy", holonomy},
      {10, "Bogoliubov pairing", pairing},
  };
  int failures = 0;
  for (const auto& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << " exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!out.pass) ++failures;
    std::printf("%s  %2d %s:%s (%.1f s)\n", out.pass ? "PASS" : "FAIL", c.id, c.name,
                out.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failures, all.size());
  return failures == 0 ? 0 : 1;
}
