#include "dicke/exactdiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include "dicke/meanfield.hpp"

namespace dicke {

namespace {

using cd = std::complex<double>;

// <j, m+1| J_x |j, m> for excitation count e = m + j, with 2j = N.
double jx_raise(int N, int e) {
  const double j = 0.5 * N;
  const double m = e - j;
  return 0.5 * std::sqrt(j * (j + 1.0) - m * (m + 1.0));
}

void require_basis(const ModelParams& p, const BasisSpec& basis) {
  if (basis.N_C != p.N_C || basis.N_I != p.N_I)
    throw std::invalid_argument("basis chain sizes do not match the model parameters");
  if (basis.n_max < 0) throw std::invalid_argument("n_max must be >= 0");
}

FiniteSizeSpectrum from_eigenpairs(const BasisSpec& basis, Eigenpairs pairs, SolverPath path) {
  FiniteSizeSpectrum s;
  s.basis = basis;
  s.eigenvalues = std::move(pairs.values);
  s.eigenvectors = std::move(pairs.vectors);
  s.n_computed = static_cast<int>(s.eigenvalues.size());
  s.path = path;
  s.iterations = pairs.iterations;
  return s;
}

double binomial(int n, int k) {
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

// J_x eigenstate with eigenvalue sign * N/2 in the J_z basis.
Eigen::VectorXd x_polarized(int N, int sign) {
  Eigen::VectorXd v(N + 1);
  for (int e = 0; e <= N; ++e) {
    const double amp = std::sqrt(binomial(N, e) / std::pow(2.0, N));
    v(e) = (sign < 0 && (N - e) % 2 == 1) ? -amp : amp;
  }
  return v;
}

Eigen::VectorXcd coherent_state(cd alpha, int n_max) {
  Eigen::VectorXcd c(n_max + 1);
  c(0) = 1.0;
  for (int n = 1; n <= n_max; ++n) c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  c.normalize();
  return c;
}

}  // namespace

double Hamiltonian::max_abs() const {
  double m = 0.0;
  for (Eigen::Index k = 0; k < matrix.outerSize(); ++k)
    for (SparseMatrixC::InnerIterator it(matrix, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

std::size_t estimated_bytes(const BasisSpec& basis) {
  const std::size_t dim = basis.dim();
  // ~9 nonzeros per column plus a 64-column complex work block.
  return dim * 9 * (sizeof(cd) + sizeof(int)) + dim * 64 * sizeof(cd);
}

Hamiltonian build_hamiltonian(const ModelParams& p, const BasisSpec& basis,
                              const BuildOptions& opts) {
  p.validate();
  require_basis(p, basis);
  const std::size_t dim = basis.dim();
  if (dim > opts.max_dim) {
    std::ostringstream msg;
    msg << "build_hamiltonian: dimension " << dim << " exceeds the configured maximum "
        << opts.max_dim << " (needs about " << estimated_bytes(basis) / (1024 * 1024)
        << " MiB)";
    throw DimensionError(msg.str(), dim, estimated_bytes(basis));
  }

  const double g_C = 2.0 * p.Omega_C / std::sqrt(static_cast<double>(p.N_C));
  const double g_I = 2.0 * p.Omega_I / std::sqrt(static_cast<double>(p.N_I));
  const cd I{0.0, 1.0};

  std::vector<Eigen::Triplet<cd>> entries;
  entries.reserve(dim * 9);
  for (int eC = 0; eC <= basis.N_C; ++eC) {
    for (int eI = 0; eI <= basis.N_I; ++eI) {
      for (int n = 0; n <= basis.n_max; ++n) {
        const auto col = static_cast<int>(basis.index(eC, eI, n));
        const double diag = p.omega_cav * n + p.omega0_C * (eC - 0.5 * p.N_C) +
                            p.omega0_I * (eI - 0.5 * p.N_I);
        entries.emplace_back(col, col, diag);

        // (a + a^+) J_x^C
        for (int dn : {-1, 1}) {
          const int n2 = n + dn;
          if (n2 < 0 || n2 > basis.n_max || g_C == 0.0) continue;
          const double boson = std::sqrt(static_cast<double>(std::max(n, n2)));
          if (eC + 1 <= basis.N_C)
            entries.emplace_back(static_cast<int>(basis.index(eC + 1, eI, n2)), col,
                                 g_C * boson * jx_raise(p.N_C, eC));
          if (eC - 1 >= 0)
            entries.emplace_back(static_cast<int>(basis.index(eC - 1, eI, n2)), col,
                                 g_C * boson * jx_raise(p.N_C, eC - 1));
        }

        // i (a - a^+) J_x^I: <n-1|a|n> = sqrt(n), <n+1|-a^+|n> = -sqrt(n+1)
        for (int dn : {-1, 1}) {
          const int n2 = n + dn;
          if (n2 < 0 || n2 > basis.n_max || g_I == 0.0) continue;
          const double boson = dn < 0 ? std::sqrt(static_cast<double>(n))
                                      : -std::sqrt(static_cast<double>(n + 1));
          if (eI + 1 <= basis.N_I)
            entries.emplace_back(static_cast<int>(basis.index(eC, eI + 1, n2)), col,
                                 I * g_I * boson * jx_raise(p.N_I, eI));
          if (eI - 1 >= 0)
            entries.emplace_back(static_cast<int>(basis.index(eC, eI - 1, n2)), col,
                                 I * g_I * boson * jx_raise(p.N_I, eI - 1));
        }
      }
    }
  }

  Hamiltonian h;
  h.basis = basis;
  h.matrix.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  h.matrix.setFromTriplets(entries.begin(), entries.end());
  h.matrix.makeCompressed();
  return h;
}

FiniteSizeSpectrum diagonalize(const Hamiltonian& h, int n_low, const DiagonalizeOptions& opts) {
  const auto dim = static_cast<int>(h.matrix.rows());
  if (n_low < 1 || n_low > dim)
    throw std::invalid_argument("diagonalize: n_low must lie in [1, dim]");

  SolverPath path = opts.path;
  if (path == SolverPath::Automatic)
    path = static_cast<std::size_t>(dim) <= opts.dense_threshold ? SolverPath::Dense
                                                                 : SolverPath::Iterative;
  if (path == SolverPath::Dense)
    return from_eigenpairs(h.basis, lowest_eigenpairs_dense(Eigen::MatrixXcd(h.matrix), n_low),
                           path);
  return from_eigenpairs(h.basis, lowest_eigenpairs_iterative(h.matrix, n_low, opts.iterative),
                         path);
}

FiniteSizeSpectrum diagonalize_by_parity(const Hamiltonian& h, int n_low,
                                         const DiagonalizeOptions& opts) {
  const auto dim = static_cast<int>(h.matrix.rows());
  if (n_low < 1 || n_low > dim)
    throw std::invalid_argument("diagonalize_by_parity: n_low must lie in [1, dim]");

  const Eigen::VectorXd parity = parity_operator(h.basis);
  std::array<std::vector<int>, 2> members;
  std::vector<int> local(dim);
  for (int i = 0; i < dim; ++i) {
    auto& bucket = members[parity(i) > 0 ? 0 : 1];
    local[i] = static_cast<int>(bucket.size());
    bucket.push_back(i);
  }

  struct Candidate {
    double value;
    int sector;
    int column;
  };
  std::vector<Candidate> candidates;
  std::array<Eigenpairs, 2> sectors;
  int iterations = 0;
  SolverPath used = SolverPath::Dense;
  for (int s = 0; s < 2; ++s) {
    const auto n = static_cast<int>(members[s].size());
    if (n == 0) continue;
    std::vector<Eigen::Triplet<cd>> entries;
    for (Eigen::Index k = 0; k < h.matrix.outerSize(); ++k) {
      if ((parity(k) > 0 ? 0 : 1) != s) continue;
      for (SparseMatrixC::InnerIterator it(h.matrix, k); it; ++it) {
        if (parity(it.row()) != parity(k)) continue;  // never happens for a symmetric H
        entries.emplace_back(local[it.row()], local[k], it.value());
      }
    }
    Hamiltonian block;
    block.basis = h.basis;
    block.matrix.resize(n, n);
    block.matrix.setFromTriplets(entries.begin(), entries.end());
    auto spec = diagonalize(block, std::min(n_low, n), opts);
    iterations += spec.iterations;
    used = spec.path;
    sectors[s] = {spec.eigenvalues, spec.eigenvectors, spec.iterations, 0.0};
    for (int c = 0; c < spec.n_computed; ++c) candidates.push_back({spec.eigenvalues(c), s, c});
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
  candidates.resize(n_low);

  Eigenpairs merged;
  merged.values.resize(n_low);
  merged.vectors = Eigen::MatrixXcd::Zero(dim, n_low);
  for (int c = 0; c < n_low; ++c) {
    const auto& cand = candidates[c];
    merged.values(c) = cand.value;
    const auto& rows = members[cand.sector];
    for (std::size_t r = 0; r < rows.size(); ++r)
      merged.vectors(rows[r], c) = sectors[cand.sector].vectors(static_cast<Eigen::Index>(r), cand.column);
  }
  merged.iterations = iterations;
  return from_eigenpairs(h.basis, std::move(merged), used);
}

Eigen::VectorXd parity_operator(const BasisSpec& basis) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(basis.dim()));
  for (std::size_t i = 0; i < basis.dim(); ++i) {
    const auto s = basis.state(i);
    d(static_cast<Eigen::Index>(i)) = ((s.n + s.e_C + s.e_I) % 2 == 0) ? 1.0 : -1.0;
  }
  return d;
}

Eigen::VectorXd chain_I_rotation(const BasisSpec& basis) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(basis.dim()));
  for (std::size_t i = 0; i < basis.dim(); ++i)
    d(static_cast<Eigen::Index>(i)) = (basis.state(i).e_I % 2 == 0) ? 1.0 : -1.0;
  return d;
}

Eigen::VectorXcd apply_parity(const Eigen::VectorXcd& v, const BasisSpec& basis) {
  return parity_operator(basis).cwiseProduct(v);
}

Eigen::VectorXcd apply_T_I(const Eigen::VectorXcd& v, const BasisSpec& basis) {
  return chain_I_rotation(basis).cwiseProduct(v.conjugate());
}

Eigen::VectorXcd apply_T_C(const Eigen::VectorXcd& v, const BasisSpec& basis) {
  return parity_operator(basis).cwiseProduct(apply_T_I(v, basis));
}

SymmetryReport check_symmetries(const ModelParams& p, const BasisSpec& basis) {
  return check_symmetries(build_hamiltonian(p, basis));
}

SymmetryReport check_symmetries(const Hamiltonian& h) {
  const Eigen::VectorXd parity = parity_operator(h.basis);
  const Eigen::VectorXd rot_I = chain_I_rotation(h.basis);
  const Eigen::VectorXd rot_C = parity.cwiseProduct(rot_I);

  // Entrywise: (D conj(H) D^+)_ij = d_i d_j conj(H_ij) for real diagonal D.
  // Entries absent from H must stay absent, so only stored entries matter.
  SymmetryReport r;
  for (Eigen::Index k = 0; k < h.matrix.outerSize(); ++k) {
    for (SparseMatrixC::InnerIterator it(h.matrix, k); it; ++it) {
      const auto i = it.row();
      const cd v = it.value();
      r.hamiltonian_norm = std::max(r.hamiltonian_norm, std::abs(v));
      r.parity_commutator_norm =
          std::max(r.parity_commutator_norm, std::abs(v * (parity(k) - parity(i))));
      r.TI_defect_norm = std::max(r.TI_defect_norm, std::abs(rot_I(i) * rot_I(k) * std::conj(v) - v));
      r.TC_defect_norm = std::max(r.TC_defect_norm, std::abs(rot_C(i) * rot_C(k) * std::conj(v) - v));
    }
  }
  for (Eigen::Index i = 0; i < parity.size(); ++i) (parity(i) > 0 ? r.even_dim : r.odd_dim) += 1;
  return r;
}

GroundManifold ground_manifold(const FiniteSizeSpectrum& spectrum, const ModelParams& p,
                               double gap_factor) {
  if (spectrum.n_computed < 6)
    throw std::invalid_argument("ground_manifold: needs at least six computed states");
  const auto& E = spectrum.eigenvalues;
  const int n = spectrum.n_computed;

  // ratio[k] compares the gap above the leading k levels with their spread.
  auto ratio = [&](int k) {
    const double spread = E(k - 1) - E(0);
    const double gap = E(k) - E(k - 1);
    if (spread <= 0.0) return gap > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    return gap / spread;
  };

  int chosen = 1;
  for (int k = 2; k < n; ++k)
    if (ratio(k) > gap_factor) chosen = k;

  int alternative = chosen;
  for (int k = n - 1; k >= 2; --k) {
    if (k == chosen) continue;
    const double r = ratio(k);
    if (r > 1.0 && r <= gap_factor && k > chosen) {
      alternative = k;
      break;
    }
  }

  GroundManifold m;
  m.basis = spectrum.basis;
  m.size = chosen;
  m.energies.assign(E.data(), E.data() + chosen);
  m.vectors = spectrum.eigenvectors.leftCols(chosen);
  m.spread = E(chosen - 1) - E(0);
  m.gap = E(chosen) - E(chosen - 1);
  m.ambiguous = alternative != chosen;
  m.alternative_size = alternative;
  const auto phase = classify_phase(p);
  m.expected_size = (phase.superradiant_C() ? 2 : 1) * (phase.superradiant_I() ? 2 : 1);
  return m;
}

Eigen::VectorXcd apply_annihilation(const Eigen::VectorXcd& v, const BasisSpec& basis) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  for (int eC = 0; eC <= basis.N_C; ++eC)
    for (int eI = 0; eI <= basis.N_I; ++eI)
      for (int n = 0; n < basis.n_max; ++n)
        out(basis.index(eC, eI, n)) = std::sqrt(n + 1.0) * v(basis.index(eC, eI, n + 1));
  return out;
}

Eigen::VectorXcd apply_jx_C(const Eigen::VectorXcd& v, const BasisSpec& basis) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  for (int eC = 0; eC <= basis.N_C; ++eC)
    for (int eI = 0; eI <= basis.N_I; ++eI)
      for (int n = 0; n <= basis.n_max; ++n) {
        const cd x = v(basis.index(eC, eI, n));
        if (eC < basis.N_C) out(basis.index(eC + 1, eI, n)) += jx_raise(basis.N_C, eC) * x;
        if (eC > 0) out(basis.index(eC - 1, eI, n)) += jx_raise(basis.N_C, eC - 1) * x;
      }
  return out;
}

Eigen::VectorXcd apply_jx_I(const Eigen::VectorXcd& v, const BasisSpec& basis) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  for (int eC = 0; eC <= basis.N_C; ++eC)
    for (int eI = 0; eI <= basis.N_I; ++eI)
      for (int n = 0; n <= basis.n_max; ++n) {
        const cd x = v(basis.index(eC, eI, n));
        if (eI < basis.N_I) out(basis.index(eC, eI + 1, n)) += jx_raise(basis.N_I, eI) * x;
        if (eI > 0) out(basis.index(eC, eI - 1, n)) += jx_raise(basis.N_I, eI - 1) * x;
      }
  return out;
}

OrderParameters order_parameters(const GroundManifold& manifold) {
  const auto& G = manifold.vectors;
  const auto k = G.cols();
  Eigen::MatrixXcd A(k, k), XC(k, k), XI(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const Eigen::VectorXcd g = G.col(j);
    A.col(j) = G.adjoint() * apply_annihilation(g, manifold.basis);
    XC.col(j) = G.adjoint() * apply_jx_C(g, manifold.basis);
    XI.col(j) = G.adjoint() * apply_jx_I(g, manifold.basis);
  }

  OrderParameters out;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ea(A, false);
  for (Eigen::Index i = 0; i < k; ++i) out.coherences.push_back(ea.eigenvalues()(i));
  std::sort(out.coherences.begin(), out.coherences.end(), [](cd a, cd b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  auto hermitian_eigs = [](const Eigen::MatrixXcd& x) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (x + x.adjoint()), Eigen::EigenvaluesOnly);
    return std::vector<double>(es.eigenvalues().data(), es.eigenvalues().data() + x.rows());
  };
  out.jx_C = hermitian_eigs(XC);
  out.jx_I = hermitian_eigs(XI);
  return out;
}

Splittings ground_splittings(const ModelParams& p, const BasisSpec& basis,
                             const DiagonalizeOptions& opts) {
  if (classify_phase(p).tag != PhaseTag::DoublySuperradiant)
    throw std::invalid_argument(
        "ground_splittings: requires a doubly superradiant point (both couplings above critical)");
  const auto h = build_hamiltonian(p, basis);
  const auto spec = diagonalize(h, std::min<int>(8, static_cast<int>(basis.dim())), opts);
  const auto m = ground_manifold(spec, p);
  Splittings s;
  for (int i = 0; i < 3; ++i) s.values[i] = spec.eigenvalues(i + 1) - spec.eigenvalues(0);
  s.manifold_size = m.size;
  s.ambiguous = m.ambiguous || m.size != 4;
  return s;
}

cd asymptotic_coherence(const ModelParams& p, int eps_C, int eps_I) {
  return {-eps_C * p.Omega_C / p.omega_cav * std::sqrt(static_cast<double>(p.N_C)),
          eps_I * p.Omega_I / p.omega_cav * std::sqrt(static_cast<double>(p.N_I))};
}

int required_cutoff(cd alpha) {
  const double a = std::abs(alpha);
  return static_cast<int>(std::ceil(a * a + 6.0 * a));
}

std::array<Eigen::VectorXcd, 4> asymptotic_vacua(const ModelParams& p, const BasisSpec& basis,
                                                 const VacuaOptions& opts) {
  p.validate();
  require_basis(p, basis);
  auto deep = [&](int N, double coupling) {
    const double x = coupling / p.omega_cav;
    return N <= opts.ratio * x * x;
  };
  if (!deep(p.N_C, p.Omega_C) || !deep(p.N_I, p.Omega_I))
    throw std::invalid_argument(
        "asymptotic_vacua: requires N_k <= ratio * (Omega_k / omega_cav)^2 for both chains");

  std::array<Eigen::VectorXcd, 4> out;
  const std::array<std::pair<int, int>, 4> branches{{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
  for (std::size_t b = 0; b < 4; ++b) {
    const auto [eC, eI] = branches[b];
    const cd alpha = asymptotic_coherence(p, eC, eI);
    const int need = required_cutoff(alpha);
    if (need > basis.n_max) {
      std::ostringstream msg;
      msg << "asymptotic_vacua: n_max " << basis.n_max << " too small for |alpha| = "
          << std::abs(alpha) << "; need n_max >= " << need;
      throw CutoffError(msg.str(), need);
    }
    const Eigen::VectorXcd boson = coherent_state(alpha, basis.n_max);
    const Eigen::VectorXd spin_C = x_polarized(basis.N_C, eC);
    const Eigen::VectorXd spin_I = x_polarized(basis.N_I, eI);

    Eigen::VectorXcd v(static_cast<Eigen::Index>(basis.dim()));
    for (int c = 0; c <= basis.N_C; ++c)
      for (int i = 0; i <= basis.N_I; ++i)
        for (int n = 0; n <= basis.n_max; ++n)
          v(basis.index(c, i, n)) = spin_C(c) * spin_I(i) * boson(n);
    out[b] = std::move(v);
  }
  return out;
}

int initial_cutoff(const ModelParams& p) {
  const auto mf = mean_fields(p, 1, 1);
  const double photons = mf.gamma_C + mf.gamma_I;
  return static_cast<int>(std::ceil(photons + 4.0 * std::sqrt(photons))) + 20;
}

CutoffResult cutoff_convergence(const ModelParams& p, double tol, int n_low,
                                const DiagonalizeOptions& opts, const BuildOptions& build) {
  if (!(tol > 0.0)) throw std::invalid_argument("cutoff_convergence: tol must be > 0");
  if (n_low < 1) throw std::invalid_argument("cutoff_convergence: n_low must be >= 1");
  p.validate();

  auto solve = [&](int n_max) {
    const auto basis = BasisSpec::for_params(p, n_max);
    const auto h = build_hamiltonian(p, basis, build);
    return diagonalize(h, std::min<int>(n_low, static_cast<int>(basis.dim())), opts);
  };

  int n_max = initial_cutoff(p);
  auto coarse = solve(n_max);
  for (;;) {
    auto fine = solve(2 * n_max);
    double shift = 0.0;
    const int k = std::min(coarse.n_computed, fine.n_computed);
    for (int i = 0; i < k; ++i)
      shift = std::max(shift, std::abs(fine.eigenvalues(i) - coarse.eigenvalues(i)));
    if (shift < tol) {
      fine.cutoff_converged = true;
      fine.cutoff_residual = shift;
      return {fine.basis, std::move(fine)};
    }
    n_max *= 2;
    coarse = std::move(fine);
  }
}

}  // namespace dicke
