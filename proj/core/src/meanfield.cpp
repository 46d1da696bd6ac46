#include "dicke/meanfield.hpp"

#include <cmath>
#include <stdexcept>

#include "parallel.hpp"

namespace dicke {

namespace {

struct ChainFields {
  double gamma = 0.0;
  double beta = 0.0;
};

ChainFields chain_fields(double coupling, double mu, int n, double omega_cav) {
  if (mu >= 1.0) return {};
  const double sqrt_gamma = coupling * std::sqrt(n * (1.0 - mu * mu)) / omega_cav;
  return {sqrt_gamma * sqrt_gamma, 0.5 * n * (1.0 - mu)};
}

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace

MeanFieldSolution mean_fields(const ModelParams& p, int eps_C, int eps_I) {
  if ((eps_C != 1 && eps_C != -1) || (eps_I != 1 && eps_I != -1))
    throw std::invalid_argument("mean_fields: signs must be +1 or -1");
  const auto mu = mu_tilde(p);
  const auto c = chain_fields(p.Omega_C, mu.C, p.N_C, p.omega_cav);
  const auto i = chain_fields(p.Omega_I, mu.I, p.N_I, p.omega_cav);

  MeanFieldSolution s;
  s.eps_C = eps_C;
  s.eps_I = eps_I;
  s.gamma_C = c.gamma;
  s.gamma_I = i.gamma;
  s.beta_C = c.beta;
  s.beta_I = i.beta;
  s.coherence = {eps_C * std::sqrt(c.gamma), eps_I * std::sqrt(i.gamma)};
  return s;
}

std::array<MeanFieldSolution, 4> all_branches(const ModelParams& p) {
  return {mean_fields(p, 1, 1), mean_fields(p, 1, -1), mean_fields(p, -1, 1),
          mean_fields(p, -1, -1)};
}

double ground_state_energy(const ModelParams& p, const ExcitationSpectrum& spectrum) {
  if (std::isnan(spectrum.omega_l) || std::isnan(spectrum.omega_m) ||
      std::isnan(spectrum.omega_u)) {
    throw std::domain_error(
        "ground_state_energy: undefined branch frequency (gapless point, zero-point sum "
        "ill-conditioned)");
  }
  const auto mu = mu_tilde(p);
  const auto e = effective_parameters(p);

  CompensatedSum sum;
  sum.add(0.5 * spectrum.omega_l);
  sum.add(0.5 * spectrum.omega_m);
  sum.add(0.5 * spectrum.omega_u);
  sum.add(-0.5 * p.omega_cav);
  sum.add(-0.5 * e.omega_tilde_C);
  sum.add(-0.5 * e.omega_tilde_I);

  auto chain = [&](double omega0, double m, int n) {
    const double w = omega0 / (4.0 * m);
    sum.add(-w * n * (1.0 + m * m));
    sum.add(-w * (1.0 - m));
  };
  chain(p.omega0_C, mu.C, p.N_C);
  chain(p.omega0_I, mu.I, p.N_I);
  return sum.value();
}

double ground_state_energy(const ModelParams& p) {
  return ground_state_energy(p, excitation_spectrum(p));
}

PhaseDiagramRow phase_diagram_row(const ModelParams& p, double boundary_tol) {
  PhaseDiagramRow row;
  row.Omega_C = p.Omega_C;
  row.Omega_I = p.Omega_I;
  row.phase = classify_phase(p, boundary_tol);
  const auto mu = mu_tilde(p);
  row.mu_C = mu.C;
  row.mu_I = mu.I;
  const auto mf = mean_fields(p, 1, 1);
  row.gamma_C = mf.gamma_C;
  row.gamma_I = mf.gamma_I;
  row.beta_C = mf.beta_C;
  row.beta_I = mf.beta_I;
  row.E_G = ground_state_energy(p);
  return row;
}

std::vector<PhaseDiagramRow> phase_diagram(std::span<const CouplingPoint> grid,
                                           const ModelParams& p0, unsigned threads,
                                           double boundary_tol) {
  std::vector<PhaseDiagramRow> rows(grid.size());
  detail::parallel_for(grid.size(), threads, [&](std::size_t k) {
    try {
      rows[k] = phase_diagram_row(p0.with_couplings(grid[k].first, grid[k].second),
                                  boundary_tol);
    } catch (const std::exception& e) {
      rows[k] = PhaseDiagramRow{};
      rows[k].Omega_C = grid[k].first;
      rows[k].Omega_I = grid[k].second;
      rows[k].error = e.what();
    }
  });
  return rows;
}

}  // namespace dicke
