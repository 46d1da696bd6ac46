// Displaced-frame mean fields and the thermodynamic-limit ground energy.
#pragma once

#include <array>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "dicke/bogoliubov.hpp"
#include "dicke/model.hpp"

namespace dicke {

/// One of the (eps_C, eps_I) symmetry-broken branches.
struct MeanFieldSolution {
  int eps_C = 1;
  int eps_I = 1;
  double gamma_C = 0.0;
  double gamma_I = 0.0;
  double beta_C = 0.0;
  double beta_I = 0.0;
  /// <a> = eps_C sqrt(gamma_C) + i eps_I sqrt(gamma_I)
  std::complex<double> coherence;
};

/// Throws std::invalid_argument unless both signs are +1 or -1.
MeanFieldSolution mean_fields(const ModelParams& p, int eps_C, int eps_I);

/// Branches in the fixed order (++, +-, -+, --).
std::array<MeanFieldSolution, 4> all_branches(const ModelParams& p);

/// Ground energy including the zero-point contribution of the three
/// excitation branches.  A zero branch frequency is accepted; a NaN one is
/// rejected with std::domain_error.
double ground_state_energy(const ModelParams& p, const ExcitationSpectrum& spectrum);

/// Convenience overload that computes the spectrum.
double ground_state_energy(const ModelParams& p);

struct PhaseDiagramRow {
  double Omega_C = 0.0;
  double Omega_I = 0.0;
  Phase phase;
  double mu_C = 1.0;
  double mu_I = 1.0;
  double gamma_C = 0.0;
  double gamma_I = 0.0;
  double beta_C = 0.0;
  double beta_I = 0.0;
  double E_G = 0.0;
  std::string error;
};

PhaseDiagramRow phase_diagram_row(const ModelParams& p,
                                  double boundary_tol = kDefaultBoundaryTol);

/// Rows in input order; per-point failures land in the row's error field.
std::vector<PhaseDiagramRow> phase_diagram(std::span<const CouplingPoint> grid,
                                           const ModelParams& p0, unsigned threads = 1,
                                           double boundary_tol = kDefaultBoundaryTol);

}  // namespace dicke
