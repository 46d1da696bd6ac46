// Parameter space and phase structure of the two-chain Dicke model
//
//   H = w_cav a^+a + w0_C J_z^C + w0_I J_z^I
//     + (2 Omega_C / sqrt(N_C)) (a + a^+) J_x^C
//     + i (2 Omega_I / sqrt(N_I)) (a - a^+) J_x^I
//
// Frequencies are angular frequencies with hbar = 1; energies are reported
// in the same units throughout the library.
#pragma once

#include <string_view>
#include <utility>

#include <nlohmann/json_fwd.hpp>

namespace dicke {

/// One Hamiltonian instance.
struct ModelParams {
  double omega_cav = 1.0;
  double omega0_C = 1.0;
  double omega0_I = 1.0;
  double Omega_C = 0.0;
  double Omega_I = 0.0;
  int N_C = 1;
  int N_I = 1;

  /// Throws std::invalid_argument unless frequencies > 0, couplings >= 0
  /// and both chain sizes >= 1.
  void validate() const;

  ModelParams with_couplings(double coupling_C, double coupling_I) const {
    ModelParams p = *this;
    p.Omega_C = coupling_C;
    p.Omega_I = coupling_I;
    return p;
  }

  bool operator==(const ModelParams&) const = default;
};

/// Resonant parameters (all frequencies 1) with the given couplings.
ModelParams resonant(double coupling_C, double coupling_I, int N_C = 1,
                     int N_I = 1);

/// Exchanges the roles of the two chains: (Omega_C, w0_C, N_C) <-> (Omega_I, w0_I, N_I).
ModelParams swap_chains(const ModelParams& p);

struct ChainPair {
  double C;
  double I;
};

/// Critical couplings Omega_k^cr = sqrt(w_cav w0_k) / 2.
ChainPair critical_couplings(const ModelParams& p);

/// mu_k = 1 at or below the critical coupling, w0_k w_cav / (4 Omega_k^2) above it.
ChainPair mu_tilde(const ModelParams& p);

enum class PhaseTag { Normal, SuperradiantC, SuperradiantI, DoublySuperradiant };

struct Phase {
  PhaseTag tag = PhaseTag::Normal;
  bool on_boundary_C = false;
  bool on_boundary_I = false;

  bool superradiant_C() const {
    return tag == PhaseTag::SuperradiantC || tag == PhaseTag::DoublySuperradiant;
  }
  bool superradiant_I() const {
    return tag == PhaseTag::SuperradiantI || tag == PhaseTag::DoublySuperradiant;
  }
};

/// Relative tolerance |Omega_k - Omega_k^cr| <= tol * Omega_k^cr for the boundary flags.
inline constexpr double kDefaultBoundaryTol = 1e-9;

/// Strict comparison against the critical couplings; a coupling exactly at
/// its critical value classifies with the sub-critical side.
Phase classify_phase(const ModelParams& p, double boundary_tol = kDefaultBoundaryTol);

std::string_view to_string(PhaseTag tag);

// Flat JSON object with exactly the keys omega_cav, omega0_C, omega0_I,
// Omega_C, Omega_I, N_C, N_I.  from_json rejects missing and unknown keys.
void to_json(nlohmann::json& j, const ModelParams& p);
void from_json(const nlohmann::json& j, ModelParams& p);

}  // namespace dicke
