#include "dicke/model.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace dicke {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("ModelParams: " + what);
}

double mu_for(double coupling, double critical, double omega_cav, double omega0) {
  if (coupling <= critical) return 1.0;
  return omega0 * omega_cav / (4.0 * coupling * coupling);
}

}  // namespace

void ModelParams::validate() const {
  require(std::isfinite(omega_cav) && omega_cav > 0.0, "omega_cav must be > 0");
  require(std::isfinite(omega0_C) && omega0_C > 0.0, "omega0_C must be > 0");
  require(std::isfinite(omega0_I) && omega0_I > 0.0, "omega0_I must be > 0");
  require(std::isfinite(Omega_C) && Omega_C >= 0.0, "Omega_C must be >= 0");
  require(std::isfinite(Omega_I) && Omega_I >= 0.0, "Omega_I must be >= 0");
  require(N_C >= 1, "N_C must be >= 1");
  require(N_I >= 1, "N_I must be >= 1");
}

ModelParams resonant(double coupling_C, double coupling_I, int N_C, int N_I) {
  ModelParams p;
  p.Omega_C = coupling_C;
  p.Omega_I = coupling_I;
  p.N_C = N_C;
  p.N_I = N_I;
  return p;
}

ModelParams swap_chains(const ModelParams& p) {
  ModelParams q = p;
  q.omega0_C = p.omega0_I;
  q.omega0_I = p.omega0_C;
  q.Omega_C = p.Omega_I;
  q.Omega_I = p.Omega_C;
  q.N_C = p.N_I;
  q.N_I = p.N_C;
  return q;
}

ChainPair critical_couplings(const ModelParams& p) {
  p.validate();
  return {0.5 * std::sqrt(p.omega_cav * p.omega0_C),
          0.5 * std::sqrt(p.omega_cav * p.omega0_I)};
}

ChainPair mu_tilde(const ModelParams& p) {
  const auto cr = critical_couplings(p);
  return {mu_for(p.Omega_C, cr.C, p.omega_cav, p.omega0_C),
          mu_for(p.Omega_I, cr.I, p.omega_cav, p.omega0_I)};
}

Phase classify_phase(const ModelParams& p, double boundary_tol) {
  if (!(boundary_tol >= 0.0)) throw std::invalid_argument("boundary_tol must be >= 0");
  const auto cr = critical_couplings(p);
  const bool above_C = p.Omega_C > cr.C;
  const bool above_I = p.Omega_I > cr.I;

  Phase phase;
  if (above_C && above_I) {
    phase.tag = PhaseTag::DoublySuperradiant;
  } else if (above_C) {
    phase.tag = PhaseTag::SuperradiantC;
  } else if (above_I) {
    phase.tag = PhaseTag::SuperradiantI;
  }
  phase.on_boundary_C = std::abs(p.Omega_C - cr.C) <= boundary_tol * cr.C;
  phase.on_boundary_I = std::abs(p.Omega_I - cr.I) <= boundary_tol * cr.I;
  return phase;
}

std::string_view to_string(PhaseTag tag) {
  switch (tag) {
    case PhaseTag::Normal: return "normal";
    case PhaseTag::SuperradiantC: return "superradiant_C";
    case PhaseTag::SuperradiantI: return "superradiant_I";
    case PhaseTag::DoublySuperradiant: return "doubly_superradiant";
  }
  return "unknown";
}

void to_json(nlohmann::json& j, const ModelParams& p) {
  j = nlohmann::json{{"omega_cav", p.omega_cav}, {"omega0_C", p.omega0_C},
                     {"omega0_I", p.omega0_I},   {"Omega_C", p.Omega_C},
                     {"Omega_I", p.Omega_I},     {"N_C", p.N_C},
                     {"N_I", p.N_I}};
}

void from_json(const nlohmann::json& j, ModelParams& p) {
  static constexpr std::array<std::string_view, 7> keys{
      "omega_cav", "omega0_C", "omega0_I", "Omega_C", "Omega_I", "N_C", "N_I"};
  if (!j.is_object()) throw std::invalid_argument("ModelParams: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto k : keys) known = known || key == k;
    if (!known) throw std::invalid_argument("ModelParams: unknown key '" + key + "'");
  }
  for (auto k : keys) {
    if (!j.contains(std::string(k)))
      throw std::invalid_argument("ModelParams: missing key '" + std::string(k) + "'");
  }
  for (auto k : {"N_C", "N_I"}) {
    if (!j.at(k).is_number_integer())
      throw std::invalid_argument(std::string("ModelParams: ") + k + " must be an integer");
  }
  ModelParams q;
  q.omega_cav = j.at("omega_cav").get<double>();
  q.omega0_C = j.at("omega0_C").get<double>();
  q.omega0_I = j.at("omega0_I").get<double>();
  q.Omega_C = j.at("Omega_C").get<double>();
  q.Omega_I = j.at("Omega_I").get<double>();
  q.N_C = j.at("N_C").get<int>();
  q.N_I = j.at("N_I").get<int>();
  q.validate();
  p = q;
}

}  // namespace dicke
