// Deterministic text and binary output formats.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "dicke/berry.hpp"
#include "dicke/bogoliubov.hpp"
#include "dicke/exactdiag.hpp"
#include "dicke/meanfield.hpp"

namespace dicke {

/// Round-trip formatting (17 significant digits, "%.17g").
std::string format_double(double x);

std::string library_version();

// CSV tables.  Each carries a trailing `status` column: "ok" or the error.
void write_phase_diagram_csv(std::ostream& out, std::span<const PhaseDiagramRow> rows);
void write_surface_csv(std::ostream& out, std::span<const SurfaceRow> rows);
/// Ray cuts lead with the radius r = sqrt(Omega_C^2 + Omega_I^2).
void write_ray_csv(std::ostream& out, std::span<const RayRow> rows);

nlohmann::json to_json_value(const BasisSpec& basis);
nlohmann::json to_json_value(const SymmetryReport& report);
nlohmann::json to_json_value(const OrderParameters& order);

/// params, basis {N_C, N_I, n_max}, eigenvalues[], manifold {size,
/// splittings[]}, symmetry report and order parameters.
nlohmann::json spectrum_report(const ModelParams& p, const FiniteSizeSpectrum& spectrum,
                               const GroundManifold& manifold, const SymmetryReport& symmetry,
                               const OrderParameters& order);

/// U (row-major [re, im] pairs), eigenphases, predicted angle, best-fit phi,
/// leakage and the per-step minimum overlap trace.
nlohmann::json holonomy_report(const Holonomy& h, const HolonomyReport& report);

/// Writes the eigenvector columns as interleaved little-endian real/imaginary
/// doubles (column after column) plus `<path>.json` describing the layout.
void write_eigenvectors(const std::filesystem::path& path, const FiniteSizeSpectrum& spectrum);

struct EigenvectorFile {
  BasisSpec basis;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXcd vectors;
};

EigenvectorFile read_eigenvectors(const std::filesystem::path& path);

}  // namespace dicke
