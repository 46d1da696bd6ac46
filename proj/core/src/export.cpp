#include "dicke/export.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace dicke {

namespace {

std::string status(const std::string& error) {
  if (error.empty()) return "ok";
  std::string s = "error: " + error;
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '"') c = ';';
  return s;
}

void write_spectrum_fields(std::ostream& out, const ExcitationSpectrum& s) {
  out << format_double(s.omega_l) << ',' << format_double(s.omega_m) << ','
      << format_double(s.omega_u) << ',' << (s.stable ? "true" : "false") << ','
      << format_double(s.residual);
}

nlohmann::json complex_pair(std::complex<double> z) { return {z.real(), z.imag()}; }

std::filesystem::path sidecar(const std::filesystem::path& path) {
  auto s = path;
  s += ".json";
  return s;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string library_version() { return DICKE_VERSION_STRING; }

void write_phase_diagram_csv(std::ostream& out, std::span<const PhaseDiagramRow> rows) {
  out << "Omega_C,Omega_I,phase,mu_C,mu_I,gamma_C,gamma_I,beta_C,beta_I,E_G,status\n";
  for (const auto& r : rows) {
    out << format_double(r.Omega_C) << ',' << format_double(r.Omega_I) << ','
        << (r.error.empty() ? to_string(r.phase.tag) : "error") << ',' << format_double(r.mu_C)
        << ',' << format_double(r.mu_I) << ',' << format_double(r.gamma_C) << ','
        << format_double(r.gamma_I) << ',' << format_double(r.beta_C) << ','
        << format_double(r.beta_I) << ',' << format_double(r.E_G) << ',' << status(r.error)
        << '\n';
  }
}

void write_surface_csv(std::ostream& out, std::span<const SurfaceRow> rows) {
  out << "Omega_C,Omega_I,omega_l,omega_m,omega_u,stable,residual,status\n";
  for (const auto& r : rows) {
    out << format_double(r.Omega_C) << ',' << format_double(r.Omega_I) << ',';
    write_spectrum_fields(out, r.spectrum);
    out << ',' << status(r.error) << '\n';
  }
}

void write_ray_csv(std::ostream& out, std::span<const RayRow> rows) {
  out << "r,Omega_C,Omega_I,omega_l,omega_m,omega_u,stable,residual,status\n";
  for (const auto& r : rows) {
    out << format_double(r.r) << ',' << format_double(r.row.Omega_C) << ','
        << format_double(r.row.Omega_I) << ',';
    write_spectrum_fields(out, r.row.spectrum);
    out << ',' << status(r.row.error) << '\n';
  }
}

nlohmann::json to_json_value(const BasisSpec& basis) {
  return {{"N_C", basis.N_C}, {"N_I", basis.N_I}, {"n_max", basis.n_max}};
}

nlohmann::json to_json_value(const SymmetryReport& r) {
  return {{"parity_commutator_norm", r.parity_commutator_norm},
          {"TI_defect_norm", r.TI_defect_norm},
          {"TC_defect_norm", r.TC_defect_norm},
          {"hamiltonian_norm", r.hamiltonian_norm},
          {"sector_dims", {{"even", r.even_dim}, {"odd", r.odd_dim}}}};
}

nlohmann::json to_json_value(const OrderParameters& o) {
  nlohmann::json coh = nlohmann::json::array();
  for (auto z : o.coherences) coh.push_back(complex_pair(z));
  return {{"coherences", coh}, {"jx_C", o.jx_C}, {"jx_I", o.jx_I}};
}

nlohmann::json spectrum_report(const ModelParams& p, const FiniteSizeSpectrum& spectrum,
                               const GroundManifold& manifold, const SymmetryReport& symmetry,
                               const OrderParameters& order) {
  std::vector<double> ev(spectrum.eigenvalues.data(),
                         spectrum.eigenvalues.data() + spectrum.eigenvalues.size());
  std::vector<double> splittings;
  for (std::size_t i = 1; i < manifold.energies.size(); ++i)
    splittings.push_back(manifold.energies[i] - manifold.energies[0]);
  return {{"params", p},
          {"basis", to_json_value(spectrum.basis)},
          {"eigenvalues", ev},
          {"cutoff", {{"converged", spectrum.cutoff_converged},
                      {"residual", spectrum.cutoff_residual}}},
          {"manifold", {{"size", manifold.size},
                        {"splittings", splittings},
                        {"expected_size", manifold.expected_size},
                        {"ambiguous", manifold.ambiguous},
                        {"alternative_size", manifold.alternative_size}}},
          {"symmetry", to_json_value(symmetry)},
          {"order_parameters", to_json_value(order)}};
}

nlohmann::json holonomy_report(const Holonomy& h, const HolonomyReport& report) {
  nlohmann::json u = nlohmann::json::array();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) u.push_back(complex_pair(h.U(i, j)));
  nlohmann::json labels = nlohmann::json::array();
  for (auto l : h.basis_labels) labels.push_back(l);
  return {{"U", u},
          {"basis_labels", labels},
          {"eigenphases", h.measured_angles},
          {"predicted_angle", h.predicted_angle},
          {"best_fit_phi", report.best_phi},
          {"deviation", report.deviation},
          {"angle_error", report.angle_error},
          {"leakage", report.leakage},
          {"unitarity_defect", h.unitarity_defect},
          {"enclosed_area", h.loop.enclosed_area},
          {"n_steps", h.loop.n_steps},
          {"min_overlap_trace", h.min_overlap_trace}};
}

void write_eigenvectors(const std::filesystem::path& path, const FiniteSizeSpectrum& spectrum) {
  static_assert(std::endian::native == std::endian::little, "little-endian host expected");
  std::ofstream bin(path, std::ios::binary);
  if (!bin) throw std::runtime_error("cannot open " + path.string() + " for writing");
  const auto& v = spectrum.eigenvectors;
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      const double re = v(i, j).real();
      const double im = v(i, j).imag();
      bin.write(reinterpret_cast<const char*>(&re), sizeof re);
      bin.write(reinterpret_cast<const char*>(&im), sizeof im);
    }
  }
  if (!bin) throw std::runtime_error("write failed for " + path.string());

  std::vector<double> ev(spectrum.eigenvalues.data(),
                         spectrum.eigenvalues.data() + spectrum.eigenvalues.size());
  const nlohmann::json header{
      {"dim", v.rows()},
      {"n_vectors", v.cols()},
      {"dtype", "float64"},
      {"endianness", "little"},
      {"layout", "column-major vectors, each entry (re, im) interleaved"},
      {"ordering", "basis index = (e_C * (N_I + 1) + e_I) * (n_max + 1) + n, e_k = m_k + N_k/2"},
      {"phase_convention", "largest-magnitude amplitude real and positive"},
      {"basis", to_json_value(spectrum.basis)},
      {"eigenvalues", ev}};
  std::ofstream side(sidecar(path));
  if (!side) throw std::runtime_error("cannot open " + sidecar(path).string() + " for writing");
  side << header.dump(2) << '\n';
}

EigenvectorFile read_eigenvectors(const std::filesystem::path& path) {
  std::ifstream side(sidecar(path));
  if (!side) throw std::runtime_error("cannot open " + sidecar(path).string());
  const auto header = nlohmann::json::parse(side);

  EigenvectorFile f;
  f.basis = {header.at("basis").at("N_C").get<int>(), header.at("basis").at("N_I").get<int>(),
             header.at("basis").at("n_max").get<int>()};
  const auto dim = header.at("dim").get<Eigen::Index>();
  const auto cols = header.at("n_vectors").get<Eigen::Index>();
  if (static_cast<std::size_t>(dim) != f.basis.dim())
    throw std::runtime_error("eigenvector header: dim does not match basis");
  const auto ev = header.at("eigenvalues").get<std::vector<double>>();
  f.eigenvalues = Eigen::Map<const Eigen::VectorXd>(ev.data(), static_cast<Eigen::Index>(ev.size()));

  std::ifstream bin(path, std::ios::binary);
  if (!bin) throw std::runtime_error("cannot open " + path.string());
  f.vectors.resize(dim, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      double re = 0.0, im = 0.0;
      bin.read(reinterpret_cast<char*>(&re), sizeof re);
      bin.read(reinterpret_cast<char*>(&im), sizeof im);
      f.vectors(i, j) = {re, im};
    }
  }
  if (!bin) throw std::runtime_error("truncated eigenvector file " + path.string());
  return f;
}

}  // namespace dicke
