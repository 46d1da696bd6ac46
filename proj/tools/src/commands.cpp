#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "dicke/exactdiag.hpp"
#include "dicke/export.hpp"
#include "dicke/meanfield.hpp"

namespace dicke::cli {

using nlohmann::json;

namespace {

// Bad input from the user, reported with exit code kUsage.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

double tol_or(const RunConfig& cfg, double fallback) { return cfg.tol.value_or(fallback); }

json with_provenance(const RunConfig& cfg, json body) {
  json out{{"version", library_version()}, {"run_config", to_json_value(cfg)}};
  out.update(body);
  return out;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty() || cfg.out == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw IoError("cannot open output file '" + cfg.out + "' for writing");
  f << text;
  f.close();
  if (!f) throw IoError("write failed for output file '" + cfg.out + "'");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json spectrum_json(const ExcitationSpectrum& s) {
  return {{"omega_l", s.omega_l},   {"omega_m", s.omega_m},   {"omega_u", s.omega_u},
          {"stable", s.stable},     {"marginal", s.marginal}, {"residual", s.residual}};
}

std::string status_of(const std::string& error) { return error.empty() ? "ok" : error; }

int run_phase_diagram(const RunConfig& cfg, std::ostream& log) {
  const auto grid = parse_grid(cfg.spec);
  const auto rows = phase_diagram(grid, cfg.params, cfg.threads, tol_or(cfg, kDefaultBoundaryTol));
  int failed = 0;
  for (const auto& r : rows) failed += !r.error.empty();

  if (cfg.format == "csv") {
    std::ostringstream out;
    write_phase_diagram_csv(out, rows);
    emit(cfg, out.str());
  } else {
    json arr = json::array();
    for (const auto& r : rows)
      arr.push_back({{"Omega_C", r.Omega_C},
                     {"Omega_I", r.Omega_I},
                     {"phase", std::string(to_string(r.phase.tag))},
                     {"on_boundary_C", r.phase.on_boundary_C},
                     {"on_boundary_I", r.phase.on_boundary_I},
                     {"mu_C", r.mu_C},
                     {"mu_I", r.mu_I},
                     {"gamma_C", r.gamma_C},
                     {"gamma_I", r.gamma_I},
                     {"beta_C", r.beta_C},
                     {"beta_I", r.beta_I},
                     {"E_G", r.E_G},
                     {"status", status_of(r.error)}});
    emit(cfg, dump(with_provenance(cfg, {{"rows", arr}})));
  }
  if (failed) log << failed << " of " << rows.size() << " grid points failed\n";
  return failed ? kPartialFailure : kOk;
}

int run_spectrum(const RunConfig& cfg, std::ostream& log) {
  SpectrumOptions opts;
  if (cfg.tol) opts.zero_tol = *cfg.tol;
  int failed = 0;
  auto count = [&](const SurfaceRow& r) { failed += !r.error.empty() || !r.spectrum.stable; };

  if (cfg.spec.contains("theta")) {
    const auto rows = ray_cut(parse_ray(cfg.spec), cfg.params, cfg.threads, opts);
    for (const auto& r : rows) count(r.row);
    if (cfg.format == "csv") {
      std::ostringstream out;
      write_ray_csv(out, rows);
      emit(cfg, out.str());
    } else {
      json arr = json::array();
      for (const auto& r : rows) {
        json row{{"r", r.r}, {"Omega_C", r.row.Omega_C}, {"Omega_I", r.row.Omega_I}};
        row.update(spectrum_json(r.row.spectrum));
        row["status"] = status_of(r.row.error);
        arr.push_back(row);
      }
      emit(cfg, dump(with_provenance(
                    cfg, {{"rows", arr}, {"lower_branch_zeros", count_lower_branch_zeros(rows)}})));
    }
    if (failed) log << failed << " of " << rows.size() << " ray points failed\n";
  } else {
    const auto rows = spectrum_surface(parse_grid(cfg.spec), cfg.params, cfg.threads, opts);
    for (const auto& r : rows) count(r);
    if (cfg.format == "csv") {
      std::ostringstream out;
      write_surface_csv(out, rows);
      emit(cfg, out.str());
    } else {
      json arr = json::array();
      for (const auto& r : rows) {
        json row{{"Omega_C", r.Omega_C}, {"Omega_I", r.Omega_I}};
        row.update(spectrum_json(r.spectrum));
        row["status"] = status_of(r.error);
        arr.push_back(row);
      }
      emit(cfg, dump(with_provenance(cfg, {{"rows", arr}})));
    }
    if (failed) log << failed << " of " << rows.size() << " grid points failed\n";
  }
  return failed ? kPartialFailure : kOk;
}

int run_exact(const RunConfig& cfg, std::ostream& log) {
  if (cfg.format != "json") throw InputError("exact: only --format json is supported");
  if (cfg.n_low < 6) throw InputError("exact: --n-low must be >= 6 to resolve the ground manifold");
  const auto& p = cfg.params;
  p.validate();

  FiniteSizeSpectrum spec;
  BasisSpec basis;
  if (cfg.n_max) {
    basis = BasisSpec::for_params(p, *cfg.n_max);
    const auto h = build_hamiltonian(p, basis);
    spec = diagonalize(h, std::min<int>(cfg.n_low, static_cast<int>(basis.dim())));
  } else {
    auto r = cutoff_convergence(p, tol_or(cfg, 1e-8), cfg.n_low);
    basis = r.basis;
    spec = std::move(r.spectrum);
  }
  if (spec.n_computed < 6) throw InputError("exact: basis too small for a ground-manifold analysis");
  const auto manifold = ground_manifold(spec, p);
  const auto symmetry = check_symmetries(p, basis);
  const auto order = order_parameters(manifold);
  if (!cfg.eigenvectors.empty()) {
    try {
      write_eigenvectors(cfg.eigenvectors, spec);
    } catch (const std::exception& e) {
      throw IoError(e.what());
    }
  }
  emit(cfg, dump(with_provenance(cfg, spectrum_report(p, spec, manifold, symmetry, order))));
  if (manifold.ambiguous) {
    log << "ground manifold grouping is ambiguous (sizes " << manifold.size << " and "
        << manifold.alternative_size << ")\n";
    return kPartialFailure;
  }
  return kOk;
}

int run_splittings(const RunConfig& cfg, std::ostream& log) {
  if (cfg.omegas.empty()) throw InputError("splittings: --omegas is empty");
  struct Row {
    double omega;
    Splittings s;
    int n_max = 0;
    std::string error;
    std::string status() const {
      if (!error.empty()) return error;
      return s.ambiguous ? "ambiguous" : "ok";
    }
  };
  std::vector<Row> rows;
  for (double w : cfg.omegas) {
    Row row{w, {}, 0, {}};
    try {
      const auto p = cfg.params.with_couplings(w, w);
      BasisSpec basis;
      if (cfg.n_max)
        basis = BasisSpec::for_params(p, *cfg.n_max);
      else
        basis = cutoff_convergence(p, tol_or(cfg, 1e-10), 8).basis;
      row.n_max = basis.n_max;
      row.s = ground_splittings(p, basis);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }

  // ln(splitting_k) against Omega^2 over the rows that succeeded.
  std::array<std::optional<double>, 3> slope;
  std::vector<const Row*> good;
  for (const auto& r : rows)
    if (r.error.empty()) good.push_back(&r);
  if (good.size() >= 2) {
    for (int k = 0; k < 3; ++k) {
      double mx = 0, my = 0;
      for (auto* r : good) {
        mx += r->omega * r->omega;
        my += std::log(r->s.values[k]);
      }
      mx /= good.size();
      my /= good.size();
      double sxy = 0, sxx = 0;
      for (auto* r : good) {
        const double dx = r->omega * r->omega - mx;
        sxy += dx * (std::log(r->s.values[k]) - my);
        sxx += dx * dx;
      }
      if (sxx > 0) slope[k] = sxy / sxx;
    }
  }

  int failed = static_cast<int>(rows.size() - good.size());
  if (cfg.format == "csv") {
    std::ostringstream out;
    out << "Omega,splitting_1,splitting_2,splitting_3,n_max,manifold_size,status\n";
    for (const auto& r : rows) {
      out << format_double(r.omega);
      for (double v : r.s.values) out << ',' << format_double(v);
      std::string st = r.status();
      for (char& c : st)
        if (c == ',' || c == '\n') c = ';';
      out << ',' << r.n_max << ',' << r.s.manifold_size << ',' << st << '\n';
    }
    for (int k = 0; k < 3; ++k)
      out << "# slope ln(splitting_" << k + 1 << ") vs Omega^2: "
          << (slope[k] ? format_double(*slope[k]) : "nan") << '\n';
    emit(cfg, out.str());
  } else {
    json arr = json::array();
    for (const auto& r : rows)
      arr.push_back({{"Omega", r.omega},
                     {"splittings", r.s.values},
                     {"n_max", r.n_max},
                     {"manifold_size", r.s.manifold_size},
                     {"status", r.status()}});
    json fits = json::array();
    for (const auto& s : slope) fits.push_back(s ? json(*s) : json(nullptr));
    emit(cfg, dump(with_provenance(cfg, {{"rows", arr}, {"slopes_vs_Omega2", fits}})));
  }
  for (const auto& r : rows)
    if (r.error.empty() && r.s.ambiguous)
      log << "warning: Omega = " << r.omega << ": the four lowest levels are not clearly "
          << "separated from the rest; splittings reported anyway\n";
  if (failed) log << failed << " of " << rows.size() << " couplings failed\n";
  return failed ? kPartialFailure : kOk;
}

int run_berry(const RunConfig& cfg, std::ostream& log) {
  if (cfg.format != "json") throw InputError("berry: only --format json is supported");
  const auto loop = parse_loop(cfg.spec);
  try {
    validate_loop(loop, cfg.params);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  int n_max = 0;
  if (cfg.n_max) {
    n_max = *cfg.n_max;
  } else {
    for (const auto& [oc, oi] : loop.points)
      n_max = std::max(n_max, initial_cutoff(cfg.params.with_couplings(oc, oi)));
  }
  HolonomyOptions opts;
  opts.threads = cfg.threads;
  opts.gauge_seed = cfg.gauge_seed;
  if (cfg.tol) opts.tracking_threshold = *cfg.tol;
  const auto basis = BasisSpec::for_params(cfg.params, n_max);
  Holonomy h;
  try {
    h = wilson_loop_holonomy(loop, cfg.params, basis, opts);
  } catch (const TrackingError& e) {
    log << e.what() << '\n';
    return kPartialFailure;
  }
  auto body = holonomy_report(h, compare_holonomy(h));
  body["basis"] = to_json_value(basis);
  emit(cfg, dump(with_provenance(cfg, body)));
  return kOk;
}

std::array<double, 3> triple(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 3) throw InputError(std::string("grid: '") + key + "' must be [min, max, n]");
  if (!v[2].is_number_integer() || v[2].get<int>() < 1)
    throw InputError(std::string("grid: '") + key + "' count must be a positive integer");
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

CouplingPoint pair_of(const json& v, const char* what) {
  if (!v.is_array() || v.size() != 2) throw InputError(std::string(what) + ": expected [Omega_C, Omega_I]");
  return {v[0].get<double>(), v[1].get<double>()};
}

}  // namespace

json to_json_value(const RunConfig& cfg) {
  json j{{"subcommand", cfg.subcommand},
         {"params", cfg.params},
         {"spec", cfg.spec},
         {"format", cfg.format},
         {"threads", cfg.threads},
         {"n_low", cfg.n_low}};
  j["tol"] = cfg.tol ? json(*cfg.tol) : json(nullptr);
  j["n_max"] = cfg.n_max ? json(*cfg.n_max) : json(nullptr);
  j["gauge_seed"] = cfg.gauge_seed ? json(*cfg.gauge_seed) : json(nullptr);
  if (!cfg.omegas.empty()) j["omegas"] = cfg.omegas;
  return j;
}

json load_json_argument(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  try {
    if (first != std::string::npos && (text[first] == '{' || text[first] == '['))
      return json::parse(text);
    std::ifstream f(text);
    if (!f) throw IoError("cannot open input file '" + text + "'");
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw InputError("invalid JSON in '" + text + "': " + e.what());
  }
}

std::vector<CouplingPoint> parse_grid(const json& j) {
  try {
    std::vector<CouplingPoint> out;
    if (j.contains("points")) {
      for (const auto& v : j.at("points")) out.push_back(pair_of(v, "grid point"));
      return out;
    }
    const auto c = triple(j, "Omega_C");
    const auto i = triple(j, "Omega_I");
    auto axis = [](const std::array<double, 3>& a, int k) {
      const int n = static_cast<int>(a[2]);
      return n == 1 ? a[0] : a[0] + (a[1] - a[0]) * k / (n - 1);
    };
    for (int a = 0; a < static_cast<int>(c[2]); ++a)
      for (int b = 0; b < static_cast<int>(i[2]); ++b) out.emplace_back(axis(c, a), axis(i, b));
    return out;
  } catch (const json::exception& e) {
    throw InputError(std::string("grid: ") + e.what());
  }
}

RaySpec parse_ray(const json& j) {
  try {
    RaySpec r;
    r.theta = j.at("theta").get<double>();
    r.r_max = j.at("r_max").get<double>();
    r.n_points = j.value("n_points", 101);
    if (r.n_points < 2) throw InputError("ray: n_points must be >= 2");
    return r;
  } catch (const json::exception& e) {
    throw InputError(std::string("ray: ") + e.what());
  }
}

LoopSpec parse_loop(const json& j) {
  try {
    const int steps = j.value("n_steps", kDefaultLoopSteps);
    if (j.contains("vertices")) {
      std::vector<CouplingPoint> v;
      for (const auto& p : j.at("vertices")) v.push_back(pair_of(p, "loop vertex"));
      return polygon_loop(v, steps);
    }
    return square_loop(pair_of(j.at("center"), "loop center"), j.at("side").get<double>(), steps);
  } catch (const json::exception& e) {
    throw InputError(std::string("loop: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
}

int run(const RunConfig& cfg, std::ostream& log) {
  try {
    if (cfg.format != "csv" && cfg.format != "json")
      throw InputError("--format must be csv or json");
    if (cfg.subcommand == "phase-diagram") return run_phase_diagram(cfg, log);
    if (cfg.subcommand == "spectrum") return run_spectrum(cfg, log);
    if (cfg.subcommand == "exact") return run_exact(cfg, log);
    if (cfg.subcommand == "splittings") return run_splittings(cfg, log);
    if (cfg.subcommand == "berry") return run_berry(cfg, log);
    throw InputError("unknown subcommand '" + cfg.subcommand + "'");
  } catch (const IoError& e) {
    log << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::invalid_argument& e) {
    log << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kPartialFailure;
  }
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Two-chain Dicke model: phase diagram, excitation spectra, exact "
               "diagonalization and ground-manifold holonomy"};
  app.set_version_flag("--version", library_version());
  app.require_subcommand(1);

  RunConfig cfg;
  std::string params_arg, spec_arg;
  unsigned threads = 0;
  std::optional<double> tol;
  std::optional<int> n_max;
  std::optional<std::uint64_t> seed;

  auto common = [&](CLI::App* sub, const char* spec_flag, const char* spec_help,
                    const char* default_format) {
    sub->parse_complete_callback([&cfg, default_format, sub] {
      if (sub->count("--format") == 0) cfg.format = default_format;
    });
    sub->add_option("--params", params_arg, "model parameters: inline JSON or a file path")
        ->required();
    if (spec_flag) sub->add_option(spec_flag, spec_arg, spec_help);
    sub->add_option("--out", cfg.out, "output path (default: stdout)");
    sub->add_option("--format", cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", threads, "worker threads (default: all cores for sweeps)");
    sub->add_option("--tol", tol, "tolerance override (see README for its meaning per command)");
  };

  auto* pd = app.add_subcommand("phase-diagram", "mean-field phase diagram on a grid");
  common(pd, "--grid", "grid spec: inline JSON or a file path", "csv");
  pd->get_option("--grid")->required();

  auto* sp = app.add_subcommand("spectrum", "excitation branches on a grid or along a ray");
  common(sp, nullptr, nullptr, "csv");
  auto* g = sp->add_option("--grid", spec_arg, "grid spec: inline JSON or a file path");
  auto* r = sp->add_option("--ray", spec_arg, "ray spec: inline JSON or a file path");
  g->excludes(r);

  auto* ex = app.add_subcommand("exact", "finite-size exact diagonalization");
  common(ex, nullptr, nullptr, "json");
  ex->add_option("--n-max", n_max, "photon cutoff (default: converge automatically)");
  ex->add_option("--n-low", cfg.n_low, "number of eigenpairs")->default_val(8);
  ex->add_option("--eigenvectors", cfg.eigenvectors, "also write eigenvectors to this path");

  auto* sl = app.add_subcommand("splittings", "ground-manifold splittings along Omega_C = Omega_I");
  common(sl, nullptr, nullptr, "csv");
  sl->add_option("--omegas", cfg.omegas, "couplings to scan")->delimiter(',')->required();
  sl->add_option("--n-max", n_max, "photon cutoff (default: converge per point)");

  auto* be = app.add_subcommand("berry", "holonomy of the four-fold ground manifold around a loop");
  common(be, "--loop", "loop spec: inline JSON or a file path", "json");
  be->get_option("--loop")->required();
  be->add_option("--n-max", n_max, "photon cutoff (default: estimated from the loop)");
  be->add_option("--gauge-seed", seed, "randomize per-step eigenvector phases with this seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (cfg.subcommand == "spectrum" && spec_arg.empty()) {
    std::cerr << "error: spectrum needs --grid or --ray\n";
    return kUsage;
  }
  try {
    cfg.params = load_json_argument(params_arg).get<ModelParams>();
    if (!spec_arg.empty()) cfg.spec = load_json_argument(spec_arg);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  if (threads == 0) {
    // Holonomy products are ordered; one thread unless asked otherwise.
    threads = cfg.subcommand == "berry" ? 1 : std::max(1u, std::thread::hardware_concurrency());
  }
  cfg.threads = threads;
  cfg.tol = tol;
  cfg.n_max = n_max;
  cfg.gauge_seed = seed;
  return run(cfg, std::cerr);
}

}  // namespace dicke::cli
