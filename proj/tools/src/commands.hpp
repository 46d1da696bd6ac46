// Command-line front end.  Every run is described by a RunConfig, which is
// embedded in each JSON output so a file can be regenerated from itself.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dicke/berry.hpp"
#include "dicke/bogoliubov.hpp"
#include "dicke/model.hpp"

namespace dicke::cli {

enum ExitCode : int { kOk = 0, kPartialFailure = 1, kUsage = 2, kIoError = 3 };

struct RunConfig {
  std::string subcommand;
  ModelParams params;
  /// grid, ray or loop description, as given
  nlohmann::json spec;
  /// Output path; empty or "-" writes to stdout.
  std::string out;
  std::string format = "csv";
  std::optional<double> tol;
  unsigned threads = 1;
  std::optional<int> n_max;
  int n_low = 8;
  std::vector<double> omegas;
  std::optional<std::uint64_t> gauge_seed;
  std::string eigenvectors;
};

nlohmann::json to_json_value(const RunConfig& cfg);

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inline JSON if the text starts with '{' or '[', otherwise a file path.
nlohmann::json load_json_argument(const std::string& text);

/// {"Omega_C": [min, max, n], "Omega_I": [min, max, n]}, or
/// {"points": [[Omega_C, Omega_I], ...]}.  Omega_C varies slowest.
std::vector<CouplingPoint> parse_grid(const nlohmann::json& j);

/// {"theta": t, "r_max": r, "n_points": n}
RaySpec parse_ray(const nlohmann::json& j);

/// {"vertices": [[x, y], ...], "n_steps": n} or
/// {"center": [x, y], "side": s, "n_steps": n} (counterclockwise square).
LoopSpec parse_loop(const nlohmann::json& j);

/// Executes the configured subcommand.  Output goes to cfg.out; diagnostics
/// go to `log`.  Returns an ExitCode.
int run(const RunConfig& cfg, std::ostream& log);

/// Parses argv into a RunConfig and runs it.
int main_entry(int argc, char** argv);

}  // namespace dicke::cli
