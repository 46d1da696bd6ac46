// Non-abelian holonomy of the four-fold ground manifold around
// closed loops in the (Omega_C, Omega_I) plane.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dicke/bogoliubov.hpp"
#include "dicke/exactdiag.hpp"
#include "dicke/model.hpp"

namespace dicke {

/// Discretized closed path; points.front() == points.back() and
/// points.size() == n_steps + 1.
struct LoopSpec {
  std::vector<CouplingPoint> points;
  int n_steps = 0;
  /// Signed shoelace area of the discretized path (counterclockwise > 0).
  double enclosed_area = 0.0;
};

inline constexpr int kDefaultLoopSteps = 256;

double shoelace_area(std::span<const CouplingPoint> closed_path);

/// Polygon through the given vertices (closing edge implied), with the steps
/// distributed over the edges in proportion to their length.  Every vertex
/// is a path point, so the shoelace area equals the polygon area.
LoopSpec polygon_loop(std::span<const CouplingPoint> vertices, int n_steps = kDefaultLoopSteps);

/// Counterclockwise axis-aligned square.
LoopSpec square_loop(CouplingPoint center, double side, int n_steps = kDefaultLoopSteps);

LoopSpec reversed(const LoopSpec& loop);

/// Runs `first` then `second`; both must start at the same base point.
LoopSpec concatenate(const LoopSpec& first, const LoopSpec& second);

/// Throws std::invalid_argument unless the path is closed and every point
/// is doubly superradiant for p0.
void validate_loop(const LoopSpec& loop, const ModelParams& p0);

/// 2 * area * sqrt(N_C N_I) / w_cav^2
double geometric_angle(const LoopSpec& loop, const ModelParams& p0);

/// Lost track of the ground manifold between two consecutive points.
class TrackingError : public std::runtime_error {
 public:
  TrackingError(const std::string& what, int step, double overlap)
      : std::runtime_error(what), step_(step), overlap_(overlap) {}
  int step() const { return step_; }
  double overlap() const { return overlap_; }

 private:
  int step_;
  double overlap_;
};

struct HolonomyOptions {
  /// Minimum singular value of a step overlap before tracking is declared lost.
  double tracking_threshold = 0.7;
  /// Deep-coupling ratio used only to build the labeling vacua at the base point.
  double labeling_ratio = 1e6;
  /// Per-point diagonalizations are independent; the product is sequential.
  unsigned threads = 1;
  DiagonalizeOptions diag;
  /// When set, every step frame is multiplied by random per-column phases.
  std::optional<std::uint64_t> gauge_seed;
};

/// Ground-manifold frames (dim x 4) at every loop point, with the base frame
/// rotated onto the (++, +-, -+, --) labels.
struct LoopFrames {
  LoopSpec loop;
  BasisSpec basis;
  ModelParams p0;
  std::vector<Eigen::MatrixXcd> frames;
  Eigen::MatrixXcd labeled_base;
};

LoopFrames compute_frames(const LoopSpec& loop, const ModelParams& p0, const BasisSpec& basis,
                          const HolonomyOptions& opts = {});

/// Reversed traversal of precomputed frames (same labeled base).
LoopFrames reversed(const LoopFrames& frames);

using Matrix4c = Eigen::Matrix<std::complex<double>, 4, 4>;

struct Holonomy {
  Matrix4c U;
  double unitarity_defect = 0.0;
  double predicted_angle = 0.0;
  /// Eigenphases of U, each assigned to the label its eigenvector overlaps most.
  std::array<double, 4> measured_angles{};
  LoopSpec loop;
  std::array<const char*, 4> basis_labels{"++", "+-", "-+", "--"};
  /// Smallest singular value of each step overlap.
  std::vector<double> min_overlap_trace;
};

/// Polar-unitarized parallel transport of the labeled base frame.
Holonomy transport(const LoopFrames& frames, const HolonomyOptions& opts = {});

Holonomy wilson_loop_holonomy(const LoopSpec& loop, const ModelParams& p0,
                              const BasisSpec& basis, const HolonomyOptions& opts = {});

struct HolonomyReport {
  /// phi maximizing Re tr(exp(-i phi S) U), S = diag(1, -1, -1, 1).
  double best_phi = 0.0;
  /// max |U - exp(i phi S)|
  double deviation = 0.0;
  double predicted_angle = 0.0;
  double angle_error = 0.0;
  /// Frobenius norm of the off-diagonal part of U.
  double leakage = 0.0;
};

HolonomyReport compare_holonomy(const Holonomy& h);

/// Closest unitary in the Frobenius norm.
Eigen::MatrixXcd polar_unitary(const Eigen::MatrixXcd& m);

}  // namespace dicke
