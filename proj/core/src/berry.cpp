#include "dicke/berry.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "parallel.hpp"

namespace dicke {

namespace {

using cd = std::complex<double>;

constexpr int kManifold = 4;

bool same_point(const CouplingPoint& a, const CouplingPoint& b) {
  return a.first == b.first && a.second == b.second;
}

}  // namespace

Eigen::MatrixXcd polar_unitary(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

double shoelace_area(std::span<const CouplingPoint> path) {
  double twice = 0.0;
  for (std::size_t i = 0; i + 1 < path.size(); ++i)
    twice += path[i].first * path[i + 1].second - path[i + 1].first * path[i].second;
  return 0.5 * twice;
}

LoopSpec polygon_loop(std::span<const CouplingPoint> vertices, int n_steps) {
  std::vector<CouplingPoint> v(vertices.begin(), vertices.end());
  if (v.size() > 1 && same_point(v.front(), v.back())) v.pop_back();
  if (v.empty()) throw std::invalid_argument("polygon_loop: no vertices");
  if (n_steps < 0) throw std::invalid_argument("polygon_loop: n_steps must be >= 0");

  LoopSpec loop;
  if (v.size() == 1 || n_steps == 0) {
    loop.points = {v.front()};
    return loop;
  }
  if (n_steps < static_cast<int>(v.size()))
    throw std::invalid_argument("polygon_loop: need at least one step per edge");

  const std::size_t edges = v.size();
  std::vector<double> length(edges);
  double perimeter = 0.0;
  for (std::size_t e = 0; e < edges; ++e) {
    const auto& a = v[e];
    const auto& b = v[(e + 1) % edges];
    length[e] = std::hypot(b.first - a.first, b.second - a.second);
    perimeter += length[e];
  }
  std::vector<int> steps(edges, 1);
  int assigned = static_cast<int>(edges);
  if (perimeter > 0.0) {
    for (std::size_t e = 0; e < edges; ++e) {
      steps[e] = std::max(1, static_cast<int>(std::lround(n_steps * length[e] / perimeter)));
    }
    assigned = 0;
    for (int s : steps) assigned += s;
  }
  // Settle rounding on the longest edge.
  const auto longest = static_cast<std::size_t>(
      std::max_element(length.begin(), length.end()) - length.begin());
  steps[longest] += n_steps - assigned;
  if (steps[longest] < 1) throw std::invalid_argument("polygon_loop: too few steps");

  loop.points.reserve(n_steps + 1);
  for (std::size_t e = 0; e < edges; ++e) {
    const auto& a = v[e];
    const auto& b = v[(e + 1) % edges];
    for (int s = 0; s < steps[e]; ++s) {
      const double t = static_cast<double>(s) / steps[e];
      loop.points.emplace_back(a.first + t * (b.first - a.first), a.second + t * (b.second - a.second));
    }
  }
  loop.points.push_back(v.front());
  loop.n_steps = n_steps;
  loop.enclosed_area = shoelace_area(loop.points);
  return loop;
}

LoopSpec square_loop(CouplingPoint center, double side, int n_steps) {
  const double h = 0.5 * side;
  const std::array<CouplingPoint, 4> v{{{center.first - h, center.second - h},
                                        {center.first + h, center.second - h},
                                        {center.first + h, center.second + h},
                                        {center.first - h, center.second + h}}};
  return polygon_loop(v, n_steps);
}

LoopSpec reversed(const LoopSpec& loop) {
  LoopSpec r = loop;
  std::reverse(r.points.begin(), r.points.end());
  r.enclosed_area = -loop.enclosed_area;
  return r;
}

LoopSpec concatenate(const LoopSpec& first, const LoopSpec& second) {
  if (first.points.empty() || second.points.empty() ||
      !same_point(first.points.front(), second.points.front()))
    throw std::invalid_argument("concatenate: loops must share their base point");
  LoopSpec out = first;
  out.points.insert(out.points.end(), second.points.begin() + 1, second.points.end());
  out.n_steps = first.n_steps + second.n_steps;
  out.enclosed_area = first.enclosed_area + second.enclosed_area;
  return out;
}

void validate_loop(const LoopSpec& loop, const ModelParams& p0) {
  if (loop.points.empty()) throw std::invalid_argument("loop has no points");
  if (static_cast<int>(loop.points.size()) != loop.n_steps + 1)
    throw std::invalid_argument("loop must hold n_steps + 1 points");
  if (!same_point(loop.points.front(), loop.points.back()))
    throw std::invalid_argument("loop is not closed");
  for (const auto& [oc, oi] : loop.points) {
    if (classify_phase(p0.with_couplings(oc, oi)).tag != PhaseTag::DoublySuperradiant) {
      std::ostringstream msg;
      msg << "loop point (" << oc << ", " << oi << ") is outside the doubly superradiant phase";
      throw std::invalid_argument(msg.str());
    }
  }
}

double geometric_angle(const LoopSpec& loop, const ModelParams& p0) {
  return 2.0 * loop.enclosed_area * std::sqrt(static_cast<double>(p0.N_C) * p0.N_I) /
         (p0.omega_cav * p0.omega_cav);
}

LoopFrames compute_frames(const LoopSpec& loop, const ModelParams& p0, const BasisSpec& basis,
                          const HolonomyOptions& opts) {
  validate_loop(loop, p0);
  LoopFrames out;
  out.loop = loop;
  out.basis = basis;
  out.p0 = p0;

  // The closing point repeats the base point; its frame is shared.
  const std::size_t distinct = loop.points.size() > 1 ? loop.points.size() - 1 : 1;
  std::vector<Eigen::MatrixXcd> frames(distinct);
  std::vector<std::exception_ptr> errors(distinct);
  const int n_low = std::min<int>(kManifold + 2, static_cast<int>(basis.dim()));
  detail::parallel_for(distinct, opts.threads, [&](std::size_t k) {
    try {
      const auto p = p0.with_couplings(loop.points[k].first, loop.points[k].second);
      const auto spec = diagonalize_by_parity(build_hamiltonian(p, basis), n_low, opts.diag);
      frames[k] = spec.eigenvectors.leftCols(kManifold);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  });
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  if (loop.points.size() > 1) frames.push_back(frames.front());
  out.frames = std::move(frames);

  const auto p_base = p0.with_couplings(loop.points.front().first, loop.points.front().second);
  const auto vacua = asymptotic_vacua(p_base, basis, VacuaOptions{opts.labeling_ratio});
  Eigen::MatrixXcd g(static_cast<Eigen::Index>(basis.dim()), kManifold);
  for (int b = 0; b < kManifold; ++b) g.col(b) = vacua[b];
  out.labeled_base = out.frames.front() * polar_unitary(out.frames.front().adjoint() * g);
  return out;
}

LoopFrames reversed(const LoopFrames& frames) {
  LoopFrames r = frames;
  r.loop = reversed(frames.loop);
  std::reverse(r.frames.begin(), r.frames.end());
  return r;
}

Holonomy transport(const LoopFrames& lf, const HolonomyOptions& opts) {
  std::mt19937_64 rng(opts.gauge_seed.value_or(0));
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);

  Holonomy h;
  h.loop = lf.loop;
  h.predicted_angle = geometric_angle(lf.loop, lf.p0);

  Eigen::MatrixXcd frame = lf.labeled_base;
  for (std::size_t s = 1; s < lf.frames.size(); ++s) {
    Eigen::MatrixXcd next = lf.frames[s];
    if (opts.gauge_seed)
      for (Eigen::Index c = 0; c < next.cols(); ++c) next.col(c) *= std::polar(1.0, angle(rng));

    const Eigen::MatrixXcd overlap = next.adjoint() * frame;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(overlap, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smallest = svd.singularValues().minCoeff();
    h.min_overlap_trace.push_back(smallest);
    if (smallest < opts.tracking_threshold) {
      std::ostringstream msg;
      msg << "lost track of the ground manifold at step " << s << " (overlap " << smallest
          << " < " << opts.tracking_threshold
          << "); use more steps or keep the loop away from the critical lines";
      throw TrackingError(msg.str(), static_cast<int>(s), smallest);
    }
    frame = next * (svd.matrixU() * svd.matrixV().adjoint());
  }

  const Eigen::MatrixXcd raw = lf.labeled_base.adjoint() * frame;
  h.U = polar_unitary(raw);
  h.unitarity_defect = (h.U.adjoint() * h.U - Matrix4c::Identity()).cwiseAbs().maxCoeff();

  Eigen::ComplexEigenSolver<Matrix4c> es(h.U);
  std::array<bool, 4> taken{};
  std::array<bool, 4> assigned{};
  // Greedy assignment by largest eigenvector weight.
  for (int round = 0; round < 4; ++round) {
    double best = -1.0;
    int bi = 0, bl = 0;
    for (int i = 0; i < 4; ++i) {
      if (taken[i]) continue;
      for (int l = 0; l < 4; ++l) {
        if (assigned[l]) continue;
        const double w = std::norm(es.eigenvectors()(l, i));
        if (w > best) {
          best = w;
          bi = i;
          bl = l;
        }
      }
    }
    taken[bi] = true;
    assigned[bl] = true;
    h.measured_angles[bl] = std::arg(es.eigenvalues()(bi));
  }
  return h;
}

Holonomy wilson_loop_holonomy(const LoopSpec& loop, const ModelParams& p0,
                              const BasisSpec& basis, const HolonomyOptions& opts) {
  return transport(compute_frames(loop, p0, basis, opts), opts);
}

HolonomyReport compare_holonomy(const Holonomy& h) {
  const std::array<double, 4> sign{1.0, -1.0, -1.0, 1.0};
  const cd w = h.U(0, 0) + h.U(3, 3) + std::conj(h.U(1, 1) + h.U(2, 2));

  HolonomyReport r;
  r.best_phi = std::abs(w) > 0.0 ? std::arg(w) : 0.0;
  Matrix4c gate = Matrix4c::Zero();
  for (int i = 0; i < 4; ++i) gate(i, i) = std::polar(1.0, sign[i] * r.best_phi);
  r.deviation = (h.U - gate).cwiseAbs().maxCoeff();
  r.predicted_angle = h.predicted_angle;
  r.angle_error = std::abs(r.best_phi - h.predicted_angle);
  Matrix4c off = h.U;
  off.diagonal().setZero();
  r.leakage = off.norm();
  return r;
}

}  // namespace dicke
