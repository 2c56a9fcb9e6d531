#pragma once

#include <optional>

#include "hmean/loss.hpp"

namespace hmean {

struct SolverInit {
  enum class Kind { FirstPoint, Medoid, User } kind = Kind::Medoid;
  std::optional<ManifoldPoint> point;

  static SolverInit first_point() { return {Kind::FirstPoint, std::nullopt}; }
  static SolverInit medoid() { return {Kind::Medoid, std::nullopt}; }
  static SolverInit user(ManifoldPoint p) { return {Kind::User, std::move(p)}; }
};

struct SolverConfig {
  double step_alpha = 0.25;
  double grad_tol = 1e-9;
  int max_iter = 10'000;
  SolverInit init = SolverInit::medoid();
};

struct EstimateReport {
  ManifoldPoint mean;
  int iterations = 0;
  double final_grad_norm = 0.0;
  double objective_value = 0.0;
  bool converged = false;
  std::vector<double> objective_trace;
  /// Whether the final iterate left the data's bounding ball (advisory).
  bool left_support_ball = false;
};

/// Riemannian gradient descent for the (pseudo) Huber mean, c in (0, inf).
/// Delegates to frechet_mean / geometric_median at the c extremes.
EstimateReport huber_mean(const Sample& sample, const LossSpec& spec,
                          const SolverConfig& cfg = {});

/// L2 center of mass. The euclidean case short-circuits to the arithmetic
/// average.
EstimateReport frechet_mean(const Sample& sample, const SolverConfig& cfg = {});

/// Manifold Weiszfeld iteration for the L1 center of mass, with the
/// data-point collision safeguard and subgradient optimality test.
EstimateReport geometric_median(const Sample& sample,
                                const SolverConfig& cfg = {});

/// Median absolute deviation of d(x_i, center), divided by 0.6745.
double mad_scale(const Sample& sample, const ManifoldPoint& center);

/// 1.345 * mad_scale about the geometric median.
double default_cutoff(const Sample& sample);

/// Data point minimizing the empirical objective among the data points.
ManifoldPoint medoid(const Sample& sample, const LossSpec& spec);

struct SupportDiagnostic {
  double radius_r0;
  ManifoldPoint ball_center;
  bool within;
};

/// Advisory check of the uniqueness support condition: reports the support
/// radius r0 implied by the curvature bound and the cutoff, and whether all
/// points fit in the r0-ball centered at the medoid.
SupportDiagnostic uniqueness_support_check(const Sample& sample,
                                           const LossSpec& spec);

}  // namespace hmean
