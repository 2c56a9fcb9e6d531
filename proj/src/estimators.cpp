#include "hmean/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hmean {

namespace {

ManifoldPoint initial_point(const Sample& sample, const LossSpec& spec,
                            const SolverConfig& cfg) {
  switch (cfg.init.kind) {
    case SolverInit::Kind::FirstPoint:
      return sample.points.front();
    case SolverInit::Kind::User:
      if (!cfg.init.point) throw ContractViolation("user init without a point");
      if (!(cfg.init.point->tag == sample.tag))
        throw ContractViolation("init point tag mismatch");
      return *cfg.init.point;
    case SolverInit::Kind::Medoid:
      return medoid(sample, spec);
  }
  return sample.points.front();
}

// Applies exp_map with step halving on cut-locus events.
ManifoldPoint guarded_step(const ManifoldPoint& m, const Eigen::VectorXd& step) {
  double scale = 1.0;
  for (int attempt = 0; attempt < 30; ++attempt) {
    try {
      return exp_map(m, TangentVector{m, scale * step});
    } catch (const CutLocusError&) {
      scale *= 0.5;
    }
  }
  throw CutLocusError("gradient step hit the cut locus repeatedly");
}

bool left_bounding_ball(const Sample& sample, const ManifoldPoint& m) {
  // Bounding ball: centered at the first data point with radius = data
  // diameter from that point.
  double radius = 0.0;
  for (const auto& x : sample.points)
    radius = std::max(radius, dist(sample.points.front(), x));
  return dist(sample.points.front(), m) > radius + 1e-9;
}

EstimateReport descend(const Sample& sample, const LossSpec& spec,
                       const SolverConfig& cfg) {
  if (cfg.step_alpha <= 0.0 || cfg.step_alpha > 1.0)
    throw std::domain_error("step_alpha must lie in (0, 1]");
  if (cfg.grad_tol <= 0.0) throw std::domain_error("grad_tol must be positive");

  EstimateReport report;
  report.mean = initial_point(sample, spec, cfg);
  if (sample.size() == 1) {
    report.mean = sample.points.front();
    report.converged = true;
    report.objective_value = 0.0;
    return report;
  }

  ManifoldPoint m = report.mean;
  double best_objective = objective(sample, m, spec);
  ManifoldPoint best = m;
  report.objective_trace.push_back(best_objective);

  int iter = 0;
  for (; iter < cfg.max_iter; ++iter) {
    // Gradient and the mean influence weight in one pass; the weight gives
    // a curvature-free estimate of the Hessian scale, so the effective step
    // alpha * (2 / w_bar) reduces to plain alpha * grad when all residuals
    // are inside the cutoff and stays well-conditioned for small c.
    Eigen::VectorXd g = Eigen::VectorXd::Zero(m.tag.dimension());
    double weight_sum = 0.0;
    for (const auto& x : sample.points) {
      const TangentVector l = log_map(m, x);
      const double d = l.norm();
      const double w = d < 1e-14 ? 2.0 : rho_prime(spec, d) / d;
      weight_sum += w;
      if (d >= 1e-14) g += w * l.coeffs;
    }
    g /= sample.size();
    const double grad_norm = g.norm();
    report.final_grad_norm = grad_norm;
    if (grad_norm <= cfg.grad_tol) {
      report.converged = true;
      break;
    }
    const double w_bar = weight_sum / sample.size();
    const double eta = cfg.step_alpha * 2.0 / w_bar;
    m = guarded_step(m, eta * g);

    const double obj = objective(sample, m, spec);
    report.objective_trace.push_back(obj);
    if (obj <= best_objective) {
      best_objective = obj;
      best = m;
    }
  }

  report.iterations = iter;
  report.mean = report.converged ? m : best;
  report.objective_value = objective(sample, report.mean, spec);
  report.left_support_ball = left_bounding_ball(sample, report.mean);
  return report;
}

}  // namespace

ManifoldPoint medoid(const Sample& sample, const LossSpec& spec) {
  int best = 0;
  double best_obj = objective(sample, sample.points.front(), spec);
  for (int i = 1; i < sample.size(); ++i) {
    const double obj = objective(sample, sample.points[i], spec);
    if (obj < best_obj) {
      best_obj = obj;
      best = i;
    }
  }
  return sample.points[best];
}

EstimateReport huber_mean(const Sample& sample, const LossSpec& spec,
                          const SolverConfig& cfg) {
  if (spec.cutoff.is_infinite()) return frechet_mean(sample, cfg);
  if (spec.cutoff.is_zero()) return geometric_median(sample, cfg);
  return descend(sample, spec, cfg);
}

EstimateReport frechet_mean(const Sample& sample, const SolverConfig& cfg) {
  if (sample.tag.kind == ManifoldKind::Euclidean) {
    Eigen::VectorXd avg = Eigen::VectorXd::Zero(sample.tag.k);
    for (const auto& x : sample.points) avg += x.coords;
    avg /= sample.size();
    EstimateReport report;
    report.mean = ManifoldPoint::euclidean(avg);
    report.converged = true;
    const LossSpec l2 = LossSpec::huber(Cutoff::infinity());
    report.final_grad_norm = negative_gradient(sample, report.mean, l2).norm();
    report.objective_value = objective(sample, report.mean, l2);
    report.objective_trace.push_back(report.objective_value);
    return report;
  }
  return descend(sample, LossSpec::huber(Cutoff::infinity()), cfg);
}

EstimateReport geometric_median(const Sample& sample, const SolverConfig& cfg) {
  const LossSpec l1 = LossSpec::huber(Cutoff::zero());
  EstimateReport report;
  report.mean = initial_point(sample, l1, cfg);
  if (sample.size() == 1) {
    report.converged = true;
    return report;
  }

  constexpr double kCollisionTol = 1e-12;
  ManifoldPoint m = report.mean;
  report.objective_trace.push_back(objective(sample, m, l1));

  int iter = 0;
  for (; iter < cfg.max_iter; ++iter) {
    Eigen::VectorXd num = Eigen::VectorXd::Zero(m.tag.dimension());
    double den = 0.0;
    int collisions = 0;
    for (const auto& x : sample.points) {
      const TangentVector l = log_map(m, x);
      const double d = l.norm();
      if (d < kCollisionTol) {
        ++collisions;
        continue;
      }
      num += l.coeffs / d;
      den += 1.0 / d;
    }
    const double subgrad_norm = num.norm();  // n * ||sum Log/d|| / n
    if (collisions > 0 && subgrad_norm <= collisions + cfg.grad_tol) {
      // The iterate sits on a data point and the subgradient condition
      // ||sum_{x_i != m} Log/d_i|| <= multiplicity certifies optimality.
      report.converged = true;
      report.final_grad_norm = 0.0;
      break;
    }
    const Eigen::VectorXd delta = num / den;
    report.final_grad_norm = subgrad_norm / sample.size();
    if (report.final_grad_norm <= cfg.grad_tol) {
      report.converged = true;
      break;
    }
    m = guarded_step(m, cfg.step_alpha * delta);
    report.objective_trace.push_back(objective(sample, m, l1));
  }

  report.iterations = iter;
  report.mean = m;
  report.objective_value = objective(sample, m, l1);
  report.left_support_ball = false;
  return report;
}

double mad_scale(const Sample& sample, const ManifoldPoint& center) {
  if (sample.size() < 2) throw std::domain_error("mad_scale requires n >= 2");
  std::vector<double> devs;
  devs.reserve(sample.size());
  for (const auto& x : sample.points) devs.push_back(dist(x, center));
  std::sort(devs.begin(), devs.end());
  const int n = static_cast<int>(devs.size());
  const double med = n % 2 == 1 ? devs[n / 2]
                                : 0.5 * (devs[n / 2 - 1] + devs[n / 2]);
  if (med <= 0.0)
    throw std::domain_error("degenerate scale: zero median absolute deviation");
  return med / 0.6745;
}

double default_cutoff(const Sample& sample) {
  const ManifoldPoint med = geometric_median(sample).mean;
  return 1.345 * mad_scale(sample, med);
}

SupportDiagnostic uniqueness_support_check(const Sample& sample,
                                           const LossSpec& spec) {
  const CurvatureInfo info = curvature_info(sample.tag);
  const double inf = std::numeric_limits<double>::infinity();
  const double pi_over_sqrt_delta =
      info.upper_bound_Delta > 0.0 ? M_PI / std::sqrt(info.upper_bound_Delta)
                                   : inf;
  double r0;
  if (spec.kind == LossKind::PseudoHuber) {
    r0 = 0.5 * std::min(pi_over_sqrt_delta, info.injectivity_radius);
  } else {
    const bool small_c =
        !spec.cutoff.is_infinite() && spec.cutoff.value() < pi_over_sqrt_delta;
    r0 = small_c
             ? 0.5 * std::min(0.5 * pi_over_sqrt_delta, info.injectivity_radius)
             : 0.5 * std::min(pi_over_sqrt_delta, info.injectivity_radius);
  }

  SupportDiagnostic diag{r0, medoid(sample, spec), true};
  for (const auto& x : sample.points)
    if (!(dist(x, diag.ball_center) < r0)) diag.within = false;
  return diag;
}

}  // namespace hmean
