#include "hmean/efficiency.hpp"

#include <cmath>

#include "hmean/special_functions.hpp"

namespace hmean {

double are_gaussian_real(double kappa) {
  if (!(kappa > 0.0)) throw std::domain_error("kappa must be positive");
  const double p_in = std::erf(kappa / std::sqrt(2.0));
  const double second_in = p_in - 2.0 * kappa * normal_pdf(kappa);
  return p_in * p_in / (second_in + kappa * kappa * (1.0 - p_in));
}

double are_circle(double kappa, double sigma, CircleFamily family) {
  if (!(kappa > 0.0) || !(sigma > 0.0))
    throw std::domain_error("kappa and sigma must be positive");
  const double bound = M_PI / sigma;
  const auto kernel = [&](double z) {
    return family == CircleFamily::GaussianType ? std::exp(-0.5 * z * z)
                                                : std::exp(-std::abs(z));
  };
  const double tol = 1e-12;
  const double mass = integrate(kernel, -bound, bound, tol);
  const double m2 =
      integrate([&](double z) { return z * z * kernel(z); }, -bound, bound, tol) /
      mass;
  const double cut = std::min(kappa, bound);
  const double p_in = integrate(kernel, -cut, cut, tol) / mass;
  const double m2_in =
      integrate([&](double z) { return z * z * kernel(z); }, -cut, cut, tol) /
      mass;
  // (H_c^2 Sigma_inf) / (H_inf^2 Sigma_c) with the shared 4 sigma^2 factors
  // cancelled.
  return p_in * p_in * m2 / (m2_in + kappa * kappa * (1.0 - p_in));
}

double are_laplace_real(double c, double sigma) {
  if (!(c > 0.0) || !(sigma > 0.0))
    throw std::domain_error("c and sigma must be positive");
  // 2 s^2 (1 - e^{-t})^2 / (2 s^2 (1 - (1 + t) e^{-t})), t = c / sigma; the
  // scale cancels, and expm1 keeps the small-t regime (limit 2) stable.
  const double t = c / sigma;
  const double one_minus = -std::expm1(-t);
  return one_minus * one_minus / (one_minus - t * std::exp(-t));
}

double find_kappa_for_target(const std::function<double(double)>& are_fn,
                             double target, double lo, double hi) {
  if (!(lo > 0.0 && hi > lo)) throw std::domain_error("bad bracket");
  // Coarse scan for the first grid cell containing a crossing, then bisect.
  constexpr int kGrid = 2000;
  double a = lo, fa = are_fn(lo);
  if (fa >= target) return lo;
  double b = 0.0;
  bool found = false;
  for (int i = 1; i <= kGrid; ++i) {
    const double x = lo + (hi - lo) * i / kGrid;
    if (are_fn(x) >= target) {
      b = x;
      found = true;
      break;
    }
    a = x;
  }
  if (!found) throw NoCrossingError("target efficiency not attained in bracket");
  while (b - a > 1e-5) {
    const double mid = 0.5 * (a + b);
    (are_fn(mid) >= target ? b : a) = mid;
  }
  return 0.5 * (a + b);
}

namespace {

double trace_variance(const std::vector<ManifoldPoint>& means) {
  Sample reps = Sample::of(means);
  const ManifoldPoint center = frechet_mean(reps).mean;
  const int dim = center.tag.dimension();
  Eigen::VectorXd mean_y = Eigen::VectorXd::Zero(dim);
  std::vector<Eigen::VectorXd> ys;
  ys.reserve(means.size());
  for (const auto& m : means) {
    ys.push_back(log_map(center, m).coeffs);
    mean_y += ys.back();
  }
  mean_y /= static_cast<double>(ys.size());
  double acc = 0.0;
  for (const auto& y : ys) acc += (y - mean_y).squaredNorm();
  return acc / ys.size();
}

}  // namespace

double are_empirical(const DistributionSpec& spec, const Cutoff& c1,
                     const Cutoff& c2, int n, int reps, SeededRng& rng,
                     const SolverConfig& cfg) {
  if (reps < 30) throw std::domain_error("are_empirical requires reps >= 30");
  std::vector<ManifoldPoint> means1, means2;
  means1.reserve(reps);
  means2.reserve(reps);
  for (int r = 0; r < reps; ++r) {
    SeededRng stream = rng.stream(rng.stream_id() * 1000003 + r + 1);
    const Sample data = sample(spec, n, stream);
    means1.push_back(huber_mean(data, LossSpec::huber(c1), cfg).mean);
    means2.push_back(huber_mean(data, LossSpec::huber(c2), cfg).mean);
  }
  return trace_variance(means2) / trace_variance(means1);
}

}  // namespace hmean
