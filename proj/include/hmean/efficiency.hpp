#pragma once

#include <functional>

#include "hmean/estimators.hpp"
#include "hmean/sampling.hpp"

namespace hmean {

struct ArePoint {
  double kappa;  // cutoff / scale
  double sigma;
  double are;
};

enum class CircleFamily { GaussianType, LaplaceType };

/// Asymptotic efficiency of the cutoff-kappa Huber mean relative to the
/// arithmetic mean under a standard normal: P(|Z|<=k)^2 divided by
/// E[Z^2 1_{|Z|<=k}] + k^2 P(|Z|>k).
double are_gaussian_real(double kappa);

/// Same ratio on the circle with scale sigma; the base variable is the
/// standard normal or Laplace truncated to (-pi/sigma, pi/sigma), with
/// moments computed by adaptive quadrature.
double are_circle(double kappa, double sigma, CircleFamily family);

/// Closed-form efficiency under the Laplace(sigma) distribution on the line
/// at cutoff c: 2 s^2 (1 - e^{-c/s})^2 / (2 s^2 - (2 s c + 2 s^2) e^{-c/s}).
double are_laplace_real(double c, double sigma);

class NoCrossingError : public std::runtime_error {
 public:
  explicit NoCrossingError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Smallest kappa in [lo, hi] with are_fn(kappa) >= target, to within 1e-4.
double find_kappa_for_target(const std::function<double(double)>& are_fn,
                             double target, double lo = 1e-3, double hi = 50.0);

/// Monte-Carlo relative efficiency: ratio of the trace replicate variances
/// of the c2-mean over the c1-mean, on paired samples. Coordinates are taken
/// at the replicate means' own center of mass.
double are_empirical(const DistributionSpec& spec, const Cutoff& c1,
                     const Cutoff& c2, int n, int reps, SeededRng& rng,
                     const SolverConfig& cfg = {});

}  // namespace hmean
