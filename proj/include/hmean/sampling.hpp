#pragma once

#include <memory>

#include "hmean/loss.hpp"
#include "hmean/rng.hpp"

namespace hmean {

/// Test-bed distribution on a tagged manifold. Constructed only through the
/// factory functions, which validate parameters against the tag.
struct DistributionSpec {
  enum class Family {
    Vmf,            // von Mises-Fisher on S^k
    GaussianType,   // density prop. to exp(-d(x, mu)^2 / (2 sigma^2))
    LaplaceType,    // density prop. to exp(-d(x, mu) / sigma)
    LognormalSpd,   // iid N(0, scale^2) frame coefficients pushed through Exp_mu
    LogLaplaceSpd,  // iid scale * Laplace vecd coordinates pushed through Exp_mu
    Mixture,        // Bernoulli(weight) pick of first, else second
  };

  Family family;
  ManifoldTag tag{ManifoldKind::Euclidean, 1};
  ManifoldPoint mu;     // location (unused for Mixture)
  double kappa = 0.0;   // Vmf concentration
  double sigma = 0.0;   // GaussianType / LaplaceType scale
  double scale = 0.0;   // LognormalSpd / LogLaplaceSpd scale
  double weight = 0.0;  // Mixture weight of `first`
  std::shared_ptr<const DistributionSpec> first, second;

  static DistributionSpec vmf(const ManifoldPoint& mu, double kappa);
  static DistributionSpec gaussian_type(const ManifoldPoint& mu, double sigma);
  static DistributionSpec laplace_type(const ManifoldPoint& mu, double sigma);
  static DistributionSpec lognormal_spd(const ManifoldPoint& mu, double scale);
  static DistributionSpec log_laplace_spd(const ManifoldPoint& mu, double scale);
  static DistributionSpec mixture(double weight, DistributionSpec a,
                                  DistributionSpec b);
};

ManifoldPoint draw_one(const DistributionSpec& spec, SeededRng& rng);
Sample sample(const DistributionSpec& spec, int n, SeededRng& rng);

/// Unnormalized location-scale density exp(-rho_c(d(m, mu) / sigma)).
double density_location_scale(const ManifoldPoint& m, const ManifoldPoint& mu,
                              double sigma, const Cutoff& c);

/// Normalizing constant of the location-scale density on the circle:
/// 1 / integral over (-pi, pi] of exp(-rho_c(|theta| / sigma)).
double normalize_on_circle(double sigma, const Cutoff& c);

}  // namespace hmean
