#include "hmean/sampling.hpp"

#include <cmath>

#include "hmean/special_functions.hpp"

namespace hmean {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

// Uniform direction on the unit sphere of R^d (coefficients).
Eigen::VectorXd uniform_direction(int d, SeededRng& rng) {
  Eigen::VectorXd u(d);
  double norm = 0.0;
  do {
    for (int i = 0; i < d; ++i) u[i] = rng.normal();
    norm = u.norm();
  } while (norm < 1e-12);
  return u / norm;
}

double beta_symmetric(double a, SeededRng& rng) {
  const double x = rng.gamma(a);
  const double y = rng.gamma(a);
  return x / (x + y);
}

// Wood's rejection sampler for the cosine w = <X, mu> of a vMF draw on S^k
// (ambient dimension p = k + 1).
double vmf_cosine(int p, double kappa, SeededRng& rng) {
  const double pm1 = p - 1.0;
  const double b =
      (-2.0 * kappa + std::sqrt(4.0 * kappa * kappa + pm1 * pm1)) / pm1;
  const double x0 = (1.0 - b) / (1.0 + b);
  const double cc = kappa * x0 + pm1 * std::log(1.0 - x0 * x0);
  for (;;) {
    const double z = beta_symmetric(0.5 * pm1, rng);
    const double w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
    const double u = rng.uniform_open();
    if (kappa * w + pm1 * std::log(1.0 - x0 * w) - cc >= std::log(u)) return w;
  }
}

ManifoldPoint draw_vmf(const DistributionSpec& spec, SeededRng& rng) {
  const int k = spec.tag.k;
  const double w = vmf_cosine(k + 1, spec.kappa, rng);
  const double r = std::acos(std::min(1.0, std::max(-1.0, w)));
  if (r < 1e-15) return spec.mu;
  const Eigen::VectorXd dir = uniform_direction(k, rng);
  return exp_map(spec.mu, tangent(spec.mu, r * dir));
}

// Standard normal / Laplace truncated to |z| < bound.
double truncated_standard(bool laplace, double bound, SeededRng& rng) {
  for (;;) {
    const double z = laplace ? rng.laplace() : rng.normal();
    if (std::abs(z) < bound) return z;
  }
}

ManifoldPoint draw_location_scale(const DistributionSpec& spec, bool laplace,
                                  SeededRng& rng) {
  const ManifoldTag& tag = spec.tag;
  if (tag.kind == ManifoldKind::Euclidean) {
    Eigen::VectorXd x(tag.k);
    for (int i = 0; i < tag.k; ++i)
      x[i] = spec.mu.coords[i] +
             spec.sigma * (laplace ? rng.laplace() : rng.normal());
    return ManifoldPoint::euclidean(x);
  }
  require(tag.kind == ManifoldKind::Sphere, "location-scale family needs R^k or S^k");
  if (tag.k == 1) {
    // Exact pushforward of the (-pi/sigma, pi/sigma)-truncated base variable.
    const double theta =
        spec.sigma * truncated_standard(laplace, M_PI / spec.sigma, rng);
    return exp_map(spec.mu, tangent(spec.mu, Eigen::VectorXd::Constant(1, theta)));
  }
  require(!laplace, "Laplace-type sampling is defined on R and S^1 only");
  // Rejection with a tangent-Gaussian proposal truncated at radius pi; the
  // acceptance ratio (sin r / r)^{k-1} cancels the exp-map volume Jacobian.
  for (;;) {
    Eigen::VectorXd v(tag.k);
    for (int i = 0; i < tag.k; ++i) v[i] = spec.sigma * rng.normal();
    const double r = v.norm();
    if (r >= M_PI || r < 1e-15) continue;
    const double accept = std::pow(std::sin(r) / r, tag.k - 1);
    if (rng.uniform() < accept) return exp_map(spec.mu, tangent(spec.mu, v));
  }
}

ManifoldPoint draw_log_pushforward(const DistributionSpec& spec, bool laplace,
                                   SeededRng& rng) {
  const int k = spec.tag.k;
  const int dim = spec.tag.dimension();
  Eigen::VectorXd coeffs(dim);
  if (!laplace) {
    for (int i = 0; i < dim; ++i) coeffs[i] = spec.scale * rng.normal();
  } else {
    // vecd coordinates are iid Laplace; the orthonormal-frame coefficient of
    // an off-diagonal direction is sqrt(2) times the vecd coordinate.
    for (int i = 0; i < k; ++i) coeffs[i] = spec.scale * rng.laplace();
    for (int i = k; i < dim; ++i)
      coeffs[i] = std::sqrt(2.0) * spec.scale * rng.laplace();
  }
  return exp_map(spec.mu, tangent(spec.mu, coeffs));
}

}  // namespace

DistributionSpec DistributionSpec::vmf(const ManifoldPoint& mu, double kappa) {
  require(mu.tag.kind == ManifoldKind::Sphere, "vmf needs a sphere location");
  require(kappa > 0.0, "vmf concentration must be positive");
  DistributionSpec s{Family::Vmf, mu.tag, mu};
  s.kappa = kappa;
  return s;
}

DistributionSpec DistributionSpec::gaussian_type(const ManifoldPoint& mu,
                                                 double sigma) {
  require(sigma > 0.0, "sigma must be positive");
  require(mu.tag.kind != ManifoldKind::Spd,
          "gaussian_type is defined on R^k and S^k");
  DistributionSpec s{Family::GaussianType, mu.tag, mu};
  s.sigma = sigma;
  return s;
}

DistributionSpec DistributionSpec::laplace_type(const ManifoldPoint& mu,
                                                double sigma) {
  require(sigma > 0.0, "sigma must be positive");
  const bool ok = (mu.tag.kind == ManifoldKind::Euclidean) ||
                  (mu.tag.kind == ManifoldKind::Sphere && mu.tag.k == 1);
  require(ok, "laplace_type is defined on R^k and S^1");
  DistributionSpec s{Family::LaplaceType, mu.tag, mu};
  s.sigma = sigma;
  return s;
}

DistributionSpec DistributionSpec::lognormal_spd(const ManifoldPoint& mu,
                                                 double scale) {
  require(mu.tag.kind == ManifoldKind::Spd, "lognormal_spd needs an SPD location");
  require(scale > 0.0, "scale must be positive");
  DistributionSpec s{Family::LognormalSpd, mu.tag, mu};
  s.scale = scale;
  return s;
}

DistributionSpec DistributionSpec::log_laplace_spd(const ManifoldPoint& mu,
                                                   double scale) {
  require(mu.tag.kind == ManifoldKind::Spd,
          "log_laplace_spd needs an SPD location");
  require(scale > 0.0, "scale must be positive");
  DistributionSpec s{Family::LogLaplaceSpd, mu.tag, mu};
  s.scale = scale;
  return s;
}

DistributionSpec DistributionSpec::mixture(double weight, DistributionSpec a,
                                           DistributionSpec b) {
  require(weight > 0.0 && weight < 1.0, "mixture weight must lie in (0, 1)");
  require(a.tag == b.tag, "mixture components must share a manifold");
  DistributionSpec s{Family::Mixture, a.tag, ManifoldPoint{}};
  s.weight = weight;
  s.first = std::make_shared<DistributionSpec>(std::move(a));
  s.second = std::make_shared<DistributionSpec>(std::move(b));
  return s;
}

ManifoldPoint draw_one(const DistributionSpec& spec, SeededRng& rng) {
  switch (spec.family) {
    case DistributionSpec::Family::Vmf:
      return draw_vmf(spec, rng);
    case DistributionSpec::Family::GaussianType:
      return draw_location_scale(spec, false, rng);
    case DistributionSpec::Family::LaplaceType:
      return draw_location_scale(spec, true, rng);
    case DistributionSpec::Family::LognormalSpd:
      return draw_log_pushforward(spec, false, rng);
    case DistributionSpec::Family::LogLaplaceSpd:
      return draw_log_pushforward(spec, true, rng);
    case DistributionSpec::Family::Mixture:
      return rng.bernoulli(spec.weight) ? draw_one(*spec.first, rng)
                                        : draw_one(*spec.second, rng);
  }
  throw std::logic_error("unknown distribution family");
}

Sample sample(const DistributionSpec& spec, int n, SeededRng& rng) {
  require(n >= 1, "sample size must be >= 1");
  std::vector<ManifoldPoint> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i) pts.push_back(draw_one(spec, rng));
  return Sample::of(std::move(pts));
}

double density_location_scale(const ManifoldPoint& m, const ManifoldPoint& mu,
                              double sigma, const Cutoff& c) {
  require(sigma > 0.0, "sigma must be positive");
  return std::exp(-rho(LossSpec::huber(c), dist(m, mu) / sigma));
}

double normalize_on_circle(double sigma, const Cutoff& c) {
  require(sigma > 0.0, "sigma must be positive");
  const LossSpec spec = LossSpec::huber(c);
  const double mass = integrate(
      [&](double theta) { return std::exp(-rho(spec, std::abs(theta) / sigma)); },
      -M_PI, M_PI, 1e-12);
  return 1.0 / mass;
}

}  // namespace hmean
