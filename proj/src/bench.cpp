#include "hmean/bench.hpp"

#include <cmath>
#include <limits>

#include "hmean/special_functions.hpp"

namespace hmean {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double max_distance(const Sample& sample, const ManifoldPoint& center) {
  double r = 0.0;
  for (const auto& x : sample.points) r = std::max(r, dist(x, center));
  return r;
}

}  // namespace

BreakdownReport breakdown_probe(const Sample& sample, int k, const Cutoff& c,
                                const std::vector<double>& distances,
                                const SolverConfig& cfg) {
  const int n = sample.size();
  if (k < 0 || k >= n) throw std::domain_error("need 0 <= k < n");
  if (sample.tag.kind == ManifoldKind::Sphere)
    throw std::domain_error("breakdown probe targets unbounded manifolds");

  const LossSpec loss = LossSpec::huber(c);
  const ManifoldPoint clean_mean = huber_mean(sample, loss, cfg).mean;
  const double radius = max_distance(sample, clean_mean);

  const bool bounded = !c.is_infinite() && 2 * k <= n - 1;
  const double bound =
      bounded ? 2.0 * radius +
                    2.0 * k * (c.value() + 2.0 * radius) / (n - 2.0 * k)
              : kInf;

  BreakdownReport report;
  report.n = n;
  report.k_corrupted = k;
  report.outlier_distance_schedule = distances;

  const Eigen::VectorXd direction =
      Eigen::VectorXd::Unit(sample.tag.dimension(), 0);
  for (double d : distances) {
    Sample corrupted = sample;
    const ManifoldPoint outlier =
        exp_map(clean_mean, tangent(clean_mean, d * direction));
    for (int i = 0; i < k; ++i) corrupted.points[n - 1 - i] = outlier;
    const ManifoldPoint moved = huber_mean(corrupted, loss, cfg).mean;
    report.displacement.push_back(dist(clean_mean, moved));
    report.bound_values.push_back(bound);
  }
  return report;
}

std::vector<MseRow> mse_bias_variance(const DistributionSpec& spec,
                                      const ManifoldPoint& true_mean,
                                      const std::vector<EstimatorSpec>& estimators,
                                      int n, int reps, SeededRng& rng,
                                      const SolverConfig& cfg) {
  if (reps < 2) throw std::domain_error("need reps >= 2");
  std::vector<std::vector<ManifoldPoint>> means(estimators.size());
  for (auto& v : means) v.reserve(reps);
  for (int r = 0; r < reps; ++r) {
    SeededRng stream = rng.stream(rng.stream_id() * 1000003 + r + 1);
    const Sample data = sample(spec, n, stream);
    for (std::size_t e = 0; e < estimators.size(); ++e)
      means[e].push_back(huber_mean(data, estimators[e].loss, cfg).mean);
  }

  std::vector<MseRow> rows;
  for (std::size_t e = 0; e < estimators.size(); ++e) {
    const ManifoldPoint center = frechet_mean(Sample::of(means[e]), cfg).mean;
    MseRow row;
    row.estimator = estimators[e].name;
    row.bias = dist(center, true_mean);
    for (const auto& m : means[e]) {
      const double dc = dist(m, center), dt = dist(m, true_mean);
      row.variance += dc * dc;
      row.mse += dt * dt;
    }
    row.variance /= reps;
    row.mse /= reps;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<CovarianceErrorRow> covariance_error_study(
    const ManifoldPoint& mu, double kappa_vmf, const std::vector<double>& c_list,
    const std::vector<int>& n_list, int reps, SeededRng& rng, int mc_n,
    int mc_reps, const SolverConfig& cfg) {
  const DistributionSpec spec = DistributionSpec::vmf(mu, kappa_vmf);
  const int dim = mu.tag.dimension();

  std::vector<CovarianceErrorRow> rows;
  for (double c_val : c_list) {
    const Cutoff c = Cutoff::finite(c_val);
    const LossSpec loss = LossSpec::huber(c);

    // Monte-Carlo reference: mc_n * Var of the tangent coordinates of
    // mc_n-sample means about mu.
    Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd mean_y = Eigen::VectorXd::Zero(dim);
    std::vector<Eigen::VectorXd> ys;
    ys.reserve(mc_reps);
    for (int r = 0; r < mc_reps; ++r) {
      SeededRng stream = rng.stream(7777777ull + r);
      const Sample data = sample(spec, mc_n, stream);
      ys.push_back(log_map(mu, huber_mean(data, loss, cfg).mean).coeffs);
      mean_y += ys.back();
    }
    mean_y /= static_cast<double>(mc_reps);
    for (const auto& y : ys)
      scatter += (y - mean_y) * (y - mean_y).transpose();
    const Eigen::MatrixXd a_mc = (double(mc_n) / mc_reps) * scatter;
    const double a_mc_norm = a_mc.norm();

    for (int n : n_list) {
      double sum = 0.0, sum_sq = 0.0;
      for (int r = 0; r < reps; ++r) {
        SeededRng stream = rng.stream((static_cast<std::uint64_t>(n) << 20) +
                                      static_cast<std::uint64_t>(c_val * 1e6) +
                                      r + 1);
        const Sample data = sample(spec, n, stream);
        const ManifoldPoint m_n = huber_mean(data, loss, cfg).mean;
        const AsymptoticCovariance cov =
            limiting_covariance(data, m_n, c, tangent_frame(m_n));
        // Carry the estimate to mu so both matrices share coordinates.
        const Eigen::MatrixXd t = transport_matrix(m_n, mu);
        const Eigen::MatrixXd a_at_mu = t * cov.a_hat * t.transpose();
        const double err = (a_at_mu - a_mc).norm() / a_mc_norm;
        sum += err;
        sum_sq += err * err;
      }
      CovarianceErrorRow row;
      row.c = c_val;
      row.n = n;
      row.mean_rel_error = sum / reps;
      row.sd_rel_error =
          std::sqrt(std::max(0.0, sum_sq / reps - row.mean_rel_error * row.mean_rel_error));
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<PowerRow> test_power_study(const ManifoldPoint& m0,
                                       const std::vector<double>& offsets_deg,
                                       double kappa, const Cutoff& c,
                                       const std::vector<int>& n_list, int reps,
                                       double alpha, SeededRng& rng,
                                       const SolverConfig& cfg) {
  const DistributionSpec spec = DistributionSpec::vmf(m0, kappa);
  const Eigen::VectorXd direction =
      Eigen::VectorXd::Unit(m0.tag.dimension(), 0);

  std::vector<PowerRow> rows;
  for (double offset : offsets_deg) {
    const double rad = offset * M_PI / 180.0;
    const ManifoldPoint null_point =
        rad == 0.0 ? m0 : exp_map(m0, tangent(m0, rad * direction));
    for (int n : n_list) {
      int rejects = 0;
      for (int r = 0; r < reps; ++r) {
        SeededRng stream =
            rng.stream((static_cast<std::uint64_t>(offset * 100) << 32) +
                       (static_cast<std::uint64_t>(n) << 16) + r + 1);
        const Sample data = sample(spec, n, stream);
        if (one_sample_test(data, null_point, c, alpha, cfg).reject) ++rejects;
      }
      rows.push_back(PowerRow{offset, n, double(rejects) / reps});
    }
  }
  return rows;
}

EllipsoidSpec BootstrapReport::region(double alpha) const {
  const int dim = center.tag.dimension();
  return EllipsoidSpec{center, covariance, chi2_upper_quantile(dim, alpha)};
}

BootstrapReport bootstrap_means(const Sample& sample, const Cutoff& c, int B,
                                SeededRng& rng, const SolverConfig& cfg) {
  if (B < 1) throw std::domain_error("need B >= 1");
  const LossSpec loss = LossSpec::huber(c);
  BootstrapReport report;
  report.center = huber_mean(sample, loss, cfg).mean;
  const int n = sample.size();
  const int dim = sample.tag.dimension();

  Eigen::VectorXd mean_y = Eigen::VectorXd::Zero(dim);
  for (int b = 0; b < B; ++b) {
    std::vector<ManifoldPoint> resampled;
    resampled.reserve(n);
    for (int i = 0; i < n; ++i)
      resampled.push_back(sample.points[rng.uniform_int(n)]);
    const ManifoldPoint m_b =
        huber_mean(Sample::of(std::move(resampled)), loss, cfg).mean;
    report.logs.push_back(log_map(report.center, m_b).coeffs);
    mean_y += report.logs.back();
  }
  mean_y /= static_cast<double>(B);

  report.covariance = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& y : report.logs)
    report.covariance += (y - mean_y) * (y - mean_y).transpose();
  report.covariance /= static_cast<double>(B);
  return report;
}

std::vector<BridgeRow> limit_bridge_check(const Sample& sample,
                                          const std::vector<double>& c_grid,
                                          const SolverConfig& cfg) {
  const ManifoldPoint median = geometric_median(sample, cfg).mean;
  const ManifoldPoint frechet = frechet_mean(sample, cfg).mean;
  std::vector<BridgeRow> rows;
  for (double c : c_grid) {
    const ManifoldPoint m =
        huber_mean(sample, LossSpec::huber(Cutoff::finite(c)), cfg).mean;
    rows.push_back(BridgeRow{c, dist(m, median), dist(m, frechet)});
  }
  return rows;
}

DistributionSpec contaminated_lognormal_spd2() {
  const ManifoldPoint identity = ManifoldPoint::spd(Eigen::MatrixXd::Identity(2, 2));
  Eigen::VectorXd far_coeffs(3);
  far_coeffs << 10.0, 10.0, 10.0;  // frame coefficients of [[10, 5*sqrt(2)], [5*sqrt(2), 10]]
  const ManifoldPoint far = exp_map(identity, tangent(identity, far_coeffs));
  return DistributionSpec::mixture(0.9,
                                   DistributionSpec::lognormal_spd(identity, 0.5),
                                   DistributionSpec::lognormal_spd(far, 0.1));
}

}  // namespace hmean
