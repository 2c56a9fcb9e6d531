#pragma once

#include <string>

#include "hmean/inference.hpp"
#include "hmean/sampling.hpp"

namespace hmean {

/// One probed contamination experiment: k of n points replaced by outliers
/// placed at each scheduled distance, with the resulting estimator
/// displacement and (when defined) the finite-sample displacement bound
/// 2R + 2k(c + 2R)/(n - 2k).
struct BreakdownReport {
  int n = 0;
  int k_corrupted = 0;
  std::vector<double> outlier_distance_schedule;
  std::vector<double> displacement;
  std::vector<double> bound_values;  // +inf when the bound does not apply
};

BreakdownReport breakdown_probe(const Sample& sample, int k, const Cutoff& c,
                                const std::vector<double>& distances,
                                const SolverConfig& cfg = {});

struct EstimatorSpec {
  std::string name;
  LossSpec loss;
};

struct MseRow {
  std::string estimator;
  double bias = 0.0;
  double variance = 0.0;
  double mse = 0.0;
};

/// Bias / variance / MSE of each estimator over Monte-Carlo replicates:
/// bias is the distance from the replicates' center of mass to the truth,
/// variance the mean squared distance to that center, MSE the mean squared
/// distance to the truth.
std::vector<MseRow> mse_bias_variance(const DistributionSpec& spec,
                                      const ManifoldPoint& true_mean,
                                      const std::vector<EstimatorSpec>& estimators,
                                      int n, int reps, SeededRng& rng,
                                      const SolverConfig& cfg = {});

struct CovarianceErrorRow {
  double c = 0.0;
  int n = 0;
  double mean_rel_error = 0.0;
  double sd_rel_error = 0.0;
};

/// Relative Frobenius error of the plug-in limiting covariance against a
/// Monte-Carlo reference built from mc_reps means of mc_n-point samples.
std::vector<CovarianceErrorRow> covariance_error_study(
    const ManifoldPoint& mu, double kappa_vmf, const std::vector<double>& c_list,
    const std::vector<int>& n_list, int reps, SeededRng& rng, int mc_n = 1000,
    int mc_reps = 1000, const SolverConfig& cfg = {});

struct PowerRow {
  double offset_deg = 0.0;
  int n = 0;
  double rejection_rate = 0.0;
};

/// Size/power of the one-sample location test under vMF(m0, kappa) data with
/// the null point offset by the given angles (degrees) from m0.
std::vector<PowerRow> test_power_study(const ManifoldPoint& m0,
                                       const std::vector<double>& offsets_deg,
                                       double kappa, const Cutoff& c,
                                       const std::vector<int>& n_list, int reps,
                                       double alpha, SeededRng& rng,
                                       const SolverConfig& cfg = {});

struct BootstrapReport {
  ManifoldPoint center;  // full-sample Huber mean
  std::vector<Eigen::VectorXd> logs;  // replicate tangent coordinates
  Eigen::MatrixXd covariance;
  /// Elliptical region from the bootstrap covariance and a chi-square cut.
  EllipsoidSpec region(double alpha) const;
};

BootstrapReport bootstrap_means(const Sample& sample, const Cutoff& c, int B,
                                SeededRng& rng, const SolverConfig& cfg = {});

struct BridgeRow {
  double c = 0.0;
  double dist_to_median = 0.0;
  double dist_to_frechet = 0.0;
};

/// Distances of the Huber mean to the geometric median and the center of
/// mass along a cutoff grid, tracing the interpolation between the limits.
std::vector<BridgeRow> limit_bridge_check(const Sample& sample,
                                          const std::vector<double>& c_grid,
                                          const SolverConfig& cfg = {});

/// The 2x2 SPD contamination benchmark: 90% lognormal mass around the
/// identity, 10% around a fixed far matrix with small tangent jitter.
DistributionSpec contaminated_lognormal_spd2();

}  // namespace hmean
