#pragma once

#include "hmean/estimators.hpp"

namespace hmean {

/// Moment estimators at a base point, expressed in `frame`: the sandwich
/// a_hat = h_hat^{-1} sigma_hat h_hat^{-1} estimates the limiting covariance
/// of sqrt(n) Log(mean). Matrices are dim x dim with dim the intrinsic
/// dimension.
struct AsymptoticCovariance {
  ManifoldPoint base;
  OrthonormalFrame frame;
  Eigen::MatrixXd sigma_hat;
  Eigen::MatrixXd h_hat;
  Eigen::MatrixXd a_hat;
  int excluded_count = 0;
};

struct TestResult {
  double statistic_Tn = 0.0;
  int df = 0;
  double critical_value = 0.0;
  double p_value = 1.0;
  bool reject = false;
  double alpha = 0.05;
};

/// Raised when h_hat / a_hat cannot be inverted (condition number >= 1e12).
class SingularCovariance : public std::runtime_error {
 public:
  explicit SingularCovariance(const std::string& what)
      : std::runtime_error(what) {}
};

/// (4/n) sum ((||y_i|| ^ c) / ||y_i||)^2 y_i y_i^T with y_i the frame
/// coordinates of Log_base(x_i); a point at the base contributes zero.
Eigen::MatrixXd sigma_hat(const Sample& sample, const ManifoldPoint& base,
                          const Cutoff& c, const OrthonormalFrame& frame);

/// sn_Delta'(s) / sn_Delta(s): sqrt(D) cot(s sqrt(D)) for D > 0, 1/s for
/// D = 0, sqrt(|D|) coth(s sqrt(|D|)) for D < 0.
double sn_ratio(double Delta, double s);

/// Second derivative along the unit direction v of rho_c(d(x, .)) at the
/// base, in normal coordinates y = Log(x). Requires ||y|| not in {0, c}.
double directional_second_derivative(const Eigen::VectorXd& y,
                                     const Eigen::VectorXd& v, const Cutoff& c,
                                     double Delta);

/// Exact counterpart of directional_second_derivative on SPD(k) under the
/// affine-invariant metric, where the sectional curvature seen from the
/// radial direction is not constant: the radial Jacobi operator is
/// diagonalized instead of bounded by a scalar Delta.
double directional_second_derivative_spd(const Eigen::VectorXd& y,
                                         const Eigen::VectorXd& v,
                                         const Cutoff& c, int k);

/// {e_1..e_k} followed by {(e_i + e_j)/sqrt(2), i < j} in vecd order.
std::vector<Eigen::VectorXd> basis_set_V(int k);

/// Symmetric-matrix vectorization: diagonal first, then off-diagonals
/// row-major. vecd_inv is its exact inverse.
Eigen::VectorXd vecd(const Eigen::MatrixXd& H);
Eigen::MatrixXd vecd_inv(const Eigen::VectorXd& v);

struct HessianEstimate {
  Eigen::MatrixXd h;
  int excluded_count = 0;
};

/// Moment estimator of the objective Hessian: averages directional second
/// derivatives over the basis directions and solves the linear system tying
/// them to the matrix entries. Observations with ||y_i|| within 1e-12 of 0
/// or c are excluded and counted.
HessianEstimate h_hat(const Sample& sample, const ManifoldPoint& base,
                      const Cutoff& c, const OrthonormalFrame& frame);

AsymptoticCovariance limiting_covariance(const Sample& sample,
                                         const ManifoldPoint& base,
                                         const Cutoff& c,
                                         const OrthonormalFrame& frame);

/// One-sample location test of H0: true mean = m0_tilde. The estimation
/// frame is parallel-transported from the sample mean to m0_tilde so that z
/// and the covariance live in aligned coordinates.
TestResult one_sample_test(const Sample& sample, const ManifoldPoint& m0_tilde,
                           const Cutoff& c, double alpha,
                           const SolverConfig& cfg = {});

struct EllipsoidSpec {
  ManifoldPoint center;
  Eigen::MatrixXd shape;  // n^{-1} a_hat
  double threshold;       // chi-square upper quantile

  /// Membership of tangent coordinates x: x^T shape^{-1} x <= threshold.
  bool contains(const Eigen::VectorXd& x) const;
};

EllipsoidSpec confidence_region(const AsymptoticCovariance& cov, int n,
                                double alpha);

}  // namespace hmean
