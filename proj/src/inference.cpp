#include "hmean/inference.hpp"

#include <cmath>

#include "hmean/special_functions.hpp"

namespace hmean {

namespace {

constexpr double kExcludeTol = 1e-12;

double capped(double d, const Cutoff& c) {
  return c.is_infinite() ? d : std::min(d, c.value());
}

bool excluded(double d, const Cutoff& c) {
  if (d < kExcludeTol) return true;
  return !c.is_infinite() && std::abs(d - c.value()) < kExcludeTol;
}

Eigen::MatrixXd inverse_checked(const Eigen::MatrixXd& m, const char* what) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  const Eigen::VectorXd abs_ev = eig.eigenvalues().cwiseAbs();
  const double lo = abs_ev.minCoeff(), hi = abs_ev.maxCoeff();
  if (!(lo > 0.0) || hi / lo >= 1e12) throw SingularCovariance(what);
  return eig.eigenvectors() * eig.eigenvalues().cwiseInverse().asDiagonal() *
         eig.eigenvectors().transpose();
}

}  // namespace

Eigen::MatrixXd sigma_hat(const Sample& sample, const ManifoldPoint& base,
                          const Cutoff& c, const OrthonormalFrame& frame) {
  if (c.is_zero()) throw std::domain_error("sigma_hat requires c > 0");
  const int dim = base.tag.dimension();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& x : sample.points) {
    const Eigen::VectorXd y = frame.to_frame_coords(log_map(base, x));
    const double d = y.norm();
    if (d < kExcludeTol) continue;
    const double w = capped(d, c) / d;
    s += (w * w) * (y * y.transpose());
  }
  return 4.0 / sample.size() * s;
}

double sn_ratio(double Delta, double s) {
  if (!(s > 0.0)) throw std::domain_error("sn_ratio requires s > 0");
  if (Delta > 0.0) {
    const double r = std::sqrt(Delta);
    if (s * r >= M_PI) throw std::domain_error("s beyond the first sn zero");
    return r / std::tan(s * r);
  }
  if (Delta == 0.0) return 1.0 / s;
  const double r = std::sqrt(-Delta);
  return r / std::tanh(s * r);
}

double directional_second_derivative(const Eigen::VectorXd& y,
                                     const Eigen::VectorXd& v, const Cutoff& c,
                                     double Delta) {
  if (c.is_zero()) throw std::domain_error("second derivative requires c > 0");
  const double d = y.norm();
  if (excluded(d, c))
    throw std::domain_error("residual norm at 0 or the cutoff is excluded");
  if (std::abs(v.norm() - 1.0) > 1e-9)
    throw ContractViolation("direction must be a unit vector");
  const double dot = y.dot(v);
  const double cos2 = dot * dot / (d * d);
  const bool inside = c.is_infinite() || d <= c.value();
  return 2.0 * cos2 * (inside ? 1.0 : 0.0) +
         2.0 * capped(d, c) * sn_ratio(Delta, d) * (1.0 - cos2);
}

double directional_second_derivative_spd(const Eigen::VectorXd& y,
                                         const Eigen::VectorXd& v,
                                         const Cutoff& c, int k) {
  if (c.is_zero()) throw std::domain_error("second derivative requires c > 0");
  const double r = y.norm();
  if (excluded(r, c))
    throw std::domain_error("residual norm at 0 or the cutoff is excluded");
  if (std::abs(v.norm() - 1.0) > 1e-9)
    throw ContractViolation("direction must be a unit vector");

  const Eigen::MatrixXd u = spd_sym_from_coeffs(y, k) / r;
  const Eigen::MatrixXd vm = spd_sym_from_coeffs(v, k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(u);
  const Eigen::VectorXd d = es.eigenvalues();
  const Eigen::MatrixXd vp = es.eigenvectors().transpose() * vm * es.eigenvectors();

  const double radial = (u.array() * vm.array()).sum();
  const bool inside = c.is_infinite() || r <= c.value();
  const double rho1 = inside ? 2.0 * r : 2.0 * c.value();
  const double rho2 = inside ? 2.0 : 0.0;

  // Hess of the distance: zero radially, 1/r on the rest of the flat through
  // the geodesic, and sqrt(|lambda|) coth(r sqrt(|lambda|)) on the curvature
  // eigendirections F_ij with lambda = -((d_i - d_j)/2)^2.
  double acc = 0.0;
  for (int i = 0; i < k; ++i) {
    const double flat = vp(i, i) - radial * d[i];
    acc += flat * flat / r;
  }
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      const double f2 = 2.0 * vp(i, j) * vp(i, j);
      const double g = 0.5 * std::abs(d[i] - d[j]);
      acc += f2 * (r * g < 1e-8 ? 1.0 / r : g / std::tanh(r * g));
    }
  return rho2 * radial * radial + rho1 * acc;
}

std::vector<Eigen::VectorXd> basis_set_V(int k) {
  if (k < 1) throw std::domain_error("basis_set_V requires k >= 1");
  std::vector<Eigen::VectorXd> out;
  out.reserve(k * (k + 1) / 2);
  for (int i = 0; i < k; ++i) out.push_back(Eigen::VectorXd::Unit(k, i));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      out.push_back(inv_sqrt2 *
                    (Eigen::VectorXd::Unit(k, i) + Eigen::VectorXd::Unit(k, j)));
  return out;
}

Eigen::VectorXd vecd(const Eigen::MatrixXd& H) {
  const int k = static_cast<int>(H.rows());
  if (H.cols() != k || (H - H.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::domain_error("vecd requires a symmetric matrix");
  Eigen::VectorXd v(k * (k + 1) / 2);
  int idx = 0;
  for (int i = 0; i < k; ++i) v[idx++] = H(i, i);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) v[idx++] = H(i, j);
  return v;
}

Eigen::MatrixXd vecd_inv(const Eigen::VectorXd& v) {
  // Solve m(m+1)/2 = size for the matrix order m.
  const int size = static_cast<int>(v.size());
  const int k = static_cast<int>(std::lround((std::sqrt(8.0 * size + 1.0) - 1.0) / 2.0));
  if (k * (k + 1) / 2 != size)
    throw std::domain_error("vecd_inv: length is not triangular");
  Eigen::MatrixXd H(k, k);
  int idx = 0;
  for (int i = 0; i < k; ++i) H(i, i) = v[idx++];
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      H(i, j) = v[idx];
      H(j, i) = v[idx];
      ++idx;
    }
  return H;
}

HessianEstimate h_hat(const Sample& sample, const ManifoldPoint& base,
                      const Cutoff& c, const OrthonormalFrame& frame) {
  if (c.is_zero()) throw std::domain_error("h_hat requires c > 0");
  const int dim = base.tag.dimension();
  const double Delta = curvature_info(base.tag).upper_bound_Delta;
  const auto basis = basis_set_V(dim);
  const int nsys = static_cast<int>(basis.size());

  std::vector<Eigen::VectorXd> ys;
  ys.reserve(sample.size());
  int excluded_count = 0;
  for (const auto& x : sample.points) {
    Eigen::VectorXd y = frame.to_frame_coords(log_map(base, x));
    if (excluded(y.norm(), c)) {
      ++excluded_count;
      continue;
    }
    ys.push_back(std::move(y));
  }
  if (ys.empty())
    throw std::domain_error("all observations excluded from the Hessian estimate");

  // The SPD metric has non-constant curvature, so the scalar-Delta formula is
  // replaced by the exact one; it needs canonical coordinates (the symmetric
  // matrix representation), so undo the frame rotation there.
  const bool spd = base.tag.kind == ManifoldKind::Spd;
  Eigen::VectorXd a(nsys);
  for (int r = 0; r < nsys; ++r) {
    double acc = 0.0;
    for (const auto& y : ys)
      acc += spd ? directional_second_derivative_spd(frame.rotation * y,
                                                     frame.rotation * basis[r],
                                                     c, base.tag.k)
                 : directional_second_derivative(y, basis[r], c, Delta);
    a[r] = acc / ys.size();
  }

  // Row r encodes v^T H v as a linear functional of vecd(H): diagonal entries
  // of v v^T once, off-diagonal entries twice.
  Eigen::MatrixXd V(nsys, nsys);
  for (int r = 0; r < nsys; ++r) {
    const Eigen::MatrixXd outer = basis[r] * basis[r].transpose();
    Eigen::VectorXd row = vecd(outer);
    row.tail(nsys - dim) *= 2.0;
    V.row(r) = row;
  }
  return HessianEstimate{vecd_inv(V.partialPivLu().solve(a)), excluded_count};
}

AsymptoticCovariance limiting_covariance(const Sample& sample,
                                         const ManifoldPoint& base,
                                         const Cutoff& c,
                                         const OrthonormalFrame& frame) {
  AsymptoticCovariance cov;
  cov.base = base;
  cov.frame = frame;
  cov.sigma_hat = sigma_hat(sample, base, c, frame);
  const HessianEstimate h = h_hat(sample, base, c, frame);
  cov.h_hat = h.h;
  cov.excluded_count = h.excluded_count;
  const Eigen::MatrixXd h_inv = inverse_checked(cov.h_hat, "singular Hessian estimate");
  const Eigen::MatrixXd a = h_inv * cov.sigma_hat * h_inv;
  cov.a_hat = 0.5 * (a + a.transpose());
  return cov;
}

TestResult one_sample_test(const Sample& sample, const ManifoldPoint& m0_tilde,
                           const Cutoff& c, double alpha,
                           const SolverConfig& cfg) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("alpha must lie in (0, 1)");
  if (!(m0_tilde.tag == sample.tag))
    throw ContractViolation("null point manifold mismatch");

  const EstimateReport est = huber_mean(sample, LossSpec::huber(c), cfg);
  if (!est.converged)
    throw std::runtime_error("location estimate did not converge");

  const AsymptoticCovariance cov =
      limiting_covariance(sample, est.mean, c, tangent_frame(est.mean));

  // Express z = Log_{m0}(mean) in the estimation frame carried over to m0 by
  // parallel transport, so z and a_hat share coordinates.
  const Eigen::MatrixXd carry = transport_matrix(est.mean, m0_tilde);
  const Eigen::VectorXd z =
      carry.transpose() * log_map(m0_tilde, est.mean).coeffs;

  const Eigen::MatrixXd a_inv = inverse_checked(cov.a_hat, "singular covariance");
  TestResult res;
  res.df = sample.tag.dimension();
  res.alpha = alpha;
  res.statistic_Tn = sample.size() * z.dot(a_inv * z);
  res.critical_value = chi2_upper_quantile(res.df, alpha);
  res.p_value = chi2_upper_tail(res.df, res.statistic_Tn);
  res.reject = res.statistic_Tn >= res.critical_value;
  return res;
}

bool EllipsoidSpec::contains(const Eigen::VectorXd& x) const {
  const Eigen::MatrixXd inv = inverse_checked(shape, "singular region shape");
  return x.dot(inv * x) <= threshold;
}

EllipsoidSpec confidence_region(const AsymptoticCovariance& cov, int n,
                                double alpha) {
  if (n < 1) throw std::domain_error("confidence_region requires n >= 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("alpha must lie in (0, 1)");
  const int dim = cov.base.tag.dimension();
  return EllipsoidSpec{cov.base, cov.a_hat / n, chi2_upper_quantile(dim, alpha)};
}

}  // namespace hmean
