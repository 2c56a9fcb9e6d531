#include "hmean/loss.hpp"

#include <cmath>

namespace hmean {

Sample Sample::of(std::vector<ManifoldPoint> pts) {
  if (pts.empty()) throw std::domain_error("sample must contain n >= 1 points");
  Sample s;
  s.tag = pts.front().tag;
  for (const auto& p : pts) {
    if (!(p.tag == s.tag)) throw ContractViolation("mixed tags in sample");
    if (!p.coords.allFinite())
      throw std::domain_error("non-finite sample coordinates");
  }
  s.points = std::move(pts);
  return s;
}

double rho(const LossSpec& spec, double x) {
  if (x < 0.0) throw std::domain_error("rho requires x >= 0");
  if (spec.cutoff.is_infinite()) return x * x;
  const double c = spec.cutoff.value();
  if (c == 0.0) return x;  // L1 limit, both kinds
  if (spec.kind == LossKind::Huber)
    return x <= c ? x * x : 2.0 * c * (x - 0.5 * c);
  const double r = x / c;
  return 2.0 * c * c * (std::sqrt(1.0 + r * r) - 1.0);
}

double rho_prime(const LossSpec& spec, double x) {
  if (x < 0.0) throw std::domain_error("rho_prime requires x >= 0");
  if (spec.cutoff.is_infinite()) return 2.0 * x;
  const double c = spec.cutoff.value();
  if (c == 0.0) return 1.0;
  if (spec.kind == LossKind::Huber) return x <= c ? 2.0 * x : 2.0 * c;
  const double r = x / c;
  return 2.0 * x / std::sqrt(1.0 + r * r);
}

double objective(const Sample& sample, const ManifoldPoint& m,
                 const LossSpec& spec) {
  if (!(m.tag == sample.tag)) throw ContractViolation("tag mismatch");
  double sum = 0.0;
  for (const auto& x : sample.points) sum += rho(spec, dist(x, m));
  return sum / sample.size();
}

TangentVector negative_gradient(const Sample& sample, const ManifoldPoint& m,
                                const LossSpec& spec) {
  if (!(m.tag == sample.tag)) throw ContractViolation("tag mismatch");
  Eigen::VectorXd g = Eigen::VectorXd::Zero(m.tag.dimension());
  for (const auto& x : sample.points) {
    const TangentVector l = log_map(m, x);
    const double d = l.norm();
    if (d < 1e-14) continue;  // the x_i = m term contributes zero
    g += (rho_prime(spec, d) / d) * l.coeffs;
  }
  return {m, g / sample.size()};
}

}  // namespace hmean
