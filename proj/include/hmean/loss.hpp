#pragma once

#include <vector>

#include "hmean/manifold.hpp"

namespace hmean {

/// Extended-real cutoff c in [0, inf], stored as a tagged value so the
/// c = 0 and c = inf limits never enter floating-point branch arithmetic.
class Cutoff {
 public:
  static Cutoff finite(double c) {
    if (!(c >= 0.0) || !std::isfinite(c))
      throw std::domain_error("cutoff must be a finite nonnegative real");
    return Cutoff(c, false);
  }
  static Cutoff zero() { return Cutoff(0.0, false); }
  static Cutoff infinity() { return Cutoff(0.0, true); }

  bool is_infinite() const { return infinite_; }
  bool is_zero() const { return !infinite_ && value_ == 0.0; }
  /// Finite value; only valid when !is_infinite().
  double value() const {
    if (infinite_) throw std::logic_error("cutoff is infinite");
    return value_;
  }

 private:
  Cutoff(double v, bool inf) : value_(v), infinite_(inf) {}
  double value_;
  bool infinite_;
};

enum class LossKind { Huber, PseudoHuber };

struct LossSpec {
  Cutoff cutoff = Cutoff::infinity();
  LossKind kind = LossKind::Huber;

  static LossSpec huber(Cutoff c) { return {c, LossKind::Huber}; }
  static LossSpec pseudo_huber(Cutoff c) { return {c, LossKind::PseudoHuber}; }
};

/// An ordered sample of points sharing one manifold tag.
struct Sample {
  ManifoldTag tag{ManifoldKind::Euclidean, 1};
  std::vector<ManifoldPoint> points;

  static Sample of(std::vector<ManifoldPoint> pts);
  int size() const { return static_cast<int>(points.size()); }
};

/// Scalar (pseudo) Huber loss. c = 0 gives L1(x) = x, c = inf gives
/// L2(x) = x^2 for both kinds.
double rho(const LossSpec& spec, double x);

/// Derivative of rho in x; continuous at the Huber knee (value 2c at x = c).
double rho_prime(const LossSpec& spec, double x);

/// Empirical objective F_n^c(m) = (1/n) sum_i rho(d(x_i, m)).
double objective(const Sample& sample, const ManifoldPoint& m,
                 const LossSpec& spec);

/// Negative Riemannian gradient of the empirical objective at m. A data
/// point equal to m contributes zero (also for c = 0, where the robust
/// subgradient handling lives in the solvers).
TangentVector negative_gradient(const Sample& sample, const ManifoldPoint& m,
                                const LossSpec& spec);

}  // namespace hmean
