#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace hmean {

/// Raised when an operation requires a point strictly inside the cut locus
/// (e.g. the log map at an antipodal pair on the sphere).
class CutLocusError : public std::runtime_error {
 public:
  explicit CutLocusError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised on violated operation contracts (tag mismatch, frame/base mismatch).
class ContractViolation : public std::invalid_argument {
 public:
  explicit ContractViolation(const std::string& what)
      : std::invalid_argument(what) {}
};

enum class ManifoldKind { Euclidean, Sphere, Spd };

/// Identifies one of the supported manifolds together with its order k:
/// R^k, the unit sphere S^k (ambient R^{k+1}), or SPD(k) matrices under the
/// affine-invariant metric.
struct ManifoldTag {
  ManifoldKind kind;
  int k;

  static ManifoldTag euclidean(int k) { return {ManifoldKind::Euclidean, k}; }
  static ManifoldTag sphere(int k) { return {ManifoldKind::Sphere, k}; }
  static ManifoldTag spd(int k) { return {ManifoldKind::Spd, k}; }

  /// Intrinsic dimension: k for euclidean/sphere, k(k+1)/2 for spd.
  int dimension() const {
    return kind == ManifoldKind::Spd ? k * (k + 1) / 2 : k;
  }
  /// Storage size of point coordinates.
  int ambient_size() const {
    switch (kind) {
      case ManifoldKind::Euclidean: return k;
      case ManifoldKind::Sphere: return k + 1;
      case ManifoldKind::Spd: return k * k;
    }
    return 0;
  }

  bool operator==(const ManifoldTag&) const = default;
  std::string name() const;
};

/// A point on a tagged manifold. Spheres store the ambient unit vector,
/// SPD(k) stores the matrix row-major.
struct ManifoldPoint {
  ManifoldTag tag{ManifoldKind::Euclidean, 1};
  Eigen::VectorXd coords;

  static ManifoldPoint euclidean(const Eigen::VectorXd& x);
  static ManifoldPoint sphere(const Eigen::VectorXd& unit);  // validates norm
  static ManifoldPoint spd(const Eigen::MatrixXd& p);        // validates SPD

  /// SPD coordinate view as a k x k matrix.
  Eigen::MatrixXd mat() const;

  bool same_tag(const ManifoldPoint& other) const { return tag == other.tag; }
};

/// Tangent vector at `base`, expressed in the canonical orthonormal frame
/// returned by tangent_frame(base). Length equals the intrinsic dimension.
struct TangentVector {
  ManifoldPoint base;
  Eigen::VectorXd coeffs;

  double norm() const { return coeffs.norm(); }
};

/// Orthonormal frame at `base`, stored as a rotation relative to the
/// canonical frame: column j holds the canonical-frame coordinates of the
/// j-th frame vector. The canonical frame itself has rotation = I.
struct OrthonormalFrame {
  ManifoldPoint base;
  Eigen::MatrixXd rotation;

  Eigen::VectorXd to_frame_coords(const TangentVector& v) const {
    if (!(v.base.tag == base.tag) || (v.base.coords - base.coords).norm() > 1e-9)
      throw ContractViolation("frame/base mismatch");
    return rotation.transpose() * v.coeffs;
  }
};

/// Curvature metadata used by support-radius diagnostics and the Hessian
/// estimator.
struct CurvatureInfo {
  double upper_bound_Delta;   // sphere 1, euclidean 0, spd (affine-inv.) 0
  double injectivity_radius;  // sphere pi, otherwise inf
  double convexity_radius;    // (1/2) min{pi/sqrt(Delta), r_inj}
};

CurvatureInfo curvature_info(const ManifoldTag& tag);

ManifoldPoint exp_map(const ManifoldPoint& p, const TangentVector& v);
TangentVector log_map(const ManifoldPoint& p, const ManifoldPoint& x);
double dist(const ManifoldPoint& p, const ManifoldPoint& q);
TangentVector parallel_transport(const ManifoldPoint& p, const ManifoldPoint& q,
                                 const TangentVector& v);

/// Canonical orthonormal frame at p (rotation = identity). Deterministic.
OrthonormalFrame tangent_frame(const ManifoldPoint& p);

/// Matrix of the parallel transport p -> q acting on canonical-frame
/// coordinates: column j holds the canonical coordinates at q of the
/// transported j-th canonical frame vector of p.
Eigen::MatrixXd transport_matrix(const ManifoldPoint& p, const ManifoldPoint& q);

/// Symmetric matrix represented by canonical tangent coefficients of SPD(k)
/// (diagonal entries first, off-diagonals scaled by sqrt(2)), and back.
Eigen::MatrixXd spd_sym_from_coeffs(const Eigen::VectorXd& coeffs, int k);
Eigen::VectorXd spd_coeffs_from_sym(const Eigen::MatrixXd& s);

/// Convenience: tangent vector at p from canonical coefficients.
inline TangentVector tangent(const ManifoldPoint& p, const Eigen::VectorXd& coeffs) {
  if (coeffs.size() != p.tag.dimension())
    throw ContractViolation("tangent coefficient length mismatch");
  return TangentVector{p, coeffs};
}

}  // namespace hmean
