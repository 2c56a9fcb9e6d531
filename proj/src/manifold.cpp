#include "hmean/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hmean {

namespace {

constexpr double kAntipodalTol = 1e-12;

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& a) {
  return 0.5 * (a + a.transpose());
}

// Symmetric matrix functions via eigendecomposition, with explicit
// re-symmetrization before decomposing.
Eigen::MatrixXd sym_apply(const Eigen::MatrixXd& a, double (*f)(double),
                          bool require_positive) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(a));
  if (require_positive && es.eigenvalues().minCoeff() <= 0.0)
    throw std::domain_error("matrix is not positive definite");
  Eigen::VectorXd d = es.eigenvalues();
  for (int i = 0; i < d.size(); ++i) d[i] = f(d[i]);
  return symmetrize(es.eigenvectors() * d.asDiagonal() *
                    es.eigenvectors().transpose());
}

Eigen::MatrixXd sym_sqrt(const Eigen::MatrixXd& a) {
  return sym_apply(a, [](double x) { return std::sqrt(x); }, true);
}
Eigen::MatrixXd sym_invsqrt(const Eigen::MatrixXd& a) {
  return sym_apply(a, [](double x) { return 1.0 / std::sqrt(x); }, true);
}
Eigen::MatrixXd sym_log(const Eigen::MatrixXd& a) {
  return sym_apply(a, [](double x) { return std::log(x); }, true);
}
Eigen::MatrixXd sym_exp(const Eigen::MatrixXd& a) {
  return sym_apply(a, [](double x) { return std::exp(x); }, false);
}

// Ambient orthonormal basis of the tangent space of S^k at p: the first k
// columns of the Householder reflection that maps the last coordinate axis
// to p. Deterministic in p.
Eigen::MatrixXd sphere_basis(const Eigen::VectorXd& p) {
  const int n = static_cast<int>(p.size());
  Eigen::VectorXd north = Eigen::VectorXd::Zero(n);
  north[n - 1] = 1.0;
  Eigen::VectorXd u = p - north;
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
  const double un = u.norm();
  if (un > 1e-14) {
    u /= un;
    h -= 2.0 * u * u.transpose();
  }
  return h.leftCols(n - 1);
}

// Coordinates of a symmetric matrix in the orthonormal (Frobenius) basis
// {E_ii} u {(E_ij + E_ji)/sqrt(2), i < j}, diagonal entries first.
Eigen::VectorXd sym_coords(const Eigen::MatrixXd& s) {
  const int k = static_cast<int>(s.rows());
  Eigen::VectorXd c(k * (k + 1) / 2);
  for (int i = 0; i < k; ++i) c[i] = s(i, i);
  int idx = k;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) c[idx++] = std::sqrt(2.0) * s(i, j);
  return c;
}

Eigen::MatrixXd sym_from_coords(const Eigen::VectorXd& c, int k) {
  Eigen::MatrixXd s(k, k);
  for (int i = 0; i < k; ++i) s(i, i) = c[i];
  int idx = k;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      s(i, j) = s(j, i) = c[idx++] / std::sqrt(2.0);
    }
  return s;
}

void require_same_tag(const ManifoldPoint& p, const ManifoldPoint& q) {
  if (!(p.tag == q.tag)) throw ContractViolation("manifold tag mismatch");
}

void require_base(const ManifoldPoint& p, const TangentVector& v) {
  if (!(v.base.tag == p.tag) || (v.base.coords - p.coords).norm() > 1e-9)
    throw ContractViolation("tangent vector base does not match point");
}

}  // namespace

std::string ManifoldTag::name() const {
  switch (kind) {
    case ManifoldKind::Euclidean: return "euclidean(" + std::to_string(k) + ")";
    case ManifoldKind::Sphere: return "sphere(" + std::to_string(k) + ")";
    case ManifoldKind::Spd: return "spd(" + std::to_string(k) + ")";
  }
  return "?";
}

ManifoldPoint ManifoldPoint::euclidean(const Eigen::VectorXd& x) {
  if (!x.allFinite()) throw std::domain_error("non-finite coordinates");
  return {ManifoldTag::euclidean(static_cast<int>(x.size())), x};
}

ManifoldPoint ManifoldPoint::sphere(const Eigen::VectorXd& unit) {
  if (!unit.allFinite()) throw std::domain_error("non-finite coordinates");
  const double n = unit.norm();
  if (std::abs(n - 1.0) > 1e-8)
    throw std::domain_error("sphere point is not unit-norm");
  return {ManifoldTag::sphere(static_cast<int>(unit.size()) - 1), unit / n};
}

ManifoldPoint ManifoldPoint::spd(const Eigen::MatrixXd& p) {
  if (p.rows() != p.cols()) throw std::domain_error("SPD point is not square");
  if (!p.allFinite()) throw std::domain_error("non-finite coordinates");
  const double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
  if ((p - p.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::domain_error("SPD point is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(p));
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::domain_error("SPD point is not positive definite");
  const int k = static_cast<int>(p.rows());
  Eigen::MatrixXd s = symmetrize(p);
  Eigen::VectorXd flat(k * k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) flat[i * k + j] = s(i, j);
  return {ManifoldTag::spd(k), flat};
}

Eigen::MatrixXd ManifoldPoint::mat() const {
  if (tag.kind != ManifoldKind::Spd)
    throw ContractViolation("mat() is only defined for SPD points");
  const int k = tag.k;
  Eigen::MatrixXd m(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) m(i, j) = coords[i * k + j];
  return m;
}

CurvatureInfo curvature_info(const ManifoldTag& tag) {
  const double inf = std::numeric_limits<double>::infinity();
  switch (tag.kind) {
    case ManifoldKind::Sphere:
      return {1.0, M_PI, 0.5 * M_PI};
    case ManifoldKind::Euclidean:
    case ManifoldKind::Spd:
      return {0.0, inf, inf};
  }
  return {0.0, inf, inf};
}

double dist(const ManifoldPoint& p, const ManifoldPoint& q) {
  require_same_tag(p, q);
  switch (p.tag.kind) {
    case ManifoldKind::Euclidean:
      return (p.coords - q.coords).norm();
    case ManifoldKind::Sphere: {
      // chord-based formulas stay accurate where acos(dot) loses ~1e-8
      if (p.coords.dot(q.coords) >= 0.0) {
        const double chord = (p.coords - q.coords).norm();
        return 2.0 * std::asin(std::min(1.0, 0.5 * chord));
      }
      const double anti_chord = (p.coords + q.coords).norm();
      return M_PI - 2.0 * std::asin(std::min(1.0, 0.5 * anti_chord));
    }
    case ManifoldKind::Spd: {
      const Eigen::MatrixXd pih = sym_invsqrt(p.mat());
      return sym_log(pih * q.mat() * pih).norm();
    }
  }
  return 0.0;
}

ManifoldPoint exp_map(const ManifoldPoint& p, const TangentVector& v) {
  require_base(p, v);
  switch (p.tag.kind) {
    case ManifoldKind::Euclidean:
      return {p.tag, p.coords + v.coeffs};
    case ManifoldKind::Sphere: {
      const Eigen::MatrixXd basis = sphere_basis(p.coords);
      const Eigen::VectorXd w = basis * v.coeffs;
      const double theta = w.norm();
      if (theta < 1e-300) return p;
      Eigen::VectorXd x = std::cos(theta) * p.coords + std::sin(theta) * w / theta;
      x /= x.norm();
      return {p.tag, x};
    }
    case ManifoldKind::Spd: {
      const Eigen::MatrixXd ph = sym_sqrt(p.mat());
      const Eigen::MatrixXd s = sym_from_coords(v.coeffs, p.tag.k);
      return ManifoldPoint::spd(ph * sym_exp(s) * ph);
    }
  }
  return p;
}

TangentVector log_map(const ManifoldPoint& p, const ManifoldPoint& x) {
  require_same_tag(p, x);
  switch (p.tag.kind) {
    case ManifoldKind::Euclidean:
      return {p, x.coords - p.coords};
    case ManifoldKind::Sphere: {
      double cosv = std::clamp(p.coords.dot(x.coords), -1.0, 1.0);
      if (cosv < -1.0 + kAntipodalTol)
        throw CutLocusError("log map at a (near-)antipodal sphere point");
      const double theta = std::acos(cosv);
      Eigen::VectorXd w = x.coords - cosv * p.coords;
      const double wn = w.norm();
      const Eigen::MatrixXd basis = sphere_basis(p.coords);
      if (wn < 1e-300 || theta == 0.0)
        return {p, Eigen::VectorXd::Zero(p.tag.dimension())};
      return {p, basis.transpose() * (w * (theta / wn))};
    }
    case ManifoldKind::Spd: {
      const Eigen::MatrixXd pih = sym_invsqrt(p.mat());
      const Eigen::MatrixXd s = sym_log(pih * x.mat() * pih);
      return {p, sym_coords(s)};
    }
  }
  return {p, Eigen::VectorXd()};
}

TangentVector parallel_transport(const ManifoldPoint& p, const ManifoldPoint& q,
                                 const TangentVector& v) {
  require_base(p, v);
  require_same_tag(p, q);
  switch (p.tag.kind) {
    case ManifoldKind::Euclidean:
      return {q, v.coeffs};
    case ManifoldKind::Sphere: {
      double cosv = std::clamp(p.coords.dot(q.coords), -1.0, 1.0);
      if (cosv < -1.0 + kAntipodalTol)
        throw CutLocusError("parallel transport through a cut locus");
      const Eigen::MatrixXd bp = sphere_basis(p.coords);
      const Eigen::MatrixXd bq = sphere_basis(q.coords);
      Eigen::VectorXd w = bp * v.coeffs;
      const double theta = std::acos(cosv);
      if (theta > 1e-14) {
        const double sinv = std::sin(theta);
        const Eigen::VectorXd e = (q.coords - cosv * p.coords) / sinv;
        const Eigen::VectorXd e_out = (cosv * q.coords - p.coords) / sinv;
        const double a = w.dot(e);
        w += a * (e_out - e);
      }
      return {q, bq.transpose() * w};
    }
    case ManifoldKind::Spd: {
      // With S the identity-frame representative of v at P, the transported
      // representative at Q is B S B^T, B = Q^{-1/2} P^{1/2} exp(A/2),
      // A = log(P^{-1/2} Q P^{-1/2}). B is orthogonal.
      const Eigen::MatrixXd ph = sym_sqrt(p.mat());
      const Eigen::MatrixXd pih = sym_invsqrt(p.mat());
      const Eigen::MatrixXd qih = sym_invsqrt(q.mat());
      const Eigen::MatrixXd a = sym_log(pih * q.mat() * pih);
      const Eigen::MatrixXd b = qih * ph * sym_exp(0.5 * a);
      const Eigen::MatrixXd s = sym_from_coords(v.coeffs, p.tag.k);
      return {q, sym_coords(symmetrize(b * s * b.transpose()))};
    }
  }
  return {q, v.coeffs};
}

Eigen::MatrixXd spd_sym_from_coeffs(const Eigen::VectorXd& coeffs, int k) {
  if (coeffs.size() != k * (k + 1) / 2)
    throw ContractViolation("coefficient length mismatch");
  return sym_from_coords(coeffs, k);
}

Eigen::VectorXd spd_coeffs_from_sym(const Eigen::MatrixXd& s) {
  if (s.rows() != s.cols()) throw ContractViolation("not a square matrix");
  return sym_coords(symmetrize(s));
}

OrthonormalFrame tangent_frame(const ManifoldPoint& p) {
  const int d = p.tag.dimension();
  return {p, Eigen::MatrixXd::Identity(d, d)};
}

Eigen::MatrixXd transport_matrix(const ManifoldPoint& p, const ManifoldPoint& q) {
  const int d = p.tag.dimension();
  Eigen::MatrixXd t(d, d);
  for (int j = 0; j < d; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
    e[j] = 1.0;
    t.col(j) = parallel_transport(p, q, TangentVector{p, e}).coeffs;
  }
  return t;
}

}  // namespace hmean
