#pragma once

#include <cmath>

#include "hmean/manifold.hpp"
#include "hmean/rng.hpp"

namespace hmean::testing {

inline ManifoldPoint random_point(const ManifoldTag& tag, SeededRng& rng) {
  switch (tag.kind) {
    case ManifoldKind::Euclidean: {
      Eigen::VectorXd x(tag.k);
      for (int i = 0; i < tag.k; ++i) x[i] = rng.normal();
      return ManifoldPoint::euclidean(x);
    }
    case ManifoldKind::Sphere: {
      Eigen::VectorXd x(tag.k + 1);
      do {
        for (int i = 0; i <= tag.k; ++i) x[i] = rng.normal();
      } while (x.norm() < 1e-6);
      return ManifoldPoint::sphere(x / x.norm());
    }
    case ManifoldKind::Spd: {
      Eigen::MatrixXd a(tag.k, tag.k);
      for (int i = 0; i < tag.k; ++i)
        for (int j = 0; j < tag.k; ++j) a(i, j) = 0.4 * rng.normal();
      const Eigen::MatrixXd s = 0.5 * (a + a.transpose());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
      Eigen::VectorXd d = es.eigenvalues();
      for (int i = 0; i < d.size(); ++i) d[i] = std::exp(d[i]);
      return ManifoldPoint::spd(es.eigenvectors() * d.asDiagonal() *
                                es.eigenvectors().transpose());
    }
  }
  throw std::logic_error("unreachable");
}

inline Eigen::VectorXd random_tangent(int dim, double scale, SeededRng& rng) {
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = scale * rng.normal();
  return v;
}

/// Haar-ish random rotation (QR of a Gaussian matrix, determinant-corrected).
inline Eigen::MatrixXd random_rotation(int dim, SeededRng& rng) {
  Eigen::MatrixXd g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

}  // namespace hmean::testing
