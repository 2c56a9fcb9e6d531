#include <cmath>

#include "doctest.h"
#include "hmean/manifold.hpp"
#include "hmean/rng.hpp"
#include "test_support.hpp"

using namespace hmean;
using hmean::testing::random_point;
using hmean::testing::random_tangent;

namespace {

const std::vector<ManifoldTag> kTags = {
    ManifoldTag::euclidean(3), ManifoldTag::sphere(1), ManifoldTag::sphere(2),
    ManifoldTag::sphere(3),    ManifoldTag::spd(2),    ManifoldTag::spd(3)};

// One rung of Schild's ladder: approximate transport of v (coefficients at
// a) to b for nearby a, b.
Eigen::VectorXd schild_rung(const ManifoldPoint& a, const ManifoldPoint& b,
                            const Eigen::VectorXd& v, double eps) {
  const ManifoldPoint p0 = exp_map(a, tangent(a, eps * v));
  const TangentVector half = log_map(p0, b);
  const ManifoldPoint mid = exp_map(p0, TangentVector{p0, 0.5 * half.coeffs});
  const TangentVector to_mid = log_map(a, mid);
  const ManifoldPoint p1 = exp_map(a, TangentVector{a, 2.0 * to_mid.coeffs});
  return log_map(b, p1).coeffs / eps;
}

}  // namespace

TEST_CASE("exp/log round trips within 1e-8") {
  SeededRng rng(101);
  for (const auto& tag : kTags) {
    for (int trial = 0; trial < 20; ++trial) {
      const ManifoldPoint p = random_point(tag, rng);
      const Eigen::VectorXd v = random_tangent(tag.dimension(), 0.3, rng);
      const ManifoldPoint q = exp_map(p, tangent(p, v));
      const TangentVector back = log_map(p, q);
      CHECK((back.coeffs - v).norm() < 1e-8);
      CHECK(std::abs(dist(p, q) - v.norm()) < 1e-8);

      // and point-level: Exp(Log(x)) == x
      const ManifoldPoint x = random_point(tag, rng);
      const ManifoldPoint x2 = exp_map(p, log_map(p, x));
      CHECK(dist(x, x2) < 1e-8);
    }
  }
}

TEST_CASE("distance axioms: symmetry, identity, triangle inequality") {
  SeededRng rng(102);
  for (const auto& tag : kTags) {
    for (int trial = 0; trial < 170; ++trial) {  // ~1000 triples across tags
      const ManifoldPoint a = random_point(tag, rng);
      const ManifoldPoint b = random_point(tag, rng);
      const ManifoldPoint c = random_point(tag, rng);
      CHECK(dist(a, a) == doctest::Approx(0.0).epsilon(1e-12));
      CHECK(std::abs(dist(a, b) - dist(b, a)) < 1e-10);
      CHECK(dist(a, c) <= dist(a, b) + dist(b, c) + 1e-10);
      CHECK(dist(a, b) >= 0.0);
    }
  }
}

TEST_CASE("sphere geometry closed forms") {
  Eigen::VectorXd e1(3), e3(3);
  e1 << 1, 0, 0;
  e3 << 0, 0, 1;
  const ManifoldPoint p = ManifoldPoint::sphere(e3);
  const ManifoldPoint q = ManifoldPoint::sphere(e1);
  CHECK(dist(p, q) == doctest::Approx(M_PI / 2).epsilon(1e-12));

  // a quarter turn from the north pole lands on the equator
  Eigen::VectorXd v(2);
  v << M_PI / 2, 0.0;
  const ManifoldPoint moved = exp_map(p, tangent(p, v));
  CHECK(std::abs(moved.coords[2]) < 1e-12);

  // log at a near-antipodal pair is rejected
  Eigen::VectorXd anti = -e3;
  CHECK_THROWS_AS((void)log_map(p, ManifoldPoint::sphere(anti)), CutLocusError);
}

TEST_CASE("spd geometry closed forms and coefficient convention") {
  const ManifoldPoint id = ManifoldPoint::spd(Eigen::MatrixXd::Identity(2, 2));
  Eigen::MatrixXd d(2, 2);
  d << std::exp(1.0), 0, 0, 1;
  CHECK(dist(id, ManifoldPoint::spd(d)) == doctest::Approx(1.0).epsilon(1e-12));

  // tangent matrix diag(a, b) + offdiag c at the identity has coefficients
  // (a, b, c * sqrt(2))
  Eigen::MatrixXd s(2, 2);
  s << 0.3, 0.1, 0.1, -0.2;
  const Eigen::VectorXd coeffs = spd_coeffs_from_sym(s);
  CHECK(coeffs[0] == doctest::Approx(0.3));
  CHECK(coeffs[1] == doctest::Approx(-0.2));
  CHECK(coeffs[2] == doctest::Approx(0.1 * std::sqrt(2.0)));
  CHECK((spd_sym_from_coeffs(coeffs, 2) - s).norm() < 1e-14);

  // exp at the identity is the matrix exponential
  const ManifoldPoint moved = exp_map(id, tangent(id, coeffs));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  Eigen::VectorXd ev = es.eigenvalues();
  for (int i = 0; i < 2; ++i) ev[i] = std::exp(ev[i]);
  const Eigen::MatrixXd expm =
      es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  CHECK((moved.mat() - expm).norm() < 1e-12);
}

TEST_CASE("parallel transport is an isometry and matches Schild's ladder") {
  SeededRng rng(103);
  for (const auto& tag : kTags) {
    const ManifoldPoint p = random_point(tag, rng);
    const ManifoldPoint q = random_point(tag, rng);
    const Eigen::VectorXd v = random_tangent(tag.dimension(), 1.0, rng);
    const TangentVector moved = parallel_transport(p, q, tangent(p, v));
    CHECK(std::abs(moved.norm() - v.norm()) < 1e-10);

    // transport matrix is orthogonal and consistent with transporting v
    const Eigen::MatrixXd t = transport_matrix(p, q);
    const int dim = tag.dimension();
    CHECK((t.transpose() * t - Eigen::MatrixXd::Identity(dim, dim)).norm() <
          1e-10);
    CHECK((t * v - moved.coeffs).norm() < 1e-10);
  }
}

TEST_CASE("Schild's ladder oracle on curved manifolds") {
  SeededRng rng(104);
  for (const auto& tag : {ManifoldTag::sphere(2), ManifoldTag::spd(2)}) {
    const ManifoldPoint p = random_point(tag, rng);
    const Eigen::VectorXd step = random_tangent(tag.dimension(), 0.8, rng);
    const ManifoldPoint q = exp_map(p, tangent(p, step));
    const Eigen::VectorXd v = random_tangent(tag.dimension(), 1.0, rng);

    constexpr int kRungs = 10000;
    ManifoldPoint cur = p;
    Eigen::VectorXd carried = v;
    for (int i = 1; i <= kRungs; ++i) {
      const ManifoldPoint next =
          exp_map(p, TangentVector{p, (double(i) / kRungs) * step});
      carried = schild_rung(cur, next, carried, 1e-3);
      cur = next;
    }
    const Eigen::VectorXd exact = parallel_transport(p, q, tangent(p, v)).coeffs;
    CHECK((carried - exact).norm() < 1e-4);
  }
}

TEST_CASE("frames: canonical frame is orthonormal, rotated frames compose") {
  SeededRng rng(105);
  for (const auto& tag : kTags) {
    const ManifoldPoint p = random_point(tag, rng);
    const OrthonormalFrame frame = tangent_frame(p);
    const int dim = tag.dimension();
    CHECK((frame.rotation - Eigen::MatrixXd::Identity(dim, dim)).norm() <
          1e-12);
    const Eigen::VectorXd v = random_tangent(dim, 1.0, rng);
    CHECK((frame.to_frame_coords(tangent(p, v)) - v).norm() < 1e-12);
  }
}

TEST_CASE("contract violations are rejected") {
  Eigen::VectorXd x(2), u(3);
  x << 1, 2;
  u << 0, 0, 1;
  const ManifoldPoint e = ManifoldPoint::euclidean(x);
  const ManifoldPoint s = ManifoldPoint::sphere(u);
  CHECK_THROWS_AS((void)dist(e, s), ContractViolation);
  CHECK_THROWS_AS((void)tangent(e, u), ContractViolation);
  CHECK_THROWS(ManifoldPoint::sphere(2.0 * u));
  Eigen::MatrixXd notpd(2, 2);
  notpd << 1, 2, 2, 1;
  CHECK_THROWS(ManifoldPoint::spd(notpd));
}
