#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "wvt/errors.hpp"
#include "wvt/lops.hpp"
#include "wvt/rng.hpp"

using namespace wvt;

namespace {
SymMatrix sym2(double a, double b, double c) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, b, c;
  return SymMatrix(m);
}

SymMatrix random_spd(RngStream& rng, int n) {
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) l(i, j) = 0.4 * rng.normal();
    l(i, i) = std::exp(0.4 * rng.normal());
  }
  return SymMatrix(l * l.transpose());
}
}  // namespace

TEST_CASE("apply matches the defining formula") {
  auto u = sym2(2, 1, 3);
  auto v = sym2(1, -1, 0.5);
  PQOperator op{u, 1.5, -0.25};
  SymMatrix image = apply(op, v);
  Eigen::MatrixXd expect =
      1.5 * (u.mat() * v.mat() * u.mat()) - 0.25 * inner(u, v) * u.mat();
  CHECK((image.mat() - expect).cwiseAbs().maxCoeff() < 1e-13);

  CHECK_THROWS_AS(apply(op, SymMatrix::identity(3)), DimensionMismatch);
}

TEST_CASE("dense form agrees with apply on every basis vector") {
  RngStream rng(31);
  for (int n : {1, 2, 3, 4}) {
    auto u = random_spd(rng, n);
    PQOperator op{u, 0.7, 0.3};
    DenseOperator d = to_dense(op);
    OrthoBasis basis(n);
    for (int k = 0; k < basis.dim(); ++k) {
      SymMatrix lhs = d.apply(basis[k]);
      SymMatrix rhs = apply(op, basis[k]);
      CHECK(inner(lhs - rhs, lhs - rhs) < 1e-20);
    }
    // The dense matrix of a self adjoint operator is symmetric.
    CHECK((d.matrix - d.matrix.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("scalar operator reduces to multiplication") {
  // For n = 1 both generators act as multiplication by u^2.
  SymMatrix u = SymMatrix::diagonal(Eigen::VectorXd::Constant(1, 2.0));
  PQOperator op{u, 1.25, 0.5};
  SymMatrix v = SymMatrix::diagonal(Eigen::VectorXd::Constant(1, 3.0));
  CHECK(apply(op, v)(0, 0) == doctest::Approx((1.25 + 0.5) * 4.0 * 3.0));
  PQOperator inv = invert(op);
  CHECK(to_dense(inv).matrix(0, 0) == doctest::Approx(1.0 / ((1.25 + 0.5) * 4.0)));
}

TEST_CASE("invert produces a two parameter inverse over the inverse base") {
  RngStream rng(77);
  for (int n : {1, 2, 3}) {
    auto u = random_spd(rng, n);
    PQOperator op{u, 1.1, -0.2};
    PQOperator inv = invert(op);
    // The inverse lives over u^{-1}.
    CHECK((inv.u.mat() * u.mat() - Eigen::MatrixXd::Identity(n, n))
              .cwiseAbs()
              .maxCoeff() < 1e-11);
    Eigen::MatrixXd prod = to_dense(inv).matrix * to_dense(op).matrix;
    CHECK((prod - Eigen::MatrixXd::Identity(prod.rows(), prod.cols()))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
  }
}

TEST_CASE("inversion refuses the singular configurations") {
  auto u = sym2(1.5, 0.25, 1.0);
  // b = -a/n puts the operator on its singular ray.
  PQOperator ray{u, 2.0, -1.0};
  CHECK_THROWS_AS(invert(ray), SingularOperator);
  PQOperator no_p{u, 0.0, 1.0};
  CHECK_THROWS_AS(invert(no_p), SingularOperator);
}

TEST_CASE("determinant matches the dense determinant") {
  RngStream rng(5);
  for (int n : {1, 2, 3, 4}) {
    auto u = random_spd(rng, n);
    for (double b : {-0.3, 0.0, 0.45}) {
      PQOperator op{u, 1.3, b};
      double dense_det = to_dense(op).matrix.determinant();
      CHECK(det(op) == doctest::Approx(dense_det).epsilon(1e-10));
    }
  }
  // Degenerate a = 0 cases collapse to rank one.
  SymMatrix s1 = SymMatrix::diagonal(Eigen::VectorXd::Constant(1, 3.0));
  PQOperator scalar_q{s1, 0.0, 2.0};
  CHECK(det(scalar_q) == doctest::Approx(2.0 * 9.0));
  PQOperator planar_q{sym2(1, 0, 2), 0.0, 2.0};
  CHECK(det(planar_q) == doctest::Approx(0.0));
}

TEST_CASE("positive definiteness classification") {
  auto u = sym2(2, 0.5, 1.5);
  CHECK(is_posdef(PQOperator{u, 1.0, 0.1}));
  CHECK(is_posdef(PQOperator{u, 1.0, -0.45}));  // c < 1/n, still positive
  CHECK_FALSE(is_posdef(PQOperator{u, 1.0, -0.5}));   // singular ray
  CHECK_FALSE(is_posdef(PQOperator{u, 1.0, -0.75}));  // beyond the ray
  CHECK_FALSE(is_posdef(PQOperator{u, -1.0, 0.2}));
  // The classification is only defined over the cone.
  CHECK_THROWS_AS(is_posdef(PQOperator{sym2(1, 2, 1), 1.0, 0.0}),
                  NotPositiveDefinite);

  // a = 0 leaves a pure tensor term: positive only in the scalar case.
  SymMatrix s1 = SymMatrix::diagonal(Eigen::VectorXd::Constant(1, 2.0));
  CHECK(is_posdef(PQOperator{s1, 0.0, 3.0}));
  CHECK_FALSE(is_posdef(PQOperator{s1, 0.0, -3.0}));
  CHECK_FALSE(is_posdef(PQOperator{u, 0.0, 3.0}));

  // n = 1 has no trace-free complement, so a < 0 can still be positive
  // when a + b > 0; for n >= 2 the complement eigenvalue a rules.
  CHECK(is_posdef(PQOperator{s1, -1.0, 2.0}));
  CHECK_FALSE(is_posdef(PQOperator{s1, -1.0, 0.5}));
  CHECK_FALSE(is_posdef(PQOperator{u, -1.0, 2.0}));
}

TEST_CASE("inversion is an involution") {
  RngStream rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    auto u = random_spd(rng, 3);
    PQOperator op{u, 0.6 + rng.uniform01(), rng.normal() * 0.2};
    if (std::abs(1.0 + 3.0 * op.b / op.a) < 0.05) continue;
    PQOperator back = invert(invert(op));
    CHECK(inner(back.u - op.u, back.u - op.u) < 1e-18);
    CHECK(back.a == doctest::Approx(op.a).epsilon(1e-11));
    CHECK(back.b == doctest::Approx(op.b).epsilon(1e-10));
  }
}
