#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "wvt/errors.hpp"
#include "wvt/quadrature.hpp"
#include "wvt/rng.hpp"
#include "wvt/wishart.hpp"

using namespace wvt;
using namespace wvt::wishart;

namespace {
SymMatrix scalar(double v) {
  return SymMatrix::diagonal(Eigen::VectorXd::Constant(1, v));
}

double lgamma_ratio_constant(int n) {
  // Recurrence constant linking orders n and n-1 under the convention that
  // Lebesgue measure lives in orthonormal coordinates of the symmetric space.
  return 0.5 * (n - 1) * std::log(2.0 * M_PI);
}
}  // namespace

TEST_CASE("multivariate gamma reduces to lgamma in order one") {
  for (double p : {0.51, 1.0, 2.5, 7.0})
    CHECK(log_multivariate_gamma(1, p) == doctest::Approx(std::lgamma(p)).epsilon(1e-15));
}

TEST_CASE("multivariate gamma satisfies the order recurrence") {
  for (int n : {2, 3, 4, 5}) {
    for (double p : {0.5 * (n - 1) + 0.3, 3.0, 11.5}) {
      double lhs = log_multivariate_gamma(n, p);
      double rhs = lgamma_ratio_constant(n) + std::lgamma(p) +
                   log_multivariate_gamma(n - 1, p - 0.5);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(log_multivariate_gamma(3, 1.0), ShapeThreshold);
}

TEST_CASE("order one density is the gamma density") {
  // Shape p, scale sigma.
  double p = 2.0, s = 1.5, u = 2.25;
  WishartParams params{p, scalar(s)};
  double expect = (p - 1) * std::log(u) - u / s - p * std::log(s) - std::lgamma(p);
  CHECK(log_density(params, scalar(u)) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("order two density at the identity is pinned") {
  WishartParams params{2.0, SymMatrix::identity(2)};
  // exponent -tr(I) = -2; the normalizer at p = 2 equals pi/sqrt(2) under
  // the orthonormal coordinate convention.
  double expect = -2.0 - std::log(M_PI / std::sqrt(2.0));
  CHECK(log_density(params, SymMatrix::identity(2)) ==
        doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("density vanishes off the cone") {
  WishartParams params{2.0, SymMatrix::identity(2)};
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 2.0, 2.0, 1.0;
  CHECK(log_density(params, SymMatrix(m)) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((WishartParams{0.4, SymMatrix::identity(2)}.validate()), ShapeThreshold);
  CHECK_THROWS_AS(
      log_density(WishartParams{2.0, SymMatrix(Eigen::MatrixXd::Zero(2, 2))},
                  SymMatrix::identity(2)),
      NotPositiveDefinite);
}

TEST_CASE("log density gradient and hessian have the stated closed forms") {
  Eigen::MatrixXd m(2, 2);
  m << 2.0, 0.5, 0.5, 1.5;
  SymMatrix sigma(m);
  Eigen::MatrixXd w(2, 2);
  w << 1.2, -0.3, -0.3, 0.9;
  SymMatrix u(w);
  double p = 3.2;
  WishartParams params{p, sigma};

  SymMatrix grad = log_density_gradient(params, u);
  SymMatrix expect_grad =
      inverse(u) * (p - 1.5) - inverse(sigma);
  CHECK(inner(grad - expect_grad, grad - expect_grad) < 1e-22);

  // Finite difference cross check along a direction.
  Eigen::MatrixXd hdir(2, 2);
  hdir << 0.4, -0.1, -0.1, 0.2;
  SymMatrix h(hdir);
  double eps = 1e-6;
  double fd = (log_density(params, u + h * eps) - log_density(params, u + h * (-eps))) /
              (2 * eps);
  CHECK(inner(grad, h) == doctest::Approx(fd).epsilon(1e-6));

  auto hess = log_density_hessian(params, u);
  CHECK(hess.a == doctest::Approx(-(p - 1.5)).epsilon(1e-14));
  CHECK(hess.b == doctest::Approx(0.0));
  CHECK((hess.u.mat() * u.mat() - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("laplace transform matches a scalar quadrature") {
  WishartParams params{2.3, scalar(1.4)};
  double s = 0.8;
  auto quad = integrate_positive_axis([&](double u) {
    return std::exp(log_density(params, scalar(u)) - s * u);
  });
  REQUIRE(quad.converged);
  CHECK(laplace_transform(params, scalar(s)) ==
        doctest::Approx(quad.value).epsilon(1e-9));
}

TEST_CASE("laplace transform diagonal factorization") {
  Eigen::VectorXd d(2);
  d << 1.0, 2.0;
  WishartParams params{1.7, SymMatrix::diagonal(d)};
  Eigen::VectorXd sd(2);
  sd << 0.5, 0.25;
  double expect = std::pow((1 + 1.0 * 0.5) * (1 + 2.0 * 0.25), -1.7);
  CHECK(laplace_transform(params, SymMatrix::diagonal(sd)) ==
        doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("sampling is deterministic given the stream and lands in the cone") {
  Eigen::MatrixXd m(3, 3);
  m << 2, 0.3, 0.1, 0.3, 1.5, -0.2, 0.1, -0.2, 1.0;
  WishartParams params{2.6, SymMatrix(m)};
  RngStream a(404), b(404);
  SymMatrix ua = sample(params, a);
  SymMatrix ub = sample(params, b);
  CHECK(inner(ua - ub, ua - ub) == 0.0);
  CHECK(is_positive_definite(ua));
  CHECK(std::isfinite(log_density(params, ua)));
}

TEST_CASE("sample mean approaches p sigma") {
  WishartParams params{1.8, scalar(2.0)};
  RngStream rng(2024);
  const int n = 40000;
  double s = 0;
  for (int i = 0; i < n; ++i) s += sample(params, rng)(0, 0);
  double mean = s / n;
  // Var(U) = 2 p sigma^2 for the scalar case.
  double se = std::sqrt(2 * 1.8 * 4.0 / n);
  CHECK(std::abs(mean - 1.8 * 2.0) < 6 * se);
}

TEST_CASE("second moment coefficients") {
  Eigen::MatrixXd m(2, 2);
  m << 1.4, 0.2, 0.2, 0.9;
  SymMatrix sigma(m);
  double p = 2.5;
  auto mom = second_moments(WishartParams{p, sigma});
  CHECK(mom.tensor_square.a == doctest::Approx(p));
  CHECK(mom.tensor_square.b == doctest::Approx(p * p));
  CHECK(mom.p_of_u.a == doctest::Approx(0.5 * p + p * p));
  CHECK(mom.p_of_u.b == doctest::Approx(0.5 * p));
  CHECK(inner(mom.tensor_square.u - sigma, mom.tensor_square.u - sigma) == 0.0);

  // Scalar pin: gamma(2,1) second moment is 6.
  auto scalar_mom = second_moments(WishartParams{2.0, scalar(1.0)});
  CHECK(to_dense(scalar_mom.tensor_square).matrix(0, 0) == doctest::Approx(6.0));
}

TEST_CASE("inverse moment coefficients") {
  double p = 5.0;
  int n = 2;
  Eigen::MatrixXd m(2, 2);
  m << 1.0, -0.3, -0.3, 2.0;
  SymMatrix sigma(m);
  auto inv = inverse_moments(WishartParams{p, sigma});

  double a0 = p - 0.5 * n, a1 = p - 0.5 * (n + 1), a2 = p - 0.5 * (n + 2),
         a3 = p - 0.5 * (n + 3);
  double den = a3 * a1 * a0;

  SymMatrix expect_mean = inverse(sigma) * (1.0 / a1);
  CHECK(inner(inv.mean_inverse - expect_mean, inv.mean_inverse - expect_mean) < 1e-24);

  CHECK(inv.tensor_square.a == doctest::Approx(1.0 / den));
  CHECK(inv.tensor_square.b == doctest::Approx(a2 / den));
  CHECK(inv.p_of_uinv.a == doctest::Approx(a1 / den));
  CHECK(inv.p_of_uinv.b == doctest::Approx(0.5 / den));

  // Scalar pins: mean of the inverse at p = 3 is 1/2, second inverse moment
  // at p = 4 is 1/6.
  CHECK(inverse_moments(WishartParams{3.0, scalar(1.0)}).mean_inverse(0, 0) ==
        doctest::Approx(0.5).epsilon(1e-14));
  CHECK(to_dense(inverse_moments(WishartParams{4.0, scalar(1.0)}).tensor_square)
            .matrix(0, 0) == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
}

TEST_CASE("inverse moments refuse shapes below their thresholds") {
  CHECK_THROWS_AS(inverse_moments(WishartParams{1.0, scalar(1.0)}), ShapeThreshold);
  CHECK_THROWS_AS(inverse_moments(WishartParams{1.8, scalar(1.0)}), ShapeThreshold);
  CHECK_NOTHROW(inverse_moments(WishartParams{2.2, scalar(1.0)}));
}
