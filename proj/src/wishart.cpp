#include "wvt/wishart.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace wvt {
namespace wishart {

namespace {
std::string threshold_message(const char* what, double p, double bound,
                              const char* bound_name) {
  return std::string(what) + ": shape p = " + std::to_string(p) +
         " must exceed " + bound_name + " = " + std::to_string(bound);
}
}  // namespace

void WishartParams::validate() const {
  const int n = order();
  const double bound = 0.5 * (n - 1);
  if (!(p > bound))
    throw ShapeThreshold(threshold_message("WishartParams", p, bound, "(n-1)/2"));
  chol(sigma);
}

double log_multivariate_gamma(int n, double p) {
  const double bound = 0.5 * (n - 1);
  if (!(p > bound))
    throw ShapeThreshold(threshold_message("log_multivariate_gamma", p, bound, "(n-1)/2"));
  double s = 0.25 * n * (n - 1) * std::log(2.0 * 3.14159265358979323846);
  for (int j = 0; j < n; ++j) s += std::lgamma(p - 0.5 * j);
  return s;
}

double log_density(const WishartParams& params, const SymMatrix& u) {
  params.validate();
  require_same_order(params.order(), u.order(), "wishart::log_density");
  if (!is_positive_definite(u)) return -std::numeric_limits<double>::infinity();
  const int n = params.order();
  const SymMatrix sigma_inv = inverse(params.sigma);
  return -inner(sigma_inv, u) + (params.p - 0.5 * (n + 1)) * logdet(u) -
         params.p * logdet(params.sigma) - log_multivariate_gamma(n, params.p);
}

SymMatrix log_density_gradient(const WishartParams& params, const SymMatrix& u) {
  params.validate();
  require_same_order(params.order(), u.order(), "wishart::log_density_gradient");
  const int n = params.order();
  return inverse(params.sigma) * (-1.0) +
         inverse(u) * (params.p - 0.5 * (n + 1));
}

PQOperator log_density_hessian(const WishartParams& params, const SymMatrix& u) {
  params.validate();
  require_same_order(params.order(), u.order(), "wishart::log_density_hessian");
  const int n = params.order();
  return PQOperator{inverse(u), -(params.p - 0.5 * (n + 1)), 0.0};
}

double laplace_transform(const WishartParams& params, const SymMatrix& s) {
  params.validate();
  require_same_order(params.order(), s.order(), "wishart::laplace_transform");
  const int n = params.order();
  const Eigen::MatrixXd a =
      Eigen::MatrixXd::Identity(n, n) + params.sigma.mat() * s.mat();
  return std::pow(a.determinant(), -params.p);
}

SymMatrix sample(const WishartParams& params, RngStream& rng) {
  const int n = params.order();
  const Eigen::MatrixXd l = chol(params.sigma * 0.5);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = std::sqrt(rng.chi_square(2.0 * params.p - i));
    for (int j = 0; j < i; ++j) a(i, j) = rng.normal();
  }
  const Eigen::MatrixXd la = l * a;
  return SymMatrix(la * la.transpose());
}

SecondMoments second_moments(const WishartParams& params) {
  params.validate();
  const double p = params.p;
  return SecondMoments{
      PQOperator{params.sigma, p, p * p},
      PQOperator{params.sigma, 0.5 * p + p * p, 0.5 * p},
  };
}

InverseMoments inverse_moments(const WishartParams& params) {
  params.validate();
  const int n = params.order();
  const double p = params.p;
  const double a0 = p - 0.5 * n;
  const double a1 = p - 0.5 * (n + 1);
  const double a2 = p - 0.5 * (n + 2);
  const double a3 = p - 0.5 * (n + 3);
  if (!(a1 > 0.0))
    throw ShapeThreshold(
        threshold_message("inverse_moments (first moment)", p, 0.5 * (n + 1), "(n+1)/2"));
  if (!(a3 > 0.0))
    throw ShapeThreshold(
        threshold_message("inverse_moments (second moments)", p, 0.5 * (n + 3), "(n+3)/2"));
  const SymMatrix sigma_inv = inverse(params.sigma);
  const double d = a3 * a1 * a0;
  return InverseMoments{
      sigma_inv * (1.0 / a1),
      PQOperator{sigma_inv, 1.0 / d, a2 / d},
      PQOperator{sigma_inv, a1 / d, 0.5 / d},
  };
}

}  // namespace wishart
}  // namespace wvt
