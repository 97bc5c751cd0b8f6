#include "wvt/model.hpp"

#include <cmath>
#include <string>

namespace wvt {
namespace model {

namespace {
constexpr double kLog2Pi = 1.8378770664093454835606594728112;
}

void ModelParams::validate() const {
  const int n = order();
  const double bound = 0.5 * (n - 1);
  if (!(p > bound))
    throw ShapeThreshold("ModelParams: shape p = " + std::to_string(p) +
                         " must exceed (n-1)/2 = " + std::to_string(bound));
  chol(sigma);
}

double log_density(const ModelParams& params, const Eigen::VectorXd& x) {
  params.validate();
  const int n = params.order();
  if (x.size() != n)
    throw DimensionMismatch("model::log_density: x has length " +
                            std::to_string(x.size()) + ", expected " + std::to_string(n));
  const double q = 1.0 + 0.5 * x.dot(params.sigma.mat() * x);
  return -0.5 * n * kLog2Pi + std::lgamma(params.p + 0.5) -
         std::lgamma(params.p - 0.5 * (n - 1)) + 0.5 * logdet(params.sigma) -
         (params.p + 0.5) * std::log(q);
}

Eigen::VectorXd sample(const ModelParams& params, RngStream& rng) {
  const int n = params.order();
  const SymMatrix u = wishart::sample(wishart::WishartParams{params.p, params.sigma}, rng);
  const Eigen::MatrixXd l = chol(u);
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z(i) = rng.normal();
  // cov(L^{-T} z) = (L L^T)^{-1} = u^{-1}
  return l.transpose().triangularView<Eigen::Upper>().solve(z);
}

ScorePair score(const ModelParams& params, const Eigen::VectorXd& x) {
  params.validate();
  const int n = params.order();
  if (x.size() != n)
    throw DimensionMismatch("model::score: x has length " + std::to_string(x.size()) +
                            ", expected " + std::to_string(n));
  const SymMatrix sigma_inv = inverse(params.sigma);
  const double q = 1.0 + 0.5 * x.dot(params.sigma.mat() * x);
  const SymMatrix xxt{Eigen::MatrixXd(x * x.transpose())};
  const SymMatrix grad = sigma_inv * 0.5 - xxt * (0.5 * (params.p + 0.5) / q);

  DenseOperator hess = to_dense(PQOperator{sigma_inv, -0.5, 0.0});
  const Eigen::VectorXd w = half_vec(xxt);
  hess.matrix += (0.25 * (params.p + 0.5) / (q * q)) * (w * w.transpose());
  return ScorePair{grad, hess};
}

PQOperator fisher_information(const ModelParams& params) {
  params.validate();
  const double p = params.p;
  const double s = 1.0 / (2.0 * (2.0 * p + 3.0));
  return PQOperator{inverse(params.sigma), (2.0 * p + 1.0) * s, -s};
}

PQOperator fisher_inverse(const ModelParams& params) {
  params.validate();
  const int n = params.order();
  const double p = params.p;
  const double a = 2.0 * (2.0 * p + 3.0) / (2.0 * p + 1.0);
  return PQOperator{params.sigma, a, a / (2.0 * p + 1.0 - n)};
}

PQOperator j_closed_form(const ModelParams& params) {
  params.validate();
  const double c = 1.0 / ((params.p + 1.5) * (params.p + 0.5));
  return PQOperator{inverse(params.sigma), 2.0 * c, c};
}

DenseOperator j_integral_check(const ModelParams& params, std::int64_t samples,
                               std::uint64_t seed) {
  params.validate();
  const int n = params.order();
  const int m = sym_dim(n);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(m, m);
  for (std::int64_t i = 0; i < samples; ++i) {
    RngStream rng = RngStream::substream(seed, static_cast<std::uint64_t>(i));
    const Eigen::VectorXd x = sample(params, rng);
    const double q = 1.0 + 0.5 * x.dot(params.sigma.mat() * x);
    const Eigen::VectorXd w = half_vec(SymMatrix{Eigen::MatrixXd(x * x.transpose())});
    acc += (w * w.transpose()) / (q * q);
  }
  return DenseOperator{n, acc / static_cast<double>(samples)};
}

double log_det_fisher(const ModelParams& params) {
  params.validate();
  const int n = params.order();
  const double p = params.p;
  return sym_dim(n) * std::log((2.0 * p + 1.0) / (2.0 * (2.0 * p + 3.0))) +
         std::log1p(-n / (2.0 * p + 1.0)) - (n + 1.0) * logdet(params.sigma);
}

double jeffreys_log_density(const ModelParams& params) {
  return 0.5 * log_det_fisher(params);
}

wishart::WishartParams posterior(const ModelParams& params, const Eigen::VectorXd& x) {
  params.validate();
  const int n = params.order();
  if (x.size() != n)
    throw DimensionMismatch("model::posterior: x has length " + std::to_string(x.size()) +
                            ", expected " + std::to_string(n));
  const SymMatrix prec{Eigen::MatrixXd(inverse(params.sigma).mat() +
                                       0.5 * (x * x.transpose()))};
  return wishart::WishartParams{params.p + 0.5, inverse(prec)};
}

PQOperator plain_gaussian_fisher(const SymMatrix& u, GaussianParameterization) {
  return PQOperator{inverse(u), 0.5, 0.0};
}

}  // namespace model
}  // namespace wvt
