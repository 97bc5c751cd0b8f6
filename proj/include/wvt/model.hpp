#pragma once

#include <cstdint>

#include "wvt/lops.hpp"
#include "wvt/rng.hpp"
#include "wvt/symspace.hpp"
#include "wvt/wishart.hpp"

namespace wvt {
namespace model {

// Marginal law of a centered Gaussian vector whose precision matrix is a
// Wishart draw with parameters (p, sigma): a heavy-tailed elliptical family
// on R^n with matrix parameter sigma.
struct ModelParams {
  double p = 1.0;
  SymMatrix sigma;

  int order() const { return sigma.order(); }
  void validate() const;
};

// log f(x) = -(n/2) log(2 pi) + log Gamma(p + 1/2) - log Gamma(p - (n-1)/2)
//            + (1/2) logdet sigma - (p + 1/2) log(1 + x' sigma x / 2).
double log_density(const ModelParams& params, const Eigen::VectorXd& x);

// Compound draw: U Wishart(p, sigma), then x ~ N(0, U^{-1}).
Eigen::VectorXd sample(const ModelParams& params, RngStream& rng);

struct ScorePair {
  SymMatrix grad;      // derivative of log f in sigma, an element of E
  DenseOperator hess;  // second derivative; carries a rank-one term outside L
};

// grad = sigma^{-1}/2 - (p+1/2) (xx')/2 / (1 + x'sigma x/2)
// hess = -P(sigma^{-1})/2 + (p+1/2)/4 (xx')(x)(xx') / (1 + x'sigma x/2)^2
ScorePair score(const ModelParams& params, const Eigen::VectorXd& x);

// Fisher information of the family in sigma:
//   ((2p+1) P(sigma^{-1}) - sigma^{-1}(x)sigma^{-1}) / (2(2p+3)),
// an element of the algebra at base point sigma^{-1}; the coefficients do
// not depend on n.
PQOperator fisher_information(const ModelParams& params);

// Closed-form inverse: (2(2p+3)/(2p+1)) (P(sigma) + sigma(x)sigma/(2p+1-n)).
PQOperator fisher_inverse(const ModelParams& params);

// The fourth-moment operator E[(xx')(x)(xx') / (1 + x'sigma x/2)^2] in closed
// form: (4/((p+3/2)(p+1/2))) (P(sigma^{-1})/2 + sigma^{-1}(x)sigma^{-1}/4).
// Satisfies fisher = P(sigma^{-1})/2 - (p+1/2)/4 * j.
PQOperator j_closed_form(const ModelParams& params);

// Monte Carlo estimate of the same operator from `samples` model draws.
DenseOperator j_integral_check(const ModelParams& params, std::int64_t samples,
                               std::uint64_t seed);

// det of the Fisher operator in the orthonormal basis:
//   ((2p+1)/(2(2p+3)))^m (1 - n/(2p+1)) (det sigma)^{-(n+1)},  m = n(n+1)/2.
double log_det_fisher(const ModelParams& params);

// Unnormalized log Jeffreys density, (1/2) log det of the Fisher operator;
// proportional to (det sigma)^{-(n+1)/2}.
double jeffreys_log_density(const ModelParams& params);

// Conjugate update: observing x turns the Wishart(p, sigma) law on the
// precision into Wishart(p + 1/2, sigma1) with sigma1^{-1} = sigma^{-1} + xx'/2.
wishart::WishartParams posterior(const ModelParams& params, const Eigen::VectorXd& x);

enum class GaussianParameterization { precision, covariance };

// Fisher information of the plain Gaussian N(0, u^{-1}) in its precision u,
// or of N(0, v) in its covariance v; both equal P(arg^{-1})/2.
PQOperator plain_gaussian_fisher(const SymMatrix& u, GaussianParameterization kind);

}  // namespace model
}  // namespace wvt
