#pragma once

#include "wvt/lops.hpp"
#include "wvt/rng.hpp"
#include "wvt/symspace.hpp"

namespace wvt {
namespace wishart {

// Parameters of the Wishart law with Laplace transform det(I + sigma s)^(-p)
// and mean p*sigma. Existence requires p > (n-1)/2 and sigma positive definite.
struct WishartParams {
  double p = 1.0;
  SymMatrix sigma;

  int order() const { return sigma.order(); }
  void validate() const;  // throws ShapeThreshold / NotPositiveDefinite
};

// log Gamma_n(p) in the orthonormal-coordinate Lebesgue normalization:
// (n(n-1)/4) log(2 pi) + sum_{j=1..n} log Gamma(p - (j-1)/2).
double log_multivariate_gamma(int n, double p);

// Log density on the positive definite cone, Lebesgue measure in orthonormal
// coordinates: -tr(sigma^{-1} u) + (p-(n+1)/2) logdet u - p logdet sigma
// - log Gamma_n(p). Returns -infinity when u is not positive definite.
double log_density(const WishartParams& params, const SymMatrix& u);

// Gradient and Hessian of u -> log density at u (used as the prior score):
// grad = -sigma^{-1} + (p-(n+1)/2) u^{-1}, hess = -(p-(n+1)/2) P(u^{-1}).
SymMatrix log_density_gradient(const WishartParams& params, const SymMatrix& u);
PQOperator log_density_hessian(const WishartParams& params, const SymMatrix& u);

// det(I + sigma s)^(-p); finite for I + sigma s nonsingular.
double laplace_transform(const WishartParams& params, const SymMatrix& s);

// Bartlett draw: with sigma/2 = L L^T and A lower triangular, A_ii^2 a
// chi-square with 2p - i degrees of freedom (0-based row i) and A_ij
// standard normal below the diagonal, (LA)(LA)^T has the target law.
// Supports every real p > (n-1)/2.
SymMatrix sample(const WishartParams& params, RngStream& rng);

struct SecondMoments {
  PQOperator tensor_square;  // E[U(x)U]   = p^2 sigma(x)sigma + p P(sigma)
  PQOperator p_of_u;         // E[P(U)]    = (p/2) sigma(x)sigma + (p/2 + p^2) P(sigma)
};
SecondMoments second_moments(const WishartParams& params);

// First and second inverse moments. Thresholds: p > (n+1)/2 for mean_inverse,
// p > (n+3)/2 for the second-order operators. With A_i = p - (n+i)/2 and
// D = A_3 A_1 A_0:
//   E[U^{-1}]        = sigma^{-1} / A_1
//   E[U^{-1}(x)U^{-1}] = (A_2 sigma^{-1}(x)sigma^{-1} + P(sigma^{-1})) / D
//   E[P(U^{-1})]       = (sigma^{-1}(x)sigma^{-1}/2 + A_1 P(sigma^{-1})) / D
struct InverseMoments {
  SymMatrix mean_inverse;
  PQOperator tensor_square;
  PQOperator p_of_uinv;
};
InverseMoments inverse_moments(const WishartParams& params);

}  // namespace wishart
}  // namespace wvt
