#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "wvt/lops.hpp"
#include "wvt/mc_engine.hpp"
#include "wvt/model.hpp"
#include "wvt/symspace.hpp"
#include "wvt/wishart.hpp"

namespace wvt {
namespace bounds {

// Bayesian estimation setup: the precision parameter u is drawn from a
// Wishart prior (p1, sigma1) and multiplicity-many iid observations are drawn
// from the model with shape model_p and matrix parameter u.
struct VanTreesProblem {
  double model_p = 1.0;
  wishart::WishartParams prior;
  int multiplicity = 1;

  int order() const { return prior.order(); }
  void validate() const;  // prior.p > (n+3)/2, model_p > (n-1)/2, multiplicity >= 1
};

// Maps the multiplicity-many observations to an estimate of u.
using Estimator = std::function<SymMatrix(const std::vector<Eigen::VectorXd>&)>;

struct BoundReport {
  PQOperator bound;          // the minorant D^{-1}, over base point sigma1
  DenseOperator dense_bound;
  double A = 0.0;            // total coefficient of P(sigma1^{-1}) in D
  double B_signed = 0.0;     // total signed coefficient of sigma1^{-1}(x)sigma1^{-1} in D
  std::map<std::string, double> min_eig_checks;
};

// Minimum eigenvalue of mse - dense(fisher_inverse); nonnegative up to
// tolerance certifies the unbiased-estimator bound empirically.
double cramer_rao_gap(const model::ModelParams& params, const DenseOperator& mse);

// Information of the prior density: with A_i = p1 - (n+i)/2,
//   (A_1 P(sigma1^{-1}) + sigma1^{-1}(x)sigma1^{-1}/2) / (A_3 A_0).
PQOperator density_information(const wishart::WishartParams& prior);

// Prior-averaged Fisher information of multiplicity observations:
//   k ((2p A_1 + A_3) P(sigma1^{-1}) - (A_3 - p) sigma1^{-1}(x)sigma1^{-1})
//     / (2(2p+3) A_3 A_1 A_0).
PQOperator averaged_fisher(const VanTreesProblem& problem);

// Assembles D = density_information + averaged_fisher as signed totals
// (A, B_signed), inverts in closed form, and cross-checks against the dense
// numeric inverse. min_eig_checks records the dense minimum eigenvalues and
// the closed-vs-numeric inverse agreement.
BoundReport van_trees_bound(const VanTreesProblem& problem);

// Minimum eigenvalue of c - dense(bound).
double loewner_gap(const DenseOperator& c, const PQOperator& bound);

// Monte Carlo estimate of the 2m x 2m second-moment matrix of
// (estimate - u, prior score + summed observation scores) under the joint
// law. Positive semidefinite by construction; its off-diagonal block
// estimates the identity and its lower-right block estimates dense(D).
struct JointMatrixResult {
  Eigen::MatrixXd matrix;  // 2m x 2m
  double min_eigenvalue = 0.0;
  DenseOperator c_block;
  Eigen::MatrixXd offdiag_block;
  DenseOperator d_block;
  Eigen::MatrixXd se;  // entrywise standard errors for the full matrix
};

JointMatrixResult van_trees_joint_matrix(const VanTreesProblem& problem,
                                         const Estimator& estimator,
                                         const mc::McConfig& config);

}  // namespace bounds
}  // namespace wvt
