#include "wvt/bounds.hpp"

#include <cmath>
#include <string>

namespace wvt {
namespace bounds {

void VanTreesProblem::validate() const {
  const int n = order();
  prior.validate();
  const double prior_bound = 0.5 * (n + 3);
  if (!(prior.p > prior_bound))
    throw ShapeThreshold("VanTreesProblem: prior shape p1 = " + std::to_string(prior.p) +
                         " must exceed (n+3)/2 = " + std::to_string(prior_bound));
  model::ModelParams{model_p, prior.sigma}.validate();
  if (multiplicity < 1)
    throw std::invalid_argument("VanTreesProblem: multiplicity must be >= 1");
}

double cramer_rao_gap(const model::ModelParams& params, const DenseOperator& mse) {
  const DenseOperator inv = to_dense(model::fisher_inverse(params));
  require_same_order(mse.n, inv.n, "cramer_rao_gap");
  return min_eigenvalue(Eigen::MatrixXd(mse.matrix - inv.matrix));
}

PQOperator density_information(const wishart::WishartParams& prior) {
  const int n = prior.order();
  const double p1 = prior.p;
  const double a0 = p1 - 0.5 * n;
  const double a1 = p1 - 0.5 * (n + 1);
  const double a3 = p1 - 0.5 * (n + 3);
  if (!(a3 > 0.0))
    throw ShapeThreshold("density_information: prior shape p1 = " + std::to_string(p1) +
                         " must exceed (n+3)/2 = " + std::to_string(0.5 * (n + 3)));
  const double d = a3 * a0;
  return PQOperator{inverse(prior.sigma), a1 / d, 0.5 / d};
}

PQOperator averaged_fisher(const VanTreesProblem& problem) {
  problem.validate();
  const int n = problem.order();
  const double p = problem.model_p;
  const double p1 = problem.prior.p;
  const double a0 = p1 - 0.5 * n;
  const double a1 = p1 - 0.5 * (n + 1);
  const double a3 = p1 - 0.5 * (n + 3);
  const double d = 2.0 * (2.0 * p + 3.0) * a3 * a1 * a0;
  const double k = static_cast<double>(problem.multiplicity);
  return PQOperator{inverse(problem.prior.sigma), k * (2.0 * p * a1 + a3) / d,
                    -k * (a3 - p) / d};
}

BoundReport van_trees_bound(const VanTreesProblem& problem) {
  problem.validate();
  const PQOperator info = density_information(problem.prior);
  const PQOperator avg = averaged_fisher(problem);
  const PQOperator d_op{info.u, info.a + avg.a, info.b + avg.b};

  BoundReport report;
  report.A = d_op.a;
  report.B_signed = d_op.b;
  report.bound = invert(d_op);
  report.dense_bound = to_dense(report.bound);

  const DenseOperator d_dense = to_dense(d_op);
  const Eigen::MatrixXd numeric_inverse = d_dense.matrix.inverse();
  const double scale = report.dense_bound.max_abs();
  report.min_eig_checks["dense_D_min_eig"] = min_eigenvalue(d_dense.matrix);
  report.min_eig_checks["dense_bound_min_eig"] = min_eigenvalue(report.dense_bound.matrix);
  report.min_eig_checks["inverse_agreement_rel"] =
      (numeric_inverse - report.dense_bound.matrix).cwiseAbs().maxCoeff() / scale;
  return report;
}

double loewner_gap(const DenseOperator& c, const PQOperator& bound) {
  const DenseOperator b = to_dense(bound);
  require_same_order(c.n, b.n, "loewner_gap");
  return min_eigenvalue(Eigen::MatrixXd(c.matrix - b.matrix));
}

JointMatrixResult van_trees_joint_matrix(const VanTreesProblem& problem,
                                         const Estimator& estimator,
                                         const mc::McConfig& config) {
  problem.validate();
  const int n = problem.order();
  const int m = sym_dim(n);
  const int k = problem.multiplicity;

  const auto means = mc::batch_means(
      2 * m, 2 * m, config,
      [&](std::uint64_t, RngStream& rng, Eigen::MatrixXd& acc) {
        const SymMatrix u = wishart::sample(problem.prior, rng);
        const model::ModelParams observed{problem.model_p, u};
        std::vector<Eigen::VectorXd> xs;
        xs.reserve(k);
        SymMatrix score_sum = SymMatrix::zero(n);
        for (int j = 0; j < k; ++j) {
          xs.push_back(model::sample(observed, rng));
          score_sum = score_sum + model::score(observed, xs.back()).grad;
        }
        const SymMatrix prior_score = wishart::log_density_gradient(problem.prior, u);
        Eigen::VectorXd z(2 * m);
        z.head(m) = half_vec(estimator(xs) - u);
        z.tail(m) = half_vec(prior_score + score_sum);
        acc += z * z.transpose();
      });
  const mc::MeanSe ms = mc::reduce(means);

  JointMatrixResult r;
  r.matrix = ms.mean;
  r.se = ms.se;
  r.min_eigenvalue = min_eigenvalue(Eigen::MatrixXd(0.5 * (ms.mean + ms.mean.transpose())));
  r.c_block = DenseOperator{n, ms.mean.topLeftCorner(m, m)};
  r.offdiag_block = ms.mean.topRightCorner(m, m);
  r.d_block = DenseOperator{n, ms.mean.bottomRightCorner(m, m)};
  return r;
}

}  // namespace bounds
}  // namespace wvt
