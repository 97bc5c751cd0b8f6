#include "wvt/mcverify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wvt/model.hpp"

namespace wvt {
namespace mc {

bounds::Estimator make_estimator(const EstimatorSpec& spec,
                                 const bounds::VanTreesProblem& problem) {
  const int n = problem.order();
  if (spec.kind == EstimatorSpec::Kind::constant) {
    SymMatrix value = spec.value;
    if (value.order() != n)
      throw DimensionMismatch("constant estimator value has order " +
                              std::to_string(value.order()) + ", problem has order " +
                              std::to_string(n));
    return [value](const std::vector<Eigen::VectorXd>&) { return value; };
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> prior_eigs(problem.prior.sigma.mat());
  double floor = spec.eig_floor;
  double cap = spec.eig_cap;
  if (floor <= 0.0) floor = 1e-3 * prior_eigs.eigenvalues().minCoeff();
  if (cap <= 0.0) cap = 1e3 * prior_eigs.eigenvalues().maxCoeff();
  if (!(cap > floor))
    throw std::invalid_argument("clipped_moment estimator: eig_cap must exceed eig_floor");
  const double coeff =
      (problem.model_p - 0.5 * (n + 1)) / static_cast<double>(problem.multiplicity);

  return [n, floor, cap, coeff](const std::vector<Eigen::VectorXd>& xs) {
    Eigen::MatrixXd moment = Eigen::MatrixXd::Zero(n, n);
    for (const auto& x : xs) moment += x * x.transpose();
    moment *= coeff;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(moment);
    Eigen::VectorXd lambda = es.eigenvalues();
    for (int i = 0; i < n; ++i) {
      // the moment statistic estimates u^{-1}; invert and clip, sending
      // nonpositive (singular) directions to the cap
      const double inv = lambda(i) > 0.0 ? 1.0 / lambda(i)
                                         : std::numeric_limits<double>::infinity();
      lambda(i) = std::clamp(inv, floor, cap);
    }
    return SymMatrix(Eigen::MatrixXd(es.eigenvectors() * lambda.asDiagonal() *
                                     es.eigenvectors().transpose()));
  };
}

McOperator mc_operator_expectation(
    int n,
    const std::function<void(std::uint64_t, RngStream&, Eigen::MatrixXd&)>& add_draw,
    const McConfig& config) {
  const int m = sym_dim(n);
  const MeanSe ms = reduce(batch_means(m, m, config, add_draw));
  return McOperator{DenseOperator{n, ms.mean}, DenseOperator{n, ms.se}};
}

SimulationResult simulate_estimator(const bounds::VanTreesProblem& problem,
                                    const EstimatorSpec& spec, const McConfig& config) {
  problem.validate();
  const int n = problem.order();
  const int m = sym_dim(n);
  const bounds::Estimator estimator = make_estimator(spec, problem);
  const int k = problem.multiplicity;

  const auto means = batch_means(
      m, m, config, [&](std::uint64_t, RngStream& rng, Eigen::MatrixXd& acc) {
        const SymMatrix u = wishart::sample(problem.prior, rng);
        const model::ModelParams observed{problem.model_p, u};
        std::vector<Eigen::VectorXd> xs;
        xs.reserve(k);
        for (int j = 0; j < k; ++j) xs.push_back(model::sample(observed, rng));
        const Eigen::VectorXd d = half_vec(estimator(xs) - u);
        acc += d * d.transpose();
      });
  const MeanSe ms = reduce(means);

  SimulationResult result;
  result.empirical_c = DenseOperator{n, ms.mean};
  result.se = DenseOperator{n, ms.se};
  result.bound = bounds::van_trees_bound(problem);
  result.gap = bounds::loewner_gap(result.empirical_c, result.bound.bound);

  // spread of per-batch smallest-eigenvalue gaps
  const Eigen::MatrixXd bound_dense = result.bound.dense_bound.matrix;
  double gap_mean = 0.0;
  std::vector<double> gaps(means.size());
  for (std::size_t b = 0; b < means.size(); ++b) {
    gaps[b] = min_eigenvalue(Eigen::MatrixXd(means[b] - bound_dense));
    gap_mean += gaps[b];
  }
  gap_mean /= static_cast<double>(gaps.size());
  double var = 0.0;
  for (const double g : gaps) var += (g - gap_mean) * (g - gap_mean);
  var /= static_cast<double>(gaps.size()) * (gaps.size() - 1);
  result.gap_se = std::sqrt(var);

  result.diagnostics["mean_min_eig"] = min_eigenvalue(Eigen::MatrixXd(ms.mean));
  result.diagnostics["bound_min_eig"] = result.bound.min_eig_checks["dense_bound_min_eig"];
  result.diagnostics["gap_batch_mean"] = gap_mean;
  return result;
}

}  // namespace mc
}  // namespace wvt
