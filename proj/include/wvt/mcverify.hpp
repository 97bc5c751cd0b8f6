#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "wvt/bounds.hpp"
#include "wvt/mc_engine.hpp"
#include "wvt/symspace.hpp"

namespace wvt {
namespace mc {

// Reference estimators of the randomized precision parameter.
struct EstimatorSpec {
  enum class Kind { constant, clipped_moment };
  Kind kind = Kind::constant;

  // constant: the fixed estimate (any matrix of the right order).
  SymMatrix value;

  // clipped_moment: eigenvalues of the inverted moment statistic are clipped
  // to [eig_floor, eig_cap]; nonpositive entries select the defaults
  // 1e-3 * (smallest eigenvalue of sigma1) and 1e3 * (largest).
  double eig_floor = 0.0;
  double eig_cap = 0.0;
};

// Builds the callable estimator. clipped_moment inverts
// ((p - (n+1)/2)/k) * sum_j x_j x_j', whose expectation is u^{-1}, through an
// eigendecomposition with clipping; a vanishing sample eigenvalue maps to the
// cap (the statistic is singular whenever k < n, which clipping absorbs).
bounds::Estimator make_estimator(const EstimatorSpec& spec,
                                 const bounds::VanTreesProblem& problem);

struct McOperator {
  DenseOperator mean;
  DenseOperator se;
};

// Batched mean and entrywise standard error of an operator-valued draw map.
// add_draw adds draw i's m x m contribution into the accumulator. The result
// is a pure function of config (per-draw substreams, fixed reduction order).
McOperator mc_operator_expectation(
    int n,
    const std::function<void(std::uint64_t, RngStream&, Eigen::MatrixXd&)>& add_draw,
    const McConfig& config);

struct SimulationResult {
  DenseOperator empirical_c;
  DenseOperator se;
  bounds::BoundReport bound;
  double gap = 0.0;     // min eigenvalue of empirical_c - dense bound
  double gap_se = 0.0;  // spread of the per-batch gap estimates
  std::map<std::string, double> diagnostics;
};

// Draws u from the prior, multiplicity observations from the model at u,
// applies the estimator, and accumulates the squared error operator in
// orthonormal coordinates.
SimulationResult simulate_estimator(const bounds::VanTreesProblem& problem,
                                    const EstimatorSpec& spec, const McConfig& config);

enum class Scope { fast, full };

struct CheckResult {
  std::string check_id;
  std::string claim;
  bool pass = false;
  double measured = 0.0;
  double tolerance = 0.0;
  double runtime_ms = 0.0;
};

// Runs the whole cross-module invariant catalogue: closed forms against
// dense-operator oracles, Monte Carlo identities, quadrature oracles, and
// determinism. Failures are entries, never exceptions. config.seed and
// config.batches steer every stochastic check; config.samples is the draw
// count for the heaviest full-scope checks (fast divides it by 50).
std::vector<CheckResult> run_verification_suite(Scope scope, const McConfig& config);

inline bool all_pass(const std::vector<CheckResult>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

}  // namespace mc
}  // namespace wvt
