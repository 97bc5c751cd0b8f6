#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <string>

#include "wvt/errors.hpp"
#include "wvt/mc_engine.hpp"
#include "wvt/mcverify.hpp"

using namespace wvt;
using namespace wvt::mc;

namespace {
SymMatrix scalar(double v) {
  return SymMatrix::diagonal(Eigen::VectorXd::Constant(1, v));
}

bounds::VanTreesProblem scalar_problem() {
  return bounds::VanTreesProblem{1.0, wishart::WishartParams{4.0, scalar(1.0)}, 1};
}

struct EnvGuard {
  std::string name;
  std::optional<std::string> saved;
  explicit EnvGuard(const char* n) : name(n) {
    const char* v = std::getenv(n);
    if (v) saved = v;
  }
  ~EnvGuard() {
    if (saved)
      setenv(name.c_str(), saved->c_str(), 1);
    else
      unsetenv(name.c_str());
  }
};
}  // namespace

TEST_CASE("config validation") {
  McConfig bad;
  bad.samples = 1001;
  bad.batches = 10;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.samples = 1000;
  bad.batches = 1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.batches = 10;
  CHECK_NOTHROW(bad.validate());
}

TEST_CASE("batch means see every index exactly once in order") {
  McConfig config;
  config.samples = 1000;
  config.batches = 10;
  auto means = batch_means(1, 1, config,
                           [](std::uint64_t i, RngStream&, Eigen::MatrixXd& acc) {
                             acc(0, 0) += double(i);
                           });
  REQUIRE(means.size() == 10);
  for (int b = 0; b < 10; ++b)
    CHECK(means[b](0, 0) == doctest::Approx(100.0 * b + 49.5).epsilon(1e-15));
  auto ms = reduce(means);
  CHECK(ms.mean(0, 0) == doctest::Approx(499.5).epsilon(1e-15));
  CHECK(ms.se(0, 0) > 0.0);
}

TEST_CASE("reduce computes the spread of batch means") {
  std::vector<Eigen::MatrixXd> means{Eigen::MatrixXd::Constant(1, 1, 1.0),
                                     Eigen::MatrixXd::Constant(1, 1, 3.0)};
  auto ms = reduce(means);
  CHECK(ms.mean(0, 0) == doctest::Approx(2.0));
  CHECK(ms.se(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("max se ratio conventions") {
  MeanSe ms;
  ms.mean = Eigen::MatrixXd::Constant(1, 2, 1.0);
  ms.se = Eigen::MatrixXd::Zero(1, 2);
  Eigen::MatrixXd ref = ms.mean;
  // Zero deviation with zero se is a pass, nonzero deviation with zero se
  // can never pass.
  CHECK(max_se_ratio(ms, ref, 3.0) == 0.0);
  ref(0, 1) = 2.0;
  CHECK(max_se_ratio(ms, ref, 3.0) == std::numeric_limits<double>::infinity());
  ms.se(0, 1) = 0.5;
  CHECK(max_se_ratio(ms, ref, 2.0) == doctest::Approx(1.0));
}

TEST_CASE("results are invariant under the worker cap") {
  McConfig config;
  config.seed = 515;
  config.samples = 4000;
  config.batches = 8;
  auto stat = [](std::uint64_t, RngStream& rng, Eigen::MatrixXd& acc) {
    double x = rng.normal();
    acc(0, 0) += x * x * x;
  };
  EnvGuard guard("WF_THREADS");
  setenv("WF_THREADS", "1", 1);
  auto serial = batch_means(1, 1, config, stat);
  setenv("WF_THREADS", "4", 1);
  auto parallel = batch_means(1, 1, config, stat);
  REQUIRE(serial.size() == parallel.size());
  for (size_t i = 0; i < serial.size(); ++i)
    CHECK(serial[i](0, 0) == parallel[i](0, 0));  // bitwise
}

TEST_CASE("constant estimator returns its value and checks the order") {
  auto problem = scalar_problem();
  EstimatorSpec spec;
  spec.kind = EstimatorSpec::Kind::constant;
  spec.value = scalar(4.0);
  auto est = make_estimator(spec, problem);
  std::vector<Eigen::VectorXd> obs{Eigen::VectorXd::Constant(1, 0.3)};
  CHECK(est(obs)(0, 0) == doctest::Approx(4.0));

  EstimatorSpec wrong;
  wrong.kind = EstimatorSpec::Kind::constant;
  wrong.value = SymMatrix::identity(2);
  CHECK_THROWS_AS(make_estimator(wrong, problem)(obs), DimensionMismatch);
}

TEST_CASE("clipped moment estimator clamps the spectrum") {
  bounds::VanTreesProblem problem{2.0, wishart::WishartParams{4.0, scalar(1.0)}, 1};
  EstimatorSpec spec;
  spec.kind = EstimatorSpec::Kind::clipped_moment;
  spec.eig_floor = 0.5;
  spec.eig_cap = 2.0;
  auto est = make_estimator(spec, problem);

  // statistic = (p - 1) x^2 here, estimate = clamp(1/statistic).
  std::vector<Eigen::VectorXd> big{Eigen::VectorXd::Constant(1, 2.0)};
  CHECK(est(big)(0, 0) == doctest::Approx(0.5));
  std::vector<Eigen::VectorXd> tiny{Eigen::VectorXd::Constant(1, 0.1)};
  CHECK(est(tiny)(0, 0) == doctest::Approx(2.0));
  std::vector<Eigen::VectorXd> unit{Eigen::VectorXd::Constant(1, 1.0)};
  CHECK(est(unit)(0, 0) == doctest::Approx(1.0));

  // A singular statistic (here: the zero vector) lands on the cap.
  std::vector<Eigen::VectorXd> zero{Eigen::VectorXd::Zero(1)};
  CHECK(est(zero)(0, 0) == doctest::Approx(2.0));
}

TEST_CASE("clipped moment estimator default bounds track the prior base") {
  bounds::VanTreesProblem problem{2.0, wishart::WishartParams{4.0, scalar(2.0)}, 1};
  EstimatorSpec spec;
  spec.kind = EstimatorSpec::Kind::clipped_moment;
  auto est = make_estimator(spec, problem);
  std::vector<Eigen::VectorXd> zero{Eigen::VectorXd::Zero(1)};
  // Singular statistic maps to the default cap 1e3 * (largest eigenvalue).
  CHECK(est(zero)(0, 0) == doctest::Approx(2000.0).epsilon(1e-9));
}

TEST_CASE("simulated constant estimator matches its analytic risk") {
  auto problem = scalar_problem();
  EstimatorSpec spec;
  spec.kind = EstimatorSpec::Kind::constant;
  spec.value = scalar(4.0);
  McConfig config;
  config.seed = 7071;
  config.samples = 40000;
  config.batches = 10;
  auto result = simulate_estimator(problem, spec, config);

  // Risk of guessing the prior mean is the prior variance, 4.
  CHECK(std::abs(result.empirical_c.matrix(0, 0) - 4.0) <
        6.0 * result.se.matrix(0, 0));
  // That sits far above the bound 1.875, so the gap must be positive.
  CHECK(result.gap > 0.0);
  CHECK(result.gap_se > 0.0);
  CHECK(result.diagnostics.count("mean_min_eig") == 1);
  CHECK(result.diagnostics.count("bound_min_eig") == 1);
  CHECK(result.bound.dense_bound.matrix(0, 0) == doctest::Approx(1.875).epsilon(1e-12));
}

TEST_CASE("fast verification catalogue passes end to end") {
  McConfig config;
  config.samples = 1000000;
  config.batches = 10;
  auto checks = run_verification_suite(Scope::fast, config);
  CHECK(checks.size() > 40);
  int failures = 0;
  for (const auto& c : checks) {
    if (!c.pass) {
      ++failures;
      MESSAGE("failed: ", c.check_id, " measured=", c.measured,
              " tolerance=", c.tolerance);
    }
    CHECK(c.runtime_ms >= 0.0);
    CHECK(!c.check_id.empty());
  }
  CHECK(failures == 0);
}

TEST_CASE("verification outcomes are stable across seeds") {
  // Measured statistics move with the seed; pass/fail must not. Seeds are
  // pinned so the run is reproducible.
  const std::uint64_t seeds[] = {20260816ull, 3ull, 11ull, 29ull, 41ull};
  bool any_measure_differs = false;
  double reference = -1.0;
  for (std::uint64_t seed : seeds) {
    McConfig config;
    config.seed = seed;
    config.samples = 1000000;
    config.batches = 10;
    auto checks = run_verification_suite(Scope::fast, config);
    for (const auto& c : checks) {
      if (!c.pass)
        MESSAGE("seed ", seed, " failed ", c.check_id, " measured=", c.measured);
      CHECK(c.pass);
      if (c.check_id == "wishart-mean-mc") {
        if (reference < 0)
          reference = c.measured;
        else if (c.measured != reference)
          any_measure_differs = true;
      }
    }
  }
  CHECK(any_measure_differs);
}
