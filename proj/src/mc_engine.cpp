#include "wvt/mc_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

namespace wvt {
namespace mc {

void McConfig::validate() const {
  if (batches < 2) throw std::invalid_argument("McConfig: batches must be >= 2");
  if (samples <= 0) throw std::invalid_argument("McConfig: samples must be positive");
  if (samples % batches != 0)
    throw std::invalid_argument("McConfig: samples must be divisible by batches");
}

int worker_count(int batches) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  int workers = std::min(hw, 8);
  if (const char* env = std::getenv("WF_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) workers = static_cast<int>(v);
  }
  return std::max(1, std::min(workers, batches));
}

std::vector<Eigen::MatrixXd> batch_means(
    int rows, int cols, const McConfig& config,
    const std::function<void(std::uint64_t, RngStream&, Eigen::MatrixXd&)>& add_draw) {
  config.validate();
  const int b = config.batches;
  const std::int64_t per_batch = config.samples / b;
  std::vector<Eigen::MatrixXd> means(b);

  auto run_batch = [&](int batch) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(rows, cols);
    const std::uint64_t begin = static_cast<std::uint64_t>(batch) * per_batch;
    for (std::int64_t i = 0; i < per_batch; ++i) {
      const std::uint64_t index = begin + static_cast<std::uint64_t>(i);
      RngStream rng = RngStream::substream(config.seed, index);
      add_draw(index, rng, acc);
    }
    means[batch] = acc / static_cast<double>(per_batch);
  };

  const int workers = worker_count(b);
  if (workers == 1) {
    for (int batch = 0; batch < b; ++batch) run_batch(batch);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          const int batch = next.fetch_add(1);
          if (batch >= b) return;
          run_batch(batch);
        }
      });
    for (auto& t : pool) t.join();
  }
  return means;
}

MeanSe reduce(const std::vector<Eigen::MatrixXd>& means) {
  const int b = static_cast<int>(means.size());
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(means[0].rows(), means[0].cols());
  for (const auto& m : means) mean += m;
  mean /= static_cast<double>(b);
  Eigen::MatrixXd var = Eigen::MatrixXd::Zero(mean.rows(), mean.cols());
  for (const auto& m : means) var += (m - mean).cwiseAbs2();
  var /= static_cast<double>(b) * (b - 1);  // variance of the grand mean
  return MeanSe{mean, var.cwiseSqrt()};
}

double max_se_ratio(const MeanSe& ms, const Eigen::MatrixXd& reference, double scale) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < ms.mean.cols(); ++j)
    for (Eigen::Index i = 0; i < ms.mean.rows(); ++i) {
      const double dev = std::abs(ms.mean(i, j) - reference(i, j));
      if (dev == 0.0) continue;
      const double se = ms.se(i, j);
      worst = std::max(worst, se > 0.0 ? dev / (scale * se)
                                       : std::numeric_limits<double>::infinity());
    }
  return worst;
}

}  // namespace mc
}  // namespace wvt
