#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "wvt/rng.hpp"

namespace wvt {
namespace mc {

// Monte Carlo run description. samples must split evenly into batches;
// batch means feed the standard-error estimates.
struct McConfig {
  std::uint64_t seed = 20260816ull;
  std::int64_t samples = 100000;
  int batches = 10;

  void validate() const;  // batches >= 2, samples divisible by batches
};

// Effective worker count: min(batches, WF_THREADS if set, hardware, 8).
// Results never depend on it; it only caps parallelism.
int worker_count(int batches);

// Runs config.samples draws partitioned into config.batches equal batches.
// add_draw(draw_index, rng, acc) adds draw draw_index's contribution (an
// arbitrary rows x cols array) into acc. Every draw gets the substream
// RngStream::substream(seed, draw_index) and batches are accumulated in
// ascending index order, so the output is a pure function of the config.
std::vector<Eigen::MatrixXd> batch_means(
    int rows, int cols, const McConfig& config,
    const std::function<void(std::uint64_t, RngStream&, Eigen::MatrixXd&)>& add_draw);

struct MeanSe {
  Eigen::MatrixXd mean;
  Eigen::MatrixXd se;  // entrywise standard error of the grand mean
};

// Grand mean over batches (in batch order) and entrywise standard errors
// sd(batch means)/sqrt(batches).
MeanSe reduce(const std::vector<Eigen::MatrixXd>& means);

// Largest |mean - reference| / (scale * se) over entries; entries where both
// deviation and se vanish count as zero. Used for "within k standard errors"
// checks with tolerance 1.0 at scale = k.
double max_se_ratio(const MeanSe& ms, const Eigen::MatrixXd& reference, double scale);

}  // namespace mc
}  // namespace wvt
