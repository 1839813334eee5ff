#pragma once

#include <cstdint>
#include <vector>

#include "tvcpd/types.hpp"

namespace tvcpd {

/// Parameters of the aggregated two-sample test and the dynamic-window scan.
///
/// The permutation scheme is pinned so results are reproducible: permutation p
/// (0-based) draws from Rng(mix_seed(rng_seed, p + 1)) and Fisher-Yates
/// shuffles the pooled sample indices (i from n-1 down to 1, swap with
/// uniform_int(0, i)); the first n_a shuffled indices form the first group.
/// Thresholds are the ceil((1 - alpha/n_bandwidths) * (B + 1))-th smallest of
/// the observed statistic pooled with its B permuted replicas.
struct MmdConfig {
  double alpha = 0.05;   // test level
  int n_bandwidths = 5;  // bandwidth grid size
  /// Multipliers applied to the median-heuristic bandwidth. Empty means the
  /// geometric grid 2^(i - (n_bandwidths-1)/2), i.e. 2^-2..2^2 by default.
  std::vector<double> bandwidth_multipliers;
  int n_permutations = 500;
  double epsilon = 0.1;  // significance threshold on the score
  int delta_minus = 10;  // initial (and reset) size of the growing window
  int delta_plus = 10;   // fixed future-window size
  std::uint64_t rng_seed = 0;
  /// When true the dynamic scan resets on the aggregated rejection decision
  /// instead of on score >= epsilon.
  bool use_rejection_flag = false;

  void validate() const;
  std::vector<double> effective_multipliers() const;
};

struct BandwidthStat {
  double bandwidth = 0.0;
  double statistic = 0.0;
  double threshold = 0.0;  // only meaningful when the permutation test ran
};

/// Outcome of the full aggregated test.
struct MmdResult {
  double score = 0.0;  // max statistic over the bandwidth grid
  bool rejected = false;
  std::vector<BandwidthStat> per_bandwidth;
  bool degenerate_median = false;  // all pooled pairwise distances were zero
};

/// Score-only evaluation (no permutation test); used by the dynamic scan in
/// its default mode, where only the statistic is compared to epsilon.
struct MmdScore {
  double score = 0.0;
  std::vector<BandwidthStat> per_bandwidth;  // thresholds stay 0
  bool degenerate_median = false;
};

/// Gaussian kernel exp(-||x-y||^2 / (2 bw^2)) divided by the arithmetic mean
/// of the two self-kernel values. The result always lies in [-1, 1]; for the
/// Gaussian base kernel the self-kernels are 1 and the division is exact
/// identity, but the general form is kept for clarity.
double normalized_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                         double bandwidth);

/// Unbiased squared-MMD estimate between two windows (rows = samples) with the
/// normalized Gaussian kernel at the given bandwidth. Requires >= 2 rows each.
double mmd_statistic(const Eigen::MatrixXd& window_a,
                     const Eigen::MatrixXd& window_b, double bandwidth);

/// Aggregated multi-bandwidth test. Bandwidths are the median pairwise
/// distance of the pooled windows scaled by the configured multipliers; each
/// bandwidth runs a permutation test at the corrected level
/// alpha / n_bandwidths, and the aggregate rejects if any bandwidth rejects.
/// The continuous score is the maximum statistic over the grid. If every
/// pooled pairwise distance is zero the median heuristic degenerates and
/// bandwidth 1.0 is used, with the degenerate_median flag set.
MmdResult mmdagg(const Eigen::MatrixXd& window_a,
                 const Eigen::MatrixXd& window_b, const MmdConfig& config);

/// Same bandwidth grid and statistics as mmdagg but skips the permutation
/// test entirely.
MmdScore mmdagg_score(const Eigen::MatrixXd& window_a,
                      const Eigen::MatrixXd& window_b, const MmdConfig& config);

/// Optional per-step diagnostics of the dynamic scan.
struct DistScoreTrace {
  struct Step {
    int t = 0;
    int delta = 0;  // running window size when the step was evaluated
    double score = 0.0;
    bool detected = false;
    std::vector<BandwidthStat> per_bandwidth;
  };
  std::vector<Step> steps;
};

/// Dynamic-window distribution-change score. At each t the window of the
/// delta most recent points up to and including t is tested against the
/// delta_plus points after t; on a detection the score is kept and the
/// running window resets to delta_minus, otherwise the score is 0 and the
/// window grows by one. Indices whose windows would leave [0, T) score 0.
ScoreSeries dist_score(const TimeSeries& x, const MmdConfig& config,
                       DistScoreTrace* trace = nullptr);

}  // namespace tvcpd
