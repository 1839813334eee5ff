#include "tvcpd/mmd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tvcpd/rng.hpp"

namespace tvcpd {

namespace {

Eigen::MatrixXd pooled_sqdist(const Eigen::MatrixXd& a,
                              const Eigen::MatrixXd& b) {
  const int na = static_cast<int>(a.rows());
  const int nb = static_cast<int>(b.rows());
  const int n = na + nb;
  Eigen::MatrixXd x(n, a.cols());
  x.topRows(na) = a;
  x.bottomRows(nb) = b;
  Eigen::MatrixXd d(n, n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    d(i, i) = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) d(i, j) = (x.row(i) - x.row(j)).squaredNorm();
  }
  return d;
}

/// Median of the pooled pairwise distances (not squared); 0 when all pairs
/// coincide. Even counts average the two middle order statistics.
double median_distance(const Eigen::MatrixXd& sqdist) {
  const int n = static_cast<int>(sqdist.rows());
  std::vector<double> dists;
  dists.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) dists.push_back(std::sqrt(sqdist(i, j)));
  if (dists.empty()) return 0.0;
  std::sort(dists.begin(), dists.end());
  const std::size_t m = dists.size();
  if (m % 2 == 1) return dists[m / 2];
  return 0.5 * (dists[m / 2 - 1] + dists[m / 2]);
}

/// Unbiased statistic from a precomputed kernel matrix. Group membership is
/// positional: after applying `perm`, the first na pooled indices form group
/// A. Summation order is fixed (row-major over i < j) so results do not
/// depend on thread count.
double grouped_statistic(const Eigen::MatrixXd& kernel,
                         const std::vector<int>& perm, int na, int nb) {
  double sa = 0.0, sb = 0.0, sab = 0.0;
  const int n = na + nb;
  for (int i = 0; i < n; ++i) {
    const int pi = perm[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) {
      const double v = kernel(pi, perm[static_cast<std::size_t>(j)]);
      if (j < na)
        sa += v;
      else if (i >= na)
        sb += v;
      else
        sab += v;
    }
  }
  return 2.0 * sa / (static_cast<double>(na) * (na - 1)) +
         2.0 * sb / (static_cast<double>(nb) * (nb - 1)) -
         2.0 * sab / (static_cast<double>(na) * nb);
}

struct GridStats {
  std::vector<double> bandwidths;
  std::vector<Eigen::MatrixXd> kernels;
  std::vector<double> statistics;
  bool degenerate_median = false;
};

void check_windows(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() < 2 || b.rows() < 2)
    throw WindowTooSmall("each window needs at least 2 samples, got " +
                         std::to_string(a.rows()) + " and " +
                         std::to_string(b.rows()));
  if (a.cols() != b.cols())
    throw WindowTooSmall("windows must share the feature dimension");
}

GridStats grid_statistics(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                          const MmdConfig& config) {
  check_windows(a, b);
  const int na = static_cast<int>(a.rows());
  const int nb = static_cast<int>(b.rows());
  const Eigen::MatrixXd sqd = pooled_sqdist(a, b);

  GridStats grid;
  double base = median_distance(sqd);
  if (base <= 0.0) {
    grid.degenerate_median = true;
    base = 1.0;
  }
  const auto multipliers = config.effective_multipliers();
  std::vector<int> identity(static_cast<std::size_t>(na + nb));
  std::iota(identity.begin(), identity.end(), 0);
  for (double m : multipliers) {
    const double bw = m * base;
    const double gamma = 1.0 / (2.0 * bw * bw);
    grid.bandwidths.push_back(bw);
    grid.kernels.push_back((-gamma * sqd.array()).exp().matrix());
    grid.statistics.push_back(grouped_statistic(grid.kernels.back(), identity, na, nb));
  }
  return grid;
}

}  // namespace

void MmdConfig::validate() const {
  if (alpha <= 0.0 || alpha >= 1.0)
    throw InvalidConfig("mmd", "alpha must be in (0, 1)");
  if (n_bandwidths < 1)
    throw InvalidConfig("mmd", "n_bandwidths must be >= 1");
  if (!bandwidth_multipliers.empty()) {
    if (static_cast<int>(bandwidth_multipliers.size()) != n_bandwidths)
      throw InvalidConfig("mmd",
                          "bandwidth_multipliers size must equal n_bandwidths");
    for (double m : bandwidth_multipliers)
      if (m <= 0.0)
        throw InvalidConfig("mmd", "bandwidth multipliers must be > 0");
  }
  if (n_permutations < static_cast<int>(std::ceil(1.0 / alpha)))
    throw InvalidConfig("mmd", "n_permutations must be >= ceil(1/alpha)");
  if (epsilon < 0.0) throw InvalidConfig("mmd", "epsilon must be >= 0");
  if (delta_minus < 2 || delta_plus < 2)
    throw InvalidConfig("mmd", "delta_minus and delta_plus must be >= 2");
}

std::vector<double> MmdConfig::effective_multipliers() const {
  if (!bandwidth_multipliers.empty()) return bandwidth_multipliers;
  std::vector<double> m(static_cast<std::size_t>(n_bandwidths));
  const double mid = (n_bandwidths - 1) / 2.0;
  for (int i = 0; i < n_bandwidths; ++i)
    m[static_cast<std::size_t>(i)] = std::pow(2.0, i - mid);
  return m;
}

double normalized_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                         double bandwidth) {
  if (bandwidth <= 0.0) throw NonpositiveBandwidth(bandwidth);
  if (x.size() != y.size())
    throw Error("mmd", "kernel arguments must share one dimension");
  const double gamma = 1.0 / (2.0 * bandwidth * bandwidth);
  const double kxy = std::exp(-gamma * (x - y).squaredNorm());
  const double kxx = 1.0;
  const double kyy = 1.0;
  return kxy / (0.5 * (kxx + kyy));
}

double mmd_statistic(const Eigen::MatrixXd& window_a,
                     const Eigen::MatrixXd& window_b, double bandwidth) {
  if (bandwidth <= 0.0) throw NonpositiveBandwidth(bandwidth);
  check_windows(window_a, window_b);
  const int na = static_cast<int>(window_a.rows());
  const int nb = static_cast<int>(window_b.rows());
  const Eigen::MatrixXd sqd = pooled_sqdist(window_a, window_b);
  const double gamma = 1.0 / (2.0 * bandwidth * bandwidth);
  const Eigen::MatrixXd kernel = (-gamma * sqd.array()).exp().matrix();
  std::vector<int> identity(static_cast<std::size_t>(na + nb));
  std::iota(identity.begin(), identity.end(), 0);
  return grouped_statistic(kernel, identity, na, nb);
}

MmdScore mmdagg_score(const Eigen::MatrixXd& window_a,
                      const Eigen::MatrixXd& window_b,
                      const MmdConfig& config) {
  config.validate();
  const GridStats grid = grid_statistics(window_a, window_b, config);
  MmdScore out;
  out.degenerate_median = grid.degenerate_median;
  out.score = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < grid.bandwidths.size(); ++k) {
    out.per_bandwidth.push_back({grid.bandwidths[k], grid.statistics[k], 0.0});
    out.score = std::max(out.score, grid.statistics[k]);
  }
  return out;
}

MmdResult mmdagg(const Eigen::MatrixXd& window_a,
                 const Eigen::MatrixXd& window_b, const MmdConfig& config) {
  config.validate();
  const GridStats grid = grid_statistics(window_a, window_b, config);
  const int na = static_cast<int>(window_a.rows());
  const int nb = static_cast<int>(window_b.rows());
  const int n = na + nb;
  const int nbw = static_cast<int>(grid.bandwidths.size());
  const int nperm = config.n_permutations;

  // Permutation p is an independent deterministic sub-stream, so the loop can
  // run in any order across threads.
  std::vector<double> perm_stats(static_cast<std::size_t>(nperm) * nbw);
#pragma omp parallel for schedule(static)
  for (int p = 0; p < nperm; ++p) {
    Rng rng(mix_seed(config.rng_seed, static_cast<std::uint64_t>(p) + 1));
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i >= 1; --i) {
      const int j = rng.uniform_int(0, i);
      std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    }
    for (int k = 0; k < nbw; ++k)
      perm_stats[static_cast<std::size_t>(p) * nbw + k] =
          grouped_statistic(grid.kernels[static_cast<std::size_t>(k)], perm, na, nb);
  }

  const double corrected = config.alpha / nbw;
  const int total = nperm + 1;
  const int rank = std::clamp(
      static_cast<int>(std::ceil((1.0 - corrected) * total)), 1, total);

  MmdResult out;
  out.degenerate_median = grid.degenerate_median;
  out.score = -std::numeric_limits<double>::infinity();
  std::vector<double> values(static_cast<std::size_t>(total));
  for (int k = 0; k < nbw; ++k) {
    values[0] = grid.statistics[static_cast<std::size_t>(k)];
    for (int p = 0; p < nperm; ++p)
      values[static_cast<std::size_t>(p) + 1] =
          perm_stats[static_cast<std::size_t>(p) * nbw + k];
    std::sort(values.begin(), values.end());
    const double threshold = values[static_cast<std::size_t>(rank - 1)];
    const double stat = grid.statistics[static_cast<std::size_t>(k)];
    out.per_bandwidth.push_back(
        {grid.bandwidths[static_cast<std::size_t>(k)], stat, threshold});
    if (stat > threshold) out.rejected = true;
    out.score = std::max(out.score, stat);
  }
  return out;
}

ScoreSeries dist_score(const TimeSeries& x, const MmdConfig& config,
                       DistScoreTrace* trace) {
  x.validate();
  config.validate();
  const int T = x.length();
  if (T < config.delta_minus + config.delta_plus + 1)
    throw SeriesTooShort("mmd", "need T >= delta_minus + delta_plus + 1 = " +
                                    std::to_string(config.delta_minus +
                                                   config.delta_plus + 1));

  std::vector<double> scores(static_cast<std::size_t>(T), 0.0);
  int delta = config.delta_minus;
  for (int t = 0; t < T; ++t) {
    if (t < config.delta_minus || t + config.delta_plus >= T) continue;
    const int start = t - delta;
    if (start < 0) throw Error("mmd", "internal: window underrun");

    // Prior window covers [t - delta, t] inclusive; the future window starts
    // at t + 1.
    const Eigen::MatrixXd prior =
        x.values.middleCols(start, delta + 1).transpose();
    const Eigen::MatrixXd future =
        x.values.middleCols(t + 1, config.delta_plus).transpose();

    double score = 0.0;
    bool detected = false;
    std::vector<BandwidthStat> per_bandwidth;
    if (config.use_rejection_flag) {
      MmdResult r = mmdagg(prior, future, config);
      score = r.score;
      detected = r.rejected;
      per_bandwidth = std::move(r.per_bandwidth);
    } else {
      MmdScore r = mmdagg_score(prior, future, config);
      score = r.score;
      detected = score >= config.epsilon;
      per_bandwidth = std::move(r.per_bandwidth);
    }

    if (trace)
      trace->steps.push_back({t, delta, score, detected, per_bandwidth});

    if (detected) {
      scores[static_cast<std::size_t>(t)] = score;
      delta = config.delta_minus;
    } else {
      scores[static_cast<std::size_t>(t)] = 0.0;
      delta += 1;
    }
  }
  return ScoreSeries::create(std::move(scores), "DistScore");
}

}  // namespace tvcpd
