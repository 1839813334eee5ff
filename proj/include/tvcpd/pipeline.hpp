#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tvcpd/datagen.hpp"
#include "tvcpd/ensemble.hpp"
#include "tvcpd/eval.hpp"
#include "tvcpd/mmd.hpp"
#include "tvcpd/tvgl.hpp"
#include "tvcpd/types.hpp"

namespace tvcpd {

enum class Family { jumping_mean, changing_variance, changing_correlation, arbitrary };

std::string family_name(Family family);
Family family_from_name(const std::string& name);
std::vector<Family> all_families();

enum class DetectionMode { full, cov_only, dist_only };

std::string detection_mode_name(DetectionMode mode);

/// Everything the pipeline needs for one run.
struct RunConfig {
  TvglConfig tvgl;
  MmdConfig mmd;
  EnsembleConfig ensemble;
  SimSpec sim;
  double corr_threshold = 0.95;  // preprocessing correlation filter
  /// Rescale each covariance slice to unit diagonal (correlation form) before
  /// the solve, which keeps the covariance score focused on structure changes
  /// rather than marginal-scale changes.
  bool normalize_slice_scale = true;
  int eval_margin = 5;
  bool eval_half_margin = false;
  bool strict_convergence = false;
  int verbosity = 0;

  /// Seeds both sim.seed and mmd.rng_seed.
  void set_seed(std::uint64_t seed);
};

/// Tuned per-family configurations used by the benchmark (and available to
/// `detect` via --family-defaults). Values come from a random search on seeds
/// disjoint from the benchmark's.
RunConfig family_defaults(Family family);
RunConfig default_run_config();

struct CpCategory {
  int index = 0;
  std::string kind;  // "correlation" | "distribution" | "mixed"
  double cov_component = 0.0;   // z-scored covariance score at the index
  double dist_component = 0.0;  // z-scored distribution score at the index
  int pair_i = -1;  // top-changing feature pair for correlation/mixed CPs
  int pair_j = -1;
  std::string direction;  // "increase" | "decrease" of absolute correlation
};

struct DetectionReport {
  DetectionMode mode = DetectionMode::full;
  std::vector<std::string> feature_names;  // retained after the filter
  std::vector<std::string> dropped_features;
  ScoreSeries cov;
  ScoreSeries dist;
  ScoreSeries final_score;
  EnsembleTrace trace;  // populated in full mode
  ChangePointSet cps;
  std::vector<CpCategory> categories;
  PairChangeHeatmap heatmap;  // populated unless mode == dist_only
  bool tvgl_converged = true;
  int tvgl_iterations = 0;
  DistScoreTrace mmd_trace;  // populated when config.verbosity > 0
};

/// Runs the full pipeline on a raw series: standardize, drop correlated
/// features, covariance and distribution branches, ensemble, peak finding,
/// change point categorization. Ablation modes score a single branch (its
/// SG-smoothed, z-scored trace) and skip the other branch entirely.
DetectionReport detect(const TimeSeries& x, const RunConfig& config,
                       DetectionMode mode = DetectionMode::full);

struct MultiReport {
  DetectionReport full;
  DetectionReport cov_only;
  DetectionReport dist_only;
};

/// All three modes from one evaluation of the two branches.
MultiReport detect_all(const TimeSeries& x, const RunConfig& config);

struct BenchmarkCell {
  double mean = 0.0;
  double stddev = 0.0;
};

struct BenchmarkRow {
  Family family = Family::jumping_mean;
  DetectionMode mode = DetectionMode::full;
  BenchmarkCell precision, recall, f1;
  std::vector<double> f1_per_seed;
};

struct BenchmarkResult {
  std::vector<BenchmarkRow> rows;
  int margin = 5;
  int n_seeds = 0;
  std::uint64_t base_seed = 1;
};

/// Runs every family over n_seeds replicates (seeds base_seed..base_seed+n-1)
/// in all three detection modes and aggregates margin-based precision, recall
/// and F1 (mean and population standard deviation over seeds).
BenchmarkResult run_benchmark(const std::vector<Family>& families, int n_seeds,
                              std::uint64_t base_seed, int margin);

std::string benchmark_markdown(const BenchmarkResult& result);
std::string benchmark_csv(const BenchmarkResult& result);

}  // namespace tvcpd
