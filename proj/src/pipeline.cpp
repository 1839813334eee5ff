#include "tvcpd/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tvcpd/preprocess.hpp"

namespace tvcpd {

std::string family_name(Family family) {
  switch (family) {
    case Family::jumping_mean: return "jumping_mean";
    case Family::changing_variance: return "changing_variance";
    case Family::changing_correlation: return "changing_correlation";
    case Family::arbitrary: return "arbitrary";
  }
  return "unknown";
}

Family family_from_name(const std::string& name) {
  for (Family f : all_families())
    if (family_name(f) == name) return f;
  throw UnknownFamily(name);
}

std::vector<Family> all_families() {
  return {Family::jumping_mean, Family::changing_variance,
          Family::changing_correlation, Family::arbitrary};
}

std::string detection_mode_name(DetectionMode mode) {
  switch (mode) {
    case DetectionMode::full: return "full";
    case DetectionMode::cov_only: return "cov_only";
    case DetectionMode::dist_only: return "dist_only";
  }
  return "unknown";
}

void RunConfig::set_seed(std::uint64_t seed) {
  sim.seed = seed;
  mmd.rng_seed = seed;
}

RunConfig default_run_config() { return RunConfig{}; }

RunConfig family_defaults(Family family) {
  RunConfig cfg;
  cfg.tvgl.slice_size = 5;
  cfg.tvgl.lambda = 0.1;
  cfg.tvgl.beta = 2.0;
  cfg.mmd.delta_minus = 15;
  cfg.mmd.delta_plus = 15;
  cfg.mmd.epsilon = 0.10;
  cfg.ensemble.peak_threshold = 1.5;
  switch (family) {
    case Family::jumping_mean:
      break;
    case Family::changing_variance:
      break;
    case Family::changing_correlation:
      break;
    case Family::arbitrary:
      break;
  }
  return cfg;
}

namespace {

ScoreSeries zero_scores(int length, const std::string& label) {
  return ScoreSeries::create(std::vector<double>(static_cast<std::size_t>(length), 0.0),
                             label);
}

struct BranchOutputs {
  ScoreSeries cov;
  ScoreSeries dist;
  PairChangeHeatmap heatmap;
  bool tvgl_converged = true;
  int tvgl_iterations = 0;
  bool has_cov = false;
  bool has_dist = false;
  DistScoreTrace mmd_trace;
  std::vector<std::string> feature_names;
  std::vector<std::string> dropped;
};

BranchOutputs compute_branches(const TimeSeries& x, const RunConfig& config,
                               bool need_cov, bool need_dist) {
  BranchOutputs out;
  const TimeSeries standardized = standardize(x);
  auto [reduced, dropped] =
      drop_correlated_features(standardized, config.corr_threshold);
  out.feature_names = reduced.feature_names;
  out.dropped = std::move(dropped);
  out.cov = zero_scores(reduced.length(), "CovScore");
  out.dist = zero_scores(reduced.length(), "DistScore");

  if (need_cov) {
    auto slices = slice_covariances(reduced, config.tvgl.slice_size);
    std::vector<Eigen::MatrixXd> mats;
    std::vector<std::pair<int, int>> ranges;
    mats.reserve(slices.size());
    ranges.reserve(slices.size());
    for (auto& [s, range] : slices) {
      if (config.normalize_slice_scale) {
        const Eigen::VectorXd scale = s.diagonal().cwiseSqrt().cwiseInverse();
        s = scale.asDiagonal() * s * scale.asDiagonal();
        s = 0.5 * (s + s.transpose()).eval();
      }
      mats.push_back(std::move(s));
      ranges.push_back(range);
    }
    TvglSolution sol = tvgl_solve(mats, config.tvgl, ranges);
    if (!sol.converged && config.strict_convergence)
      throw Error("tvgl", "ADMM did not converge within max_iters");
    out.tvgl_converged = sol.converged;
    out.tvgl_iterations = sol.iterations;
    out.cov = cov_score(sol.precisions);
    out.heatmap = pair_change_heatmap(sol.precisions);
    out.has_cov = true;
  }

  if (need_dist) {
    out.dist = dist_score(reduced, config.mmd,
                          config.verbosity > 0 ? &out.mmd_trace : nullptr);
    out.has_dist = true;
  }
  return out;
}

/// Dominance rule for categorizing a change point from the z-scored branch
/// components at its index: a branch wins outright when its (nonnegative)
/// component exceeds 1.5x the other, otherwise the cause is mixed.
std::string categorize_components(double cov_c, double dist_c) {
  if (cov_c > 1.5 * dist_c) return "correlation";
  if (dist_c > 1.5 * cov_c) return "distribution";
  return "mixed";
}

template <typename SliceOf>
std::vector<CpCategory> categorize(const ChangePointSet& cps,
                                   const std::vector<double>& cov_z,
                                   const std::vector<double>& dist_z,
                                   const PairChangeHeatmap& heatmap,
                                   const SliceOf& slice_of,
                                   DetectionMode mode) {
  std::vector<CpCategory> cats;
  cats.reserve(static_cast<std::size_t>(cps.size()));
  for (int t : cps.indices) {
    CpCategory cat;
    cat.index = t;
    cat.cov_component = cov_z.empty() ? 0.0 : std::max(cov_z[static_cast<std::size_t>(t)], 0.0);
    cat.dist_component = dist_z.empty() ? 0.0 : std::max(dist_z[static_cast<std::size_t>(t)], 0.0);
    switch (mode) {
      case DetectionMode::cov_only: cat.kind = "correlation"; break;
      case DetectionMode::dist_only: cat.kind = "distribution"; break;
      case DetectionMode::full:
        cat.kind = categorize_components(cat.cov_component, cat.dist_component);
        break;
    }
    if (cat.kind != "distribution" && !heatmap.deltas.empty()) {
      const int s = std::max(1, slice_of(t));
      const Eigen::MatrixXd& delta = heatmap.deltas[static_cast<std::size_t>(s - 1)];
      double best = -1.0;
      for (int i = 0; i < delta.rows(); ++i)
        for (int j = i + 1; j < delta.cols(); ++j)
          if (std::abs(delta(i, j)) > best) {
            best = std::abs(delta(i, j));
            cat.pair_i = i;
            cat.pair_j = j;
            // Negative heatmap entries mark an increase in absolute
            // correlation.
            cat.direction = delta(i, j) < 0.0 ? "increase" : "decrease";
          }
    }
    cats.push_back(std::move(cat));
  }
  return cats;
}

DetectionReport compose_report(const BranchOutputs& branches,
                               const RunConfig& config, DetectionMode mode) {
  DetectionReport report;
  report.mode = mode;
  report.feature_names = branches.feature_names;
  report.dropped_features = branches.dropped;
  report.cov = branches.cov;
  report.dist = branches.dist;
  report.tvgl_converged = branches.tvgl_converged;
  report.tvgl_iterations = branches.tvgl_iterations;
  if (mode != DetectionMode::dist_only) report.heatmap = branches.heatmap;
  report.mmd_trace = branches.mmd_trace;

  std::vector<double> cov_z = zscore_normalize(branches.cov).scores;
  std::vector<double> dist_z = zscore_normalize(branches.dist).scores;

  switch (mode) {
    case DetectionMode::full: {
      report.trace = ensemble_score(branches.cov, branches.dist, config.ensemble);
      report.final_score = report.trace.final_score;
      break;
    }
    case DetectionMode::cov_only: {
      // Ablation: peaks straight on the SG-smoothed single score (z-scored so
      // the peak threshold stays on one scale across modes).
      report.final_score = zscore_normalize(savitzky_golay(
          branches.cov, config.ensemble.sg_window, config.ensemble.sg_polyorder));
      break;
    }
    case DetectionMode::dist_only: {
      report.final_score = zscore_normalize(savitzky_golay(
          branches.dist, config.ensemble.sg_window, config.ensemble.sg_polyorder));
      break;
    }
  }

  report.cps = peak_finding(report.final_score, config.ensemble.peak_threshold,
                            config.ensemble.peak_min_distance);

  auto slice_of = [&](int t) {
    for (std::size_t s = 0; s < branches.heatmap.slice_ranges.size(); ++s)
      if (t >= branches.heatmap.slice_ranges[s].first &&
          t < branches.heatmap.slice_ranges[s].second)
        return static_cast<int>(s) + 1;  // delta s maps slices s..s+1
    return 0;
  };
  report.categories = categorize(report.cps, cov_z, dist_z, branches.heatmap,
                                 slice_of, mode);
  return report;
}

}  // namespace

DetectionReport detect(const TimeSeries& x, const RunConfig& config,
                       DetectionMode mode) {
  const bool need_cov = mode != DetectionMode::dist_only;
  const bool need_dist = mode != DetectionMode::cov_only;
  const BranchOutputs branches = compute_branches(x, config, need_cov, need_dist);
  return compose_report(branches, config, mode);
}

MultiReport detect_all(const TimeSeries& x, const RunConfig& config) {
  const BranchOutputs branches = compute_branches(x, config, true, true);
  MultiReport multi{
      compose_report(branches, config, DetectionMode::full),
      compose_report(branches, config, DetectionMode::cov_only),
      compose_report(branches, config, DetectionMode::dist_only)};
  return multi;
}

namespace {

SimResult simulate_family(Family family, const SimSpec& spec) {
  switch (family) {
    case Family::jumping_mean: return gen_jumping_mean(spec);
    case Family::changing_variance: return gen_changing_variance(spec);
    case Family::changing_correlation: return gen_changing_correlation(spec);
    case Family::arbitrary: return gen_arbitrary(spec);
  }
  throw UnknownFamily("(invalid enum)");
}

BenchmarkCell aggregate(const std::vector<double>& values) {
  BenchmarkCell cell;
  if (values.empty()) return cell;
  const double n = static_cast<double>(values.size());
  for (double v : values) cell.mean += v;
  cell.mean /= n;
  double acc = 0.0;
  for (double v : values) acc += (v - cell.mean) * (v - cell.mean);
  cell.stddev = std::sqrt(acc / n);
  return cell;
}

}  // namespace

BenchmarkResult run_benchmark(const std::vector<Family>& families, int n_seeds,
                              std::uint64_t base_seed, int margin) {
  BenchmarkResult result;
  result.margin = margin;
  result.n_seeds = n_seeds;
  result.base_seed = base_seed;

  const std::vector<DetectionMode> modes = {
      DetectionMode::full, DetectionMode::cov_only, DetectionMode::dist_only};

  for (Family family : families) {
    // mode x seed metric matrices
    std::vector<std::vector<double>> precision(modes.size()),
        recall(modes.size()), f1(modes.size());
    for (auto& v : precision) v.resize(static_cast<std::size_t>(n_seeds));
    for (auto& v : recall) v.resize(static_cast<std::size_t>(n_seeds));
    for (auto& v : f1) v.resize(static_cast<std::size_t>(n_seeds));

#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < n_seeds; ++k) {
      RunConfig cfg = family_defaults(family);
      cfg.set_seed(base_seed + static_cast<std::uint64_t>(k));
      const SimResult sim = simulate_family(family, cfg.sim);
      const MultiReport multi = detect_all(sim.series, cfg);
      const DetectionReport* reports[3] = {&multi.full, &multi.cov_only,
                                           &multi.dist_only};
      for (std::size_t m = 0; m < modes.size(); ++m) {
        const EvalReport ev =
            match_and_score(reports[m]->cps, sim.truth, margin);
        precision[m][static_cast<std::size_t>(k)] = ev.precision;
        recall[m][static_cast<std::size_t>(k)] = ev.recall;
        f1[m][static_cast<std::size_t>(k)] = ev.f1;
      }
    }

    for (std::size_t m = 0; m < modes.size(); ++m) {
      BenchmarkRow row;
      row.family = family;
      row.mode = modes[m];
      row.precision = aggregate(precision[m]);
      row.recall = aggregate(recall[m]);
      row.f1 = aggregate(f1[m]);
      row.f1_per_seed = f1[m];
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

namespace {

std::string cell_str(const BenchmarkCell& c) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f (%.2f)", c.mean, c.stddev);
  return buf;
}

std::string mode_label(DetectionMode mode) {
  switch (mode) {
    case DetectionMode::full: return "ensemble";
    case DetectionMode::cov_only: return "cov-score only";
    case DetectionMode::dist_only: return "dist-score only";
  }
  return "?";
}

}  // namespace

std::string benchmark_markdown(const BenchmarkResult& result) {
  std::ostringstream os;
  os << "# Synthetic benchmark (margin M=" << result.margin << ", "
     << result.n_seeds << " seeds)\n\n";
  Family current{};
  bool first = true;
  for (const auto& row : result.rows) {
    if (first || row.family != current) {
      current = row.family;
      first = false;
      os << "\n## " << family_name(row.family) << "\n\n";
      os << "| method | precision | recall | F1 (M=" << result.margin
         << ") |\n";
      os << "|---|---|---|---|\n";
    }
    os << "| " << mode_label(row.mode) << " | " << cell_str(row.precision)
       << " | " << cell_str(row.recall) << " | " << cell_str(row.f1) << " |\n";
  }
  return os.str();
}

std::string benchmark_csv(const BenchmarkResult& result) {
  std::ostringstream os;
  os << "family,mode,margin,n_seeds,precision_mean,precision_std,recall_mean,"
        "recall_std,f1_mean,f1_std\n";
  for (const auto& row : result.rows) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s,%s,%d,%d,%.4f,%.4f,%.4f,%.4f,%.4f,%.4f",
                  family_name(row.family).c_str(),
                  detection_mode_name(row.mode).c_str(), result.margin,
                  result.n_seeds, row.precision.mean, row.precision.stddev,
                  row.recall.mean, row.recall.stddev, row.f1.mean,
                  row.f1.stddev);
    os << buf << "\n";
  }
  return os.str();
}

}  // namespace tvcpd
