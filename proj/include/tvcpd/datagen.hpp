#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tvcpd/types.hpp"

namespace tvcpd {

enum class CpKind { mean, variance, correlation, mixed };

std::string cp_kind_name(CpKind kind);
CpKind cp_kind_from_name(const std::string& name);

/// Parameters shared by the synthetic dataset generators. Generation is a
/// pure function of the spec: the same spec reproduces the series bit for
/// bit (see tvcpd/rng.hpp for the pinned random stream).
struct SimSpec {
  std::uint64_t seed = 1;
  int length = 500;        // T
  int n_features = 3;      // d
  int n_segments = 5;
  int min_segment_len = 50;
  /// Mean-jump magnitude range (sign drawn separately).
  std::pair<double, double> mean_jump_range = {1.0, 3.0};
  /// Per-segment variance levels, cycled; adjacent segments always differ.
  std::vector<double> variance_levels = {0.1, 0.5, 1.0, 2.0};
  /// Correlation values for feature pair (0, 1); adjacent segments always
  /// draw different values.
  std::vector<double> correlation_values = {-0.9, -0.5, 0.0, 0.5, 0.9};
  /// Kinds the arbitrary generator draws from.
  std::vector<CpKind> arbitrary_kinds = {CpKind::mean, CpKind::variance,
                                         CpKind::correlation, CpKind::mixed};

  void validate() const;
};

/// A generated series with its ground truth. `kinds` tags each change point
/// (all tags equal for the single-mechanism families).
struct SimResult {
  TimeSeries series;
  ChangePointSet truth;
  std::vector<CpKind> kinds;
};

/// Gaussian segments with variance fixed at 0.5; at each change point at
/// least one feature's mean jumps by a magnitude drawn from mean_jump_range.
SimResult gen_jumping_mean(const SimSpec& spec);

/// Gaussian segments with mean fixed at 1; the shared variance cycles through
/// variance_levels, changing at every change point.
SimResult gen_changing_variance(const SimSpec& spec);

/// Zero-mean unit-variance Gaussian features where feature 1 is replaced by
/// rho * x0 + sqrt(1 - rho^2) * x1 with a piecewise-constant per-segment rho;
/// change points are the rho changes.
SimResult gen_changing_correlation(const SimSpec& spec);

/// Mixture family: each change point mutates the mean, the variance, the
/// correlation, or all three (kind "mixed"), drawn from spec.arbitrary_kinds.
SimResult gen_arbitrary(const SimSpec& spec);

}  // namespace tvcpd
