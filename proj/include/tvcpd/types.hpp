#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "tvcpd/errors.hpp"

namespace tvcpd {

/// A multivariate series of T measurements of d features, stored column-major
/// in time: values(i, t) is feature i at time t. Instances are treated as
/// immutable after construction; all operations return new objects.
struct TimeSeries {
  Eigen::MatrixXd values;  // d x T
  std::vector<std::string> feature_names;

  int d() const { return static_cast<int>(values.rows()); }
  int length() const { return static_cast<int>(values.cols()); }

  /// Validates and constructs. Requires d >= 1, T >= 2, all entries finite,
  /// and exactly d distinct feature names.
  static TimeSeries create(Eigen::MatrixXd values,
                           std::vector<std::string> feature_names);

  /// Convenience: features named "f0".."f{d-1}".
  static TimeSeries create(Eigen::MatrixXd values);

  void validate() const;
};

/// A per-time-index score trace, same length as the originating series.
struct ScoreSeries {
  std::vector<double> scores;
  std::string label;

  int length() const { return static_cast<int>(scores.size()); }

  static ScoreSeries create(std::vector<double> scores, std::string label);
  void validate() const;
};

/// Detected (or ground-truth) change-point indices, strictly increasing,
/// all in [0, T) of the series they refer to.
struct ChangePointSet {
  std::vector<int> indices;

  int size() const { return static_cast<int>(indices.size()); }
  bool empty() const { return indices.empty(); }

  /// Requires strictly increasing nonnegative indices.
  static ChangePointSet from_sorted(std::vector<int> indices);

  /// Sorts and deduplicates.
  static ChangePointSet from_unsorted(std::vector<int> indices);

  void validate() const;
};

/// Sequence of d x d precision (inverse covariance) estimates, one per time
/// slice, with the [begin, end) time range each slice covers. The ranges
/// partition [0, T).
struct PrecisionSequence {
  std::vector<Eigen::MatrixXd> matrices;
  std::vector<std::pair<int, int>> slice_ranges;

  int size() const { return static_cast<int>(matrices.size()); }
  int d() const {
    return matrices.empty() ? 0 : static_cast<int>(matrices.front().rows());
  }
  /// Total time length covered by the slice ranges.
  int length() const {
    return slice_ranges.empty() ? 0 : slice_ranges.back().second;
  }

  /// Index of the slice whose range contains time t.
  int slice_of(int t) const;

  /// Checks symmetry (tol 1e-8), positive definiteness, and that the ranges
  /// partition [0, T) without gaps or overlap.
  void validate() const;
};

/// True if m is symmetric entrywise within tol.
bool is_symmetric(const Eigen::MatrixXd& m, double tol = 1e-8);

/// True if m is symmetric and its smallest eigenvalue is strictly positive.
bool is_positive_definite(const Eigen::MatrixXd& m);

}  // namespace tvcpd
