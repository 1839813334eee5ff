#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tvcpd/types.hpp"

namespace tvcpd {

/// Rescales each feature to sample mean 0 and standard deviation 1. The
/// population (1/T) standard deviation convention is used throughout the
/// library. Throws ZeroVarianceFeature naming the first constant feature.
TimeSeries standardize(const TimeSeries& x);

/// Greedy correlation filter: scanning features in input order, a feature is
/// dropped when its absolute Pearson correlation (over the full series) with
/// any retained earlier feature exceeds the threshold. Returns the reduced
/// series and the dropped feature names. A feature with zero variance never
/// triggers a drop (its correlation is treated as 0).
/// Throws AllFeaturesDropped if fewer than two features remain.
std::pair<TimeSeries, std::vector<std::string>> drop_correlated_features(
    const TimeSeries& x, double threshold = 0.95);

/// Pearson correlation of two equal-length vectors; 0 if either has zero
/// variance.
double pearson_correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace tvcpd
