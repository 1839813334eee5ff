#include "tvcpd/preprocess.hpp"

#include <cmath>

namespace tvcpd {

TimeSeries standardize(const TimeSeries& x) {
  x.validate();
  const int T = x.length();
  Eigen::MatrixXd out(x.d(), T);
  for (int i = 0; i < x.d(); ++i) {
    const Eigen::RowVectorXd row = x.values.row(i);
    const double mean = row.mean();
    const double var = (row.array() - mean).square().sum() / T;
    if (var <= 0.0)
      throw ZeroVarianceFeature(x.feature_names[static_cast<std::size_t>(i)]);
    out.row(i) = (row.array() - mean) / std::sqrt(var);
  }
  return TimeSeries::create(std::move(out), x.feature_names);
}

double pearson_correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double ma = a.mean();
  const double mb = b.mean();
  const Eigen::ArrayXd ca = a.array() - ma;
  const Eigen::ArrayXd cb = b.array() - mb;
  const double va = ca.square().sum();
  const double vb = cb.square().sum();
  if (va <= 0.0 || vb <= 0.0) return 0.0;
  return (ca * cb).sum() / std::sqrt(va * vb);
}

std::pair<TimeSeries, std::vector<std::string>> drop_correlated_features(
    const TimeSeries& x, double threshold) {
  x.validate();
  if (threshold <= 0.0)
    throw InvalidConfig("core", "correlation threshold must be > 0");

  std::vector<int> kept;
  std::vector<std::string> dropped;
  for (int i = 0; i < x.d(); ++i) {
    bool drop = false;
    for (int j : kept) {
      const double c = pearson_correlation(x.values.row(i).transpose(),
                                           x.values.row(j).transpose());
      if (std::abs(c) > threshold) {
        drop = true;
        break;
      }
    }
    if (drop)
      dropped.push_back(x.feature_names[static_cast<std::size_t>(i)]);
    else
      kept.push_back(i);
  }

  if (kept.size() < 2)
    throw AllFeaturesDropped(
        "correlation filter left fewer than 2 features (threshold " +
        std::to_string(threshold) + ")");

  Eigen::MatrixXd values(static_cast<int>(kept.size()), x.length());
  std::vector<std::string> names;
  names.reserve(kept.size());
  for (std::size_t r = 0; r < kept.size(); ++r) {
    values.row(static_cast<int>(r)) = x.values.row(kept[r]);
    names.push_back(x.feature_names[static_cast<std::size_t>(kept[r])]);
  }
  return {TimeSeries::create(std::move(values), std::move(names)),
          std::move(dropped)};
}

}  // namespace tvcpd
