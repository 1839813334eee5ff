#include "tvcpd/types.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace tvcpd {

TimeSeries TimeSeries::create(Eigen::MatrixXd values,
                              std::vector<std::string> feature_names) {
  TimeSeries ts{std::move(values), std::move(feature_names)};
  ts.validate();
  return ts;
}

TimeSeries TimeSeries::create(Eigen::MatrixXd values) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(values.rows()));
  for (int i = 0; i < values.rows(); ++i) names.push_back("f" + std::to_string(i));
  return create(std::move(values), std::move(names));
}

void TimeSeries::validate() const {
  if (d() < 1) throw InvalidTimeSeries("need at least one feature");
  if (length() < 2) throw InvalidTimeSeries("need at least two time steps");
  if (!values.allFinite())
    throw InvalidTimeSeries("series contains NaN or Inf");
  if (static_cast<int>(feature_names.size()) != d())
    throw InvalidTimeSeries("feature_names size does not match feature count");
  std::unordered_set<std::string> seen;
  for (const auto& n : feature_names)
    if (!seen.insert(n).second)
      throw InvalidTimeSeries("duplicate feature name '" + n + "'");
}

ScoreSeries ScoreSeries::create(std::vector<double> scores, std::string label) {
  ScoreSeries s{std::move(scores), std::move(label)};
  s.validate();
  return s;
}

void ScoreSeries::validate() const {
  for (double v : scores)
    if (!std::isfinite(v))
      throw InvalidTimeSeries("score series '" + label +
                              "' contains a non-finite value");
}

ChangePointSet ChangePointSet::from_sorted(std::vector<int> indices) {
  ChangePointSet cps{std::move(indices)};
  cps.validate();
  return cps;
}

ChangePointSet ChangePointSet::from_unsorted(std::vector<int> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return from_sorted(std::move(indices));
}

void ChangePointSet::validate() const {
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0)
      throw InvalidTimeSeries("change point index must be nonnegative");
    if (i > 0 && indices[i] <= indices[i - 1])
      throw InvalidTimeSeries("change point indices must be strictly increasing");
  }
}

int PrecisionSequence::slice_of(int t) const {
  for (int s = 0; s < size(); ++s)
    if (t >= slice_ranges[s].first && t < slice_ranges[s].second) return s;
  throw IndexOutOfRange("time index " + std::to_string(t) +
                        " outside the covered range");
}

void PrecisionSequence::validate() const {
  if (matrices.size() != slice_ranges.size())
    throw InvalidTimeSeries("precision sequence: matrices/ranges size mismatch");
  int expected_begin = 0;
  for (int s = 0; s < size(); ++s) {
    const auto& m = matrices[static_cast<std::size_t>(s)];
    if (m.rows() != m.cols())
      throw InvalidTimeSeries("precision matrix must be square");
    if (!is_symmetric(m))
      throw InvalidTimeSeries("precision matrix not symmetric within 1e-8");
    if (!is_positive_definite(m))
      throw InvalidTimeSeries("precision matrix not positive definite");
    const auto [begin, end] = slice_ranges[static_cast<std::size_t>(s)];
    if (begin != expected_begin || end <= begin)
      throw InvalidTimeSeries("slice ranges must partition [0, T)");
    expected_begin = end;
  }
}

bool is_symmetric(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

bool is_positive_definite(const Eigen::MatrixXd& m) {
  if (!is_symmetric(m, 1e-8)) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  return eig.info() == Eigen::Success && eig.eigenvalues().minCoeff() > 0.0;
}

}  // namespace tvcpd
