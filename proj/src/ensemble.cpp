#include "tvcpd/ensemble.hpp"

#include <algorithm>
#include <cmath>

namespace tvcpd {

namespace {

// Least-squares fit coefficients evaluated at offset 0: the fitted value is
// coeffs . y[lo..hi]. Offsets run over [lo, hi] relative to the center.
Eigen::VectorXd fit_coefficients(int lo, int hi, int degree) {
  const int npts = hi - lo + 1;
  Eigen::MatrixXd v(npts, degree + 1);
  for (int k = 0; k < npts; ++k) {
    double p = 1.0;
    for (int m = 0; m <= degree; ++m) {
      v(k, m) = p;
      p *= static_cast<double>(lo + k);
    }
  }
  // First row of (V^T V)^-1 V^T: the evaluation at offset 0 only needs the
  // constant coefficient of the fitted polynomial.
  const Eigen::MatrixXd vtv = v.transpose() * v;
  const Eigen::VectorXd e0 = Eigen::VectorXd::Unit(degree + 1, 0);
  const Eigen::VectorXd w = vtv.ldlt().solve(e0);
  return v * w;
}

}  // namespace

void EnsembleConfig::validate() const {
  if (weight_window < 3)
    throw InvalidConfig("ensemble", "weight_window must be >= 3");
  if (sg_window < 5 || sg_window % 2 == 0)
    throw InvalidConfig("ensemble", "sg_window must be odd and >= 5");
  if (sg_polyorder < 2 || sg_polyorder >= sg_window)
    throw InvalidConfig("ensemble",
                        "sg_polyorder must be >= 2 and < sg_window");
  if (peak_min_distance < 1)
    throw InvalidConfig("ensemble", "peak_min_distance must be >= 1");
}

ScoreSeries savitzky_golay(const ScoreSeries& s, int window, int polyorder) {
  s.validate();
  const int T = s.length();
  if (window < 3 || window % 2 == 0)
    throw InvalidFilterParams("window must be odd and >= 3");
  if (polyorder < 0 || polyorder >= window)
    throw InvalidFilterParams("polyorder must be in [0, window)");
  if (T < window)
    throw InvalidFilterParams("series shorter than the filter window");

  const int h = window / 2;
  const Eigen::VectorXd interior = fit_coefficients(-h, h, polyorder);
  const Eigen::Map<const Eigen::VectorXd> y(s.scores.data(), T);

  std::vector<double> out(static_cast<std::size_t>(T));
#pragma omp parallel for schedule(static)
  for (int t = 0; t < T; ++t) {
    const int lo = std::max(0, t - h) - t;
    const int hi = std::min(T - 1, t + h) - t;
    if (lo == -h && hi == h) {
      out[static_cast<std::size_t>(t)] =
          interior.dot(y.segment(t - h, window));
    } else {
      const int npts = hi - lo + 1;
      const int degree = std::min(polyorder, npts - 1);
      const Eigen::VectorXd c = fit_coefficients(lo, hi, degree);
      out[static_cast<std::size_t>(t)] = c.dot(y.segment(t + lo, npts));
    }
  }
  return ScoreSeries::create(std::move(out), s.label + "|SG");
}

ScoreSeries zscore_normalize(const ScoreSeries& s) {
  s.validate();
  const int T = s.length();
  const Eigen::Map<const Eigen::VectorXd> y(s.scores.data(), T);
  const double mean = y.mean();
  const double var = (y.array() - mean).square().sum() / T;
  std::vector<double> out(static_cast<std::size_t>(T), 0.0);
  if (var > 0.0) {
    const double sd = std::sqrt(var);
    for (int t = 0; t < T; ++t)
      out[static_cast<std::size_t>(t)] = (y(t) - mean) / sd;
  }
  return ScoreSeries::create(std::move(out), s.label + "|Z");
}

std::array<double, 4> ensemble_window_weights(
    const std::array<std::vector<double>, 4>& variants, int begin, int end) {
  std::array<double, 4> w{0.0, 0.0, 0.0, 0.0};
  const double len = static_cast<double>(end - begin);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (j == i) continue;
      double acc = 0.0;
      for (int t = begin; t < end; ++t)
        acc += std::abs(variants[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)] -
                        variants[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)]);
      w[static_cast<std::size_t>(i)] += acc / len;
    }
  return w;
}

EnsembleTrace ensemble_score(const ScoreSeries& cov, const ScoreSeries& dist,
                             const EnsembleConfig& config) {
  config.validate();
  cov.validate();
  dist.validate();
  const int T = cov.length();
  if (T != dist.length())
    throw LengthMismatch("cov and dist scores differ in length: " +
                         std::to_string(T) + " vs " +
                         std::to_string(dist.length()));
  if (T < config.weight_window)
    throw LengthMismatch("series shorter than one weight window");

  const ScoreSeries sg_cov =
      savitzky_golay(cov, config.sg_window, config.sg_polyorder);
  std::vector<double> combined(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t)
    combined[static_cast<std::size_t>(t)] =
        std::abs(sg_cov.scores[static_cast<std::size_t>(t)]) +
        std::abs(dist.scores[static_cast<std::size_t>(t)]);
  const ScoreSeries sg_combined =
      savitzky_golay(ScoreSeries::create(std::move(combined), "SGCombined"),
                     config.sg_window, config.sg_polyorder);

  EnsembleTrace trace;
  trace.variants[0] = zscore_normalize(dist).scores;
  trace.variants[1] = zscore_normalize(cov).scores;
  trace.variants[2] = zscore_normalize(sg_cov).scores;
  trace.variants[3] = zscore_normalize(sg_combined).scores;

  std::vector<double> final_scores(static_cast<std::size_t>(T), 0.0);
  auto blend = [&](int begin, int end, int t_begin, int t_end,
                   std::array<double, 4>* out_weights) {
    const auto w = ensemble_window_weights(trace.variants, begin, end);
    if (out_weights) *out_weights = w;
    const double wsum = w[0] + w[1] + w[2] + w[3];
    for (int t = t_begin; t < t_end; ++t) {
      double v = 0.0;
      if (wsum > 0.0) {
        for (int i = 0; i < 4; ++i)
          v += w[static_cast<std::size_t>(i)] *
               trace.variants[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
        v /= wsum;
      } else {
        for (int i = 0; i < 4; ++i)
          v += trace.variants[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
        v /= 4.0;
      }
      final_scores[static_cast<std::size_t>(t)] = v;
    }
  };

  if (config.sliding_weights) {
    const int half = config.weight_window / 2;
    for (int t = 0; t < T; ++t) {
      const int begin = std::max(0, t - half);
      const int end = std::min(T, t + half + 1);
      blend(begin, end, t, t + 1, nullptr);
    }
  } else {
    for (int begin = 0; begin < T; begin += config.weight_window) {
      const int end = std::min(T, begin + config.weight_window);
      trace.windows.emplace_back(begin, end);
      std::array<double, 4> w{};
      blend(begin, end, begin, end, &w);
      trace.weights.push_back(w);
    }
  }

  trace.final_score = ScoreSeries::create(std::move(final_scores), "Ensemble");
  return trace;
}

ChangePointSet peak_finding(const ScoreSeries& s, double theta,
                            int min_distance) {
  s.validate();
  const int T = s.length();
  if (T < 3) throw InvalidConfig("ensemble", "peak finding needs T >= 3");
  if (min_distance < 1)
    throw InvalidConfig("ensemble", "min_distance must be >= 1");

  const auto& y = s.scores;
  std::vector<int> candidates;
  for (int t = 1; t + 1 < T; ++t) {
    if (y[static_cast<std::size_t>(t)] > y[static_cast<std::size_t>(t - 1)] &&
        y[static_cast<std::size_t>(t)] >= y[static_cast<std::size_t>(t + 1)] &&
        y[static_cast<std::size_t>(t)] >= theta)
      candidates.push_back(t);
  }

  // Greedy suppression: visit peaks from highest to lowest (earlier index
  // wins ties) and keep those not within min_distance of an accepted one.
  std::vector<int> order(candidates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const double ya = y[static_cast<std::size_t>(candidates[static_cast<std::size_t>(a)])];
    const double yb = y[static_cast<std::size_t>(candidates[static_cast<std::size_t>(b)])];
    if (ya != yb) return ya > yb;
    return candidates[static_cast<std::size_t>(a)] < candidates[static_cast<std::size_t>(b)];
  });

  std::vector<int> accepted;
  for (int oi : order) {
    const int t = candidates[static_cast<std::size_t>(oi)];
    bool blocked = false;
    for (int a : accepted)
      if (std::abs(a - t) < min_distance) {
        blocked = true;
        break;
      }
    if (!blocked) accepted.push_back(t);
  }
  std::sort(accepted.begin(), accepted.end());
  return ChangePointSet::from_sorted(std::move(accepted));
}

}  // namespace tvcpd
