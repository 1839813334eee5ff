#pragma once

#include <array>
#include <utility>
#include <vector>

#include "tvcpd/types.hpp"

namespace tvcpd {

struct EnsembleConfig {
  int weight_window = 21;    // points per dissimilarity-weight window
  int sg_window = 11;        // odd, > sg_polyorder
  int sg_polyorder = 3;
  double peak_threshold = 1.0;  // theta, on the z-score scale of the variants
  int peak_min_distance = 5;
  /// Experimental: recompute the weights in a sliding window centered at each
  /// t instead of over disjoint consecutive windows.
  bool sliding_weights = false;

  void validate() const;
};

/// The four combined score variants, the per-window dissimilarity weights and
/// the final ensemble score. Variant order:
///   0: z-scored distribution score
///   1: z-scored covariance score
///   2: z-scored SG-smoothed covariance score
///   3: z-scored SG(|SG(cov)| + |dist|)
/// All four variants are z-scored so the weights, the final score, and the
/// peak threshold live on one scale and peak locations are invariant to a
/// common positive rescaling of the inputs.
struct EnsembleTrace {
  std::array<std::vector<double>, 4> variants;
  std::vector<std::pair<int, int>> windows;        // [begin, end) per window
  std::vector<std::array<double, 4>> weights;      // one weight vector per window
  ScoreSeries final_score;
};

/// Savitzky-Golay smoothing: least-squares polynomial fit of the given order
/// over a sliding window, evaluated at the window center. Boundary windows are
/// truncated to the available one-sided range (no padding); if a truncated
/// window has too few points for the requested order, the order is reduced to
/// (points - 1).
ScoreSeries savitzky_golay(const ScoreSeries& s, int window, int polyorder);

/// Z-score normalization with the population standard deviation. A
/// zero-variance series maps to all zeros.
ScoreSeries zscore_normalize(const ScoreSeries& s);

/// Dissimilarity weights of Alg: W_i = sum_{j != i} mean over the window of
/// |variant_i - variant_j|. Exposed for direct testing.
std::array<double, 4> ensemble_window_weights(
    const std::array<std::vector<double>, 4>& variants, int begin, int end);

/// Combines the covariance- and distribution-change scores: builds the four
/// variants, computes dissimilarity weights per weight window, and emits the
/// weighted average (normalized by the weight sum; identical variants fall
/// back to the plain mean).
EnsembleTrace ensemble_score(const ScoreSeries& cov, const ScoreSeries& dist,
                             const EnsembleConfig& config);

/// Local maxima of s at or above theta: s[t] > s[t-1] and s[t] >= s[t+1], so a
/// plateau reports its leftmost index. Peaks closer than min_distance are
/// pruned keeping the higher one (ties keep the earlier index).
ChangePointSet peak_finding(const ScoreSeries& s, double theta,
                            int min_distance);

}  // namespace tvcpd
