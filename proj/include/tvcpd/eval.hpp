#pragma once

#include <utility>
#include <vector>

#include "tvcpd/types.hpp"

namespace tvcpd {

struct EvalReport {
  int tp = 0;
  int fp = 0;
  int fn = 0;
  double precision = 0.0;  // tp / (tp + fp), 0/0 -> 0
  double recall = 0.0;     // tp / (tp + fn), 0/0 -> 0
  double f1 = 0.0;         // harmonic mean, 0/0 -> 0
  int margin = 0;
  std::vector<std::pair<int, int>> matches;  // (truth index, detected index)
};

/// Margin-based matching: candidate (truth, prediction) pairs within the
/// margin are accepted greedily by ascending distance (ties prefer the
/// earlier truth index, then the earlier prediction), one-to-one. Unmatched
/// predictions count as false positives, unmatched truths as false negatives.
/// With half_margin the acceptance distance is margin / 2 instead of margin.
EvalReport match_and_score(const ChangePointSet& predicted,
                           const ChangePointSet& truth, int margin,
                           bool half_margin = false);

}  // namespace tvcpd
