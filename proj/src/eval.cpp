#include "tvcpd/eval.hpp"

#include <algorithm>
#include <cmath>

namespace tvcpd {

EvalReport match_and_score(const ChangePointSet& predicted,
                           const ChangePointSet& truth, int margin,
                           bool half_margin) {
  predicted.validate();
  truth.validate();
  if (margin < 0) throw InvalidConfig("eval", "margin must be >= 0");
  const double limit = half_margin ? margin / 2.0 : static_cast<double>(margin);

  struct Candidate {
    int dist;
    int truth_idx;
    int pred_idx;
  };
  std::vector<Candidate> candidates;
  for (int ti = 0; ti < truth.size(); ++ti)
    for (int pi = 0; pi < predicted.size(); ++pi) {
      const int dist = std::abs(truth.indices[static_cast<std::size_t>(ti)] -
                                predicted.indices[static_cast<std::size_t>(pi)]);
      if (dist <= limit) candidates.push_back({dist, ti, pi});
    }
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.dist != b.dist) return a.dist < b.dist;
              if (a.truth_idx != b.truth_idx) return a.truth_idx < b.truth_idx;
              return a.pred_idx < b.pred_idx;
            });

  std::vector<bool> truth_used(static_cast<std::size_t>(truth.size()), false);
  std::vector<bool> pred_used(static_cast<std::size_t>(predicted.size()), false);
  EvalReport report;
  report.margin = margin;
  for (const auto& c : candidates) {
    if (truth_used[static_cast<std::size_t>(c.truth_idx)] ||
        pred_used[static_cast<std::size_t>(c.pred_idx)])
      continue;
    truth_used[static_cast<std::size_t>(c.truth_idx)] = true;
    pred_used[static_cast<std::size_t>(c.pred_idx)] = true;
    report.matches.emplace_back(
        truth.indices[static_cast<std::size_t>(c.truth_idx)],
        predicted.indices[static_cast<std::size_t>(c.pred_idx)]);
  }
  std::sort(report.matches.begin(), report.matches.end());

  report.tp = static_cast<int>(report.matches.size());
  report.fp = predicted.size() - report.tp;
  report.fn = truth.size() - report.tp;
  report.precision =
      (report.tp + report.fp) > 0
          ? static_cast<double>(report.tp) / (report.tp + report.fp)
          : 0.0;
  report.recall = (report.tp + report.fn) > 0
                      ? static_cast<double>(report.tp) / (report.tp + report.fn)
                      : 0.0;
  report.f1 = (report.precision + report.recall) > 0.0
                  ? 2.0 * report.precision * report.recall /
                        (report.precision + report.recall)
                  : 0.0;
  return report;
}

}  // namespace tvcpd
