#pragma once

#include <utility>
#include <vector>

#include "tvcpd/types.hpp"

namespace tvcpd {

/// Parameters of the time-varying graphical lasso solve.
struct TvglConfig {
  double lambda = 0.1;    // off-diagonal L1 weight
  double beta = 5.0;      // squared-Frobenius temporal coupling weight
  int slice_size = 10;    // samples per covariance slice (>= d + 1)
  double admm_rho = 1.0;  // ADMM step parameter
  int max_iters = 500;
  double primal_tol = 1e-5;  // RMS primal residual stop
  double dual_tol = 1e-5;    // RMS dual residual stop

  void validate(int d) const;
};

/// Per-slice adjacent-precision differences for plotting. For slice t >= 1,
/// deltas[t-1](i, j) holds |P_t(i,j)| - |P_{t-1}(i,j)| with the sign flipped,
/// so a negative entry means the absolute partial correlation of the pair
/// increased and a positive entry means it decreased. Summing -deltas[t-1]
/// over all entries recovers the covariance-change score of slice t.
struct PairChangeHeatmap {
  std::vector<Eigen::MatrixXd> deltas;          // N - 1 matrices, d x d
  std::vector<std::pair<int, int>> slice_ranges;  // ranges of slices 1..N-1
};

struct TvglSolution {
  PrecisionSequence precisions;
  bool converged = false;
  int iterations = 0;
  /// Objective of the best (returned) iterate.
  double objective = 0.0;
  /// Objective of the Theta iterate at each ADMM iteration.
  std::vector<double> objective_trace;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

/// Cuts a series into consecutive non-overlapping slices of slice_size points
/// and returns each slice's empirical second-moment matrix with its time
/// range. A final remainder of length >= d + 1 becomes its own slice; a
/// shorter remainder is merged into the previous slice. Throws SeriesTooShort
/// if fewer than two slices result.
std::vector<std::pair<Eigen::MatrixXd, std::pair<int, int>>> slice_covariances(
    const TimeSeries& x, int slice_size);

/// Estimates the precision sequence
///   minimize sum_t [ -log det(Theta_t) + tr(S_t Theta_t) + lambda*||Theta_t||_od,1 ]
///            + beta * sum_{t>=2} ||Theta_t - Theta_{t-1}||_F^2
/// by ADMM with consensus variables for the element-wise soft-threshold step
/// and for each temporally coupled pair. The log-det proximal step is solved
/// by eigendecomposition, which keeps every iterate symmetric positive
/// definite. Non-convergence within max_iters is soft: the best iterate by
/// objective is returned with converged = false.
///
/// The slice ranges of the result are taken from `ranges` when provided;
/// otherwise each slice covers one unit of time.
TvglSolution tvgl_solve(const std::vector<Eigen::MatrixXd>& covariances,
                        const TvglConfig& config,
                        const std::vector<std::pair<int, int>>& ranges = {});

/// Per-time-index covariance-change score: slice t >= 1 scores
/// sum_ij (|P_t(i,j)| - |P_{t-1}(i,j)|), the whole-matrix sum including the
/// diagonal; slice 0 scores 0. The slice-level score is broadcast to every
/// time index the slice covers.
ScoreSeries cov_score(const PrecisionSequence& p);

/// -P(i,j) / sqrt(P(i,i) P(j,j)) for i != j.
double partial_correlation(const Eigen::MatrixXd& p, int i, int j);

/// Signed per-pair change heatmap between adjacent precision matrices; see
/// PairChangeHeatmap for the sign convention. Requires N >= 2 slices.
PairChangeHeatmap pair_change_heatmap(const PrecisionSequence& p);

}  // namespace tvcpd
