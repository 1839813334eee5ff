#pragma once

#include <cstdint>
#include <vector>

namespace tvcpd::reference {

// Serial reference implementations, deliberately written with plain loops and
// flat arrays, independent of the Eigen/OpenMP code paths they are used to
// check. Linked only by the tests and the benchmark tool.

/// Gaussian kernel exp(-||x-y||^2 / (2 bw^2)) normalized by the arithmetic
/// mean of the self-kernels.
double normalized_gaussian_kernel(const std::vector<double>& x,
                                  const std::vector<double>& y,
                                  double bandwidth);

/// Unbiased squared-MMD estimate by brute-force double loops over all sample
/// pairs. Windows are row-major: window[i] is one d-dimensional sample.
double mmd_unbiased(const std::vector<std::vector<double>>& window_a,
                    const std::vector<std::vector<double>>& window_b,
                    double bandwidth);

struct PermutationTestResult {
  double statistic = 0.0;
  double threshold = 0.0;
  bool rejected = false;
};

/// Plain single-kernel permutation two-sample test at level alpha. Uses the
/// permutation scheme documented in tvcpd/mmd.hpp (sub-stream p seeded with
/// mix_seed(seed, p + 1), Fisher-Yates over the pooled indices) so that the
/// aggregated test with a single bandwidth and no correction must coincide
/// with it.
PermutationTestResult permutation_test(
    const std::vector<std::vector<double>>& window_a,
    const std::vector<std::vector<double>>& window_b, double bandwidth,
    double alpha, int n_permutations, std::uint64_t seed);

struct GlassoResult {
  std::vector<double> theta;  // d x d, row-major precision estimate
  std::vector<double> w;      // d x d, row-major covariance estimate
  int sweeps = 0;
  bool converged = false;
};

/// Static graphical lasso,
///   minimize -log det(Theta) + tr(S Theta) + lambda * sum_{i != j} |Theta_ij|,
/// solved in covariance form by cycling over columns and solving each column's
/// lasso subproblem by coordinate descent. The diagonal is unpenalized, so
/// diag(W) stays equal to diag(S).
GlassoResult glasso_coordinate_descent(const std::vector<double>& s, int d,
                                       double lambda, double tol = 1e-12,
                                       int max_sweeps = 10000);

/// Savitzky-Golay smoothing by explicitly solving each window's least-squares
/// normal equations (Gaussian elimination, partial pivoting). Boundary windows
/// are truncated to [t-h, t+h] intersected with [0, T); the fitted degree at a
/// window with m points is min(polyorder, m - 1).
std::vector<double> savgol_direct(const std::vector<double>& y, int window,
                                  int polyorder);

}  // namespace tvcpd::reference
