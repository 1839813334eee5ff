#include "tvcpd/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "tvcpd/rng.hpp"

namespace tvcpd::reference {

namespace {

double sqdist(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double dk = x[k] - y[k];
    s += dk * dk;
  }
  return s;
}

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

// Solves the (n x n) system a * x = b in place, partial pivoting.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b,
                                int n) {
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(a[col * n + c], a[pivot * n + c]);
      std::swap(b[col], b[pivot]);
    }
    const double piv = a[col * n + col];
    if (piv == 0.0) throw std::runtime_error("singular normal equations");
    for (int r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / piv;
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= a[r * n + c] * x[c];
    x[r] = s / a[r * n + r];
  }
  return x;
}

}  // namespace

double normalized_gaussian_kernel(const std::vector<double>& x,
                                  const std::vector<double>& y,
                                  double bandwidth) {
  const double kxy = std::exp(-sqdist(x, y) / (2.0 * bandwidth * bandwidth));
  const double kxx = 1.0;  // exp(0)
  const double kyy = 1.0;
  return kxy / (0.5 * (kxx + kyy));
}

double mmd_unbiased(const std::vector<std::vector<double>>& window_a,
                    const std::vector<std::vector<double>>& window_b,
                    double bandwidth) {
  const std::size_t na = window_a.size();
  const std::size_t nb = window_b.size();

  double sum_a = 0.0;
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j)
      if (i != j)
        sum_a += normalized_gaussian_kernel(window_a[i], window_a[j], bandwidth);

  double sum_b = 0.0;
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      if (i != j)
        sum_b += normalized_gaussian_kernel(window_b[i], window_b[j], bandwidth);

  double sum_ab = 0.0;
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      sum_ab += normalized_gaussian_kernel(window_a[i], window_b[j], bandwidth);

  return sum_a / (static_cast<double>(na) * (na - 1)) +
         sum_b / (static_cast<double>(nb) * (nb - 1)) -
         2.0 * sum_ab / (static_cast<double>(na) * nb);
}

PermutationTestResult permutation_test(
    const std::vector<std::vector<double>>& window_a,
    const std::vector<std::vector<double>>& window_b, double bandwidth,
    double alpha, int n_permutations, std::uint64_t seed) {
  const int na = static_cast<int>(window_a.size());
  const int nb = static_cast<int>(window_b.size());
  const int n = na + nb;

  std::vector<std::vector<double>> pooled;
  pooled.reserve(static_cast<std::size_t>(n));
  for (const auto& r : window_a) pooled.push_back(r);
  for (const auto& r : window_b) pooled.push_back(r);

  PermutationTestResult result;
  result.statistic = mmd_unbiased(window_a, window_b, bandwidth);

  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n_permutations) + 1);
  values.push_back(result.statistic);

  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int p = 0; p < n_permutations; ++p) {
    tvcpd::Rng rng(tvcpd::mix_seed(seed, static_cast<std::uint64_t>(p) + 1));
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i >= 1; --i) {
      const int j = rng.uniform_int(0, i);
      std::swap(perm[static_cast<std::size_t>(i)],
                perm[static_cast<std::size_t>(j)]);
    }
    std::vector<std::vector<double>> pa, pb;
    pa.reserve(static_cast<std::size_t>(na));
    pb.reserve(static_cast<std::size_t>(nb));
    for (int i = 0; i < na; ++i) pa.push_back(pooled[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]);
    for (int i = na; i < n; ++i) pb.push_back(pooled[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]);
    values.push_back(mmd_unbiased(pa, pb, bandwidth));
  }

  std::sort(values.begin(), values.end());
  const int total = n_permutations + 1;
  const int k = static_cast<int>(
      std::ceil((1.0 - alpha) * static_cast<double>(total)));
  result.threshold = values[static_cast<std::size_t>(std::clamp(k, 1, total) - 1)];
  result.rejected = result.statistic > result.threshold;
  return result;
}

GlassoResult glasso_coordinate_descent(const std::vector<double>& s, int d,
                                       double lambda, double tol,
                                       int max_sweeps) {
  GlassoResult res;
  res.w = s;
  res.theta.assign(static_cast<std::size_t>(d) * d, 0.0);
  if (d == 1) {
    res.theta[0] = 1.0 / s[0];
    res.converged = true;
    return res;
  }

  const int m = d - 1;
  // One beta vector per column, kept across sweeps as warm start.
  std::vector<std::vector<double>> betas(static_cast<std::size_t>(d),
                                         std::vector<double>(static_cast<std::size_t>(m), 0.0));
  std::vector<double> w11(static_cast<std::size_t>(m) * m);
  std::vector<double> s12(static_cast<std::size_t>(m));
  std::vector<int> others(static_cast<std::size_t>(m));

  auto column_pass = [&](int j) {
    int idx = 0;
    for (int k = 0; k < d; ++k)
      if (k != j) others[static_cast<std::size_t>(idx++)] = k;
    for (int r = 0; r < m; ++r) {
      s12[static_cast<std::size_t>(r)] = s[static_cast<std::size_t>(others[static_cast<std::size_t>(r)]) * d + j];
      for (int c = 0; c < m; ++c)
        w11[static_cast<std::size_t>(r) * m + c] =
            res.w[static_cast<std::size_t>(others[static_cast<std::size_t>(r)]) * d +
                  others[static_cast<std::size_t>(c)]];
    }
    auto& beta = betas[static_cast<std::size_t>(j)];
    for (int inner = 0; inner < 10000; ++inner) {
      double max_delta = 0.0;
      for (int k = 0; k < m; ++k) {
        double r = s12[static_cast<std::size_t>(k)];
        for (int l = 0; l < m; ++l)
          if (l != k) r -= w11[static_cast<std::size_t>(k) * m + l] * beta[static_cast<std::size_t>(l)];
        const double nb = soft_threshold(r, lambda) / w11[static_cast<std::size_t>(k) * m + k];
        max_delta = std::max(max_delta, std::abs(nb - beta[static_cast<std::size_t>(k)]));
        beta[static_cast<std::size_t>(k)] = nb;
      }
      if (max_delta < 1e-14) break;
    }
    // w12 = W11 * beta
    double max_change = 0.0;
    for (int r = 0; r < m; ++r) {
      double v = 0.0;
      for (int c = 0; c < m; ++c)
        v += w11[static_cast<std::size_t>(r) * m + c] * beta[static_cast<std::size_t>(c)];
      const int i = others[static_cast<std::size_t>(r)];
      max_change = std::max(max_change, std::abs(res.w[static_cast<std::size_t>(i) * d + j] - v));
      res.w[static_cast<std::size_t>(i) * d + j] = v;
      res.w[static_cast<std::size_t>(j) * d + i] = v;
    }
    return max_change;
  };

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (int j = 0; j < d; ++j) max_change = std::max(max_change, column_pass(j));
    res.sweeps = sweep + 1;
    if (max_change < tol) {
      res.converged = true;
      break;
    }
  }

  // Recover the precision matrix from the final betas.
  for (int j = 0; j < d; ++j) {
    const auto& beta = betas[static_cast<std::size_t>(j)];
    int idx = 0;
    double dot = 0.0;
    for (int k = 0; k < d; ++k) {
      if (k == j) continue;
      dot += res.w[static_cast<std::size_t>(k) * d + j] * beta[static_cast<std::size_t>(idx)];
      ++idx;
    }
    const double theta_jj = 1.0 / (res.w[static_cast<std::size_t>(j) * d + j] - dot);
    res.theta[static_cast<std::size_t>(j) * d + j] = theta_jj;
    idx = 0;
    for (int k = 0; k < d; ++k) {
      if (k == j) continue;
      res.theta[static_cast<std::size_t>(k) * d + j] = -beta[static_cast<std::size_t>(idx)] * theta_jj;
      ++idx;
    }
  }
  // Columns were recovered independently; enforce exact symmetry.
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const double v = 0.5 * (res.theta[static_cast<std::size_t>(i) * d + j] +
                              res.theta[static_cast<std::size_t>(j) * d + i]);
      res.theta[static_cast<std::size_t>(i) * d + j] = v;
      res.theta[static_cast<std::size_t>(j) * d + i] = v;
    }
  return res;
}

std::vector<double> savgol_direct(const std::vector<double>& y, int window,
                                  int polyorder) {
  const int T = static_cast<int>(y.size());
  const int h = window / 2;
  std::vector<double> out(static_cast<std::size_t>(T), 0.0);
  for (int t = 0; t < T; ++t) {
    const int lo = std::max(0, t - h);
    const int hi = std::min(T - 1, t + h);
    const int npts = hi - lo + 1;
    const int deg = std::min(polyorder, npts - 1);
    const int n = deg + 1;
    // Normal equations for the polynomial in (k - t).
    std::vector<double> ata(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<double> atb(static_cast<std::size_t>(n), 0.0);
    for (int k = lo; k <= hi; ++k) {
      const double x = static_cast<double>(k - t);
      std::vector<double> pow_x(static_cast<std::size_t>(n));
      double v = 1.0;
      for (int p = 0; p < n; ++p) {
        pow_x[static_cast<std::size_t>(p)] = v;
        v *= x;
      }
      for (int r = 0; r < n; ++r) {
        atb[static_cast<std::size_t>(r)] += pow_x[static_cast<std::size_t>(r)] * y[static_cast<std::size_t>(k)];
        for (int c = 0; c < n; ++c)
          ata[static_cast<std::size_t>(r) * n + c] += pow_x[static_cast<std::size_t>(r)] * pow_x[static_cast<std::size_t>(c)];
      }
    }
    out[static_cast<std::size_t>(t)] = solve_dense(std::move(ata), std::move(atb), n)[0];
  }
  return out;
}

}  // namespace tvcpd::reference
