#include "tvcpd/tvgl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tvcpd {

namespace {

// Soft-threshold off-diagonal entries; the diagonal is unpenalized.
Eigen::MatrixXd soft_threshold_offdiag(const Eigen::MatrixXd& m, double t) {
  Eigen::MatrixXd out = m;
  const int d = static_cast<int>(m.rows());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      const double v = m(i, j);
      out(i, j) = v > t ? v - t : (v < -t ? v + t : 0.0);
    }
  return out;
}

// argmin_Theta -log det(Theta) + tr(S Theta) + (c/2) ||Theta - A||_F^2.
// With Q D Q^T = c A - S, the minimizer is Q diag(theta) Q^T where
// c theta_i - 1/theta_i = D_i, i.e. theta_i = (D_i + sqrt(D_i^2 + 4c)) / (2c),
// which is positive for every D_i. log_det receives sum(log theta_i).
Eigen::MatrixXd logdet_prox(const Eigen::MatrixXd& s, const Eigen::MatrixXd& a,
                            double c, double* log_det) {
  const Eigen::MatrixXd m = c * 0.5 * (a + a.transpose()) - s;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  const Eigen::VectorXd& dvals = eig.eigenvalues();
  Eigen::VectorXd theta(dvals.size());
  double ld = 0.0;
  for (int i = 0; i < dvals.size(); ++i) {
    theta(i) = (dvals(i) + std::sqrt(dvals(i) * dvals(i) + 4.0 * c)) / (2.0 * c);
    ld += std::log(theta(i));
  }
  if (log_det) *log_det = ld;
  Eigen::MatrixXd out =
      eig.eigenvectors() * theta.asDiagonal() * eig.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

double offdiag_abs_sum(const Eigen::MatrixXd& m) {
  return m.cwiseAbs().sum() - m.diagonal().cwiseAbs().sum();
}

}  // namespace

void TvglConfig::validate(int d) const {
  if (lambda < 0.0) throw InvalidConfig("tvgl", "lambda must be >= 0");
  if (beta < 0.0) throw InvalidConfig("tvgl", "beta must be >= 0");
  if (d > 0 && slice_size < d + 1)
    throw InvalidConfig("tvgl", "slice_size must be >= d + 1 = " +
                                    std::to_string(d + 1));
  if (admm_rho <= 0.0) throw InvalidConfig("tvgl", "admm_rho must be > 0");
  if (max_iters < 1) throw InvalidConfig("tvgl", "max_iters must be >= 1");
  if (primal_tol <= 0.0 || dual_tol <= 0.0)
    throw InvalidConfig("tvgl", "tolerances must be > 0");
}

std::vector<std::pair<Eigen::MatrixXd, std::pair<int, int>>> slice_covariances(
    const TimeSeries& x, int slice_size) {
  x.validate();
  const int d = x.d();
  const int T = x.length();
  if (slice_size < d + 1)
    throw InvalidConfig("tvgl", "slice_size must be >= d + 1");

  const int full = T / slice_size;
  const int remainder = T % slice_size;
  std::vector<std::pair<int, int>> ranges;
  for (int k = 0; k < full; ++k)
    ranges.emplace_back(k * slice_size, (k + 1) * slice_size);
  if (remainder >= d + 1) {
    ranges.emplace_back(full * slice_size, T);
  } else if (remainder > 0) {
    if (ranges.empty())
      throw SeriesTooShort("tvgl", "series shorter than one slice");
    ranges.back().second = T;  // merge short remainder into the last slice
  }
  if (ranges.size() < 2)
    throw SeriesTooShort("tvgl",
                         "need at least 2 covariance slices, got " +
                             std::to_string(ranges.size()));

  std::vector<std::pair<Eigen::MatrixXd, std::pair<int, int>>> out;
  out.reserve(ranges.size());
  for (const auto& [begin, end] : ranges) {
    const auto block = x.values.middleCols(begin, end - begin);
    Eigen::MatrixXd s =
        (block * block.transpose()) / static_cast<double>(end - begin);
    out.emplace_back(std::move(s), std::make_pair(begin, end));
  }
  return out;
}

TvglSolution tvgl_solve(const std::vector<Eigen::MatrixXd>& covariances,
                        const TvglConfig& config,
                        const std::vector<std::pair<int, int>>& ranges) {
  const int n = static_cast<int>(covariances.size());
  if (n < 1) throw InvalidConfig("tvgl", "need at least one covariance slice");
  const int d = static_cast<int>(covariances.front().rows());
  config.validate(0);  // slice_size not used here

  for (const auto& s : covariances) {
    if (s.rows() != d || s.cols() != d)
      throw NonSymmetricInput("covariance slices must share one square shape");
    if (!is_symmetric(s, 1e-8))
      throw NonSymmetricInput("covariance slice not symmetric within 1e-8");
  }
  if (!ranges.empty() && static_cast<int>(ranges.size()) != n)
    throw InvalidConfig("tvgl", "ranges size must match covariance count");

  const double rho = config.admm_rho;
  const double lam = config.lambda;
  const double beta = config.beta;

  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(d, d);
  std::vector<Eigen::MatrixXd> theta(n, eye), z0(n, eye), u0(n, zero);
  // z1[t]/u1[t] pair slice t with t+1 (valid for t < n-1);
  // z2[t]/u2[t] pair slice t with t-1 (valid for t >= 1).
  std::vector<Eigen::MatrixXd> z1(n, eye), u1(n, zero), z2(n, eye), u2(n, zero);
  std::vector<double> logdets(n, 0.0);

  auto objective = [&](const std::vector<Eigen::MatrixXd>& th,
                       const std::vector<double>& lds) {
    double f = 0.0;
    for (int t = 0; t < n; ++t) {
      f += -lds[t] + (covariances[t].array() * th[t].array()).sum() +
           lam * offdiag_abs_sum(th[t]);
      if (t > 0) f += beta * (th[t] - th[t - 1]).squaredNorm();
    }
    return f;
  };

  TvglSolution sol;
  std::vector<Eigen::MatrixXd> best_theta = theta;
  double best_obj = std::numeric_limits<double>::infinity();
  const double entries = static_cast<double>(d) * d *
                         (n + 2.0 * std::max(0, n - 1));

  for (int iter = 0; iter < config.max_iters; ++iter) {
    // Theta step: independent log-det proximal solves per slice.
#pragma omp parallel for schedule(static)
    for (int t = 0; t < n; ++t) {
      int terms = 1;
      Eigen::MatrixXd a = z0[t] - u0[t];
      if (t < n - 1) {
        a += z1[t] - u1[t];
        ++terms;
      }
      if (t > 0) {
        a += z2[t] - u2[t];
        ++terms;
      }
      a /= static_cast<double>(terms);
      theta[t] = logdet_prox(covariances[t], a, rho * terms, &logdets[t]);
    }

    const double obj = objective(theta, logdets);
    sol.objective_trace.push_back(obj);
    if (obj < best_obj) {
      best_obj = obj;
      best_theta = theta;
    }

    // Z step. Old values are kept for the dual residual.
    double dual_sq = 0.0;
    for (int t = 0; t < n; ++t) {
      const Eigen::MatrixXd z0_new =
          soft_threshold_offdiag(theta[t] + u0[t], lam / rho);
      dual_sq += (z0_new - z0[t]).squaredNorm();
      z0[t] = z0_new;
    }
    for (int t = 0; t + 1 < n; ++t) {
      const Eigen::MatrixXd a = theta[t] + u1[t];
      const Eigen::MatrixXd b = theta[t + 1] + u2[t + 1];
      const double coef = rho / (4.0 * beta + rho);
      const Eigen::MatrixXd sum = a + b;
      const Eigen::MatrixXd diff = b - a;
      const Eigen::MatrixXd z1_new = 0.5 * (sum - coef * diff);
      const Eigen::MatrixXd z2_new = 0.5 * (sum + coef * diff);
      dual_sq += (z1_new - z1[t]).squaredNorm() +
                 (z2_new - z2[t + 1]).squaredNorm();
      z1[t] = z1_new;
      z2[t + 1] = z2_new;
    }

    // Dual step and primal residual.
    double primal_sq = 0.0;
    for (int t = 0; t < n; ++t) {
      Eigen::MatrixXd r = theta[t] - z0[t];
      primal_sq += r.squaredNorm();
      u0[t] += r;
      if (t < n - 1) {
        r = theta[t] - z1[t];
        primal_sq += r.squaredNorm();
        u1[t] += r;
      }
      if (t > 0) {
        r = theta[t] - z2[t];
        primal_sq += r.squaredNorm();
        u2[t] += r;
      }
    }

    sol.iterations = iter + 1;
    sol.primal_residual = std::sqrt(primal_sq / entries);
    sol.dual_residual = rho * std::sqrt(dual_sq / entries);
    if (sol.primal_residual < config.primal_tol &&
        sol.dual_residual < config.dual_tol) {
      sol.converged = true;
      break;
    }
  }

  sol.objective = best_obj;
  sol.precisions.matrices = std::move(best_theta);
  if (ranges.empty()) {
    for (int t = 0; t < n; ++t)
      sol.precisions.slice_ranges.emplace_back(t, t + 1);
  } else {
    sol.precisions.slice_ranges = ranges;
  }
  return sol;
}

ScoreSeries cov_score(const PrecisionSequence& p) {
  p.validate();
  const int n = p.size();
  std::vector<double> slice_score(static_cast<std::size_t>(n), 0.0);
  for (int s = 1; s < n; ++s)
    slice_score[static_cast<std::size_t>(s)] =
        (p.matrices[static_cast<std::size_t>(s)].cwiseAbs() -
         p.matrices[static_cast<std::size_t>(s - 1)].cwiseAbs())
            .sum();

  std::vector<double> scores(static_cast<std::size_t>(p.length()), 0.0);
  for (int s = 0; s < n; ++s) {
    const auto [begin, end] = p.slice_ranges[static_cast<std::size_t>(s)];
    for (int t = begin; t < end; ++t)
      scores[static_cast<std::size_t>(t)] = slice_score[static_cast<std::size_t>(s)];
  }
  return ScoreSeries::create(std::move(scores), "CovScore");
}

double partial_correlation(const Eigen::MatrixXd& p, int i, int j) {
  const int d = static_cast<int>(p.rows());
  if (i < 0 || i >= d || j < 0 || j >= d)
    throw IndexOutOfRange("pair (" + std::to_string(i) + ", " +
                          std::to_string(j) + ") out of range for d = " +
                          std::to_string(d));
  if (i == j)
    throw DiagonalRequest("partial correlation is undefined for i == j");
  if (p(i, i) <= 0.0 || p(j, j) <= 0.0)
    throw Error("tvgl", "precision diagonal must be positive");
  const double v = -p(i, j) / std::sqrt(p(i, i) * p(j, j));
  return std::clamp(v, -1.0, 1.0);
}

PairChangeHeatmap pair_change_heatmap(const PrecisionSequence& p) {
  p.validate();
  if (p.size() < 2)
    throw SeriesTooShort("tvgl", "heatmap needs at least 2 slices");
  PairChangeHeatmap map;
  map.deltas.reserve(static_cast<std::size_t>(p.size() - 1));
  for (int s = 1; s < p.size(); ++s) {
    // Sign flipped relative to the raw |P_s| - |P_{s-1}| difference: negative
    // entries mark pairs whose absolute correlation increased.
    map.deltas.push_back(-(p.matrices[static_cast<std::size_t>(s)].cwiseAbs() -
                           p.matrices[static_cast<std::size_t>(s - 1)].cwiseAbs()));
    map.slice_ranges.push_back(p.slice_ranges[static_cast<std::size_t>(s)]);
  }
  return map;
}

}  // namespace tvcpd
