#include "tvcpd/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tvcpd/rng.hpp"

namespace tvcpd {

std::string cp_kind_name(CpKind kind) {
  switch (kind) {
    case CpKind::mean: return "mean";
    case CpKind::variance: return "variance";
    case CpKind::correlation: return "correlation";
    case CpKind::mixed: return "mixed";
  }
  return "unknown";
}

CpKind cp_kind_from_name(const std::string& name) {
  if (name == "mean") return CpKind::mean;
  if (name == "variance") return CpKind::variance;
  if (name == "correlation") return CpKind::correlation;
  if (name == "mixed") return CpKind::mixed;
  throw InvalidSpec("unknown change point kind '" + name + "'");
}

void SimSpec::validate() const {
  if (length < 2) throw InvalidSpec("length must be >= 2");
  if (n_features < 1) throw InvalidSpec("n_features must be >= 1");
  if (n_segments < 1) throw InvalidSpec("n_segments must be >= 1");
  if (min_segment_len < 2) throw InvalidSpec("min_segment_len must be >= 2");
  if (static_cast<long long>(n_segments) * min_segment_len > length)
    throw InvalidSpec("n_segments * min_segment_len must be <= length");
  if (mean_jump_range.first <= 0.0 ||
      mean_jump_range.second < mean_jump_range.first)
    throw InvalidSpec("mean_jump_range must satisfy 0 < lo <= hi");
  if (variance_levels.size() < 2) throw InvalidSpec("need >= 2 variance levels");
  for (double v : variance_levels)
    if (v <= 0.0) throw InvalidSpec("variance levels must be > 0");
  if (correlation_values.size() < 2)
    throw InvalidSpec("need >= 2 correlation values");
  for (double r : correlation_values)
    if (r < -1.0 || r > 1.0)
      throw InvalidSpec("correlation values must lie in [-1, 1]");
  if (arbitrary_kinds.empty()) throw InvalidSpec("arbitrary_kinds is empty");
}

namespace {

/// Segment lengths drawn uniformly in [min_len, 2 min_len], rescaled to sum
/// to T, keeping every length >= min_len.
std::vector<int> draw_segment_lengths(const SimSpec& spec, Rng& rng) {
  const int n = spec.n_segments;
  std::vector<int> raw(static_cast<std::size_t>(n));
  long long total = 0;
  for (int i = 0; i < n; ++i) {
    raw[static_cast<std::size_t>(i)] =
        rng.uniform_int(spec.min_segment_len, 2 * spec.min_segment_len);
    total += raw[static_cast<std::size_t>(i)];
  }
  std::vector<int> lens(static_cast<std::size_t>(n));
  long long sum = 0;
  for (int i = 0; i < n; ++i) {
    const double scaled = static_cast<double>(raw[static_cast<std::size_t>(i)]) *
                          spec.length / static_cast<double>(total);
    lens[static_cast<std::size_t>(i)] =
        std::max(spec.min_segment_len, static_cast<int>(std::llround(scaled)));
    sum += lens[static_cast<std::size_t>(i)];
  }
  // Deterministic fix-up of the rounding drift.
  while (sum != spec.length) {
    if (sum < spec.length) {
      const auto it = std::min_element(lens.begin(), lens.end());
      ++(*it);
      ++sum;
    } else {
      auto best = lens.end();
      for (auto it = lens.begin(); it != lens.end(); ++it)
        if (*it > spec.min_segment_len && (best == lens.end() || *it > *best))
          best = it;
      if (best == lens.end())
        throw InvalidSpec("segment lengths cannot satisfy min_segment_len");
      --(*best);
      --sum;
    }
  }
  return lens;
}

std::vector<int> boundaries(const std::vector<int>& lens) {
  std::vector<int> cps;
  int acc = 0;
  for (std::size_t i = 0; i + 1 < lens.size(); ++i) {
    acc += lens[i];
    cps.push_back(acc);
  }
  return cps;
}

/// Per-segment generative state. Features are sampled as
/// x_i = mean_i + sigma * z_i with z iid standard normal, after replacing
/// z_1 by rho*z_0 + sqrt(1-rho^2)*z_1 (when d >= 2). The construction keeps
/// every feature's marginal variance at sigma^2 and sets the (0,1) population
/// correlation to rho exactly.
struct SegmentState {
  std::vector<double> means;
  double sigma2 = 1.0;
  double rho = 0.0;
};

void sample_segment(const SegmentState& st, int len, int d, Rng& rng,
                    Eigen::MatrixXd& out, int col0) {
  const double sd = std::sqrt(st.sigma2);
  for (int t = 0; t < len; ++t) {
    // Sample feature-major per time step so the stream layout is simple to
    // reproduce.
    std::vector<double> z(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) z[static_cast<std::size_t>(i)] = rng.normal();
    if (d >= 2)
      z[1] = st.rho * z[0] + std::sqrt(1.0 - st.rho * st.rho) * z[1];
    for (int i = 0; i < d; ++i)
      out(i, col0 + t) =
          st.means[static_cast<std::size_t>(i)] + sd * z[static_cast<std::size_t>(i)];
  }
}

void jump_means(SegmentState& st, const SimSpec& spec, Rng& rng) {
  const int d = spec.n_features;
  std::vector<bool> jumps(static_cast<std::size_t>(d));
  bool any = false;
  for (int i = 0; i < d; ++i) {
    jumps[static_cast<std::size_t>(i)] = rng.uniform01() < 0.5;
    any = any || jumps[static_cast<std::size_t>(i)];
  }
  if (!any) jumps[static_cast<std::size_t>(rng.uniform_int(0, d - 1))] = true;
  for (int i = 0; i < d; ++i) {
    if (!jumps[static_cast<std::size_t>(i)]) continue;
    const double magnitude =
        rng.uniform(spec.mean_jump_range.first, spec.mean_jump_range.second);
    const double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
    st.means[static_cast<std::size_t>(i)] += sign * magnitude;
  }
}

/// Picks a value from `values` different from `current` (uniform over the
/// remaining ones).
double pick_different(const std::vector<double>& values, double current,
                      Rng& rng) {
  std::vector<double> allowed;
  for (double v : values)
    if (v != current) allowed.push_back(v);
  if (allowed.empty()) throw InvalidSpec("no alternative value to switch to");
  return allowed[static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<int>(allowed.size()) - 1))];
}

SimResult generate(const SimSpec& spec, CpKind family_kind) {
  spec.validate();
  if (family_kind == CpKind::correlation && spec.n_features < 2)
    throw InvalidSpec("correlation family needs >= 2 features");

  Rng rng(spec.seed);
  const int d = spec.n_features;
  const std::vector<int> lens = draw_segment_lengths(spec, rng);
  const std::vector<int> cps = boundaries(lens);

  SegmentState st;
  st.means.assign(static_cast<std::size_t>(d), 0.0);
  std::vector<CpKind> kinds;

  // Family-specific initial state.
  switch (family_kind) {
    case CpKind::mean:
      st.sigma2 = 0.5;
      break;
    case CpKind::variance: {
      st.means.assign(static_cast<std::size_t>(d), 1.0);
      const int start = rng.uniform_int(
          0, static_cast<int>(spec.variance_levels.size()) - 1);
      st.sigma2 = spec.variance_levels[static_cast<std::size_t>(start)];
      break;
    }
    case CpKind::correlation: {
      const int start = rng.uniform_int(
          0, static_cast<int>(spec.correlation_values.size()) - 1);
      st.rho = spec.correlation_values[static_cast<std::size_t>(start)];
      break;
    }
    case CpKind::mixed:
      break;  // zero means, unit variance, rho = 0
  }

  Eigen::MatrixXd values(d, spec.length);
  int col = 0;
  int variance_index = -1;
  if (family_kind == CpKind::variance) {
    for (std::size_t i = 0; i < spec.variance_levels.size(); ++i)
      if (spec.variance_levels[i] == st.sigma2)
        variance_index = static_cast<int>(i);
  }

  for (std::size_t seg = 0; seg < lens.size(); ++seg) {
    if (seg > 0) {
      switch (family_kind) {
        case CpKind::mean:
          jump_means(st, spec, rng);
          kinds.push_back(CpKind::mean);
          break;
        case CpKind::variance:
          variance_index = (variance_index + 1) %
                           static_cast<int>(spec.variance_levels.size());
          st.sigma2 =
              spec.variance_levels[static_cast<std::size_t>(variance_index)];
          kinds.push_back(CpKind::variance);
          break;
        case CpKind::correlation:
          st.rho = pick_different(spec.correlation_values, st.rho, rng);
          kinds.push_back(CpKind::correlation);
          break;
        case CpKind::mixed: {
          const CpKind k = spec.arbitrary_kinds[static_cast<std::size_t>(
              rng.uniform_int(0,
                              static_cast<int>(spec.arbitrary_kinds.size()) - 1))];
          if (k == CpKind::mean || k == CpKind::mixed) jump_means(st, spec, rng);
          if (k == CpKind::variance || k == CpKind::mixed)
            st.sigma2 = pick_different(spec.variance_levels, st.sigma2, rng);
          if (k == CpKind::correlation || k == CpKind::mixed) {
            if (d < 2) throw InvalidSpec("correlation change needs >= 2 features");
            st.rho = pick_different(spec.correlation_values, st.rho, rng);
          }
          kinds.push_back(k);
          break;
        }
      }
    }
    sample_segment(st, lens[seg], d, rng, values, col);
    col += lens[seg];
  }

  SimResult result{TimeSeries::create(std::move(values)),
                   ChangePointSet::from_sorted(cps), std::move(kinds)};
  return result;
}

}  // namespace

SimResult gen_jumping_mean(const SimSpec& spec) {
  return generate(spec, CpKind::mean);
}

SimResult gen_changing_variance(const SimSpec& spec) {
  return generate(spec, CpKind::variance);
}

SimResult gen_changing_correlation(const SimSpec& spec) {
  return generate(spec, CpKind::correlation);
}

SimResult gen_arbitrary(const SimSpec& spec) {
  return generate(spec, CpKind::mixed);
}

}  // namespace tvcpd
