#include "mgen/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mgen {

namespace {

double feature_dist(const std::vector<double>& a, const std::vector<double>& b,
                    OracleMetric metric) {
  if (a.size() != b.size()) fail("oracle: feature dimension mismatch");
  if (metric == OracleMetric::Identity) return a == b ? 0.0 : 1.0;
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

int len_common_suffix(const Oracle& o, int p1, int p2) {
  if (p2 == o.sfx[p1]) return o.lrs[p1];
  while (o.sfx[p2] != o.sfx[p1] && p2 != 0) p2 = o.sfx[p2];
  return std::min(o.lrs[p1], o.lrs[p2]);
}

}  // namespace

Oracle build_oracle(const std::vector<std::vector<double>>& features,
                    double theta, OracleMetric metric) {
  if (features.empty()) fail("oracle: empty feature sequence");
  if (theta < 0.0) fail("oracle: theta must be >= 0");

  Oracle o;
  o.theta = theta;
  o.metric = metric;
  o.sfx = {-1};
  o.rsfx = {{}};
  o.trn = {{}};
  o.lrs = {0};
  o.data = {{}};

  for (const auto& feature : features) {
    const int i = static_cast<int>(o.n_states());
    o.data.push_back(feature);
    o.sfx.push_back(0);
    o.rsfx.push_back({});
    o.trn.push_back({});
    o.lrs.push_back(0);

    o.trn[i - 1].push_back(i);
    int k = o.sfx[i - 1];
    int pi_1 = i - 1;
    int suffix_candidate = -1;

    while (k >= 0) {
      // Closest theta-similar forward transition from k, earliest state on
      // ties, keeps the construction deterministic.
      double best = std::numeric_limits<double>::infinity();
      int best_state = -1;
      for (int s : o.trn[k]) {
        const double d = feature_dist(feature, o.data[s], metric);
        if (d <= theta && d < best) {
          best = d;
          best_state = s;
        }
      }
      if (best_state < 0) {
        o.trn[k].push_back(i);
        pi_1 = k;
        k = o.sfx[k];
      } else {
        suffix_candidate = best_state;
        break;
      }
    }

    if (k < 0) {
      o.sfx[i] = 0;
      o.lrs[i] = 0;
    } else {
      o.sfx[i] = suffix_candidate;
      o.lrs[i] = len_common_suffix(o, pi_1, o.sfx[i] - 1) + 1;
    }

    // lrs correction: another state with the same lrs whose preceding
    // symbol also matches extends the repeated suffix by one.
    {
      const int l = o.lrs[i];
      if (i - l >= 1) {
        auto& candidates = o.rsfx[o.sfx[i]];
        std::sort(candidates.begin(), candidates.end());
        for (int j : candidates) {
          if (j > i - 1) break;
          if (o.lrs[j] == l && j - l >= 1 &&
              feature_dist(o.data[i - l], o.data[j - l], metric) <= theta) {
            o.lrs[i] = l + 1;
            o.sfx[i] = j;
            break;
          }
        }
      }
    }
    o.rsfx[o.sfx[i]].push_back(i);
  }

  for (auto& r : o.rsfx) std::sort(r.begin(), r.end());
  return o;
}

Oracle build_oracle_symbols(const std::vector<int>& symbols) {
  std::vector<std::vector<double>> features;
  features.reserve(symbols.size());
  for (int s : symbols) features.push_back({static_cast<double>(s)});
  return build_oracle(features, 0.0, OracleMetric::Identity);
}

std::vector<CodeBlock> encode_oracle(const Oracle& oracle) {
  const int size = static_cast<int>(oracle.n_states()) - 1;
  std::vector<CodeBlock> code;
  int j = 0;
  while (j < size) {
    int i = j;
    while (i < size && oracle.lrs[i + 1] >= i - j + 1) ++i;
    if (i == j) {
      ++i;
      code.push_back({0, i});
    } else {
      code.push_back({i - j, oracle.sfx[i] - (i - j) + 1});
    }
    j = i;
  }
  return code;
}

double compute_ir(const Oracle& oracle) {
  const std::vector<CodeBlock> code = encode_oracle(oracle);
  double total = 0.0;
  long literals = 0;
  for (std::size_t k = 0; k < code.size(); ++k) {
    if (code[k].length == 0) ++literals;
    const double h0 = std::log2(static_cast<double>(literals));
    const double block_cost = static_cast<double>(code[k].length + 1);
    const double h1 =
        k == 0 ? 0.0 : std::log2(static_cast<double>(k + 1)) / block_cost;
    total += std::max(0.0, h0 - h1);
  }
  return total;
}

IRCurve sweep_theta(const std::vector<std::vector<double>>& features,
                    const std::vector<double>& theta_grid,
                    OracleMetric metric) {
  if (theta_grid.empty()) fail("sweep_theta: empty grid");
  IRCurve curve;
  curve.thetas = theta_grid;
  curve.ir_totals.reserve(theta_grid.size());
  double best = -1.0;
  for (std::size_t i = 0; i < theta_grid.size(); ++i) {
    Oracle o = build_oracle(features, theta_grid[i], metric);
    const double ir = compute_ir(o);
    curve.ir_totals.push_back(ir);
    if (ir > best) {
      best = ir;
      curve.best_index = i;
    }
  }
  curve.best_theta = curve.thetas[curve.best_index];
  return curve;
}

std::size_t PatternSet::covered_frames(std::size_t total_states) const {
  std::vector<bool> covered(total_states + 1, false);
  std::size_t n = 0;
  for (const auto& m : motifs)
    for (int end : m.occurrence_ends)
      for (int s = end - m.length + 1; s <= end; ++s)
        if (s >= 1 && static_cast<std::size_t>(s) <= total_states &&
            !covered[s]) {
          covered[s] = true;
          ++n;
        }
  return n;
}

PatternSet find_patterns(const Oracle& oracle, int min_len) {
  if (min_len < 1) fail("find_patterns: min_len must be >= 1");
  const int T = static_cast<int>(oracle.n_states()) - 1;
  PatternSet out;
  std::vector<bool> done(T + 1, false);

  for (int t = T; t >= 1; --t) {
    if (done[t] || oracle.lrs[t] < min_len) continue;
    // One-frame shifted shadow of an already-handled motif.
    if (t + 1 <= T && done[t + 1] && oracle.sfx[t + 1] == oracle.sfx[t] + 1 &&
        oracle.lrs[t] <= oracle.lrs[t + 1]) {
      done[t] = true;
      continue;
    }

    Motif motif;
    motif.length = oracle.lrs[t];
    motif.occurrence_ends.push_back(t);
    done[t] = true;
    int s = oracle.sfx[t];
    while (s >= 1) {
      motif.occurrence_ends.push_back(s);
      done[s] = true;
      if (oracle.lrs[s] < min_len) break;
      motif.length = std::min(motif.length, oracle.lrs[s]);
      s = oracle.sfx[s];
    }
    std::sort(motif.occurrence_ends.begin(), motif.occurrence_ends.end());
    out.motifs.push_back(std::move(motif));
  }
  std::reverse(out.motifs.begin(), out.motifs.end());
  return out;
}

}  // namespace mgen
