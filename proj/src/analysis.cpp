#include "mgen/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "mgen/rng.hpp"

namespace mgen {

std::vector<double> default_theta_grid(
    const std::vector<std::vector<double>>& features, int points) {
  if (features.size() < 2) return {0.0};

  // Pairwise distances, subsampled past 400 frames.
  std::vector<double> dists;
  const std::size_t n = features.size();
  if (n <= 400) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < features[i].size(); ++k) {
          const double d = features[i][k] - features[j][k];
          s += d * d;
        }
        dists.push_back(std::sqrt(s));
      }
  } else {
    Rng rng(0x5EED);
    for (int pair = 0; pair < 80000; ++pair) {
      const std::size_t i = rng.below(n), j = rng.below(n);
      if (i == j) continue;
      double s = 0.0;
      for (std::size_t k = 0; k < features[i].size(); ++k) {
        const double d = features[i][k] - features[j][k];
        s += d * d;
      }
      dists.push_back(std::sqrt(s));
    }
  }
  std::sort(dists.begin(), dists.end());
  const double lo = dists[static_cast<std::size_t>(0.05 * (dists.size() - 1))];
  const double hi = dists[static_cast<std::size_t>(0.95 * (dists.size() - 1))];
  if (hi <= lo) return {lo};

  std::vector<double> grid;
  grid.reserve(points);
  for (int i = 0; i < points; ++i)
    grid.push_back(lo + (hi - lo) * i / (points - 1));
  return grid;
}

AnalysisResult analyze_sample(const SymbolicScore& score,
                              const AnalysisOptions& options) {
  AnalysisResult result;
  result.beat_features = options.symbolic_path
                             ? beat_chroma_symbolic(score)
                             : beat_chroma_audio(score, options.sample_rate);
  if (result.beat_features.empty()) fail("analyze: no beat features");

  std::vector<double> grid = options.theta_grid;
  if (grid.empty())
    grid = default_theta_grid(result.beat_features, options.grid_points);

  result.ir = sweep_theta(result.beat_features, grid);
  result.oracle =
      build_oracle(result.beat_features, result.ir.best_theta);
  result.patterns = find_patterns(result.oracle, options.min_len);
  return result;
}

}  // namespace mgen
