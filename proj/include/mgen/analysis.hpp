#pragma once

#include "mgen/chroma.hpp"
#include "mgen/oracle.hpp"

namespace mgen {

struct AnalysisOptions {
  std::vector<double> theta_grid;  // empty = percentile auto-grid
  int grid_points = 64;
  int min_len = 4;           // beat frames
  bool symbolic_path = true; // false = synthesize + STFT chroma
  double sample_rate = 44100.0;
};

struct AnalysisResult {
  IRCurve ir;
  PatternSet patterns;
  std::vector<std::vector<double>> beat_features;  // unit-norm chroma per beat
  Oracle oracle;  // built at best_theta
};

// Evenly spaced grid between the 5th and 95th percentile of pairwise
// feature distances (subsampled when large).
std::vector<double> default_theta_grid(
    const std::vector<std::vector<double>>& features, int points);

// End-to-end structure analysis of one piece: beat-level chroma features,
// IR-over-theta sweep, oracle at the selected theta, motif extraction.
AnalysisResult analyze_sample(const SymbolicScore& score,
                              const AnalysisOptions& options = {});

}  // namespace mgen
