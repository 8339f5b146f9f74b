#pragma once

#include <vector>

#include "mgen/common.hpp"

namespace mgen {

enum class OracleMetric { Euclidean, Identity };

// Variable Markov Oracle over a feature sequence. State 0 is the empty
// prefix; states 1..T carry the features. Two frames are treated as the
// same symbol when their distance is <= theta, so theta = 0 with the
// identity metric yields the exact factor oracle.
struct Oracle {
  std::vector<int> sfx;                    // suffix links, sfx[0] = -1
  std::vector<std::vector<int>> rsfx;      // inverse of sfx
  std::vector<std::vector<int>> trn;       // forward links (target states)
  std::vector<int> lrs;                    // longest-repeated-suffix length
  std::vector<std::vector<double>> data;   // data[0] is an empty sentinel
  double theta = 0.0;
  OracleMetric metric = OracleMetric::Euclidean;

  std::size_t n_states() const { return sfx.size(); }  // T + 1
};

Oracle build_oracle(const std::vector<std::vector<double>>& features,
                    double theta,
                    OracleMetric metric = OracleMetric::Euclidean);

// Convenience for symbol sequences (identity metric, theta 0).
Oracle build_oracle_symbols(const std::vector<int>& symbols);

// Compror-style compression of the oracle: each block is either a single
// new symbol ([0, state]) or a copy of `length` states starting at
// `source`. The backbone of the information-rate estimate.
struct CodeBlock {
  int length = 0;  // 0 = literal
  int source = 0;  // literal: the state; copy: first copied state
};
std::vector<CodeBlock> encode_oracle(const Oracle& oracle);

// Total information rate: per code word, the gain log2(alphabet so far)
// minus the amortized pointer cost log2(codewords so far + 1)/(length+1),
// clipped at zero and summed. Low for both an all-new sequence and an
// all-same sequence; peaks when real repetition is captured.
double compute_ir(const Oracle& oracle);

struct IRCurve {
  std::vector<double> thetas;
  std::vector<double> ir_totals;
  double best_theta = 0.0;
  std::size_t best_index = 0;
};

// Builds one oracle per theta and selects the argmax total IR (lowest
// theta on ties).
IRCurve sweep_theta(const std::vector<std::vector<double>>& features,
                    const std::vector<double>& theta_grid,
                    OracleMetric metric = OracleMetric::Euclidean);

struct Motif {
  int length = 0;
  std::vector<int> occurrence_ends;  // end states; span = [end-length+1, end]
};
struct PatternSet {
  std::vector<Motif> motifs;
  // Number of distinct states covered by at least one occurrence span.
  std::size_t covered_frames(std::size_t total_states) const;
};

// Repeated-motif extraction: suffix-link chains of states with
// lrs >= min_len become occurrence clusters; one-frame shifted shadows of
// an already-reported motif are suppressed.
PatternSet find_patterns(const Oracle& oracle, int min_len);

}  // namespace mgen
