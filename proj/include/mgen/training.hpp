#pragma once

#include <limits>

#include "mgen/model.hpp"
#include "mgen/rng.hpp"

namespace mgen {

struct CorpusItem {
  FrameSequence frames;
  std::size_t source_song = 0;  // index into the pre-split song list
  int transposition = 0;        // semitones, 0 when not augmented
};

// Train/held-out membership is decided per source song; transpositions
// always stay with their source's side.
struct CorpusSplit {
  std::vector<CorpusItem> train;
  std::vector<CorpusItem> held_out;
  bool augmented = false;
};

CorpusSplit split_corpus(const std::vector<FrameSequence>& songs,
                         std::size_t train_count, bool augment,
                         std::uint64_t seed);

struct TrainOptions {
  int epochs = 10;
  long max_steps = 0;        // 0 = no cap; one step = one song update
  double lr = 1e-3;
  double target_loss = 0.0;  // early stop when epoch train loss <= this
  bool use_sgd = false;
  std::uint64_t seed = 0;    // epoch shuffling
};

struct EpochStats {
  int epoch = 0;
  double train_nats = 0.0;
  double heldout_nats = std::numeric_limits<double>::quiet_NaN();
};

struct TrainResult {
  std::vector<EpochStats> curve;
  long steps = 0;
  double best_heldout = std::numeric_limits<double>::infinity();
  bool diverged = false;
};

// Teacher-forced training, one gradient step per song. When a held-out set
// exists the parameters of the best held-out epoch are restored at the
// end; a non-finite loss aborts and restores the last good snapshot.
TrainResult train_model(SequenceModel& model, const CorpusSplit& split,
                        const TrainOptions& options);

// Frame-weighted mean teacher-forced cross-entropy (nats/frame).
double evaluate_xent(SequenceModel& model,
                     const std::vector<FrameSequence>& data);

struct GenerationTask {
  int prime_beats = 20;
  int generate_beats = 20;
  double temperature = 1.0;  // <= 0 means argmax
  std::uint64_t seed = 0;
};

// Continuation protocol: the prime frames are copied verbatim, then melody
// labels are sampled autoregressively under softmax(logits/temperature)
// until prime+generate beats are filled. chords_full must cover the whole
// span. Sampled sequences always satisfy the frame invariants (a hold is
// never sampled at position 0 or after a rest).
FrameSequence generate_continuation(SequenceModel& model,
                                    const FrameSequence& prime,
                                    const std::vector<int>& chords_full,
                                    const GenerationTask& task);

}  // namespace mgen
