#include "mgen/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace mgen {

CorpusSplit split_corpus(const std::vector<FrameSequence>& songs,
                         std::size_t train_count, bool augment,
                         std::uint64_t seed) {
  if (songs.empty()) fail("split_corpus: empty corpus");
  if (train_count > songs.size())
    fail("split_corpus: train count exceeds corpus size");

  std::vector<std::size_t> order(songs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);

  CorpusSplit split;
  split.augmented = augment;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const std::size_t idx = order[pos];
    if (pos < train_count) {
      if (augment) {
        auto transposed = transpose_augment(songs[idx]);
        for (int s = 0; s < 12; ++s)
          split.train.push_back({std::move(transposed[s]), idx, s});
      } else {
        split.train.push_back({songs[idx], idx, 0});
      }
    } else {
      split.held_out.push_back({songs[idx], idx, 0});
    }
  }
  return split;
}

namespace {

using Snapshot = std::map<std::string, Tensor>;

Snapshot take_snapshot(ParamStore& store) {
  Snapshot s;
  for (const auto& [name, p] : store) s[name] = p.value;
  return s;
}

void restore_snapshot(ParamStore& store, const Snapshot& s) {
  for (const auto& [name, t] : s)
    std::memcpy(store.value(name).data(), t.data(),
                t.size() * sizeof(double));
}

}  // namespace

TrainResult train_model(SequenceModel& model, const CorpusSplit& split,
                        const TrainOptions& options) {
  if (split.train.empty()) fail("train: empty training set");
  TrainResult result;
  ParamStore& store = model.params();

  Snapshot best = take_snapshot(store);
  bool have_best = false;

  std::vector<std::size_t> order(split.train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::vector<FrameSequence> heldout_frames;
  for (const auto& item : split.held_out) heldout_frames.push_back(item.frames);

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    Rng shuffle_rng(options.seed + 0x9E3779B97F4A7C15ull * (epoch + 1));
    shuffle_rng.shuffle(order);

    double nats = 0.0;
    std::size_t frames_total = 0;
    bool capped = false;
    for (std::size_t idx : order) {
      const FrameSequence& song = split.train[idx].frames;
      const double loss = model.forward_loss(song);
      if (!std::isfinite(loss)) {
        restore_snapshot(store, best);
        result.diverged = true;
        return result;
      }
      model.backward();
      if (options.use_sgd) {
        sgd_step(store, options.lr);
      } else {
        adam_step(store, options.lr);
      }
      nats += loss * static_cast<double>(song.length());
      frames_total += song.length();
      ++result.steps;
      if (options.max_steps > 0 && result.steps >= options.max_steps) {
        capped = true;
        break;
      }
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_nats = nats / static_cast<double>(frames_total);
    if (!heldout_frames.empty()) {
      stats.heldout_nats = evaluate_xent(model, heldout_frames);
      if (stats.heldout_nats < result.best_heldout) {
        result.best_heldout = stats.heldout_nats;
        best = take_snapshot(store);
        have_best = true;
      }
    } else {
      best = take_snapshot(store);  // last good state for divergence recovery
    }
    result.curve.push_back(stats);

    if (capped) break;
    if (options.target_loss > 0.0 && stats.train_nats <= options.target_loss)
      break;
  }

  if (have_best) restore_snapshot(store, best);
  return result;
}

double evaluate_xent(SequenceModel& model,
                     const std::vector<FrameSequence>& data) {
  if (data.empty()) fail("evaluate_xent: empty data");
  double nats = 0.0;
  std::size_t frames = 0;
  for (const auto& song : data) {
    XentResult r = softmax_xent(model.logits(song), model.targets_of(song));
    nats += r.loss * static_cast<double>(song.length());
    frames += song.length();
  }
  return nats / static_cast<double>(frames);
}

namespace {

// Sample one melody label; labels rejected by `valid` get probability 0.
int sample_label(const std::vector<double>& logits, double temperature,
                 Rng& rng, const std::vector<bool>& valid) {
  const int n = static_cast<int>(logits.size());
  if (temperature <= 1e-12) {
    int best = -1;
    for (int j = 0; j < n; ++j) {
      if (!valid[j]) continue;
      if (best < 0 || logits[j] > logits[best]) best = j;
    }
    return best;
  }
  std::vector<double> probs(n);
  softmax_row(logits.data(), n, temperature, probs.data());
  for (int j = 0; j < n; ++j)
    if (!valid[j]) probs[j] = 0.0;
  return rng.categorical(probs.data(), n);
}

}  // namespace

FrameSequence generate_continuation(SequenceModel& model,
                                    const FrameSequence& prime,
                                    const std::vector<int>& chords_full,
                                    const GenerationTask& task) {
  validate_frames(prime);
  const std::size_t fpb = kFramesPerBeat;
  const std::size_t prime_len = task.prime_beats * fpb;
  const std::size_t total_len = prime_len + task.generate_beats * fpb;
  if (prime.length() != prime_len)
    fail("generate: prime length " + std::to_string(prime.length()) +
         " != prime_beats*16 = " + std::to_string(prime_len));
  if (chords_full.size() < total_len)
    fail("generate: chord coverage shorter than requested length");
  for (int c : chords_full)
    if (c < 0 || c >= kChordVocab) fail("generate: chord label out of range");

  std::vector<int> chords(chords_full.begin(), chords_full.begin() + total_len);
  Rng rng(task.seed);

  FrameSequence out;
  out.frames_per_beat = prime.frames_per_beat;
  out.chords = chords;
  out.melody = prime.melody;
  out.melody.resize(total_len, kRestLabel);

  auto sampler = model.make_sampler(chords);

  if (model.vocab() == kMelodyVocab) {
    for (std::size_t t = 0; t < total_len; ++t) {
      const int prev = t == 0 ? -1 : out.melody[t - 1];
      std::vector<double> logits = model.sampler_step(*sampler, prev, t);
      if (t < prime_len) continue;  // teacher-forced through the prime
      std::vector<bool> valid(kMelodyVocab, true);
      if (t == 0 || out.melody[t - 1] == kRestLabel)
        valid[kHoldLabel] = false;
      out.melody[t] = sample_label(logits, task.temperature, rng, valid);
    }
  } else {
    // WaveNet label space: sample raw pitches, then decode sustain runs in
    // the generated region back to onset/hold labels.
    FrameSequence prime_named = prime;
    WaveNetResult wn = to_wavenet_frames(prime_named);
    std::vector<int> wave = wn.frames.melody;
    wave.resize(total_len, 0);
    const std::vector<bool> valid(kWaveNetVocab, true);
    for (std::size_t t = 0; t < total_len; ++t) {
      const int prev = t == 0 ? -1 : wave[t - 1];
      std::vector<double> logits = model.sampler_step(*sampler, prev, t);
      if (t < prime_len) continue;
      wave[t] = sample_label(logits, task.temperature, rng, valid);
    }
    for (std::size_t t = prime_len; t < total_len; ++t) {
      if (wave[t] == 0) {
        out.melody[t] = kRestLabel;
      } else if (t > prime_len && wave[t] == wave[t - 1] &&
                 out.melody[t - 1] != kRestLabel) {
        out.melody[t] = kHoldLabel;
      } else {
        out.melody[t] = wave[t];
      }
    }
  }

  validate_frames(out);
  return out;
}

}  // namespace mgen
