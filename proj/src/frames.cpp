#include "mgen/frames.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mgen {

void validate_frames(const FrameSequence& frames) {
  if (frames.melody.size() != frames.chords.size())
    fail("frames: melody/chord length mismatch");
  if (frames.frames_per_beat <= 0) fail("frames: frames_per_beat must be positive");
  for (std::size_t t = 0; t < frames.melody.size(); ++t) {
    const int m = frames.melody[t];
    const int c = frames.chords[t];
    if (m < 0 || m >= kMelodyVocab)
      fail("frames: melody label out of range at frame " + std::to_string(t));
    if (c < 0 || c >= kChordVocab)
      fail("frames: chord label out of range at frame " + std::to_string(t));
    if (m == kHoldLabel) {
      if (t == 0) fail("frames: sequence begins with a hold");
      const int prev = frames.melody[t - 1];
      if (prev == kRestLabel)
        fail("frames: hold follows a rest at frame " + std::to_string(t));
    }
  }
}

int hash_chord(const std::set<int>& pitch_classes) {
  if (pitch_classes.empty()) return kNoChordLabel;
  int best_label = 0, best_overlap = -1;
  // Tie order: root ascending, major before minor within a root.
  for (int root = 0; root < 12; ++root) {
    for (int minor = 0; minor < 2; ++minor) {
      const int third = minor ? 3 : 4;
      int overlap = 0;
      for (int off : {0, third, 7})
        overlap += pitch_classes.count((root + off) % 12) ? 1 : 0;
      if (overlap > best_overlap) {
        best_overlap = overlap;
        best_label = minor ? 12 + root : root;
      }
    }
  }
  return best_label;
}

std::set<int> chord_label_pitch_classes(int label) {
  if (label < 0 || label >= kChordVocab) fail("chord label out of range");
  if (label == kNoChordLabel) return {};
  const int root = label % 12;
  const int third = label < 12 ? 4 : 3;
  return {root, (root + third) % 12, (root + 7) % 12};
}

namespace {
// Half-up rounding of ticks onto the frame grid.
long to_frame(long ticks, int ticks_per_beat, int frames_per_beat) {
  const double beats = static_cast<double>(ticks) / ticks_per_beat;
  return static_cast<long>(std::floor(beats * frames_per_beat + 0.5));
}
}  // namespace

QuantizeResult quantize_score(const SymbolicScore& score) {
  validate_score(score);
  if (score.melody.empty() && score.chords.empty())
    fail("quantize: empty score");
  if (std::abs(score.bpm - 120.0) > 1e-9)
    fail("quantize: score must be normalized to 120 bpm first");

  const int tpb = score.ticks_per_beat;
  const int fpb = kFramesPerBeat;
  QuantizeResult out;
  out.frames.frames_per_beat = fpb;

  long total = 0;
  for (const auto& n : score.melody)
    total = std::max(total, to_frame(n.onset_ticks + n.duration_ticks, tpb, fpb));
  for (const auto& c : score.chords)
    total = std::max(total, to_frame(c.onset_ticks + c.duration_ticks, tpb, fpb));
  if (total <= 0) fail("quantize: score has no positive-length span");

  out.frames.melody.assign(total, kRestLabel);
  out.frames.chords.assign(total, kNoChordLabel);

  for (std::size_t i = 0; i < score.melody.size(); ++i) {
    const auto& n = score.melody[i];
    long a = to_frame(n.onset_ticks, tpb, fpb);
    long b = to_frame(n.onset_ticks + n.duration_ticks, tpb, fpb);
    if (b <= a) {
      // Sub-half-frame note: keep one frame unless the next onset owns it.
      long next_onset = i + 1 < score.melody.size()
                            ? to_frame(score.melody[i + 1].onset_ticks, tpb, fpb)
                            : total;
      out.warnings.push_back("note at tick " + std::to_string(n.onset_ticks) +
                             " shorter than half a frame; kept one frame");
      if (a < next_onset && a < total) {
        out.frames.melody[a] = n.pitch;
      }
      continue;
    }
    out.frames.melody[a] = n.pitch;
    for (long f = a + 1; f < b; ++f) out.frames.melody[f] = kHoldLabel;
  }

  for (const auto& c : score.chords) {
    long a = to_frame(c.onset_ticks, tpb, fpb);
    long b = to_frame(c.onset_ticks + c.duration_ticks, tpb, fpb);
    const int label = hash_chord(c.pitch_classes);
    for (long f = std::max(0L, a); f < std::min(b, total); ++f)
      out.frames.chords[f] = label;
  }

  validate_frames(out.frames);
  return out;
}

SymbolicScore decode_frames(const FrameSequence& frames) {
  validate_frames(frames);
  SymbolicScore score;
  score.bpm = 120.0;
  score.ticks_per_beat = frames.frames_per_beat;

  const std::size_t T = frames.length();
  for (std::size_t t = 0; t < T;) {
    const int m = frames.melody[t];
    if (m == kRestLabel) {
      ++t;
      continue;
    }
    std::size_t end = t + 1;
    while (end < T && frames.melody[end] == kHoldLabel) ++end;
    score.melody.push_back({static_cast<long>(t), static_cast<long>(end - t), m});
    t = end;
  }
  for (std::size_t t = 0; t < T;) {
    const int c = frames.chords[t];
    std::size_t end = t + 1;
    while (end < T && frames.chords[end] == c) ++end;
    if (c != kNoChordLabel) {
      ChordEvent ev;
      ev.onset_ticks = static_cast<long>(t);
      ev.duration_ticks = static_cast<long>(end - t);
      ev.pitch_classes = chord_label_pitch_classes(c);
      ev.root = c % 12;
      score.chords.push_back(ev);
    }
    t = end;
  }
  validate_score(score);
  return score;
}

Tensor encode_lstm(const FrameSequence& frames) {
  validate_frames(frames);
  const std::size_t T = frames.length();
  Tensor x({T, static_cast<std::size_t>(kMelodyVocab + kChordVocab)});
  for (std::size_t t = 0; t < T; ++t) {
    x(t, frames.melody[t]) = 1.0;
    x(t, kMelodyVocab + frames.chords[t]) = 1.0;
  }
  return x;
}

WaveNetResult to_wavenet_frames(const FrameSequence& frames) {
  validate_frames(frames);
  WaveNetResult out;
  out.frames.chords = frames.chords;
  out.frames.melody.reserve(frames.length());
  bool pitch_zero_seen = false;
  int prev = 0;
  for (int m : frames.melody) {
    int label;
    if (m == kRestLabel) {
      label = 0;
    } else if (m == kHoldLabel) {
      label = prev;
    } else {
      label = m;
      if (m == 0) pitch_zero_seen = true;
    }
    out.frames.melody.push_back(label);
    prev = label;
  }
  if (pitch_zero_seen)
    out.warnings.push_back(
        "melody uses pitch 0, which this representation cannot distinguish "
        "from a rest");
  return out;
}

std::vector<FrameSequence> transpose_augment(const FrameSequence& frames) {
  validate_frames(frames);
  std::vector<FrameSequence> out;
  out.reserve(12);
  for (int shift = 0; shift < 12; ++shift) {
    FrameSequence f = frames;
    for (auto& m : f.melody) {
      if (m >= kRestLabel) continue;
      int p = m + shift;
      if (p > 127) p -= 12;
      m = p;
    }
    for (auto& c : f.chords) {
      if (c == kNoChordLabel) continue;
      const int quality = c / 12;  // 0 major, 1 minor
      c = quality * 12 + (c % 12 + shift) % 12;
    }
    out.push_back(std::move(f));
  }
  return out;
}

std::string frames_to_csv(const FrameSequence& frames) {
  std::ostringstream os;
  os << "frame_index,melody_label,chord_label\n";
  for (std::size_t t = 0; t < frames.length(); ++t)
    os << t << "," << frames.melody[t] << "," << frames.chords[t] << "\n";
  return os.str();
}

FrameSequence frames_from_csv(const std::string& csv) {
  FrameSequence frames;
  std::istringstream is(csv);
  std::string line;
  bool header = true;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::istringstream ls(line);
    std::string idx, mel, ch;
    if (!std::getline(ls, idx, ',') || !std::getline(ls, mel, ',') ||
        !std::getline(ls, ch, ','))
      fail("frames csv line " + std::to_string(lineno) + ": malformed row");
    try {
      frames.melody.push_back(std::stoi(mel));
      frames.chords.push_back(std::stoi(ch));
    } catch (const std::exception&) {
      fail("frames csv line " + std::to_string(lineno) + ": bad integer");
    }
  }
  validate_frames(frames);
  return frames;
}

}  // namespace mgen
