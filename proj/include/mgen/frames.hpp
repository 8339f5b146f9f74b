#pragma once

#include <set>
#include <string>
#include <vector>

#include "mgen/score.hpp"
#include "mgen/tensor.hpp"

namespace mgen {

// Melody label vocabulary: 0..127 pitch onset, 128 rest, 129 hold.
inline constexpr int kRestLabel = 128;
inline constexpr int kHoldLabel = 129;
inline constexpr int kMelodyVocab = 130;
// Chord label vocabulary: 0..11 major by root, 12..23 minor by root-12,
// 24 no-chord.
inline constexpr int kNoChordLabel = 24;
inline constexpr int kChordVocab = 25;
inline constexpr int kFramesPerBeat = 16;
// WaveNet-style melody vocabulary: raw pitch, 0 doubles as rest.
inline constexpr int kWaveNetVocab = 128;

// Per-frame melody/chord labels on the 1/16-beat grid.
struct FrameSequence {
  std::vector<int> melody;  // labels 0..129
  std::vector<int> chords;  // labels 0..24
  int frames_per_beat = kFramesPerBeat;

  std::size_t length() const { return melody.size(); }
  bool operator==(const FrameSequence&) const = default;
};

// Melody as raw pitches where 0 is a rest and consecutive equal labels
// sustain. Cannot represent a re-articulated repeated note.
struct WaveNetFrames {
  std::vector<int> melody;  // labels 0..127
  std::vector<int> chords;  // labels 0..24
};

// Throws unless labels are in range, lengths match, the sequence does not
// start with a hold, and holds follow only a pitch or another hold.
void validate_frames(const FrameSequence& frames);

// Nearest of the 24 major/minor triads by shared pitch-class count.
// Ties resolve by root then quality (C:maj, C:min, C#:maj, ...), which is
// what keeps Cm7 on C-minor rather than its relative major. Empty set is
// no-chord (24).
int hash_chord(const std::set<int>& pitch_classes);

// Triad pitch classes for a chord label; empty for NC.
std::set<int> chord_label_pitch_classes(int label);

struct QuantizeResult {
  FrameSequence frames;
  std::vector<std::string> warnings;
};

// Samples a 120-bpm score onto the 1/16-beat grid. Onsets and ends round
// half-up; a note that would collapse keeps one frame and records a
// warning. Frames not covered by any chord get NC.
QuantizeResult quantize_score(const SymbolicScore& score);

// Inverse of quantize_score on the frame grid: runs become notes/chords at
// ticks_per_beat = frames_per_beat, bpm 120.
SymbolicScore decode_frames(const FrameSequence& frames);

// (T, 155) one-hot rows: melody label l sets column l, chord label k sets
// column 130+k.
Tensor encode_lstm(const FrameSequence& frames);

struct WaveNetResult {
  WaveNetFrames frames;
  std::vector<std::string> warnings;  // pitch-0/rest collision note
};
WaveNetResult to_wavenet_frames(const FrameSequence& frames);

// The 12 transpositions (shift 0..11). Pitches overflowing 127 fold down
// an octave; chord roots rotate within their quality; rest/hold/NC fixed.
std::vector<FrameSequence> transpose_augment(const FrameSequence& frames);

// CSV with header frame_index,melody_label,chord_label.
std::string frames_to_csv(const FrameSequence& frames);
FrameSequence frames_from_csv(const std::string& csv);

}  // namespace mgen
