#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mgen/common.hpp"

namespace mgen {

struct NoteEvent {
  long onset_ticks = 0;
  long duration_ticks = 0;
  int pitch = 0;  // 0..127

  bool operator==(const NoteEvent&) const = default;
};

struct ChordEvent {
  long onset_ticks = 0;
  long duration_ticks = 0;
  std::set<int> pitch_classes;  // subset of 0..11; empty = no chord (NC span)
  std::optional<int> root;      // 0..11 when known

  bool operator==(const ChordEvent&) const = default;
};

// Post-parse, pre-quantization form of a piece: a monophonic melody event
// list plus a chord annotation list, both in ticks.
struct SymbolicScore {
  std::vector<NoteEvent> melody;
  std::vector<ChordEvent> chords;
  int ticks_per_beat = 480;
  double bpm = 120.0;

  bool operator==(const SymbolicScore&) const = default;
};

// Enforces the score invariants: pitches in range, durations positive,
// melody sorted and non-overlapping, chords sorted and non-overlapping.
// Throws Error naming the first offending tick.
void validate_score(const SymbolicScore& score);

// Tempo normalization is metadata-level: durations are beat-denominated, so
// only bpm changes. Returned score always has bpm = 120.
SymbolicScore normalize_tempo(const SymbolicScore& score);

}  // namespace mgen
