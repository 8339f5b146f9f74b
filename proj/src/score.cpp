#include "mgen/score.hpp"

namespace mgen {

void validate_score(const SymbolicScore& score) {
  if (score.ticks_per_beat <= 0) fail("score: ticks_per_beat must be positive");
  if (score.bpm <= 0.0) fail("score: bpm must be positive");

  long prev_end = -1;
  long prev_onset = -1;
  for (const auto& n : score.melody) {
    if (n.pitch < 0 || n.pitch > 127)
      fail("score: pitch " + std::to_string(n.pitch) + " out of range at tick " +
           std::to_string(n.onset_ticks));
    if (n.duration_ticks <= 0)
      fail("score: non-positive duration at tick " + std::to_string(n.onset_ticks));
    if (n.onset_ticks < prev_onset)
      fail("score: melody not sorted at tick " + std::to_string(n.onset_ticks));
    if (n.onset_ticks < prev_end)
      fail("score: overlapping melody notes at tick " +
           std::to_string(n.onset_ticks));
    prev_onset = n.onset_ticks;
    prev_end = n.onset_ticks + n.duration_ticks;
  }

  prev_end = -1;
  prev_onset = -1;
  for (const auto& c : score.chords) {
    if (c.duration_ticks <= 0)
      fail("score: non-positive chord duration at tick " +
           std::to_string(c.onset_ticks));
    for (int pc : c.pitch_classes)
      if (pc < 0 || pc > 11)
        fail("score: pitch class out of range at tick " +
             std::to_string(c.onset_ticks));
    if (c.root && (*c.root < 0 || *c.root > 11))
      fail("score: chord root out of range at tick " +
           std::to_string(c.onset_ticks));
    if (c.onset_ticks < prev_onset)
      fail("score: chords not sorted at tick " + std::to_string(c.onset_ticks));
    if (c.onset_ticks < prev_end)
      fail("score: overlapping chords at tick " + std::to_string(c.onset_ticks));
    prev_onset = c.onset_ticks;
    prev_end = c.onset_ticks + c.duration_ticks;
  }
}

SymbolicScore normalize_tempo(const SymbolicScore& score) {
  if (score.bpm <= 0.0) fail("normalize_tempo: bpm must be positive");
  SymbolicScore out = score;
  out.bpm = 120.0;
  return out;
}

}  // namespace mgen
