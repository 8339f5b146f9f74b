#pragma once

#include <cstdint>
#include <vector>

#include "mgen/score.hpp"

namespace mgen {

enum class SmfEventKind { NoteOn, NoteOff, Tempo, Other };

struct SmfEvent {
  long delta_ticks = 0;
  SmfEventKind kind = SmfEventKind::Other;
  int channel = 0;
  int pitch = 0;
  int velocity = 0;
  long tempo_us_per_beat = 0;
};

struct RawSmfEvents {
  std::vector<std::vector<SmfEvent>> tracks;
  int ticks_per_beat = 0;
  int format = 0;
  // Diagnostics that did not abort the parse (e.g. note-ons closed at
  // end-of-track).
  std::vector<std::string> warnings;
};

// Variable-length quantity at `offset`: big-endian 7-bit groups, high bit
// set on all but the last byte, at most 4 bytes.
struct VlqResult {
  std::uint32_t value = 0;
  std::size_t bytes_consumed = 0;
};
VlqResult read_vlq(const std::vector<std::uint8_t>& bytes, std::size_t offset);

std::vector<std::uint8_t> write_vlq(std::uint32_t value);

// Decodes SMF format 0/1 with PPQ timing. Running status honored; note-on
// with velocity 0 becomes a note-off. SMPTE division, bad magic, and
// truncated chunks throw Error with the byte offset.
RawSmfEvents parse_smf(const std::vector<std::uint8_t>& bytes);

// Pairs note on/off per track and builds a score: the melody track must be
// monophonic (overlap rejects with the offending tick); chord-track notes
// sharing an exact onset tick merge into one ChordEvent of their pitch
// classes mod 12.
SymbolicScore to_symbolic_score(const RawSmfEvents& raw, int melody_track,
                                int chord_track);

// Minimal two-track format-1 writer (tempo meta + melody track + chord
// track), enough for the generate command's optional MIDI output.
std::vector<std::uint8_t> write_smf(const SymbolicScore& score);

}  // namespace mgen
