#include "mgen/smf.hpp"

#include <algorithm>
#include <map>

namespace mgen {

namespace {

std::uint32_t read_u32(const std::vector<std::uint8_t>& b, std::size_t off) {
  if (off + 4 > b.size()) fail("smf: truncated u32 at offset " + std::to_string(off));
  return (std::uint32_t(b[off]) << 24) | (std::uint32_t(b[off + 1]) << 16) |
         (std::uint32_t(b[off + 2]) << 8) | std::uint32_t(b[off + 3]);
}

std::uint16_t read_u16(const std::vector<std::uint8_t>& b, std::size_t off) {
  if (off + 2 > b.size()) fail("smf: truncated u16 at offset " + std::to_string(off));
  return static_cast<std::uint16_t>((b[off] << 8) | b[off + 1]);
}

}  // namespace

VlqResult read_vlq(const std::vector<std::uint8_t>& bytes, std::size_t offset) {
  std::uint32_t value = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    if (offset + i >= bytes.size())
      fail("smf: truncated VLQ at offset " + std::to_string(offset));
    const std::uint8_t byte = bytes[offset + i];
    value = (value << 7) | (byte & 0x7Fu);
    if ((byte & 0x80u) == 0) return {value, i + 1};
  }
  fail("smf: unterminated VLQ at offset " + std::to_string(offset));
}

std::vector<std::uint8_t> write_vlq(std::uint32_t value) {
  std::vector<std::uint8_t> out;
  out.push_back(value & 0x7Fu);
  while ((value >>= 7) != 0) out.push_back(0x80u | (value & 0x7Fu));
  std::reverse(out.begin(), out.end());
  return out;
}

RawSmfEvents parse_smf(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 14 || bytes[0] != 'M' || bytes[1] != 'T' ||
      bytes[2] != 'h' || bytes[3] != 'd')
    fail("smf: missing MThd magic");
  const std::uint32_t header_len = read_u32(bytes, 4);
  if (header_len < 6) fail("smf: MThd body too short");
  const int format = read_u16(bytes, 8);
  const int ntrks = read_u16(bytes, 10);
  const std::uint16_t division = read_u16(bytes, 12);
  if (format != 0 && format != 1)
    fail("smf: unsupported format " + std::to_string(format));
  if (division & 0x8000u) fail("smf: SMPTE time division not supported");
  if (division == 0) fail("smf: zero ticks per beat");

  RawSmfEvents raw;
  raw.format = format;
  raw.ticks_per_beat = division;

  std::size_t pos = 8 + header_len;
  for (int trk = 0; trk < ntrks; ++trk) {
    if (pos + 8 > bytes.size())
      fail("smf: truncated track header at offset " + std::to_string(pos));
    if (bytes[pos] != 'M' || bytes[pos + 1] != 'T' || bytes[pos + 2] != 'r' ||
        bytes[pos + 3] != 'k')
      fail("smf: missing MTrk magic at offset " + std::to_string(pos));
    const std::uint32_t track_len = read_u32(bytes, pos + 4);
    const std::size_t track_end = pos + 8 + track_len;
    if (track_end > bytes.size())
      fail("smf: truncated track chunk at offset " + std::to_string(pos));
    pos += 8;

    std::vector<SmfEvent> events;
    int running_status = -1;
    while (pos < track_end) {
      const VlqResult delta = read_vlq(bytes, pos);
      pos += delta.bytes_consumed;
      if (pos >= track_end)
        fail("smf: event truncated at offset " + std::to_string(pos));

      int status = bytes[pos];
      if (status < 0x80) {
        if (running_status < 0)
          fail("smf: data byte without running status at offset " +
               std::to_string(pos));
        status = running_status;
      } else {
        ++pos;
      }

      SmfEvent ev;
      ev.delta_ticks = delta.value;

      if (status == 0xFF) {
        running_status = -1;
        if (pos >= track_end) fail("smf: truncated meta event");
        const int type = bytes[pos++];
        const VlqResult len = read_vlq(bytes, pos);
        pos += len.bytes_consumed;
        if (pos + len.value > track_end) fail("smf: truncated meta payload");
        if (type == 0x51 && len.value == 3) {
          ev.kind = SmfEventKind::Tempo;
          ev.tempo_us_per_beat = (long(bytes[pos]) << 16) |
                                 (long(bytes[pos + 1]) << 8) | bytes[pos + 2];
        } else {
          ev.kind = SmfEventKind::Other;
        }
        pos += len.value;
        events.push_back(ev);
        if (type == 0x2F) break;  // end of track
        continue;
      }
      if (status == 0xF0 || status == 0xF7) {
        running_status = -1;
        const VlqResult len = read_vlq(bytes, pos);
        pos += len.bytes_consumed;
        if (pos + len.value > track_end) fail("smf: truncated sysex payload");
        pos += len.value;
        ev.kind = SmfEventKind::Other;
        events.push_back(ev);
        continue;
      }

      running_status = status;
      const int kind = status & 0xF0;
      ev.channel = status & 0x0F;
      const int data_bytes = (kind == 0xC0 || kind == 0xD0) ? 1 : 2;
      if (pos + data_bytes > track_end)
        fail("smf: truncated channel event at offset " + std::to_string(pos));
      const int d0 = bytes[pos];
      const int d1 = data_bytes == 2 ? bytes[pos + 1] : 0;
      pos += data_bytes;

      if (kind == 0x90 && d1 > 0) {
        ev.kind = SmfEventKind::NoteOn;
        ev.pitch = d0;
        ev.velocity = d1;
      } else if (kind == 0x80 || (kind == 0x90 && d1 == 0)) {
        ev.kind = SmfEventKind::NoteOff;
        ev.pitch = d0;
        ev.velocity = d1;
      } else {
        ev.kind = SmfEventKind::Other;
      }
      events.push_back(ev);
    }
    pos = track_end;
    raw.tracks.push_back(std::move(events));
  }
  return raw;
}

SymbolicScore to_symbolic_score(const RawSmfEvents& raw, int melody_track,
                                int chord_track) {
  if (melody_track < 0 ||
      static_cast<std::size_t>(melody_track) >= raw.tracks.size())
    fail("smf: melody track " + std::to_string(melody_track) + " does not exist");
  if (chord_track < 0 ||
      static_cast<std::size_t>(chord_track) >= raw.tracks.size())
    fail("smf: chord track " + std::to_string(chord_track) + " does not exist");

  SymbolicScore score;
  score.ticks_per_beat = raw.ticks_per_beat;

  // First tempo event anywhere wins; the corpus is single-tempo after
  // normalization anyway.
  bool tempo_seen = false;
  for (const auto& track : raw.tracks) {
    long tick = 0;
    for (const auto& ev : track) {
      tick += ev.delta_ticks;
      if (ev.kind == SmfEventKind::Tempo && !tempo_seen) {
        score.bpm = 60e6 / static_cast<double>(ev.tempo_us_per_beat);
        tempo_seen = true;
      }
    }
  }

  auto pair_notes = [](const std::vector<SmfEvent>& track) {
    std::vector<NoteEvent> notes;
    std::map<int, long> active;  // pitch -> onset tick
    long tick = 0;
    for (const auto& ev : track) {
      tick += ev.delta_ticks;
      if (ev.kind == SmfEventKind::NoteOn) {
        active[ev.pitch] = tick;
      } else if (ev.kind == SmfEventKind::NoteOff) {
        auto it = active.find(ev.pitch);
        if (it == active.end()) continue;  // stray off, ignore
        if (tick > it->second)
          notes.push_back({it->second, tick - it->second, ev.pitch});
        active.erase(it);
      }
    }
    // Unmatched note-ons pair with the end of track.
    for (const auto& [pitch, onset] : active)
      if (tick > onset) notes.push_back({onset, tick - onset, pitch});
    std::sort(notes.begin(), notes.end(), [](const auto& a, const auto& b) {
      return a.onset_ticks != b.onset_ticks ? a.onset_ticks < b.onset_ticks
                                            : a.pitch < b.pitch;
    });
    return notes;
  };

  score.melody = pair_notes(raw.tracks[melody_track]);
  for (std::size_t i = 1; i < score.melody.size(); ++i) {
    const auto& prev = score.melody[i - 1];
    if (prev.onset_ticks + prev.duration_ticks > score.melody[i].onset_ticks)
      fail("smf: melody track is polyphonic at tick " +
           std::to_string(score.melody[i].onset_ticks));
  }

  if (chord_track != melody_track) {
    std::vector<NoteEvent> chord_notes = pair_notes(raw.tracks[chord_track]);
    for (std::size_t i = 0; i < chord_notes.size();) {
      ChordEvent chord;
      chord.onset_ticks = chord_notes[i].onset_ticks;
      long end = 0;
      std::size_t j = i;
      for (; j < chord_notes.size() &&
             chord_notes[j].onset_ticks == chord.onset_ticks;
           ++j) {
        chord.pitch_classes.insert(((chord_notes[j].pitch % 12) + 12) % 12);
        end = std::max(end, chord_notes[j].onset_ticks + chord_notes[j].duration_ticks);
      }
      chord.duration_ticks = end - chord.onset_ticks;
      score.chords.push_back(chord);
      i = j;
    }
    // Clip at the next onset so chord spans tile without overlap.
    for (std::size_t i = 0; i + 1 < score.chords.size(); ++i) {
      const long next = score.chords[i + 1].onset_ticks;
      auto& c = score.chords[i];
      if (c.onset_ticks + c.duration_ticks > next)
        c.duration_ticks = next - c.onset_ticks;
    }
  }

  validate_score(score);
  return score;
}

std::vector<std::uint8_t> write_smf(const SymbolicScore& score) {
  struct TimedBytes {
    long tick;
    int order;  // offs before ons at the same tick
    std::vector<std::uint8_t> bytes;
  };

  auto flush_track = [](std::vector<TimedBytes>& msgs) {
    std::stable_sort(msgs.begin(), msgs.end(), [](const auto& a, const auto& b) {
      return a.tick != b.tick ? a.tick < b.tick : a.order < b.order;
    });
    std::vector<std::uint8_t> out;
    long cursor = 0;
    for (const auto& m : msgs) {
      auto delta = write_vlq(static_cast<std::uint32_t>(m.tick - cursor));
      out.insert(out.end(), delta.begin(), delta.end());
      out.insert(out.end(), m.bytes.begin(), m.bytes.end());
      cursor = m.tick;
    }
    out.insert(out.end(), {0x00, 0xFF, 0x2F, 0x00});
    return out;
  };

  const long tempo = static_cast<long>(60e6 / score.bpm + 0.5);
  std::vector<TimedBytes> melody_msgs;
  melody_msgs.push_back(
      {0, -1,
       {0xFF, 0x51, 0x03, static_cast<std::uint8_t>((tempo >> 16) & 0xFF),
        static_cast<std::uint8_t>((tempo >> 8) & 0xFF),
        static_cast<std::uint8_t>(tempo & 0xFF)}});
  for (const auto& n : score.melody) {
    melody_msgs.push_back(
        {n.onset_ticks, 1, {0x90, static_cast<std::uint8_t>(n.pitch), 80}});
    melody_msgs.push_back({n.onset_ticks + n.duration_ticks,
                           0,
                           {0x80, static_cast<std::uint8_t>(n.pitch), 0}});
  }
  std::vector<TimedBytes> chord_msgs;
  for (const auto& c : score.chords) {
    for (int pc : c.pitch_classes) {
      const std::uint8_t pitch = static_cast<std::uint8_t>(48 + pc);
      chord_msgs.push_back({c.onset_ticks, 1, {0x91, pitch, 60}});
      chord_msgs.push_back({c.onset_ticks + c.duration_ticks, 0, {0x81, pitch, 0}});
    }
  }

  std::vector<std::uint8_t> out = {'M', 'T', 'h', 'd', 0, 0, 0, 6,
                                   0, 1,  0,   2};
  out.push_back(static_cast<std::uint8_t>((score.ticks_per_beat >> 8) & 0xFF));
  out.push_back(static_cast<std::uint8_t>(score.ticks_per_beat & 0xFF));
  for (auto* msgs : {&melody_msgs, &chord_msgs}) {
    auto body = flush_track(*msgs);
    out.insert(out.end(), {'M', 'T', 'r', 'k'});
    const std::uint32_t len = static_cast<std::uint32_t>(body.size());
    out.push_back((len >> 24) & 0xFF);
    out.push_back((len >> 16) & 0xFF);
    out.push_back((len >> 8) & 0xFF);
    out.push_back(len & 0xFF);
    out.insert(out.end(), body.begin(), body.end());
  }
  return out;
}

}  // namespace mgen
