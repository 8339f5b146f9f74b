#include <numeric>

#include "doctest.h"
#include "mgen/rng.hpp"
#include "mgen/score_text.hpp"
#include "mgen/smf.hpp"

using namespace mgen;

namespace {

// Minimal hand-assembled SMF builder for fixtures.
std::vector<std::uint8_t> smf_header(int format, int ntrks, int division) {
  return {'M', 'T', 'h', 'd', 0, 0, 0, 6,
          0, static_cast<std::uint8_t>(format),
          0, static_cast<std::uint8_t>(ntrks),
          static_cast<std::uint8_t>(division >> 8),
          static_cast<std::uint8_t>(division & 0xFF)};
}

void append_track(std::vector<std::uint8_t>& out,
                  const std::vector<std::uint8_t>& body) {
  out.insert(out.end(), {'M', 'T', 'r', 'k'});
  const std::uint32_t len = static_cast<std::uint32_t>(body.size());
  out.push_back((len >> 24) & 0xFF);
  out.push_back((len >> 16) & 0xFF);
  out.push_back((len >> 8) & 0xFF);
  out.push_back(len & 0xFF);
  out.insert(out.end(), body.begin(), body.end());
}

}  // namespace

TEST_SUITE_BEGIN("ingest");

TEST_CASE("read_vlq decodes the documented cases") {
  CHECK(read_vlq({0x00}, 0).value == 0);
  CHECK(read_vlq({0x00}, 0).bytes_consumed == 1);

  // bit-arithmetic oracles
  CHECK(read_vlq({0x81, 0x00}, 0).value == ((1u << 7) | 0u));
  CHECK(read_vlq({0x81, 0x00}, 0).bytes_consumed == 2);
  CHECK(read_vlq({0xFF, 0x7F}, 0).value == ((0x7Fu << 7) | 0x7Fu));
  CHECK(read_vlq({0xFF, 0x7F}, 0).bytes_consumed == 2);
}

TEST_CASE("read_vlq error paths") {
  CHECK_THROWS_AS(read_vlq({0x80, 0x80, 0x80, 0x80}, 0), Error);
  CHECK_THROWS_AS(read_vlq({0x80}, 0), Error);
  CHECK_THROWS_AS(read_vlq({}, 0), Error);
}

TEST_CASE("vlq round-trip over the full range") {
  Rng rng(99);
  for (int trial = 0; trial < 5000; ++trial) {
    const std::uint32_t v = static_cast<std::uint32_t>(rng.below(1u << 28));
    const auto bytes = write_vlq(v);
    REQUIRE(bytes.size() >= 1);
    REQUIRE(bytes.size() <= 4);
    const VlqResult r = read_vlq(bytes, 0);
    CHECK(r.value == v);
    CHECK(r.bytes_consumed == bytes.size());
  }
  CHECK(read_vlq(write_vlq((1u << 28) - 1), 0).value == (1u << 28) - 1);
}

TEST_CASE("parse_smf decodes a crafted single-note file") {
  std::vector<std::uint8_t> file = smf_header(0, 1, 480);
  append_track(file, {
      0x00, 0x90, 0x3C, 0x50,        // note on, pitch 60
      0x83, 0x60, 0x80, 0x3C, 0x00,  // delta 480, note off
      0x00, 0xFF, 0x2F, 0x00,        // end of track
  });
  RawSmfEvents raw = parse_smf(file);
  REQUIRE(raw.tracks.size() == 1);
  CHECK(raw.ticks_per_beat == 480);
  int ons = 0, offs = 0;
  for (const auto& ev : raw.tracks[0]) {
    if (ev.kind == SmfEventKind::NoteOn) {
      ++ons;
      CHECK(ev.pitch == 60);
      CHECK(ev.delta_ticks == 0);
    }
    if (ev.kind == SmfEventKind::NoteOff) {
      ++offs;
      CHECK(ev.delta_ticks == 480);
    }
  }
  CHECK(ons == 1);
  CHECK(offs == 1);
}

TEST_CASE("parse_smf handles an empty track") {
  std::vector<std::uint8_t> file = smf_header(0, 1, 96);
  append_track(file, {0x00, 0xFF, 0x2F, 0x00});
  RawSmfEvents raw = parse_smf(file);
  int notes = 0;
  for (const auto& ev : raw.tracks[0])
    if (ev.kind == SmfEventKind::NoteOn) ++notes;
  CHECK(notes == 0);
}

TEST_CASE("parse_smf reads a tempo meta event") {
  std::vector<std::uint8_t> file = smf_header(1, 1, 480);
  append_track(file, {
      0x00, 0xFF, 0x51, 0x03, 0x07, 0xA1, 0x20,  // 500000 us/beat
      0x00, 0xFF, 0x2F, 0x00,
  });
  RawSmfEvents raw = parse_smf(file);
  SymbolicScore score = to_symbolic_score(raw, 0, 0);
  CHECK(score.bpm == doctest::Approx(120.0));  // 60e6 / 500000
}

TEST_CASE("parse_smf rejects bad inputs with diagnostics") {
  CHECK_THROWS_AS(parse_smf({'X', 'T', 'h', 'd'}), Error);
  // SMPTE division (high bit set)
  std::vector<std::uint8_t> smpte = smf_header(0, 1, 0);
  smpte[12] = 0xE7;
  smpte[13] = 0x28;
  CHECK_THROWS_AS(parse_smf(smpte), Error);
  // truncated chunk
  std::vector<std::uint8_t> trunc = smf_header(0, 1, 480);
  trunc.insert(trunc.end(), {'M', 'T', 'r', 'k', 0, 0, 0, 50, 0x00});
  CHECK_THROWS_AS(parse_smf(trunc), Error);
}

TEST_CASE("running status and velocity-0 note-off are honored") {
  std::vector<std::uint8_t> file = smf_header(0, 1, 4);
  append_track(file, {
      0x00, 0x90, 0x3C, 0x50,  // on 60
      0x04, 0x3C, 0x00,        // running status: on vel 0 = off
      0x00, 0x3E, 0x50,        // running status: on 62
      0x04, 0x3E, 0x00,        // off 62
      0x00, 0xFF, 0x2F, 0x00,
  });
  RawSmfEvents raw = parse_smf(file);
  SymbolicScore score = to_symbolic_score(raw, 0, 0);
  REQUIRE(score.melody.size() == 2);
  CHECK(score.melody[0].pitch == 60);
  CHECK(score.melody[0].duration_ticks == 4);
  CHECK(score.melody[1].pitch == 62);
  CHECK(score.melody[1].onset_ticks == 4);
}

TEST_CASE("to_symbolic_score groups chord-track notes by onset") {
  std::vector<std::uint8_t> file = smf_header(1, 2, 480);
  append_track(file, {0x00, 0xFF, 0x2F, 0x00});  // empty melody
  append_track(file, {
      0x00, 0x90, 48, 0x50,
      0x00, 0x90, 52, 0x50,
      0x00, 0x90, 55, 0x50,
      0x87, 0x40, 0x80, 48, 0x00,  // delta 960
      0x00, 0x80, 52, 0x00,
      0x00, 0x80, 55, 0x00,
      0x00, 0xFF, 0x2F, 0x00,
  });
  SymbolicScore score = to_symbolic_score(parse_smf(file), 0, 1);
  REQUIRE(score.chords.size() == 1);
  CHECK(score.chords[0].pitch_classes == std::set<int>{0, 4, 7});
  CHECK(score.chords[0].duration_ticks == 960);
  CHECK(score.melody.empty());
}

TEST_CASE("to_symbolic_score rejects a polyphonic melody track") {
  std::vector<std::uint8_t> file = smf_header(0, 1, 480);
  append_track(file, {
      0x00, 0x90, 0x3C, 0x50,
      0x10, 0x90, 0x3E, 0x50,  // second note before the first ends
      0x70, 0x80, 0x3C, 0x00,
      0x00, 0x80, 0x3E, 0x00,
      0x00, 0xFF, 0x2F, 0x00,
  });
  CHECK_THROWS_WITH_AS(to_symbolic_score(parse_smf(file), 0, 0),
                       "smf: melody track is polyphonic at tick 16", Error);
}

TEST_CASE("pairing preserves total sounding duration") {
  Rng rng(4);
  std::vector<std::uint8_t> body;
  long tick = 0;
  long expected = 0;
  for (int n = 0; n < 20; ++n) {
    const int pitch = 40 + static_cast<int>(rng.below(40));
    const long dur = 1 + static_cast<long>(rng.below(100));
    const long gap = rng.below(50);
    auto d1 = write_vlq(static_cast<std::uint32_t>(gap));
    body.insert(body.end(), d1.begin(), d1.end());
    body.insert(body.end(), {0x90, static_cast<std::uint8_t>(pitch), 0x50});
    auto d2 = write_vlq(static_cast<std::uint32_t>(dur));
    body.insert(body.end(), d2.begin(), d2.end());
    body.insert(body.end(), {0x80, static_cast<std::uint8_t>(pitch), 0x00});
    tick += gap + dur;
    expected += dur;
  }
  body.insert(body.end(), {0x00, 0xFF, 0x2F, 0x00});
  std::vector<std::uint8_t> file = smf_header(0, 1, 480);
  append_track(file, body);
  SymbolicScore score = to_symbolic_score(parse_smf(file), 0, 0);
  long total = 0;
  for (const auto& n : score.melody) total += n.duration_ticks;
  CHECK(total == expected);
}

TEST_CASE("parse_score_text reads the documented example") {
  SymbolicScore s = parse_score_text("bpm 120\ntpb 4\nN 0 4 60\nC 0 16 C:maj\n");
  CHECK(s.bpm == 120.0);
  CHECK(s.ticks_per_beat == 4);
  REQUIRE(s.melody.size() == 1);
  CHECK(s.melody[0].pitch == 60);
  CHECK(s.melody[0].duration_ticks == 4);
  REQUIRE(s.chords.size() == 1);
  CHECK(s.chords[0].pitch_classes == std::set<int>{0, 4, 7});
  CHECK(s.chords[0].root == 0);
}

TEST_CASE("parse_score_text accepts uneven triplet durations") {
  SymbolicScore s = parse_score_text(
      "bpm 120\ntpb 16\nN 0 5 60\nN 5 6 62\nN 11 5 64\n");
  REQUIRE(s.melody.size() == 3);
  CHECK(s.melody[0].duration_ticks == 5);
  CHECK(s.melody[1].duration_ticks == 6);
  CHECK(s.melody[2].duration_ticks == 5);
}

TEST_CASE("parse_score_text error paths carry line numbers") {
  CHECK_THROWS_WITH_AS(parse_score_text("bpm 120\ntpb 4\n"),
                       "score text: no events", Error);
  CHECK_THROWS_AS(parse_score_text("bpm 120\ntpb 4\nN 0 4 200\n"), Error);
  try {
    parse_score_text("bpm 120\ntpb 4\nN zero 4 60\n");
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_score_text("bpm 120\ntpb 4\nC 0 4 H:maj\n"), Error);
}

TEST_CASE("score text round-trips") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    SymbolicScore s;
    s.bpm = 120.0;
    s.ticks_per_beat = 16;
    long tick = 0;
    const int notes = 1 + static_cast<int>(rng.below(10));
    for (int n = 0; n < notes; ++n) {
      tick += rng.below(8);
      const long dur = 1 + static_cast<long>(rng.below(32));
      s.melody.push_back({tick, dur, static_cast<int>(rng.below(128))});
      tick += dur;
    }
    long ctick = 0;
    const int chords = static_cast<int>(rng.below(5));
    for (int c = 0; c < chords; ++c) {
      const long dur = 16 + static_cast<long>(rng.below(64));
      ChordEvent ev;
      ev.onset_ticks = ctick;
      ev.duration_ticks = dur;
      const int kind = static_cast<int>(rng.below(3));
      if (kind == 0) {
        const int root = static_cast<int>(rng.below(12));
        ev.root = root;
        ev.pitch_classes = {root, (root + 4) % 12, (root + 7) % 12};
      } else if (kind == 1) {
        const int root = static_cast<int>(rng.below(12));
        ev.root = root;
        ev.pitch_classes = {root, (root + 3) % 12, (root + 7) % 12};
      } else {
        const int n_pcs = static_cast<int>(rng.below(4));
        for (int i = 0; i < n_pcs; ++i)
          ev.pitch_classes.insert(static_cast<int>(rng.below(12)));
      }
      s.chords.push_back(ev);
      ctick += dur;
    }
    if (s.melody.empty() && s.chords.empty()) continue;
    SymbolicScore back = parse_score_text(render_score_text(s));
    CHECK(back == s);
  }
}

TEST_CASE("normalize_tempo fixes bpm and nothing else") {
  SymbolicScore s = parse_score_text("bpm 90\ntpb 4\nN 0 4 60\n");
  SymbolicScore n = normalize_tempo(s);
  CHECK(n.bpm == 120.0);
  CHECK(n.melody == s.melody);
  CHECK(n.ticks_per_beat == s.ticks_per_beat);

  SymbolicScore already = normalize_tempo(n);
  CHECK(already == n);

  SymbolicScore other = s;
  other.bpm = 203.5;
  CHECK(normalize_tempo(other) == n);
}

TEST_SUITE_END();
