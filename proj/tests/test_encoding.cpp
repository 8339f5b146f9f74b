#include <algorithm>

#include "doctest.h"
#include "mgen/frames.hpp"
#include "mgen/rng.hpp"
#include "mgen/score_text.hpp"

using namespace mgen;

namespace {

// Independent brute-force template-overlap oracle: explicit template
// table, set intersection, root-then-quality tie order.
int hash_chord_oracle(const std::set<int>& pcs) {
  if (pcs.empty()) return 24;
  struct Template {
    int label;
    std::set<int> notes;
  };
  std::vector<Template> order;
  for (int root = 0; root < 12; ++root) {
    order.push_back({root, {root % 12, (root + 4) % 12, (root + 7) % 12}});
    order.push_back({12 + root, {root % 12, (root + 3) % 12, (root + 7) % 12}});
  }
  int best_label = -1;
  std::size_t best = 0;
  for (const auto& t : order) {
    std::vector<int> inter;
    std::set_intersection(pcs.begin(), pcs.end(), t.notes.begin(),
                          t.notes.end(), std::back_inserter(inter));
    if (best_label < 0 || inter.size() > best) {
      best = inter.size();
      best_label = t.label;
    }
  }
  return best_label;
}

FrameSequence random_valid_frames(std::size_t T, Rng& rng) {
  FrameSequence f;
  for (std::size_t t = 0; t < T; ++t) {
    int m;
    if (t == 0 || f.melody[t - 1] == kRestLabel)
      m = static_cast<int>(rng.below(kMelodyVocab - 1));
    else
      m = static_cast<int>(rng.below(kMelodyVocab));
    f.melody.push_back(m);
    f.chords.push_back(static_cast<int>(rng.below(kChordVocab)));
  }
  return f;
}

}  // namespace

TEST_SUITE_BEGIN("encoding");

TEST_CASE("hash_chord reproduces the named seventh/augmented cases") {
  CHECK(hash_chord({0, 4, 7, 10}) == 0);   // C7 -> C major
  CHECK(hash_chord({0, 3, 7, 10}) == 12);  // Cm7 -> C minor
  CHECK(hash_chord({0, 4, 8}) == 0);       // Caug -> C major
  CHECK(hash_chord({}) == 24);             // NC
  CHECK(hash_chord({0, 4, 7}) == 0);
  CHECK(hash_chord({9, 0, 4}) == 21);      // A minor triad
}

TEST_CASE("hash_chord equals the exhaustive oracle on all 4096 sets") {
  for (int mask = 0; mask < 4096; ++mask) {
    std::set<int> pcs;
    for (int pc = 0; pc < 12; ++pc)
      if (mask & (1 << pc)) pcs.insert(pc);
    CHECK(hash_chord(pcs) == hash_chord_oracle(pcs));
  }
}

TEST_CASE("quantize a quarter note to one onset and fifteen holds") {
  SymbolicScore s = parse_score_text("bpm 120\ntpb 4\nN 0 4 60\nC 0 4 C:maj\n");
  QuantizeResult q = quantize_score(s);
  REQUIRE(q.frames.length() == 16);
  CHECK(q.frames.melody[0] == 60);
  for (int t = 1; t < 16; ++t) CHECK(q.frames.melody[t] == kHoldLabel);
  for (int t = 0; t < 16; ++t) CHECK(q.frames.chords[t] == 0);
  CHECK(q.warnings.empty());
}

TEST_CASE("quantize an empty melody over one chord beat to all-rest") {
  SymbolicScore s = parse_score_text("bpm 120\ntpb 16\nC 0 16 C:maj\n");
  QuantizeResult q = quantize_score(s);
  REQUIRE(q.frames.length() == 16);
  for (int t = 0; t < 16; ++t) {
    CHECK(q.frames.melody[t] == kRestLabel);
    CHECK(q.frames.chords[t] == 0);
  }
}

TEST_CASE("quantize keeps triplet onsets at frames 0, 5, 11") {
  SymbolicScore s = parse_score_text(
      "bpm 120\ntpb 16\nN 0 5 60\nN 5 6 62\nN 11 5 64\n");
  QuantizeResult q = quantize_score(s);
  CHECK(q.frames.melody[0] == 60);
  CHECK(q.frames.melody[5] == 62);
  CHECK(q.frames.melody[11] == 64);
  REQUIRE(q.frames.length() == 16);
}

TEST_CASE("quantize flags a vanishing note and keeps one frame") {
  SymbolicScore s = parse_score_text("bpm 120\ntpb 64\nN 0 1 60\nN 32 32 62\n");
  QuantizeResult q = quantize_score(s);
  REQUIRE_FALSE(q.warnings.empty());
  CHECK(q.frames.melody[0] == 60);
}

TEST_CASE("quantize demands normalized tempo and nonempty score") {
  SymbolicScore s = parse_score_text("bpm 90\ntpb 4\nN 0 4 60\n");
  CHECK_THROWS_AS(quantize_score(s), Error);
  CHECK_NOTHROW(quantize_score(normalize_tempo(s)));
  SymbolicScore empty;
  CHECK_THROWS_AS(quantize_score(empty), Error);
}

TEST_CASE("encode_lstm sets the documented columns") {
  FrameSequence f;
  f.melody = {60, 129};
  f.chords = {0, 24};
  Tensor x = encode_lstm(f);
  REQUIRE(x.dim(0) == 2);
  REQUIRE(x.dim(1) == 155);
  CHECK(x(0, 60) == 1.0);
  CHECK(x(0, 130) == 1.0);
  CHECK(x(1, 129) == 1.0);
  CHECK(x(1, 154) == 1.0);
}

TEST_CASE("encode_lstm rows always hold exactly two ones") {
  Rng rng(6);
  FrameSequence f = random_valid_frames(64, rng);
  Tensor x = encode_lstm(f);
  for (std::size_t t = 0; t < x.dim(0); ++t) {
    double sum = 0.0;
    for (std::size_t j = 0; j < x.dim(1); ++j) {
      CHECK((x(t, j) == 0.0 || x(t, j) == 1.0));
      sum += x(t, j);
    }
    CHECK(sum == 2.0);
  }
}

TEST_CASE("to_wavenet_frames maps holds to sustains and rests to zero") {
  FrameSequence f;
  f.melody = {60, 129, 129, 128};
  f.chords = {0, 0, 0, 0};
  WaveNetResult r = to_wavenet_frames(f);
  CHECK(r.frames.melody == std::vector<int>{60, 60, 60, 0});
  CHECK(r.warnings.empty());

  FrameSequence rest;
  rest.melody = {128, 128};
  rest.chords = {24, 24};
  CHECK(to_wavenet_frames(rest).frames.melody == std::vector<int>{0, 0});
}

TEST_CASE("to_wavenet_frames warns about the pitch-0 collision") {
  FrameSequence f;
  f.melody = {0, 129};
  f.chords = {0, 0};
  WaveNetResult r = to_wavenet_frames(f);
  CHECK(r.frames.melody == std::vector<int>{0, 0});
  REQUIRE(r.warnings.size() == 1);
}

TEST_CASE("to_wavenet_frames stays within 0..127") {
  Rng rng(8);
  FrameSequence f = random_valid_frames(200, rng);
  WaveNetResult r = to_wavenet_frames(f);
  for (int m : r.frames.melody) {
    CHECK(m >= 0);
    CHECK(m <= 127);
  }
}

TEST_CASE("transpose_augment shifts pitch and chord root together") {
  FrameSequence f;
  f.melody = {60, 129, 128};
  f.chords = {0, 0, 24};
  auto out = transpose_augment(f);
  REQUIRE(out.size() == 12);
  CHECK(out[0] == f);  // shift 0 is the identity
  CHECK(out[2].melody[0] == 62);
  CHECK(out[2].melody[1] == kHoldLabel);
  CHECK(out[2].melody[2] == kRestLabel);
  CHECK(out[2].chords[0] == 2);   // D major
  CHECK(out[2].chords[2] == 24);  // NC fixed
}

TEST_CASE("transposition overflow folds down an octave") {
  FrameSequence f;
  f.melody = {127};
  f.chords = {24};
  auto out = transpose_augment(f);
  CHECK(out[1].melody[0] == 116);
  // rule check across all pitches and shifts
  for (int p = 0; p <= 127; ++p)
    for (int s = 0; s < 12; ++s) {
      FrameSequence g;
      g.melody = {p};
      g.chords = {24};
      const int got = transpose_augment(g)[s].melody[0];
      const int want = p + s <= 127 ? p + s : p + s - 12;
      CHECK(got == want);
      CHECK(got % 12 == (p + s) % 12);
    }
}

TEST_CASE("transpose by s then 12-s restores chords and pitch classes") {
  Rng rng(12);
  FrameSequence f = random_valid_frames(40, rng);
  for (int s = 1; s < 12; ++s) {
    FrameSequence once = transpose_augment(f)[s];
    FrameSequence back = transpose_augment(once)[12 - s];
    CHECK(back.chords == f.chords);
    for (std::size_t t = 0; t < f.length(); ++t) {
      const int p = f.melody[t];
      if (p >= kRestLabel) {
        CHECK(back.melody[t] == p);
        continue;
      }
      // net shift is an octave; a fold along the way cancels it
      const int q = back.melody[t];
      CHECK(q % 12 == p % 12);
      CHECK((q == p || q == p + 12));
      const bool folded = p + s > 127 || f.melody[t] + 12 > 127;
      if (folded) CHECK(q == p);
    }
  }
}

TEST_CASE("decode_frames inverts the quantize examples") {
  FrameSequence f;
  f.melody.assign(16, kHoldLabel);
  f.melody[0] = 60;
  f.chords.assign(16, 0);
  SymbolicScore s = decode_frames(f);
  REQUIRE(s.melody.size() == 1);
  CHECK(s.melody[0].pitch == 60);
  CHECK(s.melody[0].duration_ticks == 16);  // one beat at tpb 16
  REQUIRE(s.chords.size() == 1);
  CHECK(s.chords[0].pitch_classes == std::set<int>{0, 4, 7});

  FrameSequence rests;
  rests.melody.assign(8, kRestLabel);
  rests.chords.assign(8, 24);
  CHECK(decode_frames(rests).melody.empty());
}

TEST_CASE("quantize after decode is the identity on valid frames") {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    FrameSequence f = random_valid_frames(48 + rng.below(64), rng);
    // quantize(decode(f)) only sees sounding state; trailing NC+rest frames
    // have no events to recover, so pin the last frame.
    f.melody.back() = 64;
    f.chords.back() = 3;
    SymbolicScore s = decode_frames(f);
    QuantizeResult q = quantize_score(s);
    CHECK(q.frames == f);
  }
}

TEST_CASE("frames csv round-trips") {
  Rng rng(5);
  FrameSequence f = random_valid_frames(33, rng);
  FrameSequence back = frames_from_csv(frames_to_csv(f));
  CHECK(back == f);
}

TEST_SUITE_END();
