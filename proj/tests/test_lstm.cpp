#include <cmath>

#include "doctest.h"
#include "mgen/grad_check.hpp"
#include "mgen/lstm.hpp"

using namespace mgen;

namespace {

FrameSequence random_frames(std::size_t T, Rng& rng) {
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

bool grad_check_model(SequenceModel& model, const FrameSequence& frames,
                      std::size_t max_coords = 24) {
  model.params().zero_grads();
  model.forward_loss(frames);
  model.backward();
  Rng coord(77);
  GradCheckReport report =
      grad_check([&] { return model.forward_loss(frames); }, model.params(),
                 1e-5, 1e-4, max_coords, coord);
  if (!report.passed) MESSAGE(report.summary());
  return report.passed;
}

}  // namespace

TEST_SUITE_BEGIN("lstm");

TEST_CASE("zero-parameter cell emits zeros from zero state") {
  ParamStore store;
  LstmLayer layer(store, "l", 3, 2, nullptr);
  Tensor x = Tensor::from({1, 3}, {1.0, -2.0, 0.5});
  Tensor h = layer.forward(x, false, nullptr);
  CHECK(h(0, 0) == 0.0);
  CHECK(h(0, 1) == 0.0);
}

TEST_CASE("scalar cell matches direct evaluation of the gate equations") {
  ParamStore store;
  LstmLayer layer(store, "l", 1, 1, nullptr);
  store.value("l.w").fill(0.5);
  store.value("l.u").fill(0.5);
  store.value("l.b").fill(0.5);
  Tensor x = Tensor::from({1, 1}, {1.0});
  Tensor h = layer.forward(x, false, nullptr);

  // scalar oracle: every gate preactivation is 0.5*1 + 0.5*0 + 0.5 = 1
  const double gate = 1.0 / (1.0 + std::exp(-1.0));
  const double c = gate * 0.0 + gate * std::tanh(1.0);
  const double expected = gate * std::tanh(c);
  CHECK(h(0, 0) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("saturated forget gate preserves the cell state") {
  ParamStore store;
  LstmLayer layer(store, "l", 1, 1, nullptr);
  // big forget preactivation, suppressed input gate
  store.value("l.b")[0] = -50.0;  // i
  store.value("l.b")[1] = 50.0;   // f
  store.value("l.b")[2] = 50.0;   // o

  // run two steps so c_prev is nonzero: first charge the cell, then check
  ParamStore charged;
  LstmLayer charge(charged, "l", 1, 1, nullptr);
  charged.value("l.b")[0] = 50.0;   // i wide open
  charged.value("l.b")[1] = 50.0;
  charged.value("l.b")[2] = 50.0;
  charged.value("l.b")[3] = 50.0;   // g -> tanh(50) ~ 1
  std::vector<double> h = {0.0}, c = {0.0};
  double x = 0.0;
  charge.step(&x, h, c);
  const double c_charged = c[0];
  CHECK(c_charged == doctest::Approx(1.0).epsilon(1e-6));

  std::vector<double> h2 = h, c2 = c;
  layer.step(&x, h2, c2);
  CHECK(c2[0] == doctest::Approx(c_charged).epsilon(1e-6));
}

TEST_CASE("stack skip path: zeroed top layer reduces to the shorter stack") {
  Rng rng(9);
  Tensor x({6, 5});
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform(-1, 1);

  ParamStore s3;
  LstmStack stack3(s3, "s", 5, 4, 3, &rng);
  ParamStore s2;
  LstmStack stack2(s2, "s", 5, 4, 2, nullptr);
  // copy the first two layers
  for (const auto& name : {"s.l0.w", "s.l0.u", "s.l0.b", "s.l1.w", "s.l1.u",
                           "s.l1.b"}) {
    Tensor& dst = s2.value(name);
    const Tensor& src = s3.value(name);
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[i];
  }
  // zero the top layer of the 3-stack
  s3.value("s.l2.w").fill(0.0);
  s3.value("s.l2.u").fill(0.0);
  s3.value("s.l2.b").fill(0.0);

  Tensor y3 = stack3.forward(x, false, nullptr);
  Tensor y2 = stack2.forward(x, false, nullptr);
  REQUIRE(y3.size() == y2.size());
  for (std::size_t i = 0; i < y3.size(); ++i) CHECK(y3[i] == y2[i]);
}

TEST_CASE("empty input gives empty output") {
  Rng rng(2);
  ParamStore store;
  LstmStack stack(store, "s", 5, 4, 2, &rng);
  Tensor x({0, 5});
  Tensor y = stack.forward(x, false, nullptr);
  CHECK(y.dim(0) == 0);
}

TEST_CASE("gate activations stay in their open intervals") {
  Rng rng(14);
  ParamStore store;
  LstmLayer layer(store, "l", 7, 5, &rng);
  Tensor x({20, 7});
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform(-3, 3);
  LstmLayer::Cache cache;
  Tensor h = layer.forward(x, false, &cache);
  for (std::size_t t = 0; t < 20; ++t) {
    for (std::size_t j = 0; j < 15; ++j) {  // i, f, o blocks
      CHECK(cache.gates(t, j) > 0.0);
      CHECK(cache.gates(t, j) < 1.0);
    }
    for (std::size_t j = 15; j < 20; ++j) {  // candidate block
      CHECK(cache.gates(t, j) > -1.0);
      CHECK(cache.gates(t, j) < 1.0);
    }
    for (std::size_t j = 0; j < 5; ++j) {
      CHECK(h(t, j) > -1.0);
      CHECK(h(t, j) < 1.0);
    }
  }
}

TEST_CASE("uni model is strictly causal in both streams") {
  Rng rng(33);
  LstmConfig c;
  c.layers = 2;
  c.hidden = 6;
  UniLstmModel model(c, 4);
  FrameSequence f = random_frames(12, rng);
  Tensor base = model.logits(f);

  for (std::size_t j : {3ul, 7ul, 11ul}) {
    FrameSequence pert = f;
    pert.chords[j] = (pert.chords[j] + 1) % kChordVocab;
    Tensor out = model.logits(pert);
    for (std::size_t t = 0; t < j; ++t)
      for (int v = 0; v < kMelodyVocab; ++v)
        CHECK(out(t, v) == base(t, v));  // bit-identical prefix
  }
  for (std::size_t j : {2ul, 6ul, 10ul}) {
    FrameSequence pert = f;
    pert.melody[j] = pert.melody[j] == 60 ? 62 : 60;
    if (j + 1 < pert.length() && pert.melody[j + 1] == kHoldLabel &&
        pert.melody[j] == kRestLabel)
      pert.melody[j] = 61;
    Tensor out = model.logits(pert);
    for (std::size_t t = 0; t <= j; ++t)
      for (int v = 0; v < kMelodyVocab; ++v)
        CHECK(out(t, v) == base(t, v));  // shift-by-one causality
  }
}

TEST_CASE("bi model keeps melody causality but sees future chords") {
  Rng rng(35);
  LstmConfig c;
  c.layers = 2;
  c.hidden = 5;
  BiLstmModel model(c, 11);
  FrameSequence f = random_frames(14, rng);
  Tensor base = model.logits(f);

  // melody causality, exact
  FrameSequence mpert = f;
  mpert.melody[9] = mpert.melody[9] == 70 ? 71 : 70;
  Tensor mout = model.logits(mpert);
  for (std::size_t t = 0; t <= 9; ++t)
    for (int v = 0; v < kMelodyVocab; ++v) CHECK(mout(t, v) == base(t, v));

  // future-chord sensitivity
  FrameSequence cpert = f;
  cpert.chords[13] = (cpert.chords[13] + 1) % kChordVocab;
  Tensor cout = model.logits(cpert);
  double diff = 0.0;
  for (std::size_t t = 0; t < 13; ++t)
    for (int v = 0; v < kMelodyVocab; ++v)
      diff += std::abs(cout(t, v) - base(t, v));
  CHECK(diff > 0.0);

  // all-NC vs all-C-major conditioning changes the logits
  FrameSequence nc = f, cmaj = f;
  for (auto& ch : nc.chords) ch = kNoChordLabel;
  for (auto& ch : cmaj.chords) ch = 0;
  Tensor a = model.logits(nc), b = model.logits(cmaj);
  double live = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) live += std::abs(a[i] - b[i]);
  CHECK(live > 0.0);
}

TEST_CASE("uni backward passes the finite-difference check across the matrix") {
  Rng rng(40);
  for (int hidden : {3, 8}) {
    for (int layers : {2, 3}) {
      for (std::size_t T : {5ul, 17ul}) {
        LstmConfig c;
        c.hidden = hidden;
        c.layers = layers;
        UniLstmModel model(c, 100 + hidden + layers);
        FrameSequence f = random_frames(T, rng);
        CAPTURE(hidden);
        CAPTURE(layers);
        CAPTURE(T);
        CHECK(grad_check_model(model, f));
      }
    }
  }
}

TEST_CASE("bi backward passes the finite-difference check") {
  Rng rng(41);
  for (int encoder_layers : {1, 2}) {
    LstmConfig c;
    c.hidden = 4;
    c.layers = 2;
    c.encoder_layers = encoder_layers;
    BiLstmModel model(c, 7 + encoder_layers);
    FrameSequence f = random_frames(9, rng);
    CAPTURE(encoder_layers);
    CHECK(grad_check_model(model, f));
  }
}

TEST_CASE("zero dlogits yield zero grads; doubling the loss doubles them") {
  LstmConfig c;
  c.hidden = 3;
  c.layers = 2;
  UniLstmModel model(c, 5);
  Rng rng(50);
  FrameSequence f = random_frames(6, rng);

  // backward linearity probed through two accumulations
  model.params().zero_grads();
  model.forward_loss(f);
  model.backward();
  std::vector<double> once;
  for (const auto& [name, p] : model.params())
    for (std::size_t i = 0; i < p.grad.size(); ++i) once.push_back(p.grad[i]);

  model.params().zero_grads();
  model.forward_loss(f);
  model.backward();
  model.forward_loss(f);
  model.backward();
  std::size_t k = 0;
  for (const auto& [name, p] : model.params())
    for (std::size_t i = 0; i < p.grad.size(); ++i, ++k)
      CHECK(p.grad[i] == doctest::Approx(2.0 * once[k]).epsilon(1e-12));
}

TEST_CASE("checkpoint round-trip preserves model outputs exactly") {
  LstmConfig c;
  c.hidden = 4;
  c.layers = 2;
  BiLstmModel model(c, 3);
  Rng rng(51);
  FrameSequence f = random_frames(8, rng);
  Tensor before = model.logits(f);

  const std::string path = "bi_roundtrip_test.ckpt";
  save_model(path, model);
  auto loaded = load_model(path);
  CHECK(loaded->kind() == "bi");
  Tensor after = loaded->logits(f);
  REQUIRE(after.size() == before.size());
  for (std::size_t i = 0; i < after.size(); ++i) CHECK(after[i] == before[i]);
  std::remove(path.c_str());
}

TEST_SUITE_END();
