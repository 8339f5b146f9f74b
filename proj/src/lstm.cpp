#include "mgen/lstm.hpp"

#include <cmath>
#include <cstring>

namespace mgen {

namespace {
constexpr int kInputDimUni = kMelodyVocab + kChordVocab;  // 155

void add_bias_rows(Tensor& m, const Tensor& b) {
  const std::size_t T = m.dim(0), n = m.dim(1);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t j = 0; j < n; ++j) m(t, j) += b[j];
}
}  // namespace

LstmLayer::LstmLayer(ParamStore& store, const std::string& prefix,
                     std::size_t in_dim, std::size_t hidden, Rng* rng)
    : in_dim_(in_dim), hidden_(hidden) {
  Tensor& w = store.create(prefix + ".w", {in_dim, 4 * hidden});
  Tensor& u = store.create(prefix + ".u", {hidden, 4 * hidden});
  store.create(prefix + ".b", {4 * hidden});
  if (rng) {
    init_uniform_glorot(w, in_dim, hidden, *rng);
    init_uniform_glorot(u, hidden, hidden, *rng);
    // forget-gate bias +1 keeps early memory open
    Tensor& b = store.value(prefix + ".b");
    for (std::size_t j = hidden; j < 2 * hidden; ++j) b[j] = 1.0;
  }
  w_ = &store.at(prefix + ".w");
  u_ = &store.at(prefix + ".u");
  b_ = &store.at(prefix + ".b");
}

Tensor LstmLayer::forward(const Tensor& x, bool reverse, Cache* cache) const {
  const std::size_t T = x.dim(0);
  const std::size_t H = hidden_, D = in_dim_;
  if (x.dim(1) != D) fail("lstm: input width mismatch");

  Tensor gates({T, 4 * H}), cells({T, H}), tanh_c({T, H}), hidden({T, H});
  std::vector<double> h_prev(H, 0.0), c_prev(H, 0.0);
  std::vector<double> a(4 * H);

  const double* w = w_->value.data();
  const double* u = u_->value.data();
  const double* b = b_->value.data();

  for (std::size_t k = 0; k < T; ++k) {
    const std::size_t t = reverse ? T - 1 - k : k;
    std::memcpy(a.data(), b, 4 * H * sizeof(double));
    const double* xr = x.data() + t * D;
    for (std::size_t d = 0; d < D; ++d) {
      const double xv = xr[d];
      if (xv == 0.0) continue;
      const double* wr = w + d * 4 * H;
      for (std::size_t j = 0; j < 4 * H; ++j) a[j] += xv * wr[j];
    }
    for (std::size_t hh = 0; hh < H; ++hh) {
      const double hv = h_prev[hh];
      if (hv == 0.0) continue;
      const double* ur = u + hh * 4 * H;
      for (std::size_t j = 0; j < 4 * H; ++j) a[j] += hv * ur[j];
    }
    double* grow = gates.data() + t * 4 * H;
    for (std::size_t j = 0; j < H; ++j) grow[j] = sigmoid(a[j]);              // i
    for (std::size_t j = H; j < 3 * H; ++j) grow[j] = sigmoid(a[j]);          // f, o
    for (std::size_t j = 3 * H; j < 4 * H; ++j) grow[j] = std::tanh(a[j]);    // g
    for (std::size_t j = 0; j < H; ++j) {
      const double c = grow[H + j] * c_prev[j] + grow[j] * grow[3 * H + j];
      const double tc = std::tanh(c);
      const double h = grow[2 * H + j] * tc;
      cells(t, j) = c;
      tanh_c(t, j) = tc;
      hidden(t, j) = h;
      c_prev[j] = c;
      h_prev[j] = h;
    }
  }
  if (cache) {
    cache->gates = std::move(gates);
    cache->cells = std::move(cells);
    cache->tanh_c = std::move(tanh_c);
    cache->hidden = hidden;
  }
  return hidden;
}

Tensor LstmLayer::backward(const Tensor& x, const Cache& cache,
                           const Tensor& dh_out, bool reverse) const {
  const std::size_t T = x.dim(0);
  const std::size_t H = hidden_, D = in_dim_;
  Tensor dx({T, D});
  std::vector<double> dh_next(H, 0.0), dc_next(H, 0.0), da(4 * H);

  const double* w = w_->value.data();
  const double* u = u_->value.data();
  double* dw = w_->grad.data();
  double* du = u_->grad.data();
  double* db = b_->grad.data();

  for (std::size_t kk = T; kk-- > 0;) {
    const std::size_t t = reverse ? T - 1 - kk : kk;
    const bool has_prev = kk > 0;
    const std::size_t t_prev = reverse ? t + 1 : t - 1;
    const double* grow = cache.gates.data() + t * 4 * H;

    for (std::size_t j = 0; j < H; ++j) {
      const double i = grow[j], f = grow[H + j], o = grow[2 * H + j],
                   g = grow[3 * H + j];
      const double tc = cache.tanh_c(t, j);
      const double c_prev = has_prev ? cache.cells(t_prev, j) : 0.0;
      const double dh = dh_out(t, j) + dh_next[j];
      const double d_o = dh * tc;
      const double dc = dh * o * (1.0 - tc * tc) + dc_next[j];
      const double d_i = dc * g;
      const double d_g = dc * i;
      const double d_f = dc * c_prev;
      da[j] = d_i * i * (1.0 - i);
      da[H + j] = d_f * f * (1.0 - f);
      da[2 * H + j] = d_o * o * (1.0 - o);
      da[3 * H + j] = d_g * (1.0 - g * g);
      dc_next[j] = dc * f;
    }
    for (std::size_t j = 0; j < 4 * H; ++j) db[j] += da[j];

    const double* xr = x.data() + t * D;
    double* dxr = dx.data() + t * D;
    for (std::size_t d = 0; d < D; ++d) {
      const double* wr = w + d * 4 * H;
      double acc = 0.0;
      for (std::size_t j = 0; j < 4 * H; ++j) acc += wr[j] * da[j];
      dxr[d] = acc;
      const double xv = xr[d];
      if (xv == 0.0) continue;
      double* dwr = dw + d * 4 * H;
      for (std::size_t j = 0; j < 4 * H; ++j) dwr[j] += xv * da[j];
    }
    if (has_prev) {
      const double* hprow = cache.hidden.data() + t_prev * H;
      for (std::size_t hh = 0; hh < H; ++hh) {
        const double* ur = u + hh * 4 * H;
        double acc = 0.0;
        for (std::size_t j = 0; j < 4 * H; ++j) acc += ur[j] * da[j];
        dh_next[hh] = acc;
        const double hv = hprow[hh];
        if (hv == 0.0) continue;
        double* dur = du + hh * 4 * H;
        for (std::size_t j = 0; j < 4 * H; ++j) dur[j] += hv * da[j];
      }
    }
  }
  return dx;
}

void LstmLayer::step(const double* x, std::vector<double>& h,
                     std::vector<double>& c) const {
  const std::size_t H = hidden_, D = in_dim_;
  std::vector<double> a(b_->value.data(), b_->value.data() + 4 * H);
  const double* w = w_->value.data();
  const double* u = u_->value.data();
  for (std::size_t d = 0; d < D; ++d) {
    const double xv = x[d];
    if (xv == 0.0) continue;
    const double* wr = w + d * 4 * H;
    for (std::size_t j = 0; j < 4 * H; ++j) a[j] += xv * wr[j];
  }
  for (std::size_t hh = 0; hh < H; ++hh) {
    const double hv = h[hh];
    if (hv == 0.0) continue;
    const double* ur = u + hh * 4 * H;
    for (std::size_t j = 0; j < 4 * H; ++j) a[j] += hv * ur[j];
  }
  for (std::size_t j = 0; j < H; ++j) {
    const double i = sigmoid(a[j]);
    const double f = sigmoid(a[H + j]);
    const double o = sigmoid(a[2 * H + j]);
    const double g = std::tanh(a[3 * H + j]);
    c[j] = f * c[j] + i * g;
    h[j] = o * std::tanh(c[j]);
  }
}

LstmStack::LstmStack(ParamStore& store, const std::string& prefix,
                     std::size_t input_dim, std::size_t hidden,
                     std::size_t n_layers, Rng* rng)
    : hidden_(hidden) {
  if (n_layers == 0) fail("lstm stack: needs at least one layer");
  for (std::size_t l = 0; l < n_layers; ++l)
    layers_.emplace_back(store, prefix + ".l" + std::to_string(l),
                         l == 0 ? input_dim : hidden, hidden, rng);
}

Tensor LstmStack::forward(const Tensor& x, bool reverse, Cache* cache) const {
  if (cache) {
    cache->inputs.clear();
    cache->cells.assign(layers_.size(), {});
  }
  Tensor y = x;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    if (cache) cache->inputs.push_back(y);
    Tensor h = layers_[l].forward(y, reverse, cache ? &cache->cells[l] : nullptr);
    if (l == 0) {
      y = std::move(h);
    } else {
      for (std::size_t i = 0; i < y.size(); ++i) y[i] += h[i];
    }
  }
  return y;
}

Tensor LstmStack::backward(const Cache& cache, const Tensor& dy,
                           bool reverse) const {
  Tensor d = dy;
  for (std::size_t l = layers_.size(); l-- > 0;) {
    Tensor dx = layers_[l].backward(cache.inputs[l], cache.cells[l], d, reverse);
    if (l == 0) return dx;
    // skip connection: the layer input also feeds the sum directly
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += dx[i];
  }
  fail("lstm stack: unreachable");
}

LstmStack::StepState LstmStack::make_step_state() const {
  StepState s;
  s.h.assign(layers_.size(), std::vector<double>(hidden_, 0.0));
  s.c.assign(layers_.size(), std::vector<double>(hidden_, 0.0));
  return s;
}

std::vector<double> LstmStack::step(const double* x, StepState& state) const {
  std::vector<double> y;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const double* in = l == 0 ? x : y.data();
    layers_[l].step(in, state.h[l], state.c[l]);
    if (l == 0) {
      y = state.h[l];
    } else {
      for (std::size_t j = 0; j < hidden_; ++j) y[j] += state.h[l][j];
    }
  }
  return y;
}

// ---------------------------------------------------------------------------
// Unidirectional model

namespace {
std::map<std::string, std::string> lstm_config_map(const LstmConfig& c,
                                                   const std::string& kind) {
  return {{"kind", kind},
          {"layers", std::to_string(c.layers)},
          {"hidden", std::to_string(c.hidden)},
          {"encoder_layers", std::to_string(c.encoder_layers)},
          {"gates", "ifog_v1"}};
}

LstmConfig config_from_map(const std::map<std::string, std::string>& m) {
  LstmConfig c;
  c.layers = std::stoi(m.at("layers"));
  c.hidden = std::stoi(m.at("hidden"));
  if (m.count("encoder_layers")) c.encoder_layers = std::stoi(m.at("encoder_layers"));
  return c;
}

void copy_params_from(const ParamStore& src, ParamStore& dst) {
  for (const auto& [name, p] : src) {
    if (!dst.has(name)) fail("checkpoint: unexpected parameter '" + name + "'");
    Tensor& v = dst.value(name);
    if (!v.same_shape(p.value)) fail("checkpoint: shape mismatch for '" + name + "'");
    std::memcpy(v.data(), p.value.data(), v.size() * sizeof(double));
  }
  dst.set_step(src.step());
}
}  // namespace

UniLstmModel::UniLstmModel(const LstmConfig& config, std::uint64_t seed)
    : config_(config) {
  if (config_.layers < 1) fail("uni lstm: layers must be >= 1");
  Rng rng(seed);
  stack_ = std::make_unique<LstmStack>(store_, "gen", kInputDimUni,
                                       config_.hidden, config_.layers, &rng);
  Tensor& head_w = store_.create("head.w",
                                 {static_cast<std::size_t>(config_.hidden),
                                  static_cast<std::size_t>(kMelodyVocab)});
  store_.create("head.b", {static_cast<std::size_t>(kMelodyVocab)});
  store_.create("start", {static_cast<std::size_t>(kMelodyVocab)});
  init_uniform_glorot(head_w, config_.hidden, kMelodyVocab, rng);
}

UniLstmModel::UniLstmModel(const Checkpoint& ck)
    : UniLstmModel(config_from_map(ck.config), 0) {
  copy_params_from(ck.params, store_);
}

std::vector<int> UniLstmModel::targets_of(const FrameSequence& frames) const {
  return frames.melody;
}

Tensor UniLstmModel::build_input(const FrameSequence& frames) const {
  const std::size_t T = frames.length();
  Tensor x({T, static_cast<std::size_t>(kInputDimUni)});
  const Tensor& start = store_.at("start").value;
  for (std::size_t t = 0; t < T; ++t) {
    if (t == 0) {
      for (int j = 0; j < kMelodyVocab; ++j) x(0, j) = start[j];
    } else {
      x(t, frames.melody[t - 1]) = 1.0;
    }
    x(t, kMelodyVocab + frames.chords[t]) = 1.0;
  }
  return x;
}

Tensor UniLstmModel::head_logits(const Tensor& y) const {
  Tensor logits = matmul(y, store_.at("head.w").value);
  add_bias_rows(logits, store_.at("head.b").value);
  return logits;
}

Tensor UniLstmModel::logits(const FrameSequence& frames) {
  validate_frames(frames);
  Tensor x = build_input(frames);
  Tensor y = stack_->forward(x, false, nullptr);
  return head_logits(y);
}

double UniLstmModel::forward_loss(const FrameSequence& frames) {
  validate_frames(frames);
  Tensor x = build_input(frames);
  hidden_out_ = stack_->forward(x, false, &stack_cache_);
  Tensor lg = head_logits(hidden_out_);
  XentResult r = softmax_xent(lg, frames.melody);
  dlogits_ = std::move(r.dlogits);
  has_cache_ = true;
  return r.loss;
}

void UniLstmModel::backward() {
  if (!has_cache_) fail("uni lstm: backward without forward cache");
  const std::size_t T = dlogits_.dim(0);
  const std::size_t H = config_.hidden;
  const Tensor& head_w = store_.at("head.w").value;
  Tensor& dhead_w = store_.at("head.w").grad;
  Tensor& dhead_b = store_.at("head.b").grad;

  Tensor dy({T, H});
  for (std::size_t t = 0; t < T; ++t) {
    const double* drow = dlogits_.data() + t * kMelodyVocab;
    const double* yrow = hidden_out_.data() + t * H;
    for (int v = 0; v < kMelodyVocab; ++v) dhead_b[v] += drow[v];
    for (std::size_t h = 0; h < H; ++h) {
      const double* wrow = head_w.data() + h * kMelodyVocab;
      double* dwrow = dhead_w.data() + h * kMelodyVocab;
      double acc = 0.0;
      const double yv = yrow[h];
      for (int v = 0; v < kMelodyVocab; ++v) {
        acc += wrow[v] * drow[v];
        dwrow[v] += yv * drow[v];
      }
      dy(t, h) = acc;
    }
  }
  Tensor dx = stack_->backward(stack_cache_, dy, false);
  Tensor& dstart = store_.at("start").grad;
  for (int j = 0; j < kMelodyVocab; ++j) dstart[j] += dx(0, j);
  has_cache_ = false;
}

namespace {
struct LstmSampler : SamplerState {
  LstmStack::StepState state;
  std::vector<int> chords;
  Tensor context;  // bi only: (T, 2*He)
};
}  // namespace

std::unique_ptr<SamplerState> UniLstmModel::make_sampler(
    const std::vector<int>& chords) const {
  auto s = std::make_unique<LstmSampler>();
  s->state = stack_->make_step_state();
  s->chords = chords;
  return s;
}

std::vector<double> UniLstmModel::sampler_step(SamplerState& state,
                                               int prev_label,
                                               std::size_t t) const {
  auto& s = static_cast<LstmSampler&>(state);
  if (t >= s.chords.size()) fail("sampler: step beyond chord coverage");
  std::vector<double> x(kInputDimUni, 0.0);
  if (t == 0) {
    const Tensor& start = store_.at("start").value;
    for (int j = 0; j < kMelodyVocab; ++j) x[j] = start[j];
  } else {
    if (prev_label < 0 || prev_label >= kMelodyVocab)
      fail("sampler: previous label out of range");
    x[prev_label] = 1.0;
  }
  x[kMelodyVocab + s.chords[t]] = 1.0;
  std::vector<double> y = stack_->step(x.data(), s.state);

  const Tensor& head_w = store_.at("head.w").value;
  const Tensor& head_b = store_.at("head.b").value;
  std::vector<double> logits(head_b.data(), head_b.data() + kMelodyVocab);
  for (std::size_t h = 0; h < y.size(); ++h) {
    const double yv = y[h];
    if (yv == 0.0) continue;
    const double* wrow = head_w.data() + h * kMelodyVocab;
    for (int v = 0; v < kMelodyVocab; ++v) logits[v] += yv * wrow[v];
  }
  return logits;
}

std::map<std::string, std::string> UniLstmModel::config_map() const {
  return lstm_config_map(config_, "uni");
}

// ---------------------------------------------------------------------------
// Bidirectional-context model

BiLstmModel::BiLstmModel(const LstmConfig& config, std::uint64_t seed)
    : config_(config) {
  config_.bidirectional_context = true;
  if (config_.layers < 1) fail("bi lstm: layers must be >= 1");
  if (config_.encoder_layers < 1) fail("bi lstm: encoder_layers must be >= 1");
  Rng rng(seed);
  const std::size_t H = config_.hidden;
  enc_fwd_ = std::make_unique<LstmStack>(store_, "encf", kChordVocab, H,
                                         config_.encoder_layers, &rng);
  enc_bwd_ = std::make_unique<LstmStack>(store_, "encb", kChordVocab, H,
                                         config_.encoder_layers, &rng);
  generator_ = std::make_unique<LstmStack>(store_, "gen", kMelodyVocab + 2 * H,
                                           H, config_.layers, &rng);
  Tensor& head_w = store_.create(
      "head.w", {H, static_cast<std::size_t>(kMelodyVocab)});
  store_.create("head.b", {static_cast<std::size_t>(kMelodyVocab)});
  store_.create("start", {static_cast<std::size_t>(kMelodyVocab)});
  init_uniform_glorot(head_w, H, kMelodyVocab, rng);
}

BiLstmModel::BiLstmModel(const Checkpoint& ck)
    : BiLstmModel(config_from_map(ck.config), 0) {
  copy_params_from(ck.params, store_);
}

std::vector<int> BiLstmModel::targets_of(const FrameSequence& frames) const {
  return frames.melody;
}

Tensor BiLstmModel::encode_context(const std::vector<int>& chords) const {
  const std::size_t T = chords.size();
  Tensor onehots({T, static_cast<std::size_t>(kChordVocab)});
  for (std::size_t t = 0; t < T; ++t) onehots(t, chords[t]) = 1.0;
  Tensor hf = enc_fwd_->forward(onehots, false, nullptr);
  Tensor hb = enc_bwd_->forward(onehots, true, nullptr);
  const std::size_t H = config_.hidden;
  Tensor e({T, 2 * H});
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t j = 0; j < H; ++j) {
      e(t, j) = hf(t, j);
      e(t, H + j) = hb(t, j);
    }
  return e;
}

Tensor BiLstmModel::build_generator_input(const FrameSequence& frames,
                                          const Tensor& context) const {
  const std::size_t T = frames.length();
  const std::size_t H = config_.hidden;
  Tensor x({T, kMelodyVocab + 2 * H});
  const Tensor& start = store_.at("start").value;
  for (std::size_t t = 0; t < T; ++t) {
    if (t == 0) {
      for (int j = 0; j < kMelodyVocab; ++j) x(0, j) = start[j];
    } else {
      x(t, frames.melody[t - 1]) = 1.0;
    }
    for (std::size_t j = 0; j < 2 * H; ++j)
      x(t, kMelodyVocab + j) = context(t, j);
  }
  return x;
}

Tensor BiLstmModel::head_logits(const Tensor& y) const {
  Tensor logits = matmul(y, store_.at("head.w").value);
  add_bias_rows(logits, store_.at("head.b").value);
  return logits;
}

Tensor BiLstmModel::logits(const FrameSequence& frames) {
  validate_frames(frames);
  Tensor ctx = encode_context(frames.chords);
  Tensor x = build_generator_input(frames, ctx);
  Tensor y = generator_->forward(x, false, nullptr);
  return head_logits(y);
}

double BiLstmModel::forward_loss(const FrameSequence& frames) {
  validate_frames(frames);
  const std::size_t T = frames.length();
  Tensor chord_onehots({T, static_cast<std::size_t>(kChordVocab)});
  for (std::size_t t = 0; t < T; ++t) chord_onehots(t, frames.chords[t]) = 1.0;
  Tensor hf = enc_fwd_->forward(chord_onehots, false, &enc_fwd_cache_);
  Tensor hb = enc_bwd_->forward(chord_onehots, true, &enc_bwd_cache_);
  const std::size_t H = config_.hidden;
  Tensor context({T, 2 * H});
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t j = 0; j < H; ++j) {
      context(t, j) = hf(t, j);
      context(t, H + j) = hb(t, j);
    }
  Tensor gen_input = build_generator_input(frames, context);
  hidden_out_ = generator_->forward(gen_input, false, &gen_cache_);
  Tensor lg = head_logits(hidden_out_);
  XentResult r = softmax_xent(lg, frames.melody);
  dlogits_ = std::move(r.dlogits);
  has_cache_ = true;
  return r.loss;
}

void BiLstmModel::backward() {
  if (!has_cache_) fail("bi lstm: backward without forward cache");
  const std::size_t T = dlogits_.dim(0);
  const std::size_t H = config_.hidden;
  const Tensor& head_w = store_.at("head.w").value;
  Tensor& dhead_w = store_.at("head.w").grad;
  Tensor& dhead_b = store_.at("head.b").grad;

  Tensor dy({T, H});
  for (std::size_t t = 0; t < T; ++t) {
    const double* drow = dlogits_.data() + t * kMelodyVocab;
    const double* yrow = hidden_out_.data() + t * H;
    for (int v = 0; v < kMelodyVocab; ++v) dhead_b[v] += drow[v];
    for (std::size_t h = 0; h < H; ++h) {
      const double* wrow = head_w.data() + h * kMelodyVocab;
      double* dwrow = dhead_w.data() + h * kMelodyVocab;
      double acc = 0.0;
      const double yv = yrow[h];
      for (int v = 0; v < kMelodyVocab; ++v) {
        acc += wrow[v] * drow[v];
        dwrow[v] += yv * drow[v];
      }
      dy(t, h) = acc;
    }
  }
  Tensor dx = generator_->backward(gen_cache_, dy, false);

  Tensor& dstart = store_.at("start").grad;
  for (int j = 0; j < kMelodyVocab; ++j) dstart[j] += dx(0, j);

  Tensor dhf({T, H}), dhb({T, H});
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t j = 0; j < H; ++j) {
      dhf(t, j) = dx(t, kMelodyVocab + j);
      dhb(t, j) = dx(t, kMelodyVocab + H + j);
    }
  enc_fwd_->backward(enc_fwd_cache_, dhf, false);
  enc_bwd_->backward(enc_bwd_cache_, dhb, true);
  has_cache_ = false;
}

std::unique_ptr<SamplerState> BiLstmModel::make_sampler(
    const std::vector<int>& chords) const {
  auto s = std::make_unique<LstmSampler>();
  s->state = generator_->make_step_state();
  s->chords = chords;
  s->context = encode_context(chords);
  return s;
}

std::vector<double> BiLstmModel::sampler_step(SamplerState& state,
                                              int prev_label,
                                              std::size_t t) const {
  auto& s = static_cast<LstmSampler&>(state);
  if (t >= s.chords.size()) fail("sampler: step beyond chord coverage");
  const std::size_t H = config_.hidden;
  std::vector<double> x(kMelodyVocab + 2 * H, 0.0);
  if (t == 0) {
    const Tensor& start = store_.at("start").value;
    for (int j = 0; j < kMelodyVocab; ++j) x[j] = start[j];
  } else {
    if (prev_label < 0 || prev_label >= kMelodyVocab)
      fail("sampler: previous label out of range");
    x[prev_label] = 1.0;
  }
  for (std::size_t j = 0; j < 2 * H; ++j)
    x[kMelodyVocab + j] = s.context(t, j);
  std::vector<double> y = generator_->step(x.data(), s.state);

  const Tensor& head_w = store_.at("head.w").value;
  const Tensor& head_b = store_.at("head.b").value;
  std::vector<double> logits(head_b.data(), head_b.data() + kMelodyVocab);
  for (std::size_t h = 0; h < y.size(); ++h) {
    const double yv = y[h];
    if (yv == 0.0) continue;
    const double* wrow = head_w.data() + h * kMelodyVocab;
    for (int v = 0; v < kMelodyVocab; ++v) logits[v] += yv * wrow[v];
  }
  return logits;
}

std::map<std::string, std::string> BiLstmModel::config_map() const {
  return lstm_config_map(config_, "bi");
}

}  // namespace mgen
