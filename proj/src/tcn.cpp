#include "mgen/tcn.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

namespace mgen {

int receptive_field(const TcnConfig& config) {
  int rf = 1;
  for (int d : config.dilations) {
    if (d <= 0) fail("tcn: dilations must be positive");
    rf += (config.kernel - 1) * d;
  }
  return rf;
}

Tensor dilated_causal_conv(const Tensor& x, const Tensor& kernel, int dilation) {
  if (dilation < 1) fail("tcn: dilation must be >= 1");
  if (x.rank() != 2 || kernel.rank() != 3) fail("tcn: conv rank mismatch");
  const std::size_t T = x.dim(0), cin = x.dim(1);
  const std::size_t K = kernel.dim(0), cout = kernel.dim(2);
  if (kernel.dim(1) != cin) fail("tcn: conv channel mismatch");

  Tensor out({T, cout});
  for (std::size_t t = 0; t < T; ++t) {
    double* orow = out.data() + t * cout;
    for (std::size_t j = 0; j < K; ++j) {
      const long src = static_cast<long>(t) -
                       static_cast<long>(K - 1 - j) * dilation;
      if (src < 0) continue;
      const double* xrow = x.data() + src * cin;
      for (std::size_t i = 0; i < cin; ++i) {
        const double xv = xrow[i];
        if (xv == 0.0) continue;
        const double* krow = kernel.data() + (j * cin + i) * cout;
        for (std::size_t o = 0; o < cout; ++o) orow[o] += xv * krow[o];
      }
    }
  }
  return out;
}

namespace {

std::string block_name(std::size_t k) {
  std::ostringstream os;
  os << "blk" << (k < 10 ? "0" : "") << k;
  return os.str();
}

std::vector<int> parse_dilations(const std::string& s) {
  std::vector<int> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

}  // namespace

TcnModel::TcnModel(const TcnConfig& config, std::uint64_t seed)
    : config_(config) {
  if (config_.kernel < 1) fail("tcn: kernel must be >= 1");
  if (config_.dilations.empty()) fail("tcn: needs at least one block");
  Rng rng(seed);
  const std::size_t C = config_.residual_channels;
  const std::size_t S = config_.skip_channels;
  const std::size_t K = config_.kernel;

  Tensor& win = store_.create("in.w", {static_cast<std::size_t>(kWaveNetVocab), C});
  store_.create("in.b", {C});
  init_uniform_glorot(win, kWaveNetVocab, C, rng);

  for (std::size_t k = 0; k < config_.dilations.size(); ++k) {
    const std::string p = block_name(k);
    Tensor& wf = store_.create(p + ".wf", {K, C, C});
    Tensor& wg = store_.create(p + ".wg", {K, C, C});
    Tensor& vf = store_.create(p + ".vf", {static_cast<std::size_t>(kChordVocab), C});
    Tensor& vg = store_.create(p + ".vg", {static_cast<std::size_t>(kChordVocab), C});
    Tensor& res = store_.create(p + ".res", {C, C});
    Tensor& skip = store_.create(p + ".skip", {C, S});
    init_uniform_glorot(wf, K * C, C, rng);
    init_uniform_glorot(wg, K * C, C, rng);
    init_uniform_glorot(vf, kChordVocab, C, rng);
    init_uniform_glorot(vg, kChordVocab, C, rng);
    init_uniform_glorot(res, C, C, rng);
    init_uniform_glorot(skip, C, S, rng);
  }

  Tensor& h1 = store_.create("head1.w", {S, S});
  store_.create("head1.b", {S});
  Tensor& h2 = store_.create("head2.w", {S, static_cast<std::size_t>(kWaveNetVocab)});
  store_.create("head2.b", {static_cast<std::size_t>(kWaveNetVocab)});
  init_uniform_glorot(h1, S, S, rng);
  init_uniform_glorot(h2, S, kWaveNetVocab, rng);
}

TcnModel::TcnModel(const Checkpoint& ck)
    : TcnModel(
          [&] {
            TcnConfig c;
            c.kernel = std::stoi(ck.config.at("kernel"));
            c.dilations = parse_dilations(ck.config.at("dilations"));
            c.residual_channels = std::stoi(ck.config.at("residual_channels"));
            c.skip_channels = std::stoi(ck.config.at("skip_channels"));
            return c;
          }(),
          0) {
  for (const auto& [name, p] : ck.params) {
    if (!store_.has(name)) fail("checkpoint: unexpected parameter '" + name + "'");
    Tensor& v = store_.value(name);
    if (!v.same_shape(p.value)) fail("checkpoint: shape mismatch for '" + name + "'");
    std::memcpy(v.data(), p.value.data(), v.size() * sizeof(double));
  }
  store_.set_step(ck.params.step());
}

std::vector<int> TcnModel::targets_of(const FrameSequence& frames) const {
  return to_wavenet_frames(frames).frames.melody;
}

Tensor TcnModel::run_forward(const std::vector<int>& melody,
                             const std::vector<int>& chords,
                             ForwardCache* cache) const {
  const std::size_t T = melody.size();
  if (chords.size() != T) fail("tcn: chord condition length mismatch");
  const std::size_t C = config_.residual_channels;
  const std::size_t S = config_.skip_channels;
  const std::size_t K = config_.kernel;

  // Input projection of the shifted one-hot melody; frame 0 sees zeros.
  const Tensor& win = store_.at("in.w").value;
  const Tensor& bin = store_.at("in.b").value;
  Tensor x({T, C});
  for (std::size_t t = 0; t < T; ++t) {
    double* row = x.data() + t * C;
    std::memcpy(row, bin.data(), C * sizeof(double));
    if (t > 0) {
      const int prev = melody[t - 1];
      if (prev < 0 || prev >= kWaveNetVocab)
        fail("tcn: melody label out of range");
      const double* wrow = win.data() + prev * C;
      for (std::size_t i = 0; i < C; ++i) row[i] += wrow[i];
    }
  }

  if (cache) {
    cache->melody = melody;
    cache->chords = chords;
    cache->blocks.assign(config_.dilations.size(), {});
  }

  Tensor skip_sum({T, S});
  for (std::size_t k = 0; k < config_.dilations.size(); ++k) {
    const int d = config_.dilations[k];
    const std::string p = block_name(k);
    const Tensor& wf = store_.at(p + ".wf").value;
    const Tensor& wg = store_.at(p + ".wg").value;
    const Tensor& vf = store_.at(p + ".vf").value;
    const Tensor& vg = store_.at(p + ".vg").value;
    const Tensor& res = store_.at(p + ".res").value;
    const Tensor& skp = store_.at(p + ".skip").value;

    Tensor zf({T, C}), zg({T, C});
    for (std::size_t t = 0; t < T; ++t) {
      double* pf = zf.data() + t * C;
      double* pg = zg.data() + t * C;
      for (std::size_t j = 0; j < K; ++j) {
        const long src = static_cast<long>(t) -
                         static_cast<long>(K - 1 - j) * d;
        if (src < 0) continue;
        const double* xrow = x.data() + src * C;
        for (std::size_t i = 0; i < C; ++i) {
          const double xv = xrow[i];
          if (xv == 0.0) continue;
          const double* wfr = wf.data() + (j * C + i) * C;
          const double* wgr = wg.data() + (j * C + i) * C;
          for (std::size_t o = 0; o < C; ++o) {
            pf[o] += xv * wfr[o];
            pg[o] += xv * wgr[o];
          }
        }
      }
      const int ct = chords[t];
      if (ct < 0 || ct >= kChordVocab) fail("tcn: chord label out of range");
      const double* vfr = vf.data() + ct * C;
      const double* vgr = vg.data() + ct * C;
      for (std::size_t o = 0; o < C; ++o) {
        pf[o] = std::tanh(pf[o] + vfr[o]);
        pg[o] = sigmoid(pg[o] + vgr[o]);
      }
    }

    Tensor x_next({T, C});
    for (std::size_t t = 0; t < T; ++t) {
      const double* zfr = zf.data() + t * C;
      const double* zgr = zg.data() + t * C;
      double* xn = x_next.data() + t * C;
      double* sk = skip_sum.data() + t * S;
      std::memcpy(xn, x.data() + t * C, C * sizeof(double));
      for (std::size_t i = 0; i < C; ++i) {
        const double zv = zfr[i] * zgr[i];
        if (zv == 0.0) continue;
        const double* rr = res.data() + i * C;
        for (std::size_t o = 0; o < C; ++o) xn[o] += zv * rr[o];
        const double* sr = skp.data() + i * S;
        for (std::size_t o = 0; o < S; ++o) sk[o] += zv * sr[o];
      }
    }

    if (cache) {
      cache->blocks[k].input = x;
      cache->blocks[k].zf = std::move(zf);
      cache->blocks[k].zg = std::move(zg);
    }
    x = std::move(x_next);
  }

  // Fig.-5 head: relu -> 1x1 -> relu -> 1x1.
  const Tensor& h1w = store_.at("head1.w").value;
  const Tensor& h1b = store_.at("head1.b").value;
  const Tensor& h2w = store_.at("head2.w").value;
  const Tensor& h2b = store_.at("head2.b").value;

  Tensor r1({T, S});
  for (std::size_t i = 0; i < r1.size(); ++i)
    r1[i] = skip_sum[i] > 0.0 ? skip_sum[i] : 0.0;
  Tensor q1 = matmul(r1, h1w);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t j = 0; j < S; ++j) q1(t, j) += h1b[j];
  Tensor r2({T, S});
  for (std::size_t i = 0; i < r2.size(); ++i) r2[i] = q1[i] > 0.0 ? q1[i] : 0.0;
  Tensor logits = matmul(r2, h2w);
  for (std::size_t t = 0; t < T; ++t)
    for (int v = 0; v < kWaveNetVocab; ++v) logits(t, v) += h2b[v];

  if (cache) {
    cache->skip_sum = std::move(skip_sum);
    cache->r1 = std::move(r1);
    cache->q1 = std::move(q1);
    cache->r2 = std::move(r2);
  }
  residual_tail_ = std::move(x);
  return logits;
}

Tensor TcnModel::logits_wavenet(const std::vector<int>& melody,
                                const std::vector<int>& chords) {
  return run_forward(melody, chords, nullptr);
}

Tensor TcnModel::logits(const FrameSequence& frames) {
  WaveNetResult wn = to_wavenet_frames(frames);
  return run_forward(wn.frames.melody, wn.frames.chords, nullptr);
}

double TcnModel::forward_loss(const FrameSequence& frames) {
  WaveNetResult wn = to_wavenet_frames(frames);
  Tensor lg = run_forward(wn.frames.melody, wn.frames.chords, &cache_);
  XentResult r = softmax_xent(lg, wn.frames.melody);
  cache_.dlogits = std::move(r.dlogits);
  has_cache_ = true;
  return r.loss;
}

void TcnModel::backward() {
  if (!has_cache_) fail("tcn: backward without forward cache");
  const std::size_t T = cache_.dlogits.dim(0);
  const std::size_t C = config_.residual_channels;
  const std::size_t S = config_.skip_channels;
  const std::size_t K = config_.kernel;

  const Tensor& h1w = store_.at("head1.w").value;
  const Tensor& h2w = store_.at("head2.w").value;
  Tensor& dh1w = store_.at("head1.w").grad;
  Tensor& dh1b = store_.at("head1.b").grad;
  Tensor& dh2w = store_.at("head2.w").grad;
  Tensor& dh2b = store_.at("head2.b").grad;

  // Head backward.
  Tensor dS({T, S});
  for (std::size_t t = 0; t < T; ++t) {
    const double* drow = cache_.dlogits.data() + t * kWaveNetVocab;
    const double* r2row = cache_.r2.data() + t * S;
    for (int v = 0; v < kWaveNetVocab; ++v) dh2b[v] += drow[v];
    std::vector<double> dr2(S, 0.0);
    for (std::size_t j = 0; j < S; ++j) {
      const double* wrow = h2w.data() + j * kWaveNetVocab;
      double* dwrow = dh2w.data() + j * kWaveNetVocab;
      double acc = 0.0;
      const double rv = r2row[j];
      for (int v = 0; v < kWaveNetVocab; ++v) {
        acc += wrow[v] * drow[v];
        dwrow[v] += rv * drow[v];
      }
      dr2[j] = cache_.q1(t, j) > 0.0 ? acc : 0.0;  // relu
    }
    const double* r1row = cache_.r1.data() + t * S;
    double* dSrow = dS.data() + t * S;
    for (std::size_t j = 0; j < S; ++j) {
      const double* wrow = h1w.data() + j * S;
      double* dwrow = dh1w.data() + j * S;
      double acc = 0.0;
      const double rv = r1row[j];
      for (std::size_t o = 0; o < S; ++o) {
        acc += wrow[o] * dr2[o];
        dwrow[o] += rv * dr2[o];
      }
      dh1b[j] += dr2[j];
      dSrow[j] = cache_.skip_sum(t, j) > 0.0 ? acc : 0.0;  // relu
    }
  }

  // Blocks in reverse; dx carries the residual-stream gradient. The final
  // residual output is not consumed by the head, so it starts at zero.
  Tensor dx({T, C});
  for (std::size_t k = config_.dilations.size(); k-- > 0;) {
    const int d = config_.dilations[k];
    const std::string p = block_name(k);
    const Tensor& wf = store_.at(p + ".wf").value;
    const Tensor& wg = store_.at(p + ".wg").value;
    const Tensor& res = store_.at(p + ".res").value;
    const Tensor& skp = store_.at(p + ".skip").value;
    Tensor& dwf = store_.at(p + ".wf").grad;
    Tensor& dwg = store_.at(p + ".wg").grad;
    Tensor& dvf = store_.at(p + ".vf").grad;
    Tensor& dvg = store_.at(p + ".vg").grad;
    Tensor& dres = store_.at(p + ".res").grad;
    Tensor& dskip = store_.at(p + ".skip").grad;
    const BlockCache& bc = cache_.blocks[k];

    Tensor dx_in({T, C});  // gradient wrt the block input
    for (std::size_t t = 0; t < T; ++t) {
      const double* zfr = bc.zf.data() + t * C;
      const double* zgr = bc.zg.data() + t * C;
      const double* dxr = dx.data() + t * C;
      const double* dSrow = dS.data() + t * S;

      // dz from the residual 1x1 and the skip 1x1.
      std::vector<double> dz(C, 0.0);
      for (std::size_t i = 0; i < C; ++i) {
        const double* rr = res.data() + i * C;
        double acc = 0.0;
        for (std::size_t o = 0; o < C; ++o) acc += rr[o] * dxr[o];
        const double* sr = skp.data() + i * S;
        for (std::size_t o = 0; o < S; ++o) acc += sr[o] * dSrow[o];
        dz[i] = acc;
      }
      // parameter grads for res/skip
      for (std::size_t i = 0; i < C; ++i) {
        const double zv = zfr[i] * zgr[i];
        if (zv == 0.0) continue;
        double* drr = dres.data() + i * C;
        for (std::size_t o = 0; o < C; ++o) drr[o] += zv * dxr[o];
        double* dsr = dskip.data() + i * S;
        for (std::size_t o = 0; o < S; ++o) dsr[o] += zv * dSrow[o];
      }

      // Gate backward: z = zf * zg with zf = tanh(pf), zg = sigmoid(pg).
      std::vector<double> dpf(C), dpg(C);
      for (std::size_t i = 0; i < C; ++i) {
        const double dzf = dz[i] * zgr[i];
        const double dzg = dz[i] * zfr[i];
        dpf[i] = dzf * (1.0 - zfr[i] * zfr[i]);
        dpg[i] = dzg * zgr[i] * (1.0 - zgr[i]);
      }
      const int ct = cache_.chords[t];
      double* dvfr = dvf.data() + ct * C;
      double* dvgr = dvg.data() + ct * C;
      for (std::size_t i = 0; i < C; ++i) {
        dvfr[i] += dpf[i];
        dvgr[i] += dpg[i];
      }

      // Conv backward: scatter into dx_in and the kernels.
      for (std::size_t j = 0; j < K; ++j) {
        const long src = static_cast<long>(t) -
                         static_cast<long>(K - 1 - j) * d;
        if (src < 0) continue;
        const double* xsrc = bc.input.data() + src * C;
        double* dxsrc = dx_in.data() + src * C;
        for (std::size_t i = 0; i < C; ++i) {
          const double* wfr = wf.data() + (j * C + i) * C;
          const double* wgr = wg.data() + (j * C + i) * C;
          double acc = 0.0;
          for (std::size_t o = 0; o < C; ++o)
            acc += wfr[o] * dpf[o] + wgr[o] * dpg[o];
          dxsrc[i] += acc;
          const double xv = xsrc[i];
          if (xv == 0.0) continue;
          double* dwfr = dwf.data() + (j * C + i) * C;
          double* dwgr = dwg.data() + (j * C + i) * C;
          for (std::size_t o = 0; o < C; ++o) {
            dwfr[o] += xv * dpf[o];
            dwgr[o] += xv * dpg[o];
          }
        }
      }
      // Residual pass-through.
      double* dxi = dx_in.data() + t * C;
      for (std::size_t i = 0; i < C; ++i) dxi[i] += dxr[i];
    }
    dx = std::move(dx_in);
  }

  // Input projection backward.
  Tensor& dwin = store_.at("in.w").grad;
  Tensor& dbin = store_.at("in.b").grad;
  for (std::size_t t = 0; t < T; ++t) {
    const double* dxr = dx.data() + t * C;
    for (std::size_t i = 0; i < C; ++i) dbin[i] += dxr[i];
    if (t > 0) {
      double* dwrow = dwin.data() + cache_.melody[t - 1] * C;
      for (std::size_t i = 0; i < C; ++i) dwrow[i] += dxr[i];
    }
  }
  has_cache_ = false;
}

namespace {
struct TcnSampler : SamplerState {
  std::vector<int> melody;
  std::vector<int> chords;
};
}  // namespace

std::unique_ptr<SamplerState> TcnModel::make_sampler(
    const std::vector<int>& chords) const {
  auto s = std::make_unique<TcnSampler>();
  s->chords = chords;
  return s;
}

std::vector<double> TcnModel::sampler_step(SamplerState& state, int prev_label,
                                           std::size_t t) const {
  auto& s = static_cast<TcnSampler&>(state);
  if (t >= s.chords.size()) fail("sampler: step beyond chord coverage");
  if (t > 0) {
    if (prev_label < 0 || prev_label >= kWaveNetVocab)
      fail("sampler: previous label out of range");
    s.melody.resize(t - 1);
    s.melody.push_back(prev_label);
  }
  std::vector<int> mel(s.melody.begin(), s.melody.begin() + t);
  mel.push_back(0);  // position t's own label is unused by causality
  std::vector<int> ch(s.chords.begin(), s.chords.begin() + t + 1);
  Tensor lg = run_forward(mel, ch, nullptr);
  const double* row = lg.data() + t * kWaveNetVocab;
  return std::vector<double>(row, row + kWaveNetVocab);
}

std::map<std::string, std::string> TcnModel::config_map() const {
  std::ostringstream dil;
  for (std::size_t i = 0; i < config_.dilations.size(); ++i) {
    if (i) dil << ",";
    dil << config_.dilations[i];
  }
  return {{"kind", "tcn"},
          {"kernel", std::to_string(config_.kernel)},
          {"dilations", dil.str()},
          {"residual_channels", std::to_string(config_.residual_channels)},
          {"skip_channels", std::to_string(config_.skip_channels)}};
}

}  // namespace mgen
