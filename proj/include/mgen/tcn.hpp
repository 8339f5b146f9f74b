#pragma once

#include "mgen/model.hpp"
#include "mgen/rng.hpp"

namespace mgen {

struct TcnConfig {
  int kernel = 2;
  std::vector<int> dilations = {1, 2, 4, 8, 16, 32, 64, 128, 256};
  int residual_channels = 64;
  int skip_channels = 128;
};

// Frames of past input that can reach one output: 1 + sum((k-1) * d_i).
int receptive_field(const TcnConfig& config);

// out[t] = sum_j kernel[j] . x[t - (K-1-j)*d], left zero-padded; kernel is
// (K, C_in, C_out). Output at t depends only on x[<= t].
Tensor dilated_causal_conv(const Tensor& x, const Tensor& kernel, int dilation);

// WaveNet-style stack: gated blocks with per-block 1x1 chord conditioning,
// residual and skip paths, and a two-ReLU two-1x1 softmax head over the
// skip sum.
class TcnModel : public SequenceModel {
 public:
  TcnModel(const TcnConfig& config, std::uint64_t seed);
  explicit TcnModel(const Checkpoint& ck);

  std::string kind() const override { return "tcn"; }
  int vocab() const override { return kWaveNetVocab; }
  ParamStore& params() override { return store_; }
  const TcnConfig& config() const { return config_; }

  std::vector<int> targets_of(const FrameSequence& frames) const override;
  Tensor logits(const FrameSequence& frames) override;
  double forward_loss(const FrameSequence& frames) override;
  void backward() override;
  std::unique_ptr<SamplerState> make_sampler(
      const std::vector<int>& chords) const override;
  std::vector<double> sampler_step(SamplerState& state, int prev_label,
                                   std::size_t t) const override;
  std::map<std::string, std::string> config_map() const override;

  // Logits straight from WaveNet-space labels (probing and sampling).
  Tensor logits_wavenet(const std::vector<int>& melody,
                        const std::vector<int>& chords);

  // Residual-stream output of the last block from the most recent
  // forward_loss (the pre-head feature path).
  const Tensor& residual_tail() const { return residual_tail_; }

 private:
  struct BlockCache {
    Tensor input;  // residual stream entering the block (T, C)
    Tensor zf, zg; // gate activations (T, C)
  };
  struct ForwardCache {
    std::vector<int> melody, chords;
    std::vector<BlockCache> blocks;
    Tensor skip_sum;  // (T, S)
    Tensor r1, q1, r2;
    Tensor dlogits;
  };

  Tensor run_forward(const std::vector<int>& melody,
                     const std::vector<int>& chords, ForwardCache* cache) const;

  TcnConfig config_;
  ParamStore store_;
  ForwardCache cache_;
  mutable Tensor residual_tail_;
  bool has_cache_ = false;
};

}  // namespace mgen
