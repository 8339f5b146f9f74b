#pragma once

#include "mgen/model.hpp"
#include "mgen/rng.hpp"

namespace mgen {

// One LSTM layer with gates packed [i, f, o, g] along the 4H axis.
// Weights are stored input-major ((D,4H) and (H,4H)) so the gate loop is
// contiguous; the packing convention is recorded in checkpoints.
class LstmLayer {
 public:
  struct Cache {
    Tensor gates;   // (T, 4H) post-activation
    Tensor cells;   // (T, H)
    Tensor tanh_c;  // (T, H)
    Tensor hidden;  // (T, H)
  };

  // rng == nullptr leaves values zeroed (checkpoint loading fills them).
  LstmLayer(ParamStore& store, const std::string& prefix, std::size_t in_dim,
            std::size_t hidden, Rng* rng);

  std::size_t in_dim() const { return in_dim_; }
  std::size_t hidden() const { return hidden_; }

  // x: (T, in_dim). reverse=true runs the recurrence from the last frame
  // backward (for the bidirectional encoder). Initial h, c are zeros.
  Tensor forward(const Tensor& x, bool reverse, Cache* cache) const;

  // dh: (T, hidden) gradient wrt this layer's output sequence. Accumulates
  // parameter grads and returns dx (T, in_dim).
  Tensor backward(const Tensor& x, const Cache& cache, const Tensor& dh,
                  bool reverse) const;

  // Single-step advance for sampling.
  void step(const double* x, std::vector<double>& h, std::vector<double>& c) const;

 private:
  std::size_t in_dim_, hidden_;
  Param *w_, *u_, *b_;
};

// Stacked layers with additive skip connections from the second layer up:
// y1 = lstm1(x); yk = lstmk(y_{k-1}) + y_{k-1}.
class LstmStack {
 public:
  struct Cache {
    std::vector<Tensor> inputs;  // input to each layer
    std::vector<LstmLayer::Cache> cells;
  };

  LstmStack(ParamStore& store, const std::string& prefix, std::size_t input_dim,
            std::size_t hidden, std::size_t n_layers, Rng* rng);

  std::size_t hidden() const { return hidden_; }
  std::size_t n_layers() const { return layers_.size(); }

  Tensor forward(const Tensor& x, bool reverse, Cache* cache) const;
  Tensor backward(const Cache& cache, const Tensor& dy, bool reverse) const;

  struct StepState {
    std::vector<std::vector<double>> h, c;  // per layer
  };
  StepState make_step_state() const;
  // Returns the stack output for this step (with skips applied).
  std::vector<double> step(const double* x, StepState& state) const;

 private:
  std::vector<LstmLayer> layers_;
  std::size_t hidden_;
};

struct LstmConfig {
  int layers = 7;
  int hidden = 128;
  bool bidirectional_context = false;
  int encoder_layers = 1;
};

// Eq.-style unidirectional model: input at step i concatenates the one-hot
// of melody[i-1] (a learned start row at i = 0) with the one-hot of
// chord[i]; strictly causal in both streams.
class UniLstmModel : public SequenceModel {
 public:
  UniLstmModel(const LstmConfig& config, std::uint64_t seed);
  explicit UniLstmModel(const Checkpoint& ck);

  std::string kind() const override { return "uni"; }
  int vocab() const override { return kMelodyVocab; }
  ParamStore& params() override { return store_; }
  std::vector<int> targets_of(const FrameSequence& frames) const override;
  Tensor logits(const FrameSequence& frames) override;
  double forward_loss(const FrameSequence& frames) override;
  void backward() override;
  std::unique_ptr<SamplerState> make_sampler(
      const std::vector<int>& chords) const override;
  std::vector<double> sampler_step(SamplerState& state, int prev_label,
                                   std::size_t t) const override;
  std::map<std::string, std::string> config_map() const override;

 private:
  Tensor build_input(const FrameSequence& frames) const;
  Tensor head_logits(const Tensor& y) const;

  LstmConfig config_;
  ParamStore store_;
  std::unique_ptr<LstmStack> stack_;

  // forward cache
  Tensor hidden_out_, dlogits_;
  LstmStack::Cache stack_cache_;
  bool has_cache_ = false;
};

// Bidirectional-context model: a bidirectional LSTM stack encodes the full
// chord progression into per-frame context; a causal generator stack runs
// over concat(melody one-hot, context). Causal in melody, global in chords.
class BiLstmModel : public SequenceModel {
 public:
  BiLstmModel(const LstmConfig& config, std::uint64_t seed);
  explicit BiLstmModel(const Checkpoint& ck);

  std::string kind() const override { return "bi"; }
  int vocab() const override { return kMelodyVocab; }
  ParamStore& params() override { return store_; }
  std::vector<int> targets_of(const FrameSequence& frames) const override;
  Tensor logits(const FrameSequence& frames) override;
  double forward_loss(const FrameSequence& frames) override;
  void backward() override;
  std::unique_ptr<SamplerState> make_sampler(
      const std::vector<int>& chords) const override;
  std::vector<double> sampler_step(SamplerState& state, int prev_label,
                                   std::size_t t) const override;
  std::map<std::string, std::string> config_map() const override;

  // Context rows for a chord sequence (exposed for causality probes).
  Tensor encode_context(const std::vector<int>& chords) const;

 private:
  Tensor build_generator_input(const FrameSequence& frames,
                               const Tensor& context) const;
  Tensor head_logits(const Tensor& y) const;

  LstmConfig config_;
  ParamStore store_;
  std::unique_ptr<LstmStack> enc_fwd_, enc_bwd_, generator_;

  Tensor hidden_out_, dlogits_;
  LstmStack::Cache enc_fwd_cache_, enc_bwd_cache_, gen_cache_;
  bool has_cache_ = false;
};

}  // namespace mgen
