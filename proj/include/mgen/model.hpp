#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mgen/checkpoint.hpp"
#include "mgen/frames.hpp"
#include "mgen/param_store.hpp"

namespace mgen {

// Incremental decoding state; concrete layout is model-specific.
struct SamplerState {
  virtual ~SamplerState() = default;
};

// Common face of the three trainable models (unidirectional LSTM,
// bidirectional-context LSTM, dilated temporal CNN). All of them predict
// the melody label at each frame from earlier melody plus the chord
// condition, trained teacher-forced with mean cross-entropy.
class SequenceModel {
 public:
  virtual ~SequenceModel() = default;

  virtual std::string kind() const = 0;
  virtual int vocab() const = 0;  // melody output classes (130 or 128)
  virtual ParamStore& params() = 0;

  // Model-space target labels for a frame sequence.
  virtual std::vector<int> targets_of(const FrameSequence& frames) const = 0;

  // Teacher-forced logits, shape (T, vocab()).
  virtual Tensor logits(const FrameSequence& frames) = 0;

  // Mean nats/frame; retains the cache that backward() consumes.
  virtual double forward_loss(const FrameSequence& frames) = 0;
  // Accumulates gradients of the last forward_loss into params().
  virtual void backward() = 0;

  // Incremental decoding: make_sampler fixes the chord condition for the
  // whole piece; sampler_step consumes the melody label emitted at t-1
  // (ignored at t = 0) and returns the logits for position t. Steps must
  // be taken in order t = 0, 1, 2, ...
  virtual std::unique_ptr<SamplerState> make_sampler(
      const std::vector<int>& chords) const = 0;
  virtual std::vector<double> sampler_step(SamplerState& state, int prev_label,
                                           std::size_t t) const = 0;

  virtual std::map<std::string, std::string> config_map() const = 0;
};

struct ModelOptions {
  // LSTM family
  int layers = 7;
  int hidden = 128;
  int encoder_layers = 1;  // bidirectional chord encoder depth (bi only)
  // TCN family
  int tcn_kernel = 2;
  std::vector<int> tcn_dilations = {1, 2, 4, 8, 16, 32, 64, 128, 256};
  int tcn_residual_channels = 64;
  int tcn_skip_channels = 128;
};

// kind: "uni" | "bi" | "tcn".
std::unique_ptr<SequenceModel> make_model(const std::string& kind,
                                          const ModelOptions& options,
                                          std::uint64_t seed);

std::unique_ptr<SequenceModel> model_from_checkpoint(const Checkpoint& ck);

void save_model(const std::string& path, SequenceModel& model);
std::unique_ptr<SequenceModel> load_model(const std::string& path);

}  // namespace mgen
