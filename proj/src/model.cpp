#include "mgen/model.hpp"

#include "mgen/lstm.hpp"
#include "mgen/tcn.hpp"

namespace mgen {

std::unique_ptr<SequenceModel> make_model(const std::string& kind,
                                          const ModelOptions& options,
                                          std::uint64_t seed) {
  if (kind == "uni" || kind == "bi") {
    LstmConfig c;
    c.layers = options.layers;
    c.hidden = options.hidden;
    c.encoder_layers = options.encoder_layers;
    if (kind == "uni") return std::make_unique<UniLstmModel>(c, seed);
    return std::make_unique<BiLstmModel>(c, seed);
  }
  if (kind == "tcn") {
    TcnConfig c;
    c.kernel = options.tcn_kernel;
    c.dilations = options.tcn_dilations;
    c.residual_channels = options.tcn_residual_channels;
    c.skip_channels = options.tcn_skip_channels;
    return std::make_unique<TcnModel>(c, seed);
  }
  fail("unknown model kind '" + kind + "' (expected uni, bi, or tcn)");
}

std::unique_ptr<SequenceModel> model_from_checkpoint(const Checkpoint& ck) {
  const auto it = ck.config.find("kind");
  if (it == ck.config.end()) fail("checkpoint: missing model kind");
  if (it->second == "uni") return std::make_unique<UniLstmModel>(ck);
  if (it->second == "bi") return std::make_unique<BiLstmModel>(ck);
  if (it->second == "tcn") return std::make_unique<TcnModel>(ck);
  fail("checkpoint: unknown model kind '" + it->second + "'");
}

void save_model(const std::string& path, SequenceModel& model) {
  save_checkpoint(path, model.config_map(), model.params());
}

std::unique_ptr<SequenceModel> load_model(const std::string& path) {
  return model_from_checkpoint(load_checkpoint(path));
}

}  // namespace mgen
