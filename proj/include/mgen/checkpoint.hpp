#pragma once

#include <map>
#include <string>

#include "mgen/param_store.hpp"

namespace mgen {

// Single-file checkpoint: a text header (format tag, key/value config,
// parameter names + shapes in name order) followed by the raw
// little-endian doubles of every parameter in the same order.
// Round-trips bit-exactly.
struct Checkpoint {
  std::map<std::string, std::string> config;  // includes "kind"
  ParamStore params;
};

void save_checkpoint(const std::string& path,
                     const std::map<std::string, std::string>& config,
                     const ParamStore& params);

Checkpoint load_checkpoint(const std::string& path);

}  // namespace mgen
