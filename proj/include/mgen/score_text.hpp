#pragma once

#include <string>

#include "mgen/score.hpp"

namespace mgen {

// Line-oriented textual score format, the canonical fixture format:
//   bpm <real>
//   tpb <int>
//   N <onset> <dur> <pitch>
//   C <onset> <dur> <Root>:<maj|min> | NC | pcs:{<int,...>}
// Blank lines and lines starting with '#' are ignored.
SymbolicScore parse_score_text(const std::string& text);

std::string render_score_text(const SymbolicScore& score);

// Names C, C#, D, ... B for roots 0..11.
const char* pitch_class_name(int pc);

}  // namespace mgen
