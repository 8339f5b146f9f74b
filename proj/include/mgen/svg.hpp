#pragma once

#include <string>
#include <vector>

#include "mgen/oracle.hpp"
#include "mgen/stats.hpp"

namespace mgen {

// Hand-rolled SVG plots; enough for the three report figures without a
// plotting dependency.

// Line plot of IR over theta with the selected threshold marked.
std::string svg_ir_curve(const IRCurve& curve, const std::string& title);

// One horizontal bar per motif occurrence, motifs stacked vertically.
std::string svg_patterns(const PatternSet& patterns, std::size_t total_frames,
                         const std::string& title);

// Group-mean bars with MSE error bars.
std::string svg_model_report(const ModelComparisonReport& report,
                             const std::string& title);

}  // namespace mgen
