#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mgen/param_store.hpp"
#include "mgen/rng.hpp"

namespace mgen {

struct GradCheckEntry {
  std::string param;
  std::size_t index = 0;    // worst coordinate
  double analytic = 0.0;
  double numeric = 0.0;
  double rel_error = 0.0;
  std::size_t checked = 0;  // coordinates sampled in this parameter
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;  // one per parameter, worst coordinate
  bool passed = false;
  double tolerance = 0.0;
  std::string summary() const;
};

// Central-difference verification of the analytic gradients currently held
// in store.grad. `loss` must be a deterministic function of the parameter
// values. Relative error per coordinate is |a-n|/(|a|+|n|), reported as 0
// when both magnitudes fall below 1e-10 (finite-difference noise floor).
// Up to max_coords coordinates per parameter are sampled; 0 means all.
GradCheckReport grad_check(const std::function<double()>& loss,
                           ParamStore& store, double epsilon, double tolerance,
                           std::size_t max_coords, Rng& rng);

}  // namespace mgen
