#pragma once

#include <map>
#include <string>
#include <vector>

#include "mgen/rng.hpp"
#include "mgen/tensor.hpp"

namespace mgen {

struct Param {
  Tensor value;
  Tensor grad;
  Tensor adam_m;  // first-moment estimate, lazily sized by adam_step
  Tensor adam_v;
};

// Named parameters with paired gradients and optimizer state. Names are
// unique; iteration order is lexicographic (std::map), which also fixes
// the checkpoint layout.
class ParamStore {
 public:
  Tensor& create(const std::string& name, std::vector<std::size_t> shape);
  bool has(const std::string& name) const { return params_.count(name) != 0; }
  Param& at(const std::string& name);
  const Param& at(const std::string& name) const;
  Tensor& value(const std::string& name) { return at(name).value; }
  Tensor& grad(const std::string& name) { return at(name).grad; }

  void zero_grads();
  std::size_t count() const { return params_.size(); }
  long step() const { return step_; }
  void set_step(long s) { step_ = s; }

  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

 private:
  std::map<std::string, Param> params_;
  long step_ = 0;

  friend void adam_step(ParamStore&, double, double, double, double);
};

struct AdamDefaults {
  static constexpr double lr = 1e-3;
  static constexpr double beta1 = 0.9;
  static constexpr double beta2 = 0.999;
  static constexpr double eps = 1e-8;
};

// Bias-corrected Adam over every parameter; grads are zeroed afterward.
// A non-finite gradient aborts before touching any value.
void adam_step(ParamStore& store, double lr = AdamDefaults::lr,
               double beta1 = AdamDefaults::beta1,
               double beta2 = AdamDefaults::beta2,
               double eps = AdamDefaults::eps);

void sgd_step(ParamStore& store, double lr);

// Glorot-uniform init: bound sqrt(6/(fan_in+fan_out)), fan counts taken
// from the trailing two dims (vectors are zero-filled by create()).
void init_uniform_glorot(Tensor& t, std::size_t fan_in, std::size_t fan_out,
                         Rng& rng);

}  // namespace mgen
