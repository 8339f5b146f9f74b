#include "mgen/param_store.hpp"

#include <cmath>

namespace mgen {

Tensor& ParamStore::create(const std::string& name,
                           std::vector<std::size_t> shape) {
  if (params_.count(name)) fail("ParamStore: duplicate parameter '" + name + "'");
  Param p;
  p.value = Tensor(shape);
  p.grad = Tensor(shape);
  return params_.emplace(name, std::move(p)).first->second.value;
}

Param& ParamStore::at(const std::string& name) {
  auto it = params_.find(name);
  if (it == params_.end()) fail("ParamStore: unknown parameter '" + name + "'");
  return it->second;
}

const Param& ParamStore::at(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end()) fail("ParamStore: unknown parameter '" + name + "'");
  return it->second;
}

void ParamStore::zero_grads() {
  for (auto& [name, p] : params_) p.grad.fill(0.0);
}

void adam_step(ParamStore& store, double lr, double beta1, double beta2,
               double eps) {
  for (auto& [name, p] : store.params_)
    if (!p.grad.all_finite())
      fail("adam_step: non-finite gradient in '" + name + "'");

  const long t = store.step_ + 1;
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t));
  for (auto& [name, p] : store.params_) {
    if (p.adam_m.size() != p.value.size()) {
      p.adam_m = Tensor(p.value.shape());
      p.adam_v = Tensor(p.value.shape());
    }
    double* v = p.value.data();
    double* g = p.grad.data();
    double* m1 = p.adam_m.data();
    double* m2 = p.adam_v.data();
    const std::size_t n = p.value.size();
    for (std::size_t i = 0; i < n; ++i) {
      m1[i] = beta1 * m1[i] + (1.0 - beta1) * g[i];
      m2[i] = beta2 * m2[i] + (1.0 - beta2) * g[i] * g[i];
      const double mh = m1[i] / bc1;
      const double vh = m2[i] / bc2;
      v[i] -= lr * mh / (std::sqrt(vh) + eps);
      g[i] = 0.0;
    }
  }
  store.step_ = t;
}

void sgd_step(ParamStore& store, double lr) {
  for (auto& [name, p] : store) {
    if (!p.grad.all_finite())
      fail("sgd_step: non-finite gradient in '" + name + "'");
    double* v = p.value.data();
    double* g = p.grad.data();
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      v[i] -= lr * g[i];
      g[i] = 0.0;
    }
  }
  store.set_step(store.step() + 1);
}

void init_uniform_glorot(Tensor& t, std::size_t fan_in, std::size_t fan_out,
                         Rng& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-a, a);
}

}  // namespace mgen
