#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "mgen/common.hpp"

namespace mgen {

// Dense row-major array of doubles. The only numeric substrate in the
// library; every model keeps its state in these.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape);
  Tensor(std::initializer_list<std::size_t> shape)
      : Tensor(std::vector<std::size_t>(shape)) {}

  static Tensor from(std::initializer_list<std::size_t> shape,
                     std::initializer_list<double> values);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t i) const { return shape_[i]; }
  std::size_t size() const { return data_.size(); }
  bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  double& operator()(std::size_t i) { return data_[i]; }
  double operator()(std::size_t i) const { return data_[i]; }
  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * shape_[1] + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * shape_[1] + j];
  }
  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * shape_[1] + j) * shape_[2] + k];
  }

  void fill(double v);
  bool all_finite() const;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

// (m,k) x (k,n) -> (m,n). Throws on inner-dimension mismatch.
Tensor matmul(const Tensor& a, const Tensor& b);

double sigmoid(double x);

// Mean cross-entropy over rows of `logits` (T,V) against integer targets,
// natural log, max-subtraction stabilized. dlogits = (softmax - onehot)/T.
struct XentResult {
  double loss = 0.0;
  Tensor dlogits;
};
XentResult softmax_xent(const Tensor& logits, const std::vector<int>& targets);

// Softmax of one logit row with optional temperature; in-place safe.
void softmax_row(const double* logits, int n, double temperature, double* out);

}  // namespace mgen
