#include "mgen/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mgen {

Tensor::Tensor(std::vector<std::size_t> shape) : shape_(std::move(shape)) {
  std::size_t n = 1;
  for (std::size_t d : shape_) n *= d;
  data_.assign(n, 0.0);
}

Tensor Tensor::from(std::initializer_list<std::size_t> shape,
                    std::initializer_list<double> values) {
  Tensor t{std::vector<std::size_t>(shape)};
  if (values.size() != t.size()) fail("Tensor::from: value count != shape product");
  std::copy(values.begin(), values.end(), t.data_.begin());
  return t;
}

void Tensor::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

bool Tensor::all_finite() const {
  for (double x : data_)
    if (!std::isfinite(x)) return false;
  return true;
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2) fail("matmul: rank-2 tensors required");
  if (a.dim(1) != b.dim(0)) fail("matmul: inner dimensions disagree");
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  Tensor c({m, n});
  const double* ap = a.data();
  const double* bp = b.data();
  double* cp = c.data();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double av = ap[i * k + p];
      if (av == 0.0) continue;
      const double* brow = bp + p * n;
      double* crow = cp + i * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
  return c;
}

double sigmoid(double x) {
  if (x >= 0.0) {
    double e = std::exp(-x);
    return 1.0 / (1.0 + e);
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

XentResult softmax_xent(const Tensor& logits, const std::vector<int>& targets) {
  if (logits.rank() != 2) fail("softmax_xent: (T,V) logits required");
  const std::size_t T = logits.dim(0), V = logits.dim(1);
  if (targets.size() != T) fail("softmax_xent: target length != T");
  if (!logits.all_finite()) fail("softmax_xent: non-finite logit");

  XentResult r;
  r.dlogits = Tensor({T, V});
  double total = 0.0;
  for (std::size_t t = 0; t < T; ++t) {
    const int y = targets[t];
    if (y < 0 || static_cast<std::size_t>(y) >= V)
      fail("softmax_xent: target out of range");
    const double* row = logits.data() + t * V;
    double mx = row[0];
    for (std::size_t j = 1; j < V; ++j) mx = std::max(mx, row[j]);
    double z = 0.0;
    for (std::size_t j = 0; j < V; ++j) z += std::exp(row[j] - mx);
    const double logz = std::log(z) + mx;
    total += logz - row[y];
    double* drow = r.dlogits.data() + t * V;
    const double inv_t = 1.0 / static_cast<double>(T);
    for (std::size_t j = 0; j < V; ++j)
      drow[j] = std::exp(row[j] - logz) * inv_t;
    drow[y] -= inv_t;
  }
  r.loss = total / static_cast<double>(T);
  return r;
}

void softmax_row(const double* logits, int n, double temperature, double* out) {
  double mx = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) mx = std::max(mx, logits[j]);
  double z = 0.0;
  for (int j = 0; j < n; ++j) {
    out[j] = std::exp((logits[j] - mx) / temperature);
    z += out[j];
  }
  for (int j = 0; j < n; ++j) out[j] /= z;
}

}  // namespace mgen
