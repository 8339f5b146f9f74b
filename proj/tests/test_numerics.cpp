#include <cmath>
#include <cstring>
#include <filesystem>

#include "doctest.h"
#include "mgen/checkpoint.hpp"
#include "mgen/grad_check.hpp"
#include "mgen/param_store.hpp"
#include "mgen/rng.hpp"
#include "mgen/tensor.hpp"

using namespace mgen;

TEST_SUITE_BEGIN("numerics");

TEST_CASE("matmul identity") {
  Tensor eye = Tensor::from({2, 2}, {1, 0, 0, 1});
  Tensor b = Tensor::from({2, 3}, {1, 2, 3, 4, 5, 6});
  Tensor c = matmul(eye, b);
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(c[i] == b[i]);
}

TEST_CASE("matmul small case") {
  Tensor a = Tensor::from({2, 2}, {1, 2, 3, 4});
  Tensor b = Tensor::from({2, 1}, {5, 6});
  Tensor c = matmul(a, b);
  CHECK(c(0, 0) == 17.0);
  CHECK(c(1, 0) == 39.0);
}

TEST_CASE("matmul empty and mismatch") {
  Tensor a({0, 3});
  Tensor b({3, 4});
  Tensor c = matmul(a, b);
  CHECK(c.dim(0) == 0);
  CHECK(c.dim(1) == 4);
  Tensor bad({2, 2});
  CHECK_THROWS_AS(matmul(a, bad), Error);
}

TEST_CASE("matmul associativity on random triples") {
  Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    Tensor a({3, 4}), b({4, 5}), c({5, 2});
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = rng.uniform(-2, 2);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = rng.uniform(-2, 2);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = rng.uniform(-2, 2);
    Tensor left = matmul(matmul(a, b), c);
    Tensor right = matmul(a, matmul(b, c));
    for (std::size_t i = 0; i < left.size(); ++i) {
      const double denom = std::abs(left[i]) + std::abs(right[i]) + 1.0;
      CHECK(std::abs(left[i] - right[i]) / denom < 1e-9);
    }
  }
}

TEST_CASE("softmax_xent uniform logits") {
  Tensor logits({4, 130});
  std::vector<int> targets = {0, 60, 129, 5};
  XentResult r = softmax_xent(logits, targets);
  CHECK(r.loss == doctest::Approx(std::log(130.0)).epsilon(1e-12));
}

TEST_CASE("softmax_xent saturated target") {
  Tensor logits({2, 10});
  logits(0, 3) = 1000.0;
  logits(1, 7) = 1000.0;
  XentResult r = softmax_xent(logits, {3, 7});
  CHECK(r.loss < 1e-9);
}

TEST_CASE("softmax_xent matches long-double scalar oracle") {
  Rng rng(42);
  Tensor logits({3, 5});
  for (std::size_t i = 0; i < logits.size(); ++i) logits[i] = rng.uniform(-3, 3);
  std::vector<int> targets = {2, 0, 4};

  long double total = 0.0L;
  Tensor dref({3, 5});
  for (std::size_t t = 0; t < 3; ++t) {
    long double mx = logits(t, 0);
    for (std::size_t j = 1; j < 5; ++j)
      mx = std::max<long double>(mx, logits(t, j));
    long double z = 0.0L;
    for (std::size_t j = 0; j < 5; ++j) z += expl(logits(t, j) - mx);
    const long double logz = logl(z) + mx;
    total += logz - logits(t, targets[t]);
    for (std::size_t j = 0; j < 5; ++j) {
      long double p = expl(logits(t, j) - logz);
      dref(t, j) = static_cast<double>((p - (static_cast<int>(j) == targets[t] ? 1.0L : 0.0L)) / 3.0L);
    }
  }
  XentResult r = softmax_xent(logits, targets);
  CHECK(std::abs(r.loss - static_cast<double>(total / 3.0L)) < 1e-12);
  for (std::size_t i = 0; i < dref.size(); ++i)
    CHECK(std::abs(r.dlogits[i] - dref[i]) < 1e-12);
}

TEST_CASE("softmax rows sum to one") {
  Rng rng(3);
  Tensor logits({6, 17});
  for (std::size_t i = 0; i < logits.size(); ++i) logits[i] = rng.uniform(-5, 5);
  std::vector<int> targets(6, 0);
  XentResult r = softmax_xent(logits, targets);
  // dlogits*T + onehot = softmax row
  for (std::size_t t = 0; t < 6; ++t) {
    double sum = 0.0;
    for (std::size_t j = 0; j < 17; ++j) sum += r.dlogits(t, j) * 6.0;
    sum += 1.0;  // the subtracted one-hot
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(r.loss >= 0.0);
}

TEST_CASE("adam zero grads leave parameters unchanged") {
  ParamStore store;
  Tensor& p = store.create("p", {3});
  p[0] = 1.0;
  p[1] = -2.0;
  p[2] = 0.5;
  adam_step(store);
  CHECK(p[0] == 1.0);
  CHECK(p[1] == -2.0);
  CHECK(p[2] == 0.5);
}

TEST_CASE("adam first step matches closed form") {
  ParamStore store;
  store.create("p", {1});
  store.grad("p")[0] = 1.0;
  adam_step(store, 0.1);
  // bias-corrected first step: -lr * 1 / (1 + eps)
  CHECK(store.value("p")[0] == doctest::Approx(-0.1).epsilon(1e-6));
  CHECK(store.grad("p")[0] == 0.0);  // zeroed afterward
}

TEST_CASE("adam is deterministic") {
  auto run = [] {
    ParamStore store;
    store.create("a", {4});
    Rng rng(5);
    for (int step = 0; step < 25; ++step) {
      for (std::size_t i = 0; i < 4; ++i)
        store.grad("a")[i] = rng.uniform(-1, 1);
      adam_step(store);
    }
    return store.value("a");
  };
  Tensor x = run(), y = run();
  CHECK(std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) == 0);
}

TEST_CASE("adam aborts on non-finite gradient") {
  ParamStore store;
  store.create("p", {1});
  store.grad("p")[0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_WITH_AS(adam_step(store),
                       "adam_step: non-finite gradient in 'p'", Error);
}

TEST_CASE("grad_check passes on quadratic loss") {
  ParamStore store;
  Tensor& x = store.create("x", {5});
  Rng rng(11);
  for (std::size_t i = 0; i < 5; ++i) x[i] = rng.uniform(-1, 1);
  auto loss = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < 5; ++i) s += 0.5 * x[i] * x[i];
    return s;
  };
  for (std::size_t i = 0; i < 5; ++i) store.grad("x")[i] = x[i];
  Rng coord(1);
  GradCheckReport report = grad_check(loss, store, 1e-6, 1e-6, 0, coord);
  CHECK(report.passed);
}

TEST_CASE("grad_check flags a doubled gradient with rel error 1/3") {
  ParamStore store;
  Tensor& x = store.create("x", {3});
  x[0] = 0.7;
  x[1] = -0.4;
  x[2] = 1.3;
  auto loss = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < 3; ++i) s += 0.5 * x[i] * x[i];
    return s;
  };
  for (std::size_t i = 0; i < 3; ++i) store.grad("x")[i] = 2.0 * x[i];
  Rng coord(1);
  GradCheckReport report = grad_check(loss, store, 1e-6, 1e-4, 0, coord);
  CHECK_FALSE(report.passed);
  REQUIRE(report.entries.size() == 1);
  CHECK(report.entries[0].rel_error == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
}

TEST_CASE("checkpoint round-trips bit-exactly") {
  ParamStore store;
  Rng rng(23);
  store.create("w", {3, 4});
  store.create("b", {4});
  store.create("deep.nested.name", {2, 2, 2});
  for (auto& [name, p] : store)
    for (std::size_t i = 0; i < p.value.size(); ++i)
      p.value[i] = rng.uniform(-1e3, 1e3) * std::pow(10.0, rng.uniform(-12, 0));
  store.set_step(137);

  const std::string path =
      (std::filesystem::temp_directory_path() / "mgen_ckpt_test.ckpt").string();
  save_checkpoint(path, {{"kind", "test"}, {"note", "round trip"}}, store);
  Checkpoint ck = load_checkpoint(path);

  CHECK(ck.config.at("kind") == "test");
  CHECK(ck.params.step() == 137);
  CHECK(ck.params.count() == store.count());
  for (const auto& [name, p] : store) {
    const Tensor& loaded = ck.params.at(name).value;
    REQUIRE(loaded.same_shape(p.value));
    CHECK(std::memcmp(loaded.data(), p.value.data(),
                      p.value.size() * sizeof(double)) == 0);
  }
  std::filesystem::remove(path);
}

TEST_SUITE_END();
