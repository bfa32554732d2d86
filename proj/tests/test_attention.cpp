#include <cmath>
#include <random>

#include "doctest.h"

#include "ricegrade/attention.hpp"
#include "test_util.hpp"

using namespace ricegrade;

TEST_SUITE_BEGIN("attention");

TEST_CASE("constant slice attenuates by sigmoid(0.5)") {
  Tensor4 x(1, 2, 3, 3);
  for (auto& v : x.data) v = 5.0;
  const Tensor4 out = simam(x);
  const double expected = 5.0 * stable_sigmoid(0.5);
  CHECK(expected == doctest::Approx(3.1122966).epsilon(1e-7));
  for (double v : out.data) {
    CHECK(v == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("simam preserves shape and rejects single-pixel slices") {
  std::mt19937 gen(1);
  const Tensor4 x = testutil::random_tensor(2, 3, 4, 5, gen);
  const Tensor4 out = simam(x);
  CHECK(out.shape == std::array<int, 4>{2, 3, 4, 5});
  CHECK(out.size() == x.size());

  Tensor4 tiny(1, 1, 1, 1);
  CHECK_THROWS_AS(simam(tiny), std::invalid_argument);
}

TEST_CASE("simam matches the scalar oracle") {
  std::mt19937 gen(2);
  const Tensor4 x = testutil::random_tensor(1, 2, 3, 3, gen);
  const Tensor4 got = simam(x, {1e-4});
  const Tensor4 want = testutil::simam_oracle(x, 1e-4);
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(std::abs(got.data[i] - want.data[i]) < 1e-9);
  }
}

TEST_CASE("simam shrinks magnitudes and keeps signs") {
  std::mt19937 gen(3);
  const Tensor4 x = testutil::random_tensor(2, 4, 3, 3, gen);
  const Tensor4 out = simam(x);
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(std::abs(out.data[i]) <= std::abs(x.data[i]));
    if (x.data[i] != 0.0) {
      CHECK(std::signbit(out.data[i]) == std::signbit(x.data[i]));
    }
  }
}

TEST_CASE("simam commutes with spatial permutation") {
  std::mt19937 gen(4);
  Tensor4 x = testutil::random_tensor(1, 2, 4, 4, gen);
  const int spatial = 16;
  std::vector<int> perm(spatial);
  for (int i = 0; i < spatial; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), gen);

  Tensor4 permuted = x;
  for (int c = 0; c < x.c(); ++c) {
    for (int s = 0; s < spatial; ++s) {
      permuted.data[c * spatial + perm[s]] = x.data[c * spatial + s];
    }
  }
  const Tensor4 out = simam(x);
  const Tensor4 out_permuted = simam(permuted);
  for (int c = 0; c < x.c(); ++c) {
    for (int s = 0; s < spatial; ++s) {
      CHECK(out_permuted.data[c * spatial + perm[s]] ==
            doctest::Approx(out.data[c * spatial + s]).epsilon(1e-12));
    }
  }
}

TEST_CASE("adaptive kernel sizes") {
  CHECK(eca_kernel_size(8) == 3);   // |3/2 + 1/2| = 2 -> 3
  CHECK(eca_kernel_size(3) == 3);   // 1.292 -> 3
  CHECK(eca_kernel_size(64) == 5);  // 3.5 -> 5
  CHECK(eca_kernel_size(1) == 1);   // 0.5 -> 1
  CHECK(eca_kernel_size(2) == 1);   // exactly 1.0

  EcaParams override_params;
  override_params.kernel_override = 7;
  CHECK(eca_kernel_size(4, override_params) == 7);
  override_params.kernel_override = 4;
  CHECK_THROWS_AS(eca_kernel_size(4, override_params), std::invalid_argument);
}

TEST_CASE("eca maps zero to zero") {
  Tensor4 x(2, 8, 3, 3);
  const Tensor4 out = eca(x);
  for (double v : out.data) CHECK(v == 0.0);
}

TEST_CASE("eca with k=1 scales each channel by sigmoid of its mean") {
  std::mt19937 gen(5);
  const Tensor4 x = testutil::random_tensor(1, 4, 2, 2, gen);
  EcaParams params;
  params.kernel_override = 1;
  params.kernel_weights = {1.0};
  const Tensor4 out = eca(x, params);
  for (int c = 0; c < 4; ++c) {
    double mean = 0.0;
    for (int s = 0; s < 4; ++s) mean += x.data[c * 4 + s];
    mean /= 4.0;
    const double w = stable_sigmoid(mean);
    for (int s = 0; s < 4; ++s) {
      CHECK(out.data[c * 4 + s] ==
            doctest::Approx(x.data[c * 4 + s] * w).epsilon(1e-12));
    }
  }
}

TEST_CASE("eca applies one scalar per channel") {
  std::mt19937 gen(6);
  const Tensor4 x = testutil::random_tensor(2, 6, 3, 4, gen, 0.5, 2.0);
  const Tensor4 out = eca(x);
  const int spatial = 12;
  for (int n = 0; n < 2; ++n) {
    for (int c = 0; c < 6; ++c) {
      const std::size_t base = x.index(n, c, 0, 0);
      const double ratio = out.data[base] / x.data[base];
      for (int s = 1; s < spatial; ++s) {
        CHECK(std::abs(out.data[base + s] / x.data[base + s] - ratio) < 1e-12);
      }
      CHECK(ratio > 0.0);
      CHECK(ratio < 1.0);  // sigmoid output
    }
  }
}

TEST_CASE("k=1 eca commutes with channel permutation") {
  std::mt19937 gen(7);
  const Tensor4 x = testutil::random_tensor(1, 5, 2, 3, gen);
  EcaParams params;
  params.kernel_override = 1;
  const int spatial = 6;
  std::vector<int> perm = {3, 0, 4, 1, 2};

  Tensor4 permuted(1, 5, 2, 3);
  for (int c = 0; c < 5; ++c) {
    for (int s = 0; s < spatial; ++s) {
      permuted.data[perm[c] * spatial + s] = x.data[c * spatial + s];
    }
  }
  const Tensor4 out = eca(x, params);
  const Tensor4 out_permuted = eca(permuted, params);
  for (int c = 0; c < 5; ++c) {
    for (int s = 0; s < spatial; ++s) {
      CHECK(out_permuted.data[perm[c] * spatial + s] ==
            doctest::Approx(out.data[c * spatial + s]).epsilon(1e-12));
    }
  }
}

TEST_CASE("finite inputs stay finite through both ops") {
  std::mt19937 gen(8);
  const Tensor4 x = testutil::random_tensor(2, 3, 4, 4, gen, -100.0, 100.0);
  for (const Tensor4& out : {simam(x), eca(x)}) {
    for (double v : out.data) CHECK(std::isfinite(v));
  }
}

TEST_CASE("insertion check reports composability") {
  std::mt19937 gen(9);
  const Tensor4 x = testutil::random_tensor(1, 3, 8, 8, gen);
  const InsertionReport report = insertion_check(x);
  CHECK(report.shape == std::array<int, 4>{1, 3, 8, 8});
  CHECK(report.simam_params_added == 0);
  CHECK(report.eca_params_added == eca_kernel_size(3));
  CHECK(report.order_max_abs_diff > 0.0);  // orders differ in general
  CHECK_FALSE(report.orders_commute);
}

TEST_CASE("tensor json round trip") {
  std::mt19937 gen(10);
  const Tensor4 x = testutil::random_tensor(2, 2, 2, 3, gen);
  const Tensor4 back = parse_tensor_json(tensor_to_json(x));
  CHECK(back.shape == x.shape);
  CHECK(back.data == x.data);

  CHECK_THROWS_AS(parse_tensor_json("{\"shape\": [1,1,2], \"data\": []}"),
                  std::runtime_error);
  CHECK_THROWS_AS(
      parse_tensor_json("{\"shape\": [1,1,2,2], \"data\": [1,2,3]}"),
      std::runtime_error);
  CHECK_THROWS_AS(parse_tensor_json("not json"), std::exception);
  CHECK_THROWS_AS(
      parse_tensor_json("{\"shape\": [1,1,1,2], \"data\": [1, \"NaN\"]}"),
      std::exception);
}

TEST_SUITE_END();
