#pragma once

#include <optional>
#include <vector>

#include "ricegrade/tensor.hpp"

namespace ricegrade {

double stable_sigmoid(double z);

struct SimamParams {
  double lambda = 1e-4;
};

/// Parameter-free attention. Per (sample, channel) slice with n = H*W - 1:
/// d = (x - mean)^2, v = sum(d)/n, e_inv = d/(4(v + lambda)) + 0.5,
/// output = x * sigmoid(e_inv). Requires H*W >= 2.
Tensor4 simam(const Tensor4& x, const SimamParams& params = {});

struct EcaParams {
  double gamma = 2.0;
  double b = 1.0;
  std::optional<int> kernel_override;   // must be odd
  std::vector<double> kernel_weights;   // defaults to uniform 1/k
};

/// Adaptive kernel size: smallest odd integer >= |log2(C)/gamma + b/gamma|.
int eca_kernel_size(int channels, const EcaParams& params = {});

/// Channel attention: per-channel spatial means, a 1-D convolution across
/// the channel axis (zero padded), sigmoid, then one multiplicative weight
/// per channel.
Tensor4 eca(const Tensor4& x, const EcaParams& params = {});

struct TensorStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
};

TensorStats tensor_stats(const Tensor4& t);

/// Drop-in composability check: both ops preserve shape, SimAM adds no
/// parameters, ECA adds k, and the two insertion orders generally differ.
struct InsertionReport {
  std::array<int, 4> shape{0, 0, 0, 0};
  int simam_params_added = 0;
  int eca_params_added = 0;
  TensorStats simam_out;
  TensorStats eca_out;
  TensorStats simam_then_eca;
  TensorStats eca_then_simam;
  double order_max_abs_diff = 0.0;
  bool orders_commute = false;
};

InsertionReport insertion_check(const Tensor4& x,
                                const SimamParams& simam_params = {},
                                const EcaParams& eca_params = {});

}  // namespace ricegrade
