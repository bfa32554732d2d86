#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace ricegrade {

/// Dense NCHW feature map, row-major (W fastest).
struct Tensor4 {
  std::array<int, 4> shape{0, 0, 0, 0};  // N, C, H, W
  std::vector<double> data;

  Tensor4() = default;
  Tensor4(int n, int c, int h, int w);

  std::size_t size() const { return data.size(); }
  int n() const { return shape[0]; }
  int c() const { return shape[1]; }
  int h() const { return shape[2]; }
  int w() const { return shape[3]; }

  std::size_t index(int in, int ic, int ih, int iw) const {
    return ((static_cast<std::size_t>(in) * shape[1] + ic) * shape[2] + ih) *
               shape[3] +
           iw;
  }
  double at(int in, int ic, int ih, int iw) const {
    return data[index(in, ic, ih, iw)];
  }
  double& at(int in, int ic, int ih, int iw) {
    return data[index(in, ic, ih, iw)];
  }
};

/// File format: {"shape": [N,C,H,W], "data": [flat row-major]}.
/// Throws std::runtime_error with a diagnostic on malformed input.
Tensor4 read_tensor_json(const std::string& path);
Tensor4 parse_tensor_json(const std::string& text);
std::string tensor_to_json(const Tensor4& t);
void write_tensor_json(const std::string& path, const Tensor4& t);

}  // namespace ricegrade
