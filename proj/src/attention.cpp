#include "ricegrade/attention.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ricegrade {

Tensor4::Tensor4(int n, int c, int h, int w) : shape{n, c, h, w} {
  if (n < 1 || c < 1 || h < 1 || w < 1) {
    throw std::invalid_argument("Tensor4: all dimensions must be positive");
  }
  data.assign(static_cast<std::size_t>(n) * c * h * w, 0.0);
}

Tensor4 parse_tensor_json(const std::string& text) {
  nlohmann::json doc = nlohmann::json::parse(text);
  if (!doc.is_object() || !doc.contains("shape") || !doc.contains("data")) {
    throw std::runtime_error("tensor json must be {\"shape\": [N,C,H,W], \"data\": [...]}");
  }
  const auto& shape = doc["shape"];
  if (!shape.is_array() || shape.size() != 4) {
    throw std::runtime_error("tensor shape must have 4 entries");
  }
  Tensor4 t(shape[0].get<int>(), shape[1].get<int>(), shape[2].get<int>(),
            shape[3].get<int>());
  const auto& data = doc["data"];
  if (!data.is_array() || data.size() != t.size()) {
    std::ostringstream msg;
    msg << "tensor data length " << data.size() << " does not match shape product "
        << t.size();
    throw std::runtime_error(msg.str());
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    t.data[i] = data[i].get<double>();
    if (!std::isfinite(t.data[i])) {
      std::ostringstream msg;
      msg << "tensor data entry " << i << " is not finite";
      throw std::runtime_error(msg.str());
    }
  }
  return t;
}

Tensor4 read_tensor_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open tensor file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_tensor_json(buf.str());
}

std::string tensor_to_json(const Tensor4& t) {
  nlohmann::ordered_json doc;
  doc["shape"] = t.shape;
  doc["data"] = t.data;
  return doc.dump();
}

void write_tensor_json(const std::string& path, const Tensor4& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write tensor file: " + path);
  out << tensor_to_json(t) << '\n';
}

double stable_sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

Tensor4 simam(const Tensor4& x, const SimamParams& params) {
  if (params.lambda <= 0.0) {
    throw std::invalid_argument("simam: lambda must be positive");
  }
  const int spatial = x.h() * x.w();
  if (spatial < 2) {
    throw std::invalid_argument("simam: H*W must be >= 2");
  }
  const double n = static_cast<double>(spatial - 1);

  Tensor4 out = x;
  for (int in = 0; in < x.n(); ++in) {
    for (int ic = 0; ic < x.c(); ++ic) {
      const std::size_t base = x.index(in, ic, 0, 0);
      double mean = 0.0;
      for (int s = 0; s < spatial; ++s) mean += x.data[base + s];
      mean /= spatial;

      double v = 0.0;
      for (int s = 0; s < spatial; ++s) {
        const double d = x.data[base + s] - mean;
        v += d * d;
      }
      v /= n;

      const double denom = 4.0 * (v + params.lambda);
      for (int s = 0; s < spatial; ++s) {
        const double d = x.data[base + s] - mean;
        const double e_inv = d * d / denom + 0.5;
        out.data[base + s] = x.data[base + s] * stable_sigmoid(e_inv);
      }
    }
  }
  return out;
}

int eca_kernel_size(int channels, const EcaParams& params) {
  if (channels < 1) throw std::invalid_argument("eca: C must be >= 1");
  if (params.kernel_override) {
    const int k = *params.kernel_override;
    if (k < 1 || k % 2 == 0) {
      throw std::invalid_argument("eca: kernel override must be odd and >= 1");
    }
    return k;
  }
  if (params.gamma <= 0.0) {
    throw std::invalid_argument("eca: gamma must be positive");
  }
  const double t =
      std::abs(std::log2(static_cast<double>(channels)) / params.gamma +
               params.b / params.gamma);
  int k = static_cast<int>(std::ceil(t));
  if (k % 2 == 0) ++k;
  if (k < 1) k = 1;
  return k;
}

Tensor4 eca(const Tensor4& x, const EcaParams& params) {
  const int channels = x.c();
  const int k = eca_kernel_size(channels, params);

  std::vector<double> weights = params.kernel_weights;
  if (weights.empty()) {
    weights.assign(k, 1.0 / k);
  } else if (static_cast<int>(weights.size()) != k) {
    throw std::invalid_argument("eca: kernel weights length must equal kernel size");
  }
  const int half = k / 2;
  const int spatial = x.h() * x.w();

  Tensor4 out = x;
  std::vector<double> descriptor(channels);
  for (int in = 0; in < x.n(); ++in) {
    for (int ic = 0; ic < channels; ++ic) {
      const std::size_t base = x.index(in, ic, 0, 0);
      double sum = 0.0;
      for (int s = 0; s < spatial; ++s) sum += x.data[base + s];
      descriptor[ic] = sum / spatial;
    }
    for (int ic = 0; ic < channels; ++ic) {
      double conv = 0.0;
      for (int j = -half; j <= half; ++j) {
        const int src = ic + j;
        if (src < 0 || src >= channels) continue;  // zero padding
        conv += weights[j + half] * descriptor[src];
      }
      const double weight = stable_sigmoid(conv);
      const std::size_t base = x.index(in, ic, 0, 0);
      for (int s = 0; s < spatial; ++s) {
        out.data[base + s] = x.data[base + s] * weight;
      }
    }
  }
  return out;
}

TensorStats tensor_stats(const Tensor4& t) {
  TensorStats stats;
  if (t.data.empty()) return stats;
  stats.min = t.data[0];
  stats.max = t.data[0];
  double sum = 0.0;
  for (double v : t.data) {
    stats.min = std::min(stats.min, v);
    stats.max = std::max(stats.max, v);
    sum += v;
  }
  stats.mean = sum / static_cast<double>(t.data.size());
  return stats;
}

InsertionReport insertion_check(const Tensor4& x, const SimamParams& simam_params,
                                const EcaParams& eca_params) {
  InsertionReport report;
  report.shape = x.shape;
  report.simam_params_added = 0;  // SimAM carries no trainable state
  report.eca_params_added = eca_kernel_size(x.c(), eca_params);

  const Tensor4 s = simam(x, simam_params);
  const Tensor4 e = eca(x, eca_params);
  const Tensor4 se = eca(s, eca_params);
  const Tensor4 es = simam(e, simam_params);
  if (s.shape != x.shape || e.shape != x.shape || se.shape != x.shape ||
      es.shape != x.shape) {
    throw std::logic_error("insertion_check: attention op changed tensor shape");
  }

  report.simam_out = tensor_stats(s);
  report.eca_out = tensor_stats(e);
  report.simam_then_eca = tensor_stats(se);
  report.eca_then_simam = tensor_stats(es);
  double max_diff = 0.0;
  for (std::size_t i = 0; i < se.data.size(); ++i) {
    max_diff = std::max(max_diff, std::abs(se.data[i] - es.data[i]));
  }
  report.order_max_abs_diff = max_diff;
  report.orders_commute = max_diff == 0.0;
  return report;
}

}  // namespace ricegrade
