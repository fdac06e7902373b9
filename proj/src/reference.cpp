#include "rwconv/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rwconv {

Tensor4D direct_conv(const Tensor4D& input_any, const FilterBank& weights,
                     const ConvLayerSpec& spec) {
  const Tensor4D input = convert_layout(input_any, Layout::NHWC);
  check_input(spec, input);
  check_filter_bank(spec, weights);
  const OutputShape os = conv_output_shape(spec);
  const Dims& d = input.dims();
  const long in_h = spec.in_h, in_w = spec.in_w;
  Tensor4D out(Dims{d.n, static_cast<std::size_t>(os.h), static_cast<std::size_t>(os.w),
                    static_cast<std::size_t>(spec.out_m)},
               Layout::NHWC, 0.0f);
  auto dst = out.mutable_data();
  std::vector<double> acc(spec.out_m);
  for (std::size_t n = 0; n < d.n; ++n) {
    for (int i = 0; i < os.h; ++i) {
      for (int j = 0; j < os.w; ++j) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (int u = 0; u < spec.k_h; ++u) {
          const long y = static_cast<long>(i) * spec.stride + u - spec.pad.top;
          if (y < 0 || y >= in_h) continue;
          for (int v = 0; v < spec.k_w; ++v) {
            const long x = static_cast<long>(j) * spec.stride + v - spec.pad.left;
            if (x < 0 || x >= in_w) continue;
            for (int c = 0; c < spec.in_c; ++c) {
              const double value = input.at(n, y, x, c);
              for (int m = 0; m < spec.out_m; ++m) acc[m] += value * weights.at(u, v, c, m);
            }
          }
        }
        for (int m = 0; m < spec.out_m; ++m) dst[out.offset(n, i, j, m)] = static_cast<float>(acc[m]);
      }
    }
  }
  return out;
}

LoweredMatrix im2row(const Tensor4D& input_any, const ConvLayerSpec& spec) {
  const Tensor4D input = convert_layout(input_any, Layout::NHWC);
  check_input(spec, input);
  const OutputShape os = conv_output_shape(spec);
  const Dims& d = input.dims();
  const std::size_t channels = d.c;
  LoweredMatrix low;
  low.source = spec;
  low.rows = d.n * os.h * os.w;
  low.cols = static_cast<std::size_t>(spec.k_h) * spec.k_w * channels;
  low.data.assign(low.rows * low.cols, 0.0f);
  const auto src = input.data();
  std::size_t row = 0;
  for (std::size_t n = 0; n < d.n; ++n) {
    for (int i = 0; i < os.h; ++i) {
      for (int j = 0; j < os.w; ++j, ++row) {
        float* dst = low.data.data() + row * low.cols;
        for (int u = 0; u < spec.k_h; ++u) {
          const long y = static_cast<long>(i) * spec.stride + u - spec.pad.top;
          if (y < 0 || y >= spec.in_h) continue;
          for (int v = 0; v < spec.k_w; ++v) {
            const long x = static_cast<long>(j) * spec.stride + v - spec.pad.left;
            if (x < 0 || x >= spec.in_w) continue;
            std::copy_n(src.data() + input.offset(n, y, x, 0), channels,
                        dst + (static_cast<std::size_t>(u) * spec.k_w + v) * channels);
          }
        }
      }
    }
  }
  return low;
}

Tensor4D gemm_lowered(const LoweredMatrix& lowered, const FilterBank& weights, std::size_t batch,
                      GemmContext& ctx) {
  const ConvLayerSpec& spec = lowered.source;
  check_filter_bank(spec, weights);
  const OutputShape os = conv_output_shape(spec);
  if (lowered.rows != batch * os.h * os.w)
    throw Error(ErrorKind::Size, spec.name + ": lowered matrix rows do not match batch");
  Tensor4D out(Dims{batch, static_cast<std::size_t>(os.h), static_cast<std::size_t>(os.w),
                    static_cast<std::size_t>(spec.out_m)},
               Layout::NHWC, 0.0f);
  const ConstMatrixView w(weights.data().data(), lowered.cols, static_cast<std::size_t>(spec.out_m));
  gemm(lowered.view(), w, MatrixView(out.mutable_data(), lowered.rows, spec.out_m), Beta::Overwrite,
       ctx);
  return out;
}

Tensor4D im2row_conv(const Tensor4D& input, const FilterBank& weights, const ConvLayerSpec& spec,
                     GemmContext& ctx) {
  check_filter_bank(spec, weights);
  return gemm_lowered(im2row(input, spec), weights, input.dims().n, ctx);
}

Tensor4D im2row_conv(const Tensor4D& input, const FilterBank& weights, const ConvLayerSpec& spec) {
  GemmContext ctx;
  return im2row_conv(input, weights, spec, ctx);
}

std::uint64_t im2row_macs(const ConvLayerSpec& spec, std::size_t batch) {
  const OutputShape os = conv_output_shape(spec);
  return static_cast<std::uint64_t>(batch) * os.h * os.w * spec.k_h * spec.k_w * spec.in_c *
         spec.out_m;
}

double max_relative_error(std::span<const float> candidate, std::span<const float> reference) {
  if (candidate.size() != reference.size())
    throw Error(ErrorKind::Size, "max_relative_error: length mismatch");
  double worst = 0.0, scale = 1.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    if (!std::isfinite(candidate[i])) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, std::abs(static_cast<double>(candidate[i]) - reference[i]));
    scale = std::max(scale, std::abs(static_cast<double>(reference[i])));
  }
  return worst / scale;
}

}  // namespace rwconv
