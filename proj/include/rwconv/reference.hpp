#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rwconv/gemm.hpp"
#include "rwconv/tensor.hpp"

namespace rwconv {

// Naive convolution (cross-correlation, any stride) with double-precision
// accumulation; the ground truth every fast path is checked against.
Tensor4D direct_conv(const Tensor4D& input, const FilterBank& weights, const ConvLayerSpec& spec);

// im2row lowering: one row per output pixel (row-major over batch, out row,
// out col); column (u * k_w + v) * C + c holds the input at kernel offset
// (u, v), channel c, or 0 where the receptive field overlaps padding.
struct LoweredMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<float> data;
  ConvLayerSpec source;

  ConstMatrixView view() const noexcept { return {data.data(), rows, cols}; }
};

LoweredMatrix im2row(const Tensor4D& input, const ConvLayerSpec& spec);

// im2row followed by one GEMM [(out pixels) x (k_h k_w C)] * [(k_h k_w C) x M].
// The GEMM result is already the NHWC output.
Tensor4D im2row_conv(const Tensor4D& input, const FilterBank& weights, const ConvLayerSpec& spec,
                     GemmContext& ctx);
Tensor4D im2row_conv(const Tensor4D& input, const FilterBank& weights, const ConvLayerSpec& spec);

// Same, given an already lowered input; used to time the two stages apart.
Tensor4D gemm_lowered(const LoweredMatrix& lowered, const FilterBank& weights,
                      std::size_t batch, GemmContext& ctx);

// Closed-form baseline multiply count: out pixels * k_h * k_w * C * M.
std::uint64_t im2row_macs(const ConvLayerSpec& spec, std::size_t batch = 1);

// max |a - b| / max(1, max |reference|); the tolerance metric used by
// every oracle comparison.
double max_relative_error(std::span<const float> candidate, std::span<const float> reference);

}  // namespace rwconv
