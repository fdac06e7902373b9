#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rwconv/cooktoom.hpp"
#include "rwconv/gemm.hpp"
#include "rwconv/tensor.hpp"

namespace rwconv {

// Binds one stride-1 layer to a 2-D tiling F(m_h x m_w, k_h x k_w). An axis
// whose kernel length is 1 uses the 1x1 identity transform, which is how
// 1xN and Nx1 layers run as one-dimensional algorithms.
struct WinogradPlan {
  ConvLayerSpec spec;
  TransformSet ts_h;  // row axis
  TransformSet ts_w;  // column axis
  int m_h = 1, m_w = 1;
  int t_h = 1, t_w = 1;
  int out_h = 0, out_w = 0;
  int tiles_h = 0, tiles_w = 0;
  int batch = 1;

  std::size_t regions() const noexcept {
    return static_cast<std::size_t>(batch) * tiles_h * tiles_w;
  }
  std::size_t tile_area() const noexcept { return static_cast<std::size_t>(t_h) * t_w; }
  std::size_t channels() const noexcept { return static_cast<std::size_t>(spec.in_c); }
  std::size_t filters() const noexcept { return static_cast<std::size_t>(spec.out_m); }
  std::string label() const;
};

struct PlanOptions {
  int batch = 1;
  GenerateOptions generate{};
};

// Throws ErrorKind::Unsupported when stride != 1 or an m does not fit its
// axis; construction errors from the transform generator propagate.
WinogradPlan build_plan(const ConvLayerSpec& spec, int m_h, int m_w, const PlanOptions& options = {});

enum class BatchRole { InputA, WeightB, OutputC };

const char* batch_role_name(BatchRole role) noexcept;

// tile_area matrices of identical shape stored back to back, row-major.
class TileMatrixBatch {
 public:
  TileMatrixBatch() = default;
  TileMatrixBatch(BatchRole role, std::size_t count, std::size_t rows, std::size_t cols);

  BatchRole role() const noexcept { return role_; }
  std::size_t count() const noexcept { return count_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::span<const float> data() const noexcept { return data_; }
  std::span<float> mutable_data() noexcept { return data_; }

  ConstMatrixView matrix(std::size_t index) const noexcept {
    return {data_.data() + index * rows_ * cols_, rows_, cols_};
  }
  MatrixView matrix(std::size_t index) noexcept {
    return {data_.data() + index * rows_ * cols_, rows_, cols_};
  }

 private:
  BatchRole role_ = BatchRole::InputA;
  std::size_t count_ = 0;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<float> data_;
};

struct ExecOptions {
  int threads = 1;  // tile GEMMs and region loops are split across this many threads
  GemmConfig gemm{};
};

// Weight transform: tile G_h * w * G_w^T of filter m, channel c goes to
// row c, column m of matrix (u * t_w + v). Result is reusable across calls.
TileMatrixBatch transform_weights(const WinogradPlan& plan, const FilterBank& weights);

// Input transform + scatter: region rho (row-major over batch, tile row,
// tile column) of channel c lands in row rho, column c of every A matrix.
TileMatrixBatch transform_input(const WinogradPlan& plan, const Tensor4D& input,
                                const ExecOptions& exec = {});

// tile_area independent GEMMs [R x C] * [C x M].
TileMatrixBatch batched_gemm(const TileMatrixBatch& a, const TileMatrixBatch& b,
                             GemmContext& ctx, const ExecOptions& exec = {});

// Gather + inverse transform into an NHWC (batch, out_h, out_w, M) tensor.
// Edge tiles are cropped to the true output extent.
Tensor4D transform_output(const WinogradPlan& plan, const TileMatrixBatch& c,
                          const ExecOptions& exec = {});

// Collects the tile_area values at (row, col) of every matrix into a
// t_h x t_w tile (the inverse of the scatter for a single element).
std::vector<float> gather_tile(const TileMatrixBatch& batch, const WinogradPlan& plan,
                               std::size_t row, std::size_t col);

Tensor4D convolve(const WinogradPlan& plan, const Tensor4D& input,
                  const TileMatrixBatch& transformed_weights, GemmContext& ctx,
                  const ExecOptions& exec = {});
Tensor4D convolve(const WinogradPlan& plan, const Tensor4D& input, const FilterBank& weights,
                  const ExecOptions& exec = {});

// Closed-form GEMM multiply count: tile_area * R * C * M.
std::uint64_t engine_macs(const WinogradPlan& plan) noexcept;

}  // namespace rwconv
