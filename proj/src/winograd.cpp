#include "rwconv/winograd.hpp"

#include <algorithm>
#include <utility>

#include "parallel.hpp"

namespace rwconv {

namespace {

// Nonzero coefficients of each matrix row; most transform entries are 0 or +-1.
using SparseRows = std::vector<std::vector<std::pair<int, float>>>;

SparseRows sparse_rows(const Matrix<float>& m) {
  SparseRows rows(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0.0f) rows[i].emplace_back(static_cast<int>(j), m(i, j));
  return rows;
}

inline void axpy(float coef, const float* x, float* y, std::size_t n) {
  if (coef == 1.0f) {
    for (std::size_t i = 0; i < n; ++i) y[i] += x[i];
  } else if (coef == -1.0f) {
    for (std::size_t i = 0; i < n; ++i) y[i] -= x[i];
  } else {
    for (std::size_t i = 0; i < n; ++i) y[i] += coef * x[i];
  }
}

// out = left * in * right^T where every tile element is a vector of `vec`
// contiguous values (channels or filters). in: [rows_in][cols_in][vec],
// tmp: [rows_in][cols_out][vec], out: [rows_out][cols_out][vec].
void transform_tile(const SparseRows& left, const SparseRows& right, const float* in,
                    std::size_t rows_in, std::size_t cols_in, float* tmp, float* out,
                    std::size_t vec) {
  const std::size_t cols_out = right.size();
  for (std::size_t i = 0; i < rows_in; ++i) {
    for (std::size_t b = 0; b < cols_out; ++b) {
      float* dst = tmp + (i * cols_out + b) * vec;
      std::fill_n(dst, vec, 0.0f);
      for (const auto& [j, coef] : right[b]) axpy(coef, in + (i * cols_in + j) * vec, dst, vec);
    }
  }
  for (std::size_t a = 0; a < left.size(); ++a) {
    for (std::size_t b = 0; b < cols_out; ++b) {
      float* dst = out + (a * cols_out + b) * vec;
      std::fill_n(dst, vec, 0.0f);
      for (const auto& [i, coef] : left[a]) axpy(coef, tmp + (i * cols_out + b) * vec, dst, vec);
    }
  }
}

std::string dims_text(std::size_t count, std::size_t rows, std::size_t cols) {
  return std::to_string(count) + " x [" + std::to_string(rows) + "x" + std::to_string(cols) + "]";
}

}  // namespace

std::string WinogradPlan::label() const {
  if (spec.k_h == 1) return "F(" + std::to_string(m_w) + ",1x" + std::to_string(spec.k_w) + ")";
  if (spec.k_w == 1) return "F(" + std::to_string(m_h) + "," + std::to_string(spec.k_h) + "x1)";
  return "F(" + std::to_string(m_h) + "x" + std::to_string(m_w) + "," + std::to_string(spec.k_h) +
         "x" + std::to_string(spec.k_w) + ")";
}

WinogradPlan build_plan(const ConvLayerSpec& spec, int m_h, int m_w, const PlanOptions& options) {
  if (spec.stride != 1) {
    throw Error(ErrorKind::Unsupported,
                spec.name + ": Winograd tiling requires stride 1, layer has stride " +
                    std::to_string(spec.stride));
  }
  if (spec.in_c < 1 || spec.out_m < 1)
    throw Error(ErrorKind::Shape, spec.name + ": channel counts must be positive");
  if (options.batch < 1) throw Error(ErrorKind::Shape, spec.name + ": batch must be >= 1");
  const OutputShape out = conv_output_shape(spec);

  // A length-1 kernel axis is never tiled.
  if (spec.k_h == 1) m_h = 1;
  if (spec.k_w == 1) m_w = 1;
  if (m_h < 1 || m_w < 1) {
    throw Error(ErrorKind::Unsupported, spec.name + ": output tile sizes must be >= 1");
  }

  WinogradPlan plan;
  plan.spec = spec;
  plan.ts_h = default_transform(m_h, spec.k_h, options.generate);
  plan.ts_w = default_transform(m_w, spec.k_w, options.generate);
  plan.m_h = m_h;
  plan.m_w = m_w;
  plan.t_h = plan.ts_h.t;
  plan.t_w = plan.ts_w.t;
  plan.out_h = out.h;
  plan.out_w = out.w;
  plan.tiles_h = (out.h + m_h - 1) / m_h;
  plan.tiles_w = (out.w + m_w - 1) / m_w;
  plan.batch = options.batch;
  return plan;
}

const char* batch_role_name(BatchRole role) noexcept {
  switch (role) {
    case BatchRole::InputA: return "A";
    case BatchRole::WeightB: return "B";
    case BatchRole::OutputC: return "C";
  }
  return "?";
}

TileMatrixBatch::TileMatrixBatch(BatchRole role, std::size_t count, std::size_t rows,
                                 std::size_t cols)
    : role_(role), count_(count), rows_(rows), cols_(cols), data_(count * rows * cols, 0.0f) {}

TileMatrixBatch transform_weights(const WinogradPlan& plan, const FilterBank& weights) {
  check_filter_bank(plan.spec, weights);
  const std::size_t kh = plan.spec.k_h, kw = plan.spec.k_w;
  const std::size_t th = plan.t_h, tw = plan.t_w;
  const std::size_t channels = plan.channels(), filters = plan.filters();
  TileMatrixBatch b(BatchRole::WeightB, plan.tile_area(), channels, filters);

  const SparseRows gh = sparse_rows(plan.ts_h.g_f);
  const SparseRows gw = sparse_rows(plan.ts_w.g_f);
  std::vector<float> tile(kh * kw * filters), tmp(kh * tw * filters), out(th * tw * filters);
  auto dst = b.mutable_data();
  const auto src = weights.data();
  for (std::size_t c = 0; c < channels; ++c) {
    // All filters of channel c at once: tile[u][v][m].
    for (std::size_t uv = 0; uv < kh * kw; ++uv)
      std::copy_n(src.data() + (uv * channels + c) * filters, filters, tile.data() + uv * filters);
    transform_tile(gh, gw, tile.data(), kh, kw, tmp.data(), out.data(), filters);
    for (std::size_t e = 0; e < th * tw; ++e)
      std::copy_n(out.data() + e * filters, filters,
                  dst.data() + (e * channels + c) * filters);
  }
  return b;
}

TileMatrixBatch transform_input(const WinogradPlan& plan, const Tensor4D& input,
                                const ExecOptions& exec) {
  check_input(plan.spec, input);
  if (input.dims().n != static_cast<std::size_t>(plan.batch)) {
    throw Error(ErrorKind::Size, plan.spec.name + ": input batch " +
                                     std::to_string(input.dims().n) + " != plan batch " +
                                     std::to_string(plan.batch));
  }
  const std::size_t th = plan.t_h, tw = plan.t_w, channels = plan.channels();
  const std::size_t regions = plan.regions();
  const std::size_t per_image = static_cast<std::size_t>(plan.tiles_h) * plan.tiles_w;
  TileMatrixBatch a(BatchRole::InputA, plan.tile_area(), regions, channels);

  const SparseRows bh = sparse_rows(plan.ts_h.bt_f);
  const SparseRows bw = sparse_rows(plan.ts_w.bt_f);
  float* dst = a.mutable_data().data();
  const std::size_t matrix_stride = regions * channels;

  detail::parallel_for(regions, exec.threads, [&](std::size_t begin, std::size_t end, std::size_t) {
    std::vector<float> region(th * tw * channels), tmp(th * tw * channels), out(th * tw * channels);
    for (std::size_t rho = begin; rho < end; ++rho) {
      const std::size_t n = rho / per_image;
      const std::size_t ti = (rho % per_image) / plan.tiles_w;
      const std::size_t tj = rho % plan.tiles_w;
      const long row0 = static_cast<long>(ti) * plan.m_h - plan.spec.pad.top;
      const long col0 = static_cast<long>(tj) * plan.m_w - plan.spec.pad.left;
      extract_region(input, n, row0, col0, th, tw, region);
      transform_tile(bh, bw, region.data(), th, tw, tmp.data(), out.data(), channels);
      // Scatter: each transformed element is a full row of C channels.
      for (std::size_t e = 0; e < th * tw; ++e)
        std::copy_n(out.data() + e * channels, channels,
                    dst + e * matrix_stride + rho * channels);
    }
  });
  return a;
}

TileMatrixBatch batched_gemm(const TileMatrixBatch& a, const TileMatrixBatch& b, GemmContext& ctx,
                             const ExecOptions& exec) {
  if (a.role() != BatchRole::InputA || b.role() != BatchRole::WeightB)
    throw Error(ErrorKind::Size, "batched_gemm expects an A batch and a B batch");
  if (a.count() != b.count() || a.cols() != b.rows()) {
    throw Error(ErrorKind::Size, "batched_gemm: " + dims_text(a.count(), a.rows(), a.cols()) +
                                     " * " + dims_text(b.count(), b.rows(), b.cols()));
  }
  TileMatrixBatch c(BatchRole::OutputC, a.count(), a.rows(), b.cols());
  const int workers = std::max(1, std::min<int>(exec.threads, static_cast<int>(a.count())));
  std::vector<GemmContext> local(static_cast<std::size_t>(workers), GemmContext(ctx.config()));
  detail::parallel_for(a.count(), workers, [&](std::size_t begin, std::size_t end, std::size_t w) {
    for (std::size_t i = begin; i < end; ++i)
      gemm(a.matrix(i), b.matrix(i), c.matrix(i), Beta::Overwrite, local[w]);
  });
  for (const auto& l : local) ctx.merge(l);
  return c;
}

std::vector<float> gather_tile(const TileMatrixBatch& batch, const WinogradPlan& plan,
                               std::size_t row, std::size_t col) {
  if (batch.count() != plan.tile_area() || row >= batch.rows() || col >= batch.cols())
    throw Error(ErrorKind::Size, "gather_tile: coordinates outside batch");
  std::vector<float> tile(batch.count());
  for (std::size_t e = 0; e < batch.count(); ++e) tile[e] = batch.matrix(e)(row, col);
  return tile;
}

Tensor4D transform_output(const WinogradPlan& plan, const TileMatrixBatch& cb,
                          const ExecOptions& exec) {
  const std::size_t regions = plan.regions(), filters = plan.filters();
  if (cb.role() != BatchRole::OutputC || cb.count() != plan.tile_area() || cb.rows() != regions ||
      cb.cols() != filters) {
    throw Error(ErrorKind::Size, plan.spec.name + ": output batch " +
                                     dims_text(cb.count(), cb.rows(), cb.cols()) + ", plan needs " +
                                     dims_text(plan.tile_area(), regions, filters));
  }
  const std::size_t th = plan.t_h, tw = plan.t_w, mh = plan.m_h, mw = plan.m_w;
  const std::size_t out_h = plan.out_h, out_w = plan.out_w;
  const std::size_t per_image = static_cast<std::size_t>(plan.tiles_h) * plan.tiles_w;
  Tensor4D out(Dims{static_cast<std::size_t>(plan.batch), out_h, out_w, filters}, Layout::NHWC, 0.0f);

  const SparseRows ah = sparse_rows(plan.ts_h.at_f);
  const SparseRows aw = sparse_rows(plan.ts_w.at_f);
  const float* src = cb.data().data();
  float* dst = out.mutable_data().data();
  const std::size_t matrix_stride = regions * filters;

  // Regions own disjoint output blocks, so workers never write the same element.
  detail::parallel_for(regions, exec.threads, [&](std::size_t begin, std::size_t end, std::size_t) {
    std::vector<float> tile(th * tw * filters), tmp(th * mw * filters), block(mh * mw * filters);
    for (std::size_t rho = begin; rho < end; ++rho) {
      for (std::size_t e = 0; e < th * tw; ++e)
        std::copy_n(src + e * matrix_stride + rho * filters, filters, tile.data() + e * filters);
      transform_tile(ah, aw, tile.data(), th, tw, tmp.data(), block.data(), filters);
      const std::size_t n = rho / per_image;
      const std::size_t i0 = (rho % per_image) / plan.tiles_w * mh;
      const std::size_t j0 = rho % plan.tiles_w * mw;
      const std::size_t rows = std::min(mh, out_h - i0);
      const std::size_t cols = std::min(mw, out_w - j0);
      for (std::size_t i = 0; i < rows; ++i)
        std::copy_n(block.data() + i * mw * filters, cols * filters,
                    dst + ((n * out_h + i0 + i) * out_w + j0) * filters);
    }
  });
  return out;
}

Tensor4D convolve(const WinogradPlan& plan, const Tensor4D& input,
                  const TileMatrixBatch& transformed_weights, GemmContext& ctx,
                  const ExecOptions& exec) {
  const TileMatrixBatch a = transform_input(plan, input, exec);
  const TileMatrixBatch c = batched_gemm(a, transformed_weights, ctx, exec);
  return transform_output(plan, c, exec);
}

Tensor4D convolve(const WinogradPlan& plan, const Tensor4D& input, const FilterBank& weights,
                  const ExecOptions& exec) {
  GemmContext ctx(exec.gemm);
  return convolve(plan, input, transform_weights(plan, weights), ctx, exec);
}

std::uint64_t engine_macs(const WinogradPlan& plan) noexcept {
  return static_cast<std::uint64_t>(plan.tile_area()) * plan.regions() * plan.channels() *
         plan.filters();
}

}  // namespace rwconv
