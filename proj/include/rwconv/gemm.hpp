#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace rwconv {

// Non-owning row-major matrix views. `ld` is the row stride in elements.
struct ConstMatrixView {
  const float* data = nullptr;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t ld = 0;

  ConstMatrixView() = default;
  ConstMatrixView(const float* d, std::size_t r, std::size_t c, std::size_t stride = 0)
      : data(d), rows(r), cols(c), ld(stride ? stride : c) {}
  ConstMatrixView(std::span<const float> d, std::size_t r, std::size_t c)
      : ConstMatrixView(d.data(), r, c) {}

  float operator()(std::size_t i, std::size_t j) const noexcept { return data[i * ld + j]; }
};

struct MatrixView {
  float* data = nullptr;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t ld = 0;

  MatrixView() = default;
  MatrixView(float* d, std::size_t r, std::size_t c, std::size_t stride = 0)
      : data(d), rows(r), cols(c), ld(stride ? stride : c) {}
  MatrixView(std::span<float> d, std::size_t r, std::size_t c) : MatrixView(d.data(), r, c) {}

  float& operator()(std::size_t i, std::size_t j) const noexcept { return data[i * ld + j]; }
  operator ConstMatrixView() const noexcept { return {data, rows, cols, ld}; }
};

// Cache blocking. Defaults assume 64-byte lines and a 32 KiB L1d: a packed
// block_k x 16 B micro-panel is 8 KiB, and the block_k x block_n B panel
// (128 KiB) is meant to stay resident in L2 while A rows stream past it.
struct GemmConfig {
  std::size_t block_m = 64;
  std::size_t block_n = 256;
  std::size_t block_k = 128;
  bool counters_enabled = true;
};

// Per-caller accounting context; gemm keeps no global state. Callers running
// GEMMs on several threads give each thread its own context and merge.
class GemmContext {
 public:
  GemmContext() = default;
  explicit GemmContext(GemmConfig config) : config_(config) {}

  const GemmConfig& config() const noexcept { return config_; }
  std::uint64_t mac_count() const noexcept { return macs_; }
  void reset_counters() noexcept { macs_ = 0; }
  void add_macs(std::uint64_t n) noexcept {
    if (config_.counters_enabled) macs_ += n;
  }
  void merge(const GemmContext& other) noexcept { macs_ += other.macs_; }

 private:
  GemmConfig config_{};
  std::uint64_t macs_ = 0;
};

enum class Beta { Overwrite = 0, Accumulate = 1 };

// c = a * b (beta = Overwrite) or c += a * b (beta = Accumulate).
// Throws ErrorKind::Size on dimension mismatch. Adds rows*inner*cols MACs to
// the context counter. Each output element is accumulated in increasing k
// order, so results match a plain triple loop unless the compiler contracts
// multiply-adds.
void gemm(ConstMatrixView a, ConstMatrixView b, MatrixView c, Beta beta, GemmContext& ctx);
void gemm(ConstMatrixView a, ConstMatrixView b, MatrixView c, Beta beta = Beta::Overwrite);

// Unblocked triple loop; reference for tests and tiny problems.
void gemm_reference(ConstMatrixView a, ConstMatrixView b, MatrixView c, Beta beta);

}  // namespace rwconv
