#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "rwconv/error.hpp"

namespace rwconv {

enum class Layout : std::uint8_t { NHWC = 0, NCHW = 1 };

const char* layout_name(Layout layout) noexcept;

// Logical extents of a 4-D activation tensor, independent of memory order.
struct Dims {
  std::size_t n = 1;
  std::size_t h = 1;
  std::size_t w = 1;
  std::size_t c = 1;

  std::size_t count() const noexcept { return n * h * w * c; }
  friend bool operator==(const Dims&, const Dims&) = default;
};

std::string to_string(const Dims& dims);

// Dense fp32 tensor with an explicit layout tag. Immutable once built; the
// only mutable accessor is used by producers that own a freshly made tensor.
class Tensor4D {
 public:
  Tensor4D() = default;
  Tensor4D(Dims dims, Layout layout, std::vector<float> data);
  Tensor4D(Dims dims, Layout layout, float fill);

  const Dims& dims() const noexcept { return dims_; }
  Layout layout() const noexcept { return layout_; }
  std::span<const float> data() const noexcept { return data_; }
  std::span<float> mutable_data() noexcept { return data_; }
  std::size_t size() const noexcept { return data_.size(); }

  std::size_t offset(std::size_t n, std::size_t i, std::size_t j,
                     std::size_t c) const noexcept {
    if (layout_ == Layout::NHWC) {
      return ((n * dims_.h + i) * dims_.w + j) * dims_.c + c;
    }
    return ((n * dims_.c + c) * dims_.h + i) * dims_.w + j;
  }

  float at(std::size_t n, std::size_t i, std::size_t j, std::size_t c) const noexcept {
    return data_[offset(n, i, j, c)];
  }

 private:
  Dims dims_{};
  Layout layout_ = Layout::NHWC;
  std::vector<float> data_;
};

Tensor4D tensor_new(Dims dims, Layout layout, std::span<const float> fill);
Tensor4D tensor_new(Dims dims, Layout layout, float fill);

Tensor4D convert_layout(const Tensor4D& t, Layout target);

// Padding and stride description of one convolution layer.
struct Padding {
  int top = 0;
  int bottom = 0;
  int left = 0;
  int right = 0;
  friend bool operator==(const Padding&, const Padding&) = default;
};

struct ConvLayerSpec {
  std::string name;
  int in_h = 0;
  int in_w = 0;
  int in_c = 0;
  int out_m = 0;
  int k_h = 0;
  int k_w = 0;
  Padding pad{};
  int stride = 1;

  friend bool operator==(const ConvLayerSpec&, const ConvLayerSpec&) = default;
};

struct OutputShape {
  int h = 0;
  int w = 0;
  friend bool operator==(const OutputShape&, const OutputShape&) = default;
};

// Throws ErrorKind::Shape for invalid kernels, padding or empty outputs.
OutputShape conv_output_shape(const ConvLayerSpec& spec);

// Copies an rh x rw x c block whose top-left corner is (row0, col0) into
// `out` (NHWC order within the block). Coordinates outside the tensor read
// as zero, which is how padding and ragged edge tiles are realised.
void extract_region(const Tensor4D& t, std::size_t n, long row0, long col0,
                    std::size_t rh, std::size_t rw, std::span<float> out);
std::vector<float> extract_region(const Tensor4D& t, std::size_t n, long row0,
                                  long col0, std::size_t rh, std::size_t rw);

// Filter bank in HWIO order: (u, v, c, m) at ((u * k_w + v) * C + c) * M + m.
// Viewed as a row-major (k_h * k_w * C) x M matrix this is exactly the
// im2row weight operand.
class FilterBank {
 public:
  FilterBank() = default;
  FilterBank(int k_h, int k_w, int channels, int filters, std::vector<float> data);

  int k_h() const noexcept { return k_h_; }
  int k_w() const noexcept { return k_w_; }
  int channels() const noexcept { return channels_; }
  int filters() const noexcept { return filters_; }
  std::span<const float> data() const noexcept { return data_; }

  float at(int u, int v, int c, int m) const noexcept {
    return data_[((static_cast<std::size_t>(u) * k_w_ + v) * channels_ + c) * filters_ + m];
  }

  // Tensor files carry filter banks as NHWC tensors with dims (k_h, k_w, C, M).
  static FilterBank from_tensor(const Tensor4D& t);
  Tensor4D to_tensor() const;

 private:
  int k_h_ = 0;
  int k_w_ = 0;
  int channels_ = 0;
  int filters_ = 0;
  std::vector<float> data_;
};

void check_filter_bank(const ConvLayerSpec& spec, const FilterBank& weights);
void check_input(const ConvLayerSpec& spec, const Tensor4D& input);

// Raw tensor file: four little-endian u32 dims (n, h, w, c), one layout byte
// (0 = NHWC, 1 = NCHW), then n*h*w*c little-endian f32 values in layout order.
void save_tensor(const Tensor4D& t, const std::filesystem::path& path);
Tensor4D load_tensor(const std::filesystem::path& path);
std::vector<std::uint8_t> encode_tensor(const Tensor4D& t);
Tensor4D decode_tensor(std::span<const std::uint8_t> bytes);

}  // namespace rwconv
