#include "rwconv/tensor.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace rwconv {

const char* error_kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Size: return "size error";
    case ErrorKind::Shape: return "shape error";
    case ErrorKind::Arity: return "arity error";
    case ErrorKind::Construction: return "construction error";
    case ErrorKind::Unsupported: return "unsupported variant";
    case ErrorKind::Input: return "input error";
    case ErrorKind::Io: return "i/o error";
  }
  return "error";
}

const char* layout_name(Layout layout) noexcept {
  return layout == Layout::NHWC ? "NHWC" : "NCHW";
}

std::string to_string(const Dims& d) {
  std::ostringstream os;
  os << '(' << d.n << ',' << d.h << ',' << d.w << ',' << d.c << ')';
  return os.str();
}

Tensor4D::Tensor4D(Dims dims, Layout layout, std::vector<float> data)
    : dims_(dims), layout_(layout), data_(std::move(data)) {
  if (data_.size() != dims_.count()) {
    throw Error(ErrorKind::Size, "tensor " + to_string(dims_) + " needs " +
                                     std::to_string(dims_.count()) + " values, got " +
                                     std::to_string(data_.size()));
  }
}

Tensor4D::Tensor4D(Dims dims, Layout layout, float fill)
    : dims_(dims), layout_(layout), data_(dims.count(), fill) {}

Tensor4D tensor_new(Dims dims, Layout layout, std::span<const float> fill) {
  return Tensor4D(dims, layout, std::vector<float>(fill.begin(), fill.end()));
}

Tensor4D tensor_new(Dims dims, Layout layout, float fill) {
  return Tensor4D(dims, layout, fill);
}

Tensor4D convert_layout(const Tensor4D& t, Layout target) {
  if (t.layout() == target) return t;
  const Dims& d = t.dims();
  Tensor4D out(d, target, 0.0f);
  auto dst = out.mutable_data();
  for (std::size_t n = 0; n < d.n; ++n)
    for (std::size_t i = 0; i < d.h; ++i)
      for (std::size_t j = 0; j < d.w; ++j)
        for (std::size_t c = 0; c < d.c; ++c) dst[out.offset(n, i, j, c)] = t.at(n, i, j, c);
  return out;
}

OutputShape conv_output_shape(const ConvLayerSpec& s) {
  if (s.k_h < 1 || s.k_w < 1) throw Error(ErrorKind::Shape, s.name + ": kernel dims must be >= 1");
  if (s.stride < 1) throw Error(ErrorKind::Shape, s.name + ": stride must be >= 1");
  if (s.pad.top < 0 || s.pad.bottom < 0 || s.pad.left < 0 || s.pad.right < 0)
    throw Error(ErrorKind::Shape, s.name + ": padding must be nonnegative");
  const int span_h = s.in_h + s.pad.top + s.pad.bottom - s.k_h;
  const int span_w = s.in_w + s.pad.left + s.pad.right - s.k_w;
  if (span_h < 0 || span_w < 0 || s.in_h < 1 || s.in_w < 1) {
    throw Error(ErrorKind::Shape, s.name + ": kernel " + std::to_string(s.k_h) + "x" +
                                      std::to_string(s.k_w) + " does not fit padded input " +
                                      std::to_string(s.in_h) + "x" + std::to_string(s.in_w));
  }
  return {span_h / s.stride + 1, span_w / s.stride + 1};
}

void extract_region(const Tensor4D& t, std::size_t n, long row0, long col0,
                    std::size_t rh, std::size_t rw, std::span<float> out) {
  const Dims& d = t.dims();
  if (t.layout() != Layout::NHWC)
    throw Error(ErrorKind::Size, "extract_region expects an NHWC tensor");
  if (out.size() != rh * rw * d.c)
    throw Error(ErrorKind::Size, "region buffer has wrong length");
  if (n >= d.n) throw Error(ErrorKind::Size, "extract_region: batch index out of range");
  const auto src = t.data();
  const long h = static_cast<long>(d.h);
  const long w = static_cast<long>(d.w);
  for (std::size_t i = 0; i < rh; ++i) {
    const long row = row0 + static_cast<long>(i);
    float* dst_row = out.data() + i * rw * d.c;
    if (row < 0 || row >= h) {
      std::fill_n(dst_row, rw * d.c, 0.0f);
      continue;
    }
    // Contiguous in-bounds column span [jb, je) copies in one go.
    const long jb = std::clamp(-col0, 0L, static_cast<long>(rw));
    const long je = std::clamp(w - col0, jb, static_cast<long>(rw));
    std::fill_n(dst_row, jb * d.c, 0.0f);
    if (je > jb) {
      const float* s = src.data() + t.offset(n, static_cast<std::size_t>(row),
                                             static_cast<std::size_t>(col0 + jb), 0);
      std::copy_n(s, (je - jb) * d.c, dst_row + jb * d.c);
    }
    std::fill_n(dst_row + je * d.c, (static_cast<long>(rw) - je) * d.c, 0.0f);
  }
}

std::vector<float> extract_region(const Tensor4D& t, std::size_t n, long row0, long col0,
                                  std::size_t rh, std::size_t rw) {
  std::vector<float> out(rh * rw * t.dims().c);
  extract_region(t, n, row0, col0, rh, rw, out);
  return out;
}

FilterBank::FilterBank(int k_h, int k_w, int channels, int filters, std::vector<float> data)
    : k_h_(k_h), k_w_(k_w), channels_(channels), filters_(filters), data_(std::move(data)) {
  if (k_h < 1 || k_w < 1 || channels < 1 || filters < 1)
    throw Error(ErrorKind::Size, "filter bank dims must be positive");
  const auto need = static_cast<std::size_t>(k_h) * k_w * channels * filters;
  if (data_.size() != need) {
    throw Error(ErrorKind::Size, "filter bank needs " + std::to_string(need) + " values, got " +
                                     std::to_string(data_.size()));
  }
}

FilterBank FilterBank::from_tensor(const Tensor4D& t) {
  const Tensor4D hwio = convert_layout(t, Layout::NHWC);
  const Dims& d = hwio.dims();
  const auto v = hwio.data();
  return FilterBank(static_cast<int>(d.n), static_cast<int>(d.h), static_cast<int>(d.w),
                    static_cast<int>(d.c), std::vector<float>(v.begin(), v.end()));
}

Tensor4D FilterBank::to_tensor() const {
  return Tensor4D(Dims{static_cast<std::size_t>(k_h_), static_cast<std::size_t>(k_w_),
                       static_cast<std::size_t>(channels_), static_cast<std::size_t>(filters_)},
                  Layout::NHWC, data_);
}

void check_filter_bank(const ConvLayerSpec& spec, const FilterBank& w) {
  if (w.k_h() != spec.k_h || w.k_w() != spec.k_w || w.channels() != spec.in_c ||
      w.filters() != spec.out_m) {
    throw Error(ErrorKind::Size, spec.name + ": weights are " + std::to_string(w.k_h()) + "x" +
                                     std::to_string(w.k_w()) + "x" + std::to_string(w.channels()) +
                                     "x" + std::to_string(w.filters()) + ", layer expects " +
                                     std::to_string(spec.k_h) + "x" + std::to_string(spec.k_w) +
                                     "x" + std::to_string(spec.in_c) + "x" +
                                     std::to_string(spec.out_m));
  }
}

void check_input(const ConvLayerSpec& spec, const Tensor4D& input) {
  const Dims& d = input.dims();
  if (input.layout() != Layout::NHWC || d.h != static_cast<std::size_t>(spec.in_h) ||
      d.w != static_cast<std::size_t>(spec.in_w) || d.c != static_cast<std::size_t>(spec.in_c) ||
      d.n < 1) {
    throw Error(ErrorKind::Size, spec.name + ": input " + to_string(d) + " " +
                                     layout_name(input.layout()) + " does not match layer (n," +
                                     std::to_string(spec.in_h) + "," + std::to_string(spec.in_w) +
                                     "," + std::to_string(spec.in_c) + ") NHWC");
  }
}

namespace {

static_assert(std::endian::native == std::endian::little,
              "tensor file codec assumes a little-endian host");

constexpr std::size_t kHeaderBytes = 4 * sizeof(std::uint32_t) + 1;

}  // namespace

std::vector<std::uint8_t> encode_tensor(const Tensor4D& t) {
  const Dims& d = t.dims();
  std::vector<std::uint8_t> bytes(kHeaderBytes + t.size() * sizeof(float));
  const std::uint32_t dims[4] = {static_cast<std::uint32_t>(d.n), static_cast<std::uint32_t>(d.h),
                                 static_cast<std::uint32_t>(d.w), static_cast<std::uint32_t>(d.c)};
  std::memcpy(bytes.data(), dims, sizeof dims);
  bytes[sizeof dims] = static_cast<std::uint8_t>(t.layout());
  std::memcpy(bytes.data() + kHeaderBytes, t.data().data(), t.size() * sizeof(float));
  return bytes;
}

Tensor4D decode_tensor(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes) throw Error(ErrorKind::Io, "tensor file truncated header");
  std::uint32_t dims[4];
  std::memcpy(dims, bytes.data(), sizeof dims);
  const std::uint8_t tag = bytes[sizeof dims];
  if (tag > 1) throw Error(ErrorKind::Io, "tensor file has unknown layout byte " + std::to_string(tag));
  const Dims d{dims[0], dims[1], dims[2], dims[3]};
  if (bytes.size() != kHeaderBytes + d.count() * sizeof(float)) {
    throw Error(ErrorKind::Size, "tensor file payload does not match dims " + to_string(d));
  }
  std::vector<float> data(d.count());
  std::memcpy(data.data(), bytes.data() + kHeaderBytes, data.size() * sizeof(float));
  return Tensor4D(d, static_cast<Layout>(tag), std::move(data));
}

void save_tensor(const Tensor4D& t, const std::filesystem::path& path) {
  const auto bytes = encode_tensor(t);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::Io, "short write to " + path.string());
}

Tensor4D load_tensor(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_tensor(bytes);
}

}  // namespace rwconv
