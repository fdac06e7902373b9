#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "rwconv/tensor.hpp"
#include "test_support.hpp"

using namespace rwconv;
using rwconv::testing::layer;
using rwconv::testing::random_tensor;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an rwconv::Error";
  return ErrorKind::Io;
}

}  // namespace

TEST(TensorNew, WrapsValuesInGivenOrder) {
  const std::vector<float> v = {1, 2, 3, 4};
  const Tensor4D t = tensor_new(Dims{1, 2, 2, 1}, Layout::NHWC, v);
  EXPECT_EQ(t.dims(), (Dims{1, 2, 2, 1}));
  EXPECT_EQ(t.at(0, 1, 0, 0), 3.0f);
  EXPECT_EQ(t.at(0, 1, 1, 0), 4.0f);
}

TEST(TensorNew, LengthMismatchIsSizeError) {
  const std::vector<float> v = {1, 2, 3};
  EXPECT_EQ(kind_of([&] { tensor_new(Dims{1, 2, 2, 1}, Layout::NHWC, v); }), ErrorKind::Size);
}

TEST(TensorNew, ConstantFill) {
  const Tensor4D t = tensor_new(Dims{2, 3, 1, 2}, Layout::NCHW, 0.5f);
  EXPECT_EQ(t.size(), 12u);
  for (float x : t.data()) EXPECT_EQ(x, 0.5f);
}

TEST(ConvertLayout, NhwcToNchwSmall) {
  // (n=1, h=1, w=2, c=2) stored as [a0, a1, b0, b1]: pixel a then pixel b.
  const std::vector<float> v = {10, 11, 20, 21};
  const Tensor4D t = tensor_new(Dims{1, 1, 2, 2}, Layout::NHWC, v);
  const Tensor4D u = convert_layout(t, Layout::NCHW);
  EXPECT_EQ(u.layout(), Layout::NCHW);
  const std::vector<float> expected = {10, 20, 11, 21};
  EXPECT_EQ(std::vector<float>(u.data().begin(), u.data().end()), expected);
}

TEST(ConvertLayout, SameLayoutIsCopy) {
  std::mt19937 rng(1);
  const Tensor4D t = random_tensor(rng, Dims{1, 3, 2, 4});
  const Tensor4D u = convert_layout(t, Layout::NHWC);
  EXPECT_TRUE(std::equal(t.data().begin(), t.data().end(), u.data().begin()));
}

TEST(ConvertLayout, RoundTripPreservesLogicalElements) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::size_t> extent(1, 8);
  for (int trial = 0; trial < 100; ++trial) {
    const Dims d{extent(rng), extent(rng), extent(rng), extent(rng)};
    const Tensor4D t = random_tensor(rng, d);
    const Tensor4D nchw = convert_layout(t, Layout::NCHW);
    for (std::size_t n = 0; n < d.n; ++n)
      for (std::size_t i = 0; i < d.h; ++i)
        for (std::size_t j = 0; j < d.w; ++j)
          for (std::size_t c = 0; c < d.c; ++c) ASSERT_EQ(t.at(n, i, j, c), nchw.at(n, i, j, c));
    const Tensor4D back = convert_layout(nchw, Layout::NHWC);
    ASSERT_TRUE(std::equal(t.data().begin(), t.data().end(), back.data().begin()));
  }
}

TEST(ConvOutputShape, ValidAndSame) {
  EXPECT_EQ(conv_output_shape(layer(6, 6, 1, 1, 3, 3)), (OutputShape{4, 4}));
  EXPECT_EQ(conv_output_shape(layer(4, 4, 1, 1, 3, 3, Padding{1, 1, 1, 1})), (OutputShape{4, 4}));
  EXPECT_EQ(conv_output_shape(layer(17, 17, 8, 8, 1, 7, Padding{0, 0, 3, 3})), (OutputShape{17, 17}));
  EXPECT_EQ(conv_output_shape(layer(7, 7, 1, 1, 3, 3, {}, 2)), (OutputShape{3, 3}));
}

TEST(ConvOutputShape, KernelLargerThanInputIsShapeError) {
  EXPECT_EQ(kind_of([] { conv_output_shape(layer(2, 2, 1, 1, 3, 3)); }), ErrorKind::Shape);
  EXPECT_EQ(kind_of([] { conv_output_shape(layer(4, 4, 1, 1, 0, 3)); }), ErrorKind::Shape);
  EXPECT_EQ(kind_of([] { conv_output_shape(layer(4, 4, 1, 1, 3, 3, Padding{-1, 0, 0, 0})); }),
            ErrorKind::Shape);
}

TEST(ExtractRegion, InteriorBlock) {
  std::vector<float> v(16);
  for (int i = 0; i < 16; ++i) v[i] = static_cast<float>(i);
  const Tensor4D t = tensor_new(Dims{1, 4, 4, 1}, Layout::NHWC, v);
  const auto r = extract_region(t, 0, 1, 1, 2, 2);
  EXPECT_EQ(r, (std::vector<float>{5, 6, 9, 10}));
}

TEST(ExtractRegion, NegativeOriginReadsZeros) {
  std::vector<float> v(16);
  for (int i = 0; i < 16; ++i) v[i] = static_cast<float>(i + 1);
  const Tensor4D t = tensor_new(Dims{1, 4, 4, 1}, Layout::NHWC, v);
  const auto r = extract_region(t, 0, -1, -1, 3, 3);
  EXPECT_EQ(r, (std::vector<float>{0, 0, 0, 0, 1, 2, 0, 5, 6}));
}

TEST(ExtractRegion, FullyOutsideIsAllZero) {
  const Tensor4D t = tensor_new(Dims{1, 3, 3, 2}, Layout::NHWC, 1.0f);
  for (float x : extract_region(t, 0, 10, -20, 4, 4)) EXPECT_EQ(x, 0.0f);
}

TEST(ExtractRegion, RequiresNhwc) {
  const Tensor4D t = tensor_new(Dims{1, 3, 3, 2}, Layout::NCHW, 1.0f);
  EXPECT_EQ(kind_of([&] { extract_region(t, 0, 0, 0, 2, 2); }), ErrorKind::Size);
}

TEST(ExtractRegion, OverlappingTilesAgreeOnSharedPixels) {
  // Tiles with origins (i m, j m) and extent t = m + 2 overlap by two rows and
  // columns; both copies of each shared pixel must be identical.
  std::mt19937 rng(11);
  const Tensor4D t = random_tensor(rng, Dims{1, 9, 9, 2});
  const long m = 2, tile = 4;
  for (long ti = 0; ti < 4; ++ti)
    for (long tj = 0; tj < 3; ++tj) {
      const auto a = extract_region(t, 0, ti * m - 1, tj * m - 1, tile, tile);
      const auto b = extract_region(t, 0, ti * m - 1, (tj + 1) * m - 1, tile, tile);
      for (long i = 0; i < tile; ++i)
        for (long j = m; j < tile; ++j)
          for (long c = 0; c < 2; ++c)
            ASSERT_EQ(a[(i * tile + j) * 2 + c], b[(i * tile + j - m) * 2 + c]);
    }
}

TEST(ExtractRegion, BatchOutOfRangeIsSizeError) {
  const Tensor4D t = tensor_new(Dims{1, 2, 2, 1}, Layout::NHWC, 1.0f);
  EXPECT_EQ(kind_of([&] { extract_region(t, 1, 0, 0, 1, 1); }), ErrorKind::Size);
}

TEST(FilterBank, TensorRoundTrip) {
  std::mt19937 rng(5);
  const FilterBank f = rwconv::testing::random_filters(rng, 3, 1, 4, 2);
  const Tensor4D t = f.to_tensor();
  EXPECT_EQ(t.dims(), (Dims{3, 1, 4, 2}));
  const FilterBank g = FilterBank::from_tensor(t);
  EXPECT_EQ(g.k_h(), 3);
  EXPECT_EQ(g.filters(), 2);
  EXPECT_TRUE(std::equal(f.data().begin(), f.data().end(), g.data().begin()));
  EXPECT_EQ(f.at(2, 0, 3, 1), f.data()[((2 * 1 + 0) * 4 + 3) * 2 + 1]);
}

TEST(FilterBank, MismatchedSpecIsSizeError) {
  const FilterBank f(3, 3, 2, 4, std::vector<float>(72, 0.0f));
  EXPECT_NO_THROW(check_filter_bank(layer(5, 5, 2, 4, 3, 3), f));
  EXPECT_EQ(kind_of([&] { check_filter_bank(layer(5, 5, 3, 4, 3, 3), f); }), ErrorKind::Size);
}

TEST(TensorFile, EncodeDecodeRoundTrip) {
  std::mt19937 rng(9);
  const Tensor4D t = convert_layout(random_tensor(rng, Dims{2, 3, 4, 5}), Layout::NCHW);
  const auto bytes = encode_tensor(t);
  EXPECT_EQ(bytes.size(), 17u + 4u * 120u);
  EXPECT_EQ(bytes[0], 2u);
  EXPECT_EQ(bytes[16], 1u);
  const Tensor4D u = decode_tensor(bytes);
  EXPECT_EQ(u.dims(), t.dims());
  EXPECT_EQ(u.layout(), Layout::NCHW);
  EXPECT_TRUE(std::equal(t.data().begin(), t.data().end(), u.data().begin()));
}

TEST(TensorFile, TruncatedInputIsRejected) {
  const Tensor4D t = tensor_new(Dims{1, 1, 1, 2}, Layout::NHWC, 1.0f);
  auto bytes = encode_tensor(t);
  bytes.pop_back();
  EXPECT_THROW(decode_tensor(bytes), Error);
}

TEST(TensorFile, SaveLoadRoundTrip) {
  std::mt19937 rng(10);
  const Tensor4D t = random_tensor(rng, Dims{1, 2, 2, 3});
  const auto path = std::filesystem::temp_directory_path() / "rwconv_tensor_roundtrip.bin";
  save_tensor(t, path);
  const Tensor4D u = load_tensor(path);
  std::filesystem::remove(path);
  EXPECT_TRUE(std::equal(t.data().begin(), t.data().end(), u.data().begin()));
  EXPECT_EQ(kind_of([&] { load_tensor(path); }), ErrorKind::Io);
}
