#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rwconv/matrix.hpp"
#include "rwconv/rational.hpp"

namespace rwconv {

// Transform triple for the 1-D minimal filtering algorithm F(m, r):
//
//   y = AT * ((G * w) .* (BT * x))
//
// computes the m valid cross-correlation outputs y[i] = sum_k x[i + k] w[k]
// of a length t = m + r - 1 input x with an r-tap kernel w using t
// multiplies. 2-D tiles apply the same triple along both axes.
struct TransformSet {
  int m = 0;
  int r = 0;
  int t = 0;
  std::vector<Rational> points;  // finite interpolation points; infinity is implicit

  Matrix<Rational> at;  // m x t, output transform
  Matrix<Rational> g;   // t x r, weight transform
  Matrix<Rational> bt;  // t x t, input transform

  Matrix<float> at_f;
  Matrix<float> g_f;
  Matrix<float> bt_f;

  int multiplies() const noexcept { return t; }
  bool is_identity() const noexcept { return t == 1; }
};

struct GenerateOptions {
  // Tiles with more than four outputs are refused unless this is set: the
  // interpolation points grow and fp32 accuracy degrades quickly.
  bool allow_large_tiles = false;
};

inline constexpr int kMaxDefaultTileOutputs = 4;

// Builds the Cook-Toom triple from the finite points (count m + r - 2) plus
// the point at infinity. Throws ErrorKind::Arity on a point-count mismatch and
// ErrorKind::Construction for duplicate points, m or r < 1 or oversized tiles.
//
// Normalisation: every BT row is the monic interpolation numerator
// prod_{j != k}(x - p_j), multiplied by the sign of prod_{j != k}(p_j - p_k)
// where infinity counts as larger than any finite point. The remaining
// denominator magnitude is folded into G for finite points and into AT for
// the point at infinity, so G keeps a unit last row. With points {0, 1, -1}
// this yields the familiar F(2, 3) matrices.
TransformSet generate_1d(int m, int r, std::span<const Rational> points,
                         const GenerateOptions& options = {});

// 0, 1, -1, 2, -2, 3, -3, ... truncated to n entries.
std::vector<Rational> default_points(std::size_t n);

// generate_1d(m, r, default_points(m + r - 2), options)
TransformSet default_transform(int m, int r, const GenerateOptions& options = {});

struct BasisFailure {
  int input_index = 0;   // e_i fed as the length-t input
  int kernel_index = 0;  // e_j fed as the r-tap kernel
  int output_index = 0;
  Rational got;
  Rational expected;
};

struct VerifyReport {
  bool passed = false;
  int pairs_checked = 0;
  std::vector<BasisFailure> failures;

  std::string summary() const;
};

// Exhaustive exact check of the correlation identity over all t * r basis
// pairs. The expected values come from the definition of valid correlation,
// not from any transform matrix.
VerifyReport verify_transform_set(const TransformSet& ts);

// Plain-text dump: one block per matrix, entries written as "p/q".
std::string dump_transform_set(const TransformSet& ts);

}  // namespace rwconv
