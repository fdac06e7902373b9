#include "rwconv/gemm.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "rwconv/error.hpp"

namespace rwconv {

namespace {

constexpr std::size_t kMr = 4;
constexpr std::size_t kNr = 16;

void check_dims(const ConstMatrixView& a, const ConstMatrixView& b, const MatrixView& c) {
  if (a.cols != b.rows || c.rows != a.rows || c.cols != b.cols) {
    throw Error(ErrorKind::Size, "gemm: (" + std::to_string(a.rows) + "x" + std::to_string(a.cols) +
                                     ") * (" + std::to_string(b.rows) + "x" +
                                     std::to_string(b.cols) + ") -> (" + std::to_string(c.rows) +
                                     "x" + std::to_string(c.cols) + ")");
  }
}

// Packs a kc x nc block of B into kNr-wide column panels, zero-padding the last.
void pack_b(ConstMatrixView b, std::size_t k0, std::size_t kc, std::size_t j0, std::size_t nc,
            float* packed) {
  for (std::size_t jp = 0; jp < nc; jp += kNr) {
    const std::size_t w = std::min(kNr, nc - jp);
    for (std::size_t k = 0; k < kc; ++k) {
      const float* src = b.data + (k0 + k) * b.ld + j0 + jp;
      float* dst = packed + jp * kc + k * kNr;
      std::size_t j = 0;
      for (; j < w; ++j) dst[j] = src[j];
      for (; j < kNr; ++j) dst[j] = 0.0f;
    }
  }
}

// c[0:mr, 0:nr] (+)= a[0:mr, 0:kc] * panel, panel is kc x kNr.
template <std::size_t MR>
void micro_kernel(const float* a, std::size_t lda, const float* panel, std::size_t kc, float* c,
                  std::size_t ldc, std::size_t nr, bool load_c) {
  float acc[MR][kNr];
  for (std::size_t i = 0; i < MR; ++i) {
    for (std::size_t j = 0; j < kNr; ++j) acc[i][j] = (load_c && j < nr) ? c[i * ldc + j] : 0.0f;
  }
  for (std::size_t k = 0; k < kc; ++k) {
    const float* bk = panel + k * kNr;
    for (std::size_t i = 0; i < MR; ++i) {
      const float av = a[i * lda + k];
      for (std::size_t j = 0; j < kNr; ++j) acc[i][j] += av * bk[j];
    }
  }
  for (std::size_t i = 0; i < MR; ++i)
    for (std::size_t j = 0; j < nr; ++j) c[i * ldc + j] = acc[i][j];
}

void micro_kernel_rows(std::size_t mr, const float* a, std::size_t lda, const float* panel,
                       std::size_t kc, float* c, std::size_t ldc, std::size_t nr, bool load_c) {
  switch (mr) {
    case 4: micro_kernel<4>(a, lda, panel, kc, c, ldc, nr, load_c); break;
    case 3: micro_kernel<3>(a, lda, panel, kc, c, ldc, nr, load_c); break;
    case 2: micro_kernel<2>(a, lda, panel, kc, c, ldc, nr, load_c); break;
    default: micro_kernel<1>(a, lda, panel, kc, c, ldc, nr, load_c); break;
  }
}

}  // namespace

void gemm_reference(ConstMatrixView a, ConstMatrixView b, MatrixView c, Beta beta) {
  check_dims(a, b, c);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < b.cols; ++j) {
      float acc = beta == Beta::Accumulate ? c(i, j) : 0.0f;
      for (std::size_t k = 0; k < a.cols; ++k) acc += a(i, k) * b(k, j);
      c(i, j) = acc;
    }
  }
}

void gemm(ConstMatrixView a, ConstMatrixView b, MatrixView c, Beta beta, GemmContext& ctx) {
  check_dims(a, b, c);
  const std::size_t p = a.rows, q = a.cols, s = b.cols;
  ctx.add_macs(static_cast<std::uint64_t>(p) * q * s);
  if (p == 0 || s == 0) return;
  if (q == 0) {
    if (beta == Beta::Overwrite)
      for (std::size_t i = 0; i < p; ++i) std::fill_n(c.data + i * c.ld, s, 0.0f);
    return;
  }

  const GemmConfig& cfg = ctx.config();
  const std::size_t bn = std::max<std::size_t>(cfg.block_n, 1);
  const std::size_t bk = std::max<std::size_t>(cfg.block_k, 1);
  const std::size_t bm = std::max<std::size_t>(cfg.block_m, 1);

  thread_local std::vector<float> packed;
  for (std::size_t j0 = 0; j0 < s; j0 += bn) {
    const std::size_t nc = std::min(bn, s - j0);
    const std::size_t nc_padded = (nc + kNr - 1) / kNr * kNr;
    for (std::size_t k0 = 0; k0 < q; k0 += bk) {
      const std::size_t kc = std::min(bk, q - k0);
      packed.resize(nc_padded * kc);
      pack_b(b, k0, kc, j0, nc, packed.data());
      const bool load_c = k0 > 0 || beta == Beta::Accumulate;
      for (std::size_t i0 = 0; i0 < p; i0 += bm) {
        const std::size_t mc = std::min(bm, p - i0);
        for (std::size_t jp = 0; jp < nc; jp += kNr) {
          const std::size_t nr = std::min(kNr, nc - jp);
          const float* panel = packed.data() + jp * kc;
          for (std::size_t i = 0; i < mc; i += kMr) {
            const std::size_t mr = std::min(kMr, mc - i);
            micro_kernel_rows(mr, a.data + (i0 + i) * a.ld + k0, a.ld, panel, kc,
                              c.data + (i0 + i) * c.ld + j0 + jp, c.ld, nr, load_c);
          }
        }
      }
    }
  }
}

void gemm(ConstMatrixView a, ConstMatrixView b, MatrixView c, Beta beta) {
  GemmContext ctx(GemmConfig{.counters_enabled = false});
  gemm(a, b, c, beta, ctx);
}

}  // namespace rwconv
