#include <algorithm>
#include <chrono>
#include <random>

#include "rwconv/bench.hpp"
#include "rwconv/reference.hpp"
#include "rwconv/winograd.hpp"

namespace rwconv::bench {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t elapsed_ns(Clock::time_point a, Clock::time_point b) {
  return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(b - a).count());
}

std::uint64_t median(std::vector<std::uint64_t> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  return v[(v.size() - 1) / 2];
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<float> uniform(std::mt19937_64& rng, std::size_t count) {
  // Spread each 64-bit draw over [-1, 1) explicitly so the values do not
  // depend on the standard library's distribution implementation.
  std::vector<float> v(count);
  for (auto& x : v) x = static_cast<float>(static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0);
  return v;
}

struct Timings {
  std::vector<std::uint64_t> in, gemm, out, total;
  void reserve(int reps) {
    in.reserve(reps);
    gemm.reserve(reps);
    out.reserve(reps);
    total.reserve(reps);
  }
  void store(BenchRecord& r) const {
    r.t_in_ns = median(in);
    r.t_gemm_ns = median(gemm);
    r.t_out_ns = median(out);
    r.t_total_ns = median(total);
  }
};

}  // namespace

const std::vector<Variant>& known_variants() {
  static const std::vector<Variant> variants = {
      {"f2x2_3x3", false, 2, 2, 3, 3, winograd_tolerance(2, 2)},
      {"f4x4_3x3", false, 4, 4, 3, 3, winograd_tolerance(4, 4)},
      {"f2x2_5x5", false, 2, 2, 5, 5, winograd_tolerance(2, 2)},
      {"f2_1x7", false, 1, 2, 1, 7, winograd_tolerance(1, 2)},
      {"f2_7x1", false, 2, 1, 7, 1, winograd_tolerance(2, 1)},
      {"im2row", true, 0, 0, 0, 0, kIm2rowTolerance},
  };
  return variants;
}

const Variant& find_variant(std::string_view name) {
  for (const auto& v : known_variants())
    if (v.name == name) return v;
  throw Error(ErrorKind::Input, "unknown variant '" + std::string(name) +
                                    "' (known: f2x2_3x3, f4x4_3x3, f2x2_5x5, f2_1x7, f2_7x1, im2row)");
}

const Variant& im2row_variant() { return known_variants().back(); }

double winograd_tolerance(int m_h, int m_w) { return std::max(m_h, m_w) <= 2 ? 1e-4 : 5e-4; }

bool applicable(const Variant& v, const ConvLayerSpec& spec) {
  if (v.im2row) return true;
  return spec.stride == 1 && spec.k_h == v.k_h && spec.k_w == v.k_w;
}

std::vector<std::string> default_variants(const ConvLayerSpec& spec) {
  std::vector<std::string> names;
  for (const auto& v : known_variants())
    if (!v.im2row && applicable(v, spec)) names.push_back(v.name);
  return names;
}

std::vector<BenchRecord> run_layer_bench(const ConvLayerSpec& layer,
                                         const std::vector<std::string>& variants,
                                         const BenchOptions& options) {
  if (options.reps < 1) throw Error(ErrorKind::Input, "reps must be >= 1");
  if (options.threads < 1) throw Error(ErrorKind::Input, "threads must be >= 1");
  std::vector<const Variant*> chosen;
  for (const auto& name : variants) {
    const Variant& v = find_variant(name);
    if (!v.im2row) chosen.push_back(&v);
  }

  const ConvLayerSpec spec = scale_channels(layer, options.scale);
  conv_output_shape(spec);

  std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                    static_cast<std::uint32_t>(fnv1a(spec.name)),
                    static_cast<std::uint32_t>(fnv1a(spec.name) >> 32)};
  std::mt19937_64 rng(seq);
  const Tensor4D input(Dims{1, static_cast<std::size_t>(spec.in_h), static_cast<std::size_t>(spec.in_w),
                            static_cast<std::size_t>(spec.in_c)},
                       Layout::NHWC,
                       uniform(rng, static_cast<std::size_t>(spec.in_h) * spec.in_w * spec.in_c));
  const FilterBank weights(
      spec.k_h, spec.k_w, spec.in_c, spec.out_m,
      uniform(rng, static_cast<std::size_t>(spec.k_h) * spec.k_w * spec.in_c * spec.out_m));

  std::optional<Tensor4D> oracle;
  if (options.check) oracle = direct_conv(input, weights, spec);

  const ExecOptions exec{options.threads, options.gemm};
  std::vector<BenchRecord> records;

  // Baseline: im2row lowering, then one GEMM whose result is the NHWC output.
  {
    BenchRecord rec;
    rec.layer = layer.name;
    rec.variant = "im2row";
    rec.k_h = spec.k_h;
    rec.k_w = spec.k_w;
    rec.tolerance = kIm2rowTolerance;
    Timings t;
    t.reserve(options.reps);
    Tensor4D out;
    for (int rep = 0; rep < options.reps; ++rep) {
      GemmContext ctx(options.gemm);
      const auto t0 = Clock::now();
      const LoweredMatrix lowered = im2row(input, spec);
      const auto t1 = Clock::now();
      out = gemm_lowered(lowered, weights, 1, ctx);
      const auto t2 = Clock::now();
      t.in.push_back(elapsed_ns(t0, t1));
      t.gemm.push_back(elapsed_ns(t1, t2));
      t.out.push_back(0);
      t.total.push_back(elapsed_ns(t0, t2));
      rec.macs = ctx.mac_count();
    }
    t.store(rec);
    if (oracle) rec.max_rel_err = max_relative_error(out.data(), oracle->data());
    rec.speedup = 1.0;
    records.push_back(std::move(rec));
  }
  const double baseline_total = static_cast<double>(std::max<std::uint64_t>(records[0].t_total_ns, 1));

  for (const Variant* v : chosen) {
    BenchRecord rec;
    rec.layer = layer.name;
    rec.variant = v->name;
    rec.k_h = spec.k_h;
    rec.k_w = spec.k_w;
    rec.tolerance = v->tolerance;
    if (!applicable(*v, spec)) {
      rec.skipped = true;
      rec.skip_reason = spec.stride != 1 ? "stride " + std::to_string(spec.stride) + " layer"
                                         : "kernel " + std::to_string(spec.k_h) + "x" +
                                               std::to_string(spec.k_w) + " does not match";
      records.push_back(std::move(rec));
      continue;
    }
    const WinogradPlan plan = build_plan(spec, v->m_h, v->m_w);
    // Weights are transformed once, outside the timed region, as they would
    // be at model load time.
    const TileMatrixBatch wb = transform_weights(plan, weights);
    Timings t;
    t.reserve(options.reps);
    Tensor4D out;
    for (int rep = 0; rep < options.reps; ++rep) {
      GemmContext ctx(options.gemm);
      const auto t0 = Clock::now();
      const TileMatrixBatch a = transform_input(plan, input, exec);
      const auto t1 = Clock::now();
      const TileMatrixBatch c = batched_gemm(a, wb, ctx, exec);
      const auto t2 = Clock::now();
      out = transform_output(plan, c, exec);
      const auto t3 = Clock::now();
      t.in.push_back(elapsed_ns(t0, t1));
      t.gemm.push_back(elapsed_ns(t1, t2));
      t.out.push_back(elapsed_ns(t2, t3));
      t.total.push_back(elapsed_ns(t0, t3));
      rec.macs = ctx.mac_count();
    }
    t.store(rec);
    if (oracle) rec.max_rel_err = max_relative_error(out.data(), oracle->data());
    rec.speedup = baseline_total / static_cast<double>(std::max<std::uint64_t>(rec.t_total_ns, 1));
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<BenchRecord> run_table(const std::vector<ConvLayerSpec>& layers,
                                   const std::vector<std::string>& variants,
                                   const BenchOptions& options) {
  std::vector<BenchRecord> all;
  for (const auto& layer : layers) {
    auto recs = run_layer_bench(layer, variants.empty() ? default_variants(layer) : variants, options);
    all.insert(all.end(), std::make_move_iterator(recs.begin()), std::make_move_iterator(recs.end()));
  }
  return all;
}

std::size_t count_violations(const std::vector<BenchRecord>& records) {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(),
                                                [](const BenchRecord& r) { return r.violates_tolerance(); }));
}

}  // namespace rwconv::bench
