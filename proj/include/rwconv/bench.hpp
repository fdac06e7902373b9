#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rwconv/gemm.hpp"
#include "rwconv/tensor.hpp"

namespace rwconv::bench {

inline constexpr std::uint64_t kDefaultSeed = 20190417;

// ---- layer tables -------------------------------------------------------

// "vgg16", "vgg19", "googlenet", "inception-v3", "squeezenet".
const std::vector<std::string>& builtin_network_names();
// Accepts the names above case-insensitively, with or without '-'/'_'.
// Throws ErrorKind::Input for unknown networks.
std::vector<ConvLayerSpec> builtin_network(std::string_view name);

inline constexpr std::string_view kLayerCsvHeader =
    "name,in_h,in_w,in_c,out_m,k_h,k_w,pad_t,pad_b,pad_l,pad_r,stride";

// Throws ErrorKind::Input naming the 1-based line number of the first bad row.
std::vector<ConvLayerSpec> parse_layer_csv(std::string_view text);
std::string format_layer_csv(const std::vector<ConvLayerSpec>& layers);

// Built-in network name, otherwise a path to a layer CSV file.
std::vector<ConvLayerSpec> load_layer_table(const std::string& source);

// Stride 1 with a 3x3, 5x5, 1x7 or 7x1 kernel.
bool is_winograd_eligible(const ConvLayerSpec& spec);

// Divides input and output channel counts by `scale` (minimum 1).
ConvLayerSpec scale_channels(const ConvLayerSpec& spec, int scale);

// ---- variants -----------------------------------------------------------

struct Variant {
  std::string name;  // CLI spelling, e.g. "f4x4_3x3"
  bool im2row = false;
  int m_h = 1, m_w = 1;
  int k_h = 0, k_w = 0;
  double tolerance = 0.0;  // max relative error allowed against the oracle
};

const std::vector<Variant>& known_variants();
const Variant& find_variant(std::string_view name);  // throws ErrorKind::Input
const Variant& im2row_variant();
bool applicable(const Variant& v, const ConvLayerSpec& spec);
std::vector<std::string> default_variants(const ConvLayerSpec& spec);

// Oracle tolerance per tile size: 1e-4 for m = 2, 5e-4 for m = 4.
double winograd_tolerance(int m_h, int m_w);
inline constexpr double kIm2rowTolerance = 1e-5;

// ---- harness ------------------------------------------------------------

struct BenchOptions {
  int reps = 1;
  bool check = false;
  int threads = 1;
  int scale = 1;
  std::uint64_t seed = kDefaultSeed;
  GemmConfig gemm{};
};

struct BenchRecord {
  std::string layer;
  std::string variant;
  int k_h = 0, k_w = 0;
  bool skipped = false;
  std::string skip_reason;
  // Medians over reps, nanoseconds.
  std::uint64_t t_in_ns = 0;
  std::uint64_t t_gemm_ns = 0;
  std::uint64_t t_out_ns = 0;
  std::uint64_t t_total_ns = 0;
  std::uint64_t macs = 0;
  std::optional<double> max_rel_err;  // set when checking is enabled
  double tolerance = 0.0;
  double speedup = 0.0;  // baseline total / this total

  bool violates_tolerance() const noexcept {
    return max_rel_err.has_value() && !(*max_rel_err <= tolerance);
  }
};

// Benchmarks one layer. The im2row baseline always runs and comes first;
// variants that do not apply yield skipped records.
std::vector<BenchRecord> run_layer_bench(const ConvLayerSpec& spec,
                                         const std::vector<std::string>& variants,
                                         const BenchOptions& options);

// Runs every layer; an empty variant list means default_variants per layer.
std::vector<BenchRecord> run_table(const std::vector<ConvLayerSpec>& layers,
                                   const std::vector<std::string>& variants,
                                   const BenchOptions& options);

std::size_t count_violations(const std::vector<BenchRecord>& records);

// ---- reporting ----------------------------------------------------------

enum class ReportFormat { Csv, Markdown };

inline constexpr std::string_view kReportCsvHeader =
    "layer,variant,t_in_ns,t_gemm_ns,t_out_ns,t_total_ns,macs,max_rel_err,speedup";

// Fast-layer totals: for every layer with a non-skipped Winograd record,
// baseline = im2row total and ours = fastest Winograd total.
struct Aggregate {
  std::size_t fast_layers = 0;
  std::uint64_t baseline_ns = 0;
  std::uint64_t ours_ns = 0;
  double improvement_pct = 0.0;  // (baseline - ours) / baseline * 100
};

Aggregate aggregate(const std::vector<BenchRecord>& records);
double improvement_percent(double baseline, double ours);

// Published per-layer speedups of the region-wise scheme on a Cortex-A73
// cluster, used as informational context in markdown reports.
struct PublishedSpeedup {
  std::string_view network;
  std::string_view layer_type;
  double average;
  double peak;
};
const std::vector<PublishedSpeedup>& published_speedups();

// Throws ErrorKind::Input for an empty record list. Skipped records are not
// emitted as data rows. `network` labels the summary (may be empty).
std::string emit_report(const std::vector<BenchRecord>& records, ReportFormat format,
                        std::string_view network = {});

}  // namespace rwconv::bench
