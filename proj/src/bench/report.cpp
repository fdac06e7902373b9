#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <sstream>

#include "rwconv/bench.hpp"

namespace rwconv::bench {

namespace {

std::string format_error(const std::optional<double>& e) {
  if (!e) return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", *e);
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string layer_type(int k_h, int k_w) { return std::to_string(k_h) + "x" + std::to_string(k_w); }

std::string network_key(std::string_view name) {
  std::string out;
  for (char ch : name)
    if (std::isalnum(static_cast<unsigned char>(ch)))
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  return out;
}

// Per layer: im2row record and the fastest non-skipped Winograd record.
struct LayerPair {
  const BenchRecord* baseline = nullptr;
  const BenchRecord* best = nullptr;
};

std::vector<LayerPair> pair_layers(const std::vector<BenchRecord>& records) {
  std::vector<LayerPair> pairs;
  std::map<std::string, std::size_t> index;
  for (const auto& r : records) {
    if (r.skipped) continue;
    auto [it, inserted] = index.try_emplace(r.layer, pairs.size());
    if (inserted) pairs.emplace_back();
    LayerPair& p = pairs[it->second];
    if (r.variant == "im2row") {
      p.baseline = &r;
    } else if (!p.best || r.t_total_ns < p.best->t_total_ns) {
      p.best = &r;
    }
  }
  return pairs;
}

}  // namespace

const std::vector<PublishedSpeedup>& published_speedups() {
  static const std::vector<PublishedSpeedup> table = {
      {"vgg16", "3x3", 2.7, 3.5},       {"vgg19", "3x3", 2.8, 3.5},
      {"googlenet", "3x3", 2.6, 4.1},   {"googlenet", "5x5", 2.3, 3.2},
      {"inceptionv3", "1x7", 2.0, 2.1}, {"inceptionv3", "7x1", 2.0, 2.1},
      {"inceptionv3", "3x3", 3.1, 3.8}, {"inceptionv3", "5x5", 2.7, 2.8},
      {"squeezenet", "3x3", 2.2, 2.6},
  };
  return table;
}

double improvement_percent(double baseline, double ours) {
  if (baseline <= 0.0) return 0.0;
  return (baseline - ours) / baseline * 100.0;
}

Aggregate aggregate(const std::vector<BenchRecord>& records) {
  Aggregate agg;
  for (const auto& p : pair_layers(records)) {
    if (!p.baseline || !p.best) continue;
    ++agg.fast_layers;
    agg.baseline_ns += p.baseline->t_total_ns;
    agg.ours_ns += p.best->t_total_ns;
  }
  agg.improvement_pct =
      improvement_percent(static_cast<double>(agg.baseline_ns), static_cast<double>(agg.ours_ns));
  return agg;
}

std::string emit_report(const std::vector<BenchRecord>& records, ReportFormat format,
                        std::string_view network) {
  if (records.empty()) throw Error(ErrorKind::Input, "no benchmark records to report");
  const Aggregate agg = aggregate(records);
  std::ostringstream os;

  if (format == ReportFormat::Csv) {
    os << kReportCsvHeader << '\n';
    for (const auto& r : records) {
      if (r.skipped) continue;
      os << r.layer << ',' << r.variant << ',' << r.t_in_ns << ',' << r.t_gemm_ns << ','
         << r.t_out_ns << ',' << r.t_total_ns << ',' << r.macs << ',' << format_error(r.max_rel_err)
         << ',' << fixed(r.speedup, 4) << '\n';
    }
    os << "# fast_layers=" << agg.fast_layers << ",im2row_total_ns=" << agg.baseline_ns
       << ",winograd_total_ns=" << agg.ours_ns << ",improvement_pct=" << fixed(agg.improvement_pct, 2)
       << '\n';
    return os.str();
  }

  if (!network.empty()) os << "# " << network << "\n\n";
  os << "| layer | variant | t_in_ns | t_gemm_ns | t_out_ns | t_total_ns | macs | max_rel_err | speedup |\n";
  os << "|---|---|---:|---:|---:|---:|---:|---:|---:|\n";
  for (const auto& r : records) {
    if (r.skipped) continue;
    const std::string err = format_error(r.max_rel_err);
    os << "| " << r.layer << " | " << r.variant << " | " << r.t_in_ns << " | " << r.t_gemm_ns
       << " | " << r.t_out_ns << " | " << r.t_total_ns << " | " << r.macs << " | "
       << (err.empty() ? "-" : err) << " | " << fixed(r.speedup, 4) << " |\n";
  }

  const double base_ms = static_cast<double>(agg.baseline_ns) / 1e6;
  const double ours_ms = static_cast<double>(agg.ours_ns) / 1e6;
  os << "\n## Fast layers (" << agg.fast_layers << ")\n\n";
  os << "| | Fast Layers (msec) |\n|---|---:|\n";
  os << "| Using Im2Row Scheme | " << fixed(base_ms, 2) << " |\n";
  os << "| Using Winograd Scheme | " << fixed(ours_ms, 2) << " |\n";
  os << "| Speedup (msec) | " << fixed(base_ms - ours_ms, 2) << " |\n";
  os << "| Speedup (%) | " << fixed(agg.improvement_pct, 2) << "% |\n";

  // Measured per layer type next to the published Cortex-A73 figures.
  struct Stat {
    double sum = 0.0;
    double peak = 0.0;
    int count = 0;
  };
  std::map<std::string, Stat> by_type;
  for (const auto& p : pair_layers(records)) {
    if (!p.baseline || !p.best) continue;
    Stat& s = by_type[layer_type(p.best->k_h, p.best->k_w)];
    s.sum += p.best->speedup;
    s.peak = std::max(s.peak, p.best->speedup);
    ++s.count;
  }
  if (!by_type.empty()) {
    const std::string key = network_key(network);
    os << "\n## Per-layer speedup by layer type\n\n";
    os << "| layer type | layers | average | peak | published average | published peak |\n";
    os << "|---|---:|---:|---:|---:|---:|\n";
    for (const auto& [type, s] : by_type) {
      os << "| " << type << " | " << s.count << " | " << fixed(s.sum / s.count, 2) << "x | "
         << fixed(s.peak, 2) << "x | ";
      const auto it = std::find_if(published_speedups().begin(), published_speedups().end(),
                                   [&](const PublishedSpeedup& p) {
                                     return p.network == key && p.layer_type == type;
                                   });
      if (it != published_speedups().end()) {
        os << fixed(it->average, 1) << "x | " << fixed(it->peak, 1) << "x |\n";
      } else {
        os << "- | - |\n";
      }
    }
    os << "\nPublished figures were measured on a 4x Cortex-A73 cluster and are shown for context only.\n";
  }
  return os.str();
}

}  // namespace rwconv::bench
