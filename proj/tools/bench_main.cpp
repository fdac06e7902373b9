// Benchmark CLI for the rwconv kernels. Talks to the library only through
// the C API.
//
// Exit status: 0 success, 1 correctness violation, 2 input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rwconv/rwconv.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInput = 2;

struct TableDeleter {
  void operator()(rwconv_layer_table* t) const { rwconv_layer_table_destroy(t); }
};
struct ResultDeleter {
  void operator()(rwconv_bench_result* r) const { rwconv_bench_result_destroy(r); }
};
struct TransformDeleter {
  void operator()(rwconv_transform* t) const { rwconv_transform_destroy(t); }
};
struct StringDeleter {
  void operator()(char* s) const { rwconv_string_free(s); }
};

int fail(rwconv_status status) {
  std::cerr << "bench: " << rwconv_last_error() << '\n';
  return status == RWCONV_ERR_INTERNAL ? kExitViolation : kExitInput;
}

int dump_transform(const std::vector<int>& mr) {
  rwconv_transform* raw = nullptr;
  if (auto st = rwconv_transform_default(mr[0], mr[1], 0, &raw); st != RWCONV_OK) return fail(st);
  std::unique_ptr<rwconv_transform, TransformDeleter> ts(raw);
  size_t needed = 0;
  rwconv_transform_dump(ts.get(), nullptr, 0, &needed);
  std::string text(needed + 1, '\0');
  rwconv_transform_dump(ts.get(), text.data(), text.size(), &needed);
  text.resize(needed);
  int32_t passed = 0;
  size_t failures = 0;
  rwconv_transform_verify(ts.get(), &passed, &failures);
  std::cout << text << "verify: " << (passed ? "pass" : "FAIL") << " (" << failures
            << " mismatches)\n";
  return passed ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Per-layer benchmark of region-wise Winograd convolution against im2row + GEMM"};

  std::string network;
  std::string layers_path;
  std::vector<std::string> variants;
  int reps = 1;
  bool check = false;
  int threads = 1;
  int scale = 1;
  std::string format = "csv";
  std::string out_path;
  uint64_t seed = 0;
  std::vector<int> dump_mr;
  bool list = false;

  rwconv_bench_options defaults;
  rwconv_bench_options_default(&defaults);
  seed = defaults.seed;

  auto* net_opt = app.add_option("--network", network,
                                 "Built-in layer table: vgg16, vgg19, googlenet, inception-v3, squeezenet");
  auto* layers_opt = app.add_option("--layers", layers_path, "Layer CSV file");
  net_opt->excludes(layers_opt);
  app.add_option("--variant", variants,
                 "f2x2_3x3, f4x4_3x3, f2x2_5x5, f2_1x7, f2_7x1 or im2row (repeatable; "
                 "default: every variant applicable to each layer)");
  app.add_option("--reps", reps, "Repetitions per variant; medians are reported")->check(CLI::PositiveNumber);
  app.add_flag("--check", check, "Compare every output against direct convolution");
  app.add_option("--threads", threads, "Worker threads for tile GEMMs and region loops")
      ->check(CLI::PositiveNumber);
  app.add_option("--scale", scale, "Divide channel counts by S")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "md"}));
  app.add_option("--out", out_path, "Write the report here instead of stdout");
  app.add_option("--seed", seed, "Seed for the random inputs and weights");
  app.add_option("--dump-transform", dump_mr, "Print the F(m,r) transform set and exit")
      ->expected(2)
      ->delimiter(',');
  app.add_flag("--list-networks", list, "List built-in networks and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  if (list) {
    for (const char* name : {"vgg16", "vgg19", "googlenet", "inception-v3", "squeezenet"})
      std::cout << name << '\n';
    return kExitOk;
  }
  if (!dump_mr.empty()) return dump_transform(dump_mr);
  if (network.empty() && layers_path.empty()) {
    std::cerr << "bench: one of --network or --layers is required\n";
    return kExitInput;
  }

  rwconv_layer_table* table_raw = nullptr;
  rwconv_status st = network.empty() ? rwconv_layer_table_load(layers_path.c_str(), &table_raw)
                                     : rwconv_layer_table_builtin(network.c_str(), &table_raw);
  if (st != RWCONV_OK) return fail(st);
  std::unique_ptr<rwconv_layer_table, TableDeleter> table(table_raw);

  rwconv_bench_options opts = defaults;
  opts.reps = reps;
  opts.check = check ? 1 : 0;
  opts.threads = threads;
  opts.scale = scale;
  opts.seed = seed;

  std::vector<const char*> variant_ptrs;
  for (const auto& v : variants) variant_ptrs.push_back(v.c_str());

  rwconv_bench_result* result_raw = nullptr;
  st = rwconv_bench_run(table.get(), variant_ptrs.data(), variant_ptrs.size(), &opts, &result_raw);
  if (st != RWCONV_OK) return fail(st);
  std::unique_ptr<rwconv_bench_result, ResultDeleter> result(result_raw);

  for (size_t i = 0; i < rwconv_bench_result_size(result.get()); ++i) {
    rwconv_bench_record rec;
    rwconv_bench_result_get(result.get(), i, &rec);
    if (rec.skipped)
      std::cerr << "bench: skipped " << rec.variant << " on " << rec.layer << " (" << rec.skip_reason << ")\n";
    else if (rec.has_error && !(rec.max_rel_err <= rec.tolerance))
      std::cerr << "bench: " << rec.layer << " " << rec.variant << " max_rel_err " << rec.max_rel_err
                << " exceeds " << rec.tolerance << '\n';
  }

  char* text_raw = nullptr;
  const char* label = network.empty() ? layers_path.c_str() : network.c_str();
  st = rwconv_report_emit(result.get(), format == "md" ? RWCONV_REPORT_MARKDOWN : RWCONV_REPORT_CSV,
                          label, &text_raw);
  if (st != RWCONV_OK) return fail(st);
  std::unique_ptr<char, StringDeleter> text(text_raw);

  if (out_path.empty()) {
    std::cout << text.get();
  } else {
    std::ofstream out(out_path);
    if (!out || !(out << text.get())) {
      std::cerr << "bench: cannot write " << out_path << '\n';
      return kExitInput;
    }
  }
  return rwconv_bench_result_violations(result.get()) > 0 ? kExitViolation : kExitOk;
}
