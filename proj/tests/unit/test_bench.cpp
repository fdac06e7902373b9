#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "rwconv/bench.hpp"
#include "rwconv/error.hpp"
#include "rwconv/reference.hpp"
#include "rwconv/winograd.hpp"

using namespace rwconv;
using namespace rwconv::bench;

namespace {

std::set<std::string> eligible_types(const std::vector<ConvLayerSpec>& layers) {
  std::set<std::string> types;
  for (const auto& l : layers)
    if (is_winograd_eligible(l)) types.insert(std::to_string(l.k_h) + "x" + std::to_string(l.k_w));
  return types;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, sep)) out.push_back(cell);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(' ');
  const auto e = s.find_last_not_of(' ');
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

// Data rows of a report as vectors of 9 cells; '-' in markdown means empty.
std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);  // header
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto cells = split(line, ',');
    cells.resize(9);
    rows.push_back(cells);
  }
  return rows;
}

std::vector<std::vector<std::string>> markdown_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  bool in_table = false;
  while (std::getline(is, line)) {
    if (line.rfind("| layer | variant |", 0) == 0) {
      in_table = true;
      std::getline(is, line);  // separator
      continue;
    }
    if (!in_table) continue;
    if (line.empty() || line[0] != '|') break;
    auto cells = split(line.substr(1, line.size() - 2), '|');
    for (auto& c : cells) {
      c = trim(c);
      if (c == "-") c.clear();
    }
    rows.push_back(cells);
  }
  return rows;
}

ConvLayerSpec small_layer(std::string name, int k_h, int k_w, int side = 12, int stride = 1) {
  return ConvLayerSpec{std::move(name), side, side, 4, 4, k_h, k_w,
                       Padding{k_h / 2, k_h / 2, k_w / 2, k_w / 2}, stride};
}

BenchOptions checked() {
  BenchOptions o;
  o.check = true;
  return o;
}

}  // namespace

TEST(LayerTables, AllBuiltinsLoad) {
  for (const auto& name : builtin_network_names()) {
    const auto layers = builtin_network(name);
    EXPECT_FALSE(layers.empty()) << name;
    for (const auto& l : layers) EXPECT_NO_THROW(conv_output_shape(l)) << name << " " << l.name;
  }
  EXPECT_EQ(builtin_network("VGG-16").size(), builtin_network("vgg16").size());
  EXPECT_EQ(builtin_network("Inception_v3").size(), builtin_network("inception-v3").size());
}

TEST(LayerTables, SqueezenetFastLayersAreThreeByThree) {
  EXPECT_EQ(eligible_types(builtin_network("squeezenet")), (std::set<std::string>{"3x3"}));
}

TEST(LayerTables, InceptionCoversAllKernelTypes) {
  EXPECT_EQ(eligible_types(builtin_network("inception-v3")),
            (std::set<std::string>{"1x7", "3x3", "5x5", "7x1"}));
}

TEST(LayerTables, GooglenetHasFiveByFive) {
  EXPECT_EQ(eligible_types(builtin_network("googlenet")), (std::set<std::string>{"3x3", "5x5"}));
}

TEST(LayerTables, VggConvLayerCounts) {
  EXPECT_EQ(builtin_network("vgg16").size(), 13u);
  EXPECT_EQ(builtin_network("vgg19").size(), 16u);
  EXPECT_EQ(eligible_types(builtin_network("vgg19")), (std::set<std::string>{"3x3"}));
}

TEST(LayerTables, UnknownNetworkIsInputError) {
  try {
    builtin_network("alexnet");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Input);
  }
}

TEST(LayerCsv, RoundTrip) {
  const auto layers = builtin_network("googlenet");
  EXPECT_EQ(parse_layer_csv(format_layer_csv(layers)), layers);
}

TEST(LayerCsv, MalformedLineNamesLineNumber) {
  const std::string text = std::string(kLayerCsvHeader) +
                           "\nok,8,8,4,4,3,3,1,1,1,1,1\nbad,8,8,4,x,3,3,1,1,1,1,1\n";
  try {
    parse_layer_csv(text);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Input);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(LayerCsv, WrongFieldCountAndHeader) {
  EXPECT_THROW(parse_layer_csv(std::string(kLayerCsvHeader) + "\na,1,2\n"), Error);
  EXPECT_THROW(parse_layer_csv("name,h\n"), Error);
  EXPECT_THROW(load_layer_table("/nonexistent/layers.csv"), Error);
}

TEST(LayerTables, Eligibility) {
  EXPECT_TRUE(is_winograd_eligible(small_layer("a", 3, 3)));
  EXPECT_TRUE(is_winograd_eligible(small_layer("a", 1, 7)));
  EXPECT_FALSE(is_winograd_eligible(small_layer("a", 1, 1)));
  EXPECT_FALSE(is_winograd_eligible(small_layer("a", 3, 3, 12, 2)));
  EXPECT_FALSE(is_winograd_eligible(small_layer("a", 3, 5)));
}

TEST(LayerTables, ScaleChannels) {
  const ConvLayerSpec s{"x", 8, 8, 64, 3, 3, 3, {}, 1};
  const ConvLayerSpec t = scale_channels(s, 4);
  EXPECT_EQ(t.in_c, 16);
  EXPECT_EQ(t.out_m, 1);
  EXPECT_EQ(scale_channels(s, 1), s);
}

TEST(Variants, LookupAndApplicability) {
  EXPECT_EQ(find_variant("f4x4_3x3").m_h, 4);
  EXPECT_THROW(find_variant("f8x8_3x3"), Error);
  EXPECT_EQ(default_variants(small_layer("a", 3, 3)),
            (std::vector<std::string>{"f2x2_3x3", "f4x4_3x3"}));
  EXPECT_EQ(default_variants(small_layer("a", 7, 1)), (std::vector<std::string>{"f2_7x1"}));
  EXPECT_TRUE(default_variants(small_layer("a", 3, 3, 12, 2)).empty());
  EXPECT_DOUBLE_EQ(winograd_tolerance(2, 2), 1e-4);
  EXPECT_DOUBLE_EQ(winograd_tolerance(4, 4), 5e-4);
  EXPECT_DOUBLE_EQ(find_variant("im2row").tolerance, 1e-5);
}

TEST(RunLayerBench, Im2rowOnlyHasUnitSpeedup) {
  const auto recs = run_layer_bench(small_layer("l", 3, 3), {"im2row"}, checked());
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].variant, "im2row");
  EXPECT_EQ(recs[0].speedup, 1.0);
  EXPECT_EQ(recs[0].t_out_ns, 0u);
  ASSERT_TRUE(recs[0].max_rel_err.has_value());
  EXPECT_LE(*recs[0].max_rel_err, 1e-5);
}

TEST(RunLayerBench, MacRatioQuarterForLargeTiles) {
  // 16x16 output with pad 1, divisible by 4.
  const ConvLayerSpec s{"vgg_like", 16, 16, 8, 8, 3, 3, Padding{1, 1, 1, 1}, 1};
  const auto recs = run_layer_bench(s, {"f4x4_3x3", "f2x2_3x3"}, checked());
  ASSERT_EQ(recs.size(), 3u);
  EXPECT_EQ(recs[0].variant, "im2row");
  EXPECT_EQ(recs[0].macs, im2row_macs(s));
  EXPECT_DOUBLE_EQ(static_cast<double>(recs[1].macs) / recs[0].macs, 0.25);
  EXPECT_DOUBLE_EQ(static_cast<double>(recs[2].macs) / recs[0].macs, 16.0 / 36.0);
  EXPECT_EQ(recs[1].macs, engine_macs(build_plan(s, 4, 4)));
  for (const auto& r : recs) EXPECT_FALSE(r.violates_tolerance()) << r.variant;
}

TEST(RunLayerBench, InapplicableVariantIsSkipped) {
  const auto recs = run_layer_bench(small_layer("s2", 3, 3, 12, 2), {"f2x2_3x3", "f2x2_5x5"}, {});
  ASSERT_EQ(recs.size(), 3u);
  EXPECT_FALSE(recs[0].skipped);
  EXPECT_TRUE(recs[1].skipped);
  EXPECT_TRUE(recs[2].skipped);
  EXPECT_FALSE(recs[1].skip_reason.empty());
}

TEST(RunLayerBench, ErrorColumnEmptyWithoutCheck) {
  const auto recs = run_layer_bench(small_layer("l", 3, 3), {"f2x2_3x3"}, {});
  for (const auto& r : recs) EXPECT_FALSE(r.max_rel_err.has_value());
}

TEST(RunLayerBench, BadOptionsAreInputErrors) {
  BenchOptions o;
  o.reps = 0;
  EXPECT_THROW(run_layer_bench(small_layer("l", 3, 3), {}, o), Error);
  EXPECT_THROW(run_layer_bench(small_layer("l", 3, 3), {"nope"}, {}), Error);
}

TEST(RunTable, DeterministicMacsAndErrors) {
  const std::vector<ConvLayerSpec> layers = {small_layer("a", 3, 3), small_layer("b", 5, 5),
                                             small_layer("c", 1, 7), small_layer("d", 7, 1)};
  const auto r1 = run_table(layers, {}, checked());
  const auto r2 = run_table(layers, {}, checked());
  ASSERT_EQ(r1.size(), r2.size());
  for (std::size_t i = 0; i < r1.size(); ++i) {
    EXPECT_EQ(r1[i].variant, r2[i].variant);
    EXPECT_EQ(r1[i].macs, r2[i].macs);
    EXPECT_EQ(r1[i].max_rel_err, r2[i].max_rel_err);
  }
  EXPECT_EQ(count_violations(r1), 0u);
  BenchOptions other = checked();
  other.seed = 7;
  const auto r3 = run_table(layers, {}, other);
  EXPECT_NE(r1[1].max_rel_err, r3[1].max_rel_err);
}

TEST(RunTable, ScaledNetworkStaysWithinTolerance) {
  BenchOptions o = checked();
  o.scale = 16;
  const auto recs = run_table(builtin_network("squeezenet"), {}, o);
  EXPECT_EQ(count_violations(recs), 0u);
}

TEST(Report, OneRecordOneDataLine) {
  BenchRecord r;
  r.layer = "conv1";
  r.variant = "im2row";
  r.t_in_ns = 5;
  r.t_gemm_ns = 10;
  r.t_total_ns = 15;
  r.macs = 1728;
  r.speedup = 1.0;
  const std::string text = emit_report({r}, ReportFormat::Csv);
  std::istringstream is(text);
  std::string header, line;
  std::getline(is, header);
  EXPECT_EQ(header, kReportCsvHeader);
  std::getline(is, line);
  EXPECT_EQ(line, "conv1,im2row,5,10,0,15,1728,,1.0000");
  int data_lines = 0;
  for (std::istringstream again(text); std::getline(again, line);)
    if (!line.empty() && line[0] != '#' && line != header) ++data_lines;
  EXPECT_EQ(data_lines, 1);
}

TEST(Report, EmptyInputIsError) {
  try {
    emit_report({}, ReportFormat::Markdown);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Input);
  }
}

TEST(Report, ImprovementPercentConvention) {
  EXPECT_DOUBLE_EQ(improvement_percent(200.0, 50.0), 75.0);
  EXPECT_NEAR(improvement_percent(100.0, 39.29), 60.71, 1e-9);
  EXPECT_DOUBLE_EQ(improvement_percent(0.0, 1.0), 0.0);

  BenchRecord base{.layer = "l", .variant = "im2row", .t_total_ns = 1000};
  BenchRecord slow{.layer = "l", .variant = "f2x2_3x3", .t_total_ns = 700};
  BenchRecord fast{.layer = "l", .variant = "f4x4_3x3", .t_total_ns = 400};
  BenchRecord other{.layer = "m", .variant = "im2row", .t_total_ns = 500};
  const Aggregate agg = aggregate({base, slow, fast, other});
  EXPECT_EQ(agg.fast_layers, 1u);
  EXPECT_EQ(agg.baseline_ns, 1000u);
  EXPECT_EQ(agg.ours_ns, 400u);
  EXPECT_DOUBLE_EQ(agg.improvement_pct, 60.0);
  EXPECT_NE(emit_report({base, slow, fast, other}, ReportFormat::Csv).find("improvement_pct=60.00"),
            std::string::npos);
}

TEST(Report, CsvAndMarkdownCarrySameValues) {
  const ConvLayerSpec s{"vgg_like", 16, 16, 8, 8, 3, 3, Padding{1, 1, 1, 1}, 1};
  auto recs = run_layer_bench(s, {"f2x2_3x3", "f4x4_3x3", "f2x2_5x5"}, checked());
  const auto csv = csv_rows(emit_report(recs, ReportFormat::Csv));
  const auto md = markdown_rows(emit_report(recs, ReportFormat::Markdown, "vgg16"));
  ASSERT_EQ(csv.size(), 3u);  // skipped 5x5 record is not emitted
  EXPECT_EQ(csv, md);
  recs[1].max_rel_err.reset();
  EXPECT_EQ(csv_rows(emit_report(recs, ReportFormat::Csv)),
            markdown_rows(emit_report(recs, ReportFormat::Markdown)));
}

TEST(Report, MarkdownShowsPublishedFigures) {
  const ConvLayerSpec s{"vgg_like", 16, 16, 8, 8, 3, 3, Padding{1, 1, 1, 1}, 1};
  const auto text = emit_report(run_layer_bench(s, {"f4x4_3x3"}, {}), ReportFormat::Markdown, "vgg16");
  EXPECT_NE(text.find("Speedup (%)"), std::string::npos);
  EXPECT_NE(text.find("| 3x3 | 1 |"), std::string::npos);
  EXPECT_NE(text.find("2.7x | 3.5x"), std::string::npos);
}
