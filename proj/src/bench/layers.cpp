#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rwconv/bench.hpp"

namespace rwconv::bench {

namespace {

ConvLayerSpec conv(std::string name, int hw, int in_c, int out_m, int k_h, int k_w,
                   Padding pad, int stride = 1) {
  return ConvLayerSpec{std::move(name), hw, hw, in_c, out_m, k_h, k_w, pad, stride};
}

// Square kernel with symmetric "same" padding, stride 1.
ConvLayerSpec same(std::string name, int hw, int in_c, int out_m, int k) {
  const int p = k / 2;
  return conv(std::move(name), hw, in_c, out_m, k, k, {p, p, p, p});
}

ConvLayerSpec pointwise(std::string name, int hw, int in_c, int out_m) {
  return conv(std::move(name), hw, in_c, out_m, 1, 1, {});
}

ConvLayerSpec row7(std::string name, int hw, int in_c, int out_m) {  // 1x7
  return conv(std::move(name), hw, in_c, out_m, 1, 7, {0, 0, 3, 3});
}

ConvLayerSpec col7(std::string name, int hw, int in_c, int out_m) {  // 7x1
  return conv(std::move(name), hw, in_c, out_m, 7, 1, {3, 3, 0, 0});
}

std::vector<ConvLayerSpec> vgg(const std::vector<int>& convs_per_block) {
  std::vector<ConvLayerSpec> layers;
  const int widths[] = {64, 128, 256, 512, 512};
  int hw = 224, in_c = 3;
  for (int b = 0; b < 5; ++b) {
    for (int i = 0; i < convs_per_block[b]; ++i) {
      layers.push_back(same("conv" + std::to_string(b + 1) + "_" + std::to_string(i + 1), hw, in_c,
                            widths[b], 3));
      in_c = widths[b];
    }
    hw /= 2;
  }
  return layers;
}

std::vector<ConvLayerSpec> googlenet() {
  std::vector<ConvLayerSpec> layers;
  layers.push_back(conv("conv1/7x7_s2", 224, 3, 64, 7, 7, {3, 3, 3, 3}, 2));
  layers.push_back(pointwise("conv2/3x3_reduce", 56, 64, 64));
  layers.push_back(same("conv2/3x3", 56, 64, 192, 3));
  struct Block {
    const char* name;
    int hw, in, b1, r3, b3, r5, b5, pool;
  };
  const Block blocks[] = {
      {"inception_3a", 28, 192, 64, 96, 128, 16, 32, 32},
      {"inception_3b", 28, 256, 128, 128, 192, 32, 96, 64},
      {"inception_4a", 14, 480, 192, 96, 208, 16, 48, 64},
      {"inception_4b", 14, 512, 160, 112, 224, 24, 64, 64},
      {"inception_4c", 14, 512, 128, 128, 256, 24, 64, 64},
      {"inception_4d", 14, 512, 112, 144, 288, 32, 64, 64},
      {"inception_4e", 14, 528, 256, 160, 320, 32, 128, 128},
      {"inception_5a", 7, 832, 256, 160, 320, 32, 128, 128},
      {"inception_5b", 7, 832, 384, 192, 384, 48, 128, 128},
  };
  for (const auto& b : blocks) {
    const std::string p = b.name;
    layers.push_back(pointwise(p + "/1x1", b.hw, b.in, b.b1));
    layers.push_back(pointwise(p + "/3x3_reduce", b.hw, b.in, b.r3));
    layers.push_back(same(p + "/3x3", b.hw, b.r3, b.b3, 3));
    layers.push_back(pointwise(p + "/5x5_reduce", b.hw, b.in, b.r5));
    layers.push_back(same(p + "/5x5", b.hw, b.r5, b.b5, 5));
    layers.push_back(pointwise(p + "/pool_proj", b.hw, b.in, b.pool));
  }
  return layers;
}

std::vector<ConvLayerSpec> inception_v3() {
  std::vector<ConvLayerSpec> layers;
  layers.push_back(conv("Conv2d_1a_3x3", 299, 3, 32, 3, 3, {}, 2));
  layers.push_back(conv("Conv2d_2a_3x3", 149, 32, 32, 3, 3, {}));
  layers.push_back(same("Conv2d_2b_3x3", 147, 32, 64, 3));
  layers.push_back(pointwise("Conv2d_3b_1x1", 73, 64, 80));
  layers.push_back(conv("Conv2d_4a_3x3", 73, 80, 192, 3, 3, {}));

  const int mixed5_in[] = {192, 256, 288};
  const int mixed5_pool[] = {32, 64, 64};
  const char* mixed5_names[] = {"Mixed_5b", "Mixed_5c", "Mixed_5d"};
  for (int i = 0; i < 3; ++i) {
    const std::string p = mixed5_names[i];
    const int in = mixed5_in[i];
    layers.push_back(pointwise(p + "/branch1x1", 35, in, 64));
    layers.push_back(pointwise(p + "/branch5x5_1", 35, in, 48));
    layers.push_back(same(p + "/branch5x5_2", 35, 48, 64, 5));
    layers.push_back(pointwise(p + "/branch3x3dbl_1", 35, in, 64));
    layers.push_back(same(p + "/branch3x3dbl_2", 35, 64, 96, 3));
    layers.push_back(same(p + "/branch3x3dbl_3", 35, 96, 96, 3));
    layers.push_back(pointwise(p + "/branch_pool", 35, in, mixed5_pool[i]));
  }

  layers.push_back(conv("Mixed_6a/branch3x3", 35, 288, 384, 3, 3, {}, 2));
  layers.push_back(pointwise("Mixed_6a/branch3x3dbl_1", 35, 288, 64));
  layers.push_back(same("Mixed_6a/branch3x3dbl_2", 35, 64, 96, 3));
  layers.push_back(conv("Mixed_6a/branch3x3dbl_3", 35, 96, 96, 3, 3, {}, 2));

  const int c7s[] = {128, 160, 160, 192};
  const char* mixed6_names[] = {"Mixed_6b", "Mixed_6c", "Mixed_6d", "Mixed_6e"};
  for (int i = 0; i < 4; ++i) {
    const std::string p = mixed6_names[i];
    const int c7 = c7s[i];
    layers.push_back(pointwise(p + "/branch1x1", 17, 768, 192));
    layers.push_back(pointwise(p + "/branch7x7_1", 17, 768, c7));
    layers.push_back(row7(p + "/branch7x7_2", 17, c7, c7));
    layers.push_back(col7(p + "/branch7x7_3", 17, c7, 192));
    layers.push_back(pointwise(p + "/branch7x7dbl_1", 17, 768, c7));
    layers.push_back(col7(p + "/branch7x7dbl_2", 17, c7, c7));
    layers.push_back(row7(p + "/branch7x7dbl_3", 17, c7, c7));
    layers.push_back(col7(p + "/branch7x7dbl_4", 17, c7, c7));
    layers.push_back(row7(p + "/branch7x7dbl_5", 17, c7, 192));
    layers.push_back(pointwise(p + "/branch_pool", 17, 768, 192));
  }

  layers.push_back(pointwise("Mixed_7a/branch3x3_1", 17, 768, 192));
  layers.push_back(conv("Mixed_7a/branch3x3_2", 17, 192, 320, 3, 3, {}, 2));
  layers.push_back(pointwise("Mixed_7a/branch7x7x3_1", 17, 768, 192));
  layers.push_back(row7("Mixed_7a/branch7x7x3_2", 17, 192, 192));
  layers.push_back(col7("Mixed_7a/branch7x7x3_3", 17, 192, 192));
  layers.push_back(conv("Mixed_7a/branch7x7x3_4", 17, 192, 192, 3, 3, {}, 2));

  const int mixed7_in[] = {1280, 2048};
  const char* mixed7_names[] = {"Mixed_7b", "Mixed_7c"};
  for (int i = 0; i < 2; ++i) {
    const std::string p = mixed7_names[i];
    const int in = mixed7_in[i];
    layers.push_back(pointwise(p + "/branch1x1", 8, in, 320));
    layers.push_back(pointwise(p + "/branch3x3_1", 8, in, 384));
    layers.push_back(conv(p + "/branch3x3_2a", 8, 384, 384, 1, 3, {0, 0, 1, 1}));
    layers.push_back(conv(p + "/branch3x3_2b", 8, 384, 384, 3, 1, {1, 1, 0, 0}));
    layers.push_back(pointwise(p + "/branch3x3dbl_1", 8, in, 448));
    layers.push_back(same(p + "/branch3x3dbl_2", 8, 448, 384, 3));
    layers.push_back(conv(p + "/branch3x3dbl_3a", 8, 384, 384, 1, 3, {0, 0, 1, 1}));
    layers.push_back(conv(p + "/branch3x3dbl_3b", 8, 384, 384, 3, 1, {1, 1, 0, 0}));
    layers.push_back(pointwise(p + "/branch_pool", 8, in, 192));
  }
  return layers;
}

std::vector<ConvLayerSpec> squeezenet() {
  std::vector<ConvLayerSpec> layers;
  layers.push_back(conv("conv1", 227, 3, 96, 7, 7, {}, 2));
  struct Fire {
    const char* name;
    int hw, in, squeeze, expand;
  };
  const Fire fires[] = {
      {"fire2", 55, 96, 16, 64},   {"fire3", 55, 128, 16, 64},  {"fire4", 55, 128, 32, 128},
      {"fire5", 27, 256, 32, 128}, {"fire6", 27, 256, 48, 192}, {"fire7", 27, 384, 48, 192},
      {"fire8", 27, 384, 64, 256}, {"fire9", 13, 512, 64, 256},
  };
  for (const auto& f : fires) {
    const std::string p = f.name;
    layers.push_back(pointwise(p + "/squeeze1x1", f.hw, f.in, f.squeeze));
    layers.push_back(pointwise(p + "/expand1x1", f.hw, f.squeeze, f.expand));
    layers.push_back(same(p + "/expand3x3", f.hw, f.squeeze, f.expand, 3));
  }
  layers.push_back(pointwise("conv10", 13, 512, 1000));
  return layers;
}

std::string normalise_name(std::string_view name) {
  std::string out;
  for (char ch : name)
    if (ch != '-' && ch != '_') out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad_line(std::size_t line, const std::string& why) {
  throw Error(ErrorKind::Input, "layer table line " + std::to_string(line) + ": " + why);
}

int parse_int(std::string_view field, std::size_t line, const char* column) {
  field = trim(field);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size())
    bad_line(line, std::string("column ") + column + " is not an integer: '" + std::string(field) + "'");
  return value;
}

}  // namespace

const std::vector<std::string>& builtin_network_names() {
  static const std::vector<std::string> names = {"vgg16", "vgg19", "googlenet", "inception-v3",
                                                 "squeezenet"};
  return names;
}

std::vector<ConvLayerSpec> builtin_network(std::string_view name) {
  const std::string key = normalise_name(name);
  if (key == "vgg16") return vgg({2, 2, 3, 3, 3});
  if (key == "vgg19") return vgg({2, 2, 4, 4, 4});
  if (key == "googlenet") return googlenet();
  if (key == "inceptionv3") return inception_v3();
  if (key == "squeezenet") return squeezenet();
  throw Error(ErrorKind::Input, "unknown network '" + std::string(name) +
                                    "' (known: vgg16, vgg19, googlenet, inception-v3, squeezenet)");
}

std::vector<ConvLayerSpec> parse_layer_csv(std::string_view text) {
  static constexpr const char* kColumns[] = {"name",  "in_h",  "in_w",  "in_c",
                                             "out_m", "k_h",   "k_w",   "pad_t",
                                             "pad_b", "pad_l", "pad_r", "stride"};
  std::vector<ConvLayerSpec> layers;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kLayerCsvHeader) bad_line(line_no, "expected header '" + std::string(kLayerCsvHeader) + "'");
      header_seen = true;
      continue;
    }
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 12)
      bad_line(line_no, "expected 12 fields, found " + std::to_string(fields.size()));
    ConvLayerSpec s;
    s.name = std::string(trim(fields[0]));
    if (s.name.empty()) bad_line(line_no, "empty layer name");
    int* targets[] = {&s.in_h,     &s.in_w,       &s.in_c,      &s.out_m,
                      &s.k_h,      &s.k_w,        &s.pad.top,   &s.pad.bottom,
                      &s.pad.left, &s.pad.right,  &s.stride};
    for (std::size_t f = 1; f < 12; ++f) *targets[f - 1] = parse_int(fields[f], line_no, kColumns[f]);
    if (s.in_c < 1 || s.out_m < 1) bad_line(line_no, "channel counts must be positive");
    try {
      conv_output_shape(s);
    } catch (const Error& e) {
      bad_line(line_no, e.what());
    }
    layers.push_back(std::move(s));
  }
  if (!header_seen) throw Error(ErrorKind::Input, "layer table is empty");
  return layers;
}

std::string format_layer_csv(const std::vector<ConvLayerSpec>& layers) {
  std::ostringstream os;
  os << kLayerCsvHeader << '\n';
  for (const auto& s : layers) {
    os << s.name << ',' << s.in_h << ',' << s.in_w << ',' << s.in_c << ',' << s.out_m << ','
       << s.k_h << ',' << s.k_w << ',' << s.pad.top << ',' << s.pad.bottom << ',' << s.pad.left
       << ',' << s.pad.right << ',' << s.stride << '\n';
  }
  return os.str();
}

std::vector<ConvLayerSpec> load_layer_table(const std::string& source) {
  const std::string key = normalise_name(source);
  for (const auto& known : builtin_network_names())
    if (normalise_name(known) == key) return builtin_network(source);
  std::ifstream in(source);
  if (!in) {
    throw Error(ErrorKind::Input,
                "'" + source + "' is neither a built-in network nor a readable layer file");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_layer_csv(buf.str());
}

bool is_winograd_eligible(const ConvLayerSpec& s) {
  if (s.stride != 1) return false;
  return (s.k_h == 3 && s.k_w == 3) || (s.k_h == 5 && s.k_w == 5) || (s.k_h == 1 && s.k_w == 7) ||
         (s.k_h == 7 && s.k_w == 1);
}

ConvLayerSpec scale_channels(const ConvLayerSpec& spec, int scale) {
  if (scale < 1) throw Error(ErrorKind::Input, "scale must be >= 1");
  ConvLayerSpec out = spec;
  out.in_c = std::max(1, spec.in_c / scale);
  out.out_m = std::max(1, spec.out_m / scale);
  return out;
}

}  // namespace rwconv::bench
