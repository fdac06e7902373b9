#include "rwconv/rwconv.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "rwconv/bench.hpp"
#include "rwconv/cooktoom.hpp"
#include "rwconv/gemm.hpp"
#include "rwconv/reference.hpp"
#include "rwconv/tensor.hpp"
#include "rwconv/winograd.hpp"

struct rwconv_tensor {
  rwconv::Tensor4D value;
};
struct rwconv_transform {
  rwconv::TransformSet value;
};
struct rwconv_plan {
  rwconv::WinogradPlan value;
};
struct rwconv_tile_batch {
  rwconv::TileMatrixBatch value;
};
struct rwconv_layer_table {
  std::vector<rwconv::ConvLayerSpec> layers;
};
struct rwconv_bench_result {
  std::vector<rwconv::bench::BenchRecord> records;
};

namespace {

thread_local std::string g_last_error;

struct InvalidArgument {
  const char* what;
};

rwconv_status status_of(rwconv::ErrorKind kind) {
  using rwconv::ErrorKind;
  switch (kind) {
    case ErrorKind::Size: return RWCONV_ERR_SIZE;
    case ErrorKind::Shape: return RWCONV_ERR_SHAPE;
    case ErrorKind::Arity: return RWCONV_ERR_ARITY;
    case ErrorKind::Construction: return RWCONV_ERR_CONSTRUCTION;
    case ErrorKind::Unsupported: return RWCONV_ERR_UNSUPPORTED;
    case ErrorKind::Input: return RWCONV_ERR_INPUT;
    case ErrorKind::Io: return RWCONV_ERR_IO;
  }
  return RWCONV_ERR_INTERNAL;
}

// Runs fn, translating exceptions into status codes and the thread's last error.
template <typename Fn>
rwconv_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return RWCONV_OK;
  } catch (const InvalidArgument& e) {
    g_last_error = e.what;
    return RWCONV_ERR_INVALID_ARGUMENT;
  } catch (const rwconv::Error& e) {
    g_last_error = std::string(rwconv::error_kind_name(e.kind())) + ": " + e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return RWCONV_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RWCONV_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return RWCONV_ERR_INTERNAL;
  }
}

template <typename T>
const T& need(const T* p, const char* what) {
  if (!p) throw InvalidArgument{what};
  return *p;
}

template <typename T>
void need_out(T* p, const char* what) {
  if (!p) throw InvalidArgument{what};
}

rwconv::Dims to_dims(const uint32_t dims[4]) {
  if (!dims) throw InvalidArgument{"dims is NULL"};
  return rwconv::Dims{dims[0], dims[1], dims[2], dims[3]};
}

rwconv::Layout to_layout(rwconv_layout layout) {
  if (layout != RWCONV_NHWC && layout != RWCONV_NCHW) throw InvalidArgument{"unknown layout"};
  return static_cast<rwconv::Layout>(layout);
}

rwconv::ConvLayerSpec to_spec(const rwconv_layer* layer) {
  const rwconv_layer& l = need(layer, "layer is NULL");
  rwconv::ConvLayerSpec s;
  s.name = std::string(l.name, strnlen(l.name, RWCONV_NAME_MAX));
  s.in_h = l.in_h;
  s.in_w = l.in_w;
  s.in_c = l.in_c;
  s.out_m = l.out_m;
  s.k_h = l.k_h;
  s.k_w = l.k_w;
  s.pad = {l.pad_t, l.pad_b, l.pad_l, l.pad_r};
  s.stride = l.stride;
  return s;
}

template <std::size_t N>
void copy_name(char (&dst)[N], const std::string& src) {
  const std::size_t n = std::min(src.size(), N - 1);
  std::memcpy(dst, src.data(), n);
  dst[n] = '\0';
}

rwconv_layer from_spec(const rwconv::ConvLayerSpec& s) {
  rwconv_layer l{};
  copy_name(l.name, s.name);
  l.in_h = s.in_h;
  l.in_w = s.in_w;
  l.in_c = s.in_c;
  l.out_m = s.out_m;
  l.k_h = s.k_h;
  l.k_w = s.k_w;
  l.pad_t = s.pad.top;
  l.pad_b = s.pad.bottom;
  l.pad_l = s.pad.left;
  l.pad_r = s.pad.right;
  l.stride = s.stride;
  return l;
}

const rwconv::Matrix<rwconv::Rational>& pick(const rwconv::TransformSet& ts, rwconv_matrix_kind kind) {
  switch (kind) {
    case RWCONV_MATRIX_AT: return ts.at;
    case RWCONV_MATRIX_G: return ts.g;
    case RWCONV_MATRIX_BT: return ts.bt;
  }
  throw InvalidArgument{"unknown matrix kind"};
}

const rwconv::Matrix<float>& pick_f(const rwconv::TransformSet& ts, rwconv_matrix_kind kind) {
  switch (kind) {
    case RWCONV_MATRIX_AT: return ts.at_f;
    case RWCONV_MATRIX_G: return ts.g_f;
    case RWCONV_MATRIX_BT: return ts.bt_f;
  }
  throw InvalidArgument{"unknown matrix kind"};
}

rwconv::ExecOptions exec_with(int32_t threads) {
  if (threads < 1) throw rwconv::Error(rwconv::ErrorKind::Input, "threads must be >= 1");
  rwconv::ExecOptions exec;
  exec.threads = threads;
  return exec;
}

}  // namespace

extern "C" {

const char* rwconv_status_string(rwconv_status status) {
  switch (status) {
    case RWCONV_OK: return "ok";
    case RWCONV_ERR_SIZE: return "size error";
    case RWCONV_ERR_SHAPE: return "shape error";
    case RWCONV_ERR_ARITY: return "arity error";
    case RWCONV_ERR_CONSTRUCTION: return "construction error";
    case RWCONV_ERR_UNSUPPORTED: return "unsupported variant";
    case RWCONV_ERR_INPUT: return "input error";
    case RWCONV_ERR_IO: return "i/o error";
    case RWCONV_ERR_INVALID_ARGUMENT: return "invalid argument";
    case RWCONV_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* rwconv_last_error(void) { return g_last_error.c_str(); }

const char* rwconv_version(void) { return "1.0.0"; }

// ---- tensors ----

rwconv_status rwconv_tensor_create(const uint32_t dims[4], rwconv_layout layout, const float* data,
                                   size_t count, rwconv_tensor** out) {
  return guarded([&] {
    need_out(out, "out is NULL");
    if (!data && count > 0) throw InvalidArgument{"data is NULL"};
    const std::span<const float> fill(data, count);
    *out = new rwconv_tensor{rwconv::tensor_new(to_dims(dims), to_layout(layout), fill)};
  });
}

rwconv_status rwconv_tensor_create_filled(const uint32_t dims[4], rwconv_layout layout, float value,
                                          rwconv_tensor** out) {
  return guarded([&] {
    need_out(out, "out is NULL");
    *out = new rwconv_tensor{rwconv::tensor_new(to_dims(dims), to_layout(layout), value)};
  });
}

void rwconv_tensor_destroy(rwconv_tensor* t) { delete t; }

rwconv_status rwconv_tensor_dims(const rwconv_tensor* t, uint32_t dims[4]) {
  return guarded([&] {
    const auto& d = need(t, "tensor is NULL").value.dims();
    need_out(dims, "dims is NULL");
    dims[0] = static_cast<uint32_t>(d.n);
    dims[1] = static_cast<uint32_t>(d.h);
    dims[2] = static_cast<uint32_t>(d.w);
    dims[3] = static_cast<uint32_t>(d.c);
  });
}

rwconv_layout rwconv_tensor_layout(const rwconv_tensor* t) {
  return t ? static_cast<rwconv_layout>(t->value.layout()) : RWCONV_NHWC;
}

size_t rwconv_tensor_count(const rwconv_tensor* t) { return t ? t->value.size() : 0; }

const float* rwconv_tensor_data(const rwconv_tensor* t) {
  return t ? t->value.data().data() : nullptr;
}

rwconv_status rwconv_tensor_convert(const rwconv_tensor* t, rwconv_layout target, rwconv_tensor** out) {
  return guarded([&] {
    const auto& src = need(t, "tensor is NULL");
    need_out(out, "out is NULL");
    *out = new rwconv_tensor{rwconv::convert_layout(src.value, to_layout(target))};
  });
}

rwconv_status rwconv_tensor_load(const char* path, rwconv_tensor** out) {
  return guarded([&] {
    if (!path) throw InvalidArgument{"path is NULL"};
    need_out(out, "out is NULL");
    *out = new rwconv_tensor{rwconv::load_tensor(path)};
  });
}

rwconv_status rwconv_tensor_save(const rwconv_tensor* t, const char* path) {
  return guarded([&] {
    const auto& src = need(t, "tensor is NULL");
    if (!path) throw InvalidArgument{"path is NULL"};
    rwconv::save_tensor(src.value, path);
  });
}

rwconv_status rwconv_extract_region(const rwconv_tensor* t, uint32_t n, int64_t row0, int64_t col0,
                                    uint32_t rh, uint32_t rw, float* out, size_t count) {
  return guarded([&] {
    const auto& src = need(t, "tensor is NULL");
    need_out(out, "out is NULL");
    rwconv::extract_region(src.value, n, static_cast<long>(row0), static_cast<long>(col0), rh, rw,
                           std::span<float>(out, count));
  });
}

rwconv_status rwconv_conv_output_shape(const rwconv_layer* layer, int32_t* out_h, int32_t* out_w) {
  return guarded([&] {
    need_out(out_h, "out_h is NULL");
    need_out(out_w, "out_w is NULL");
    const auto shape = rwconv::conv_output_shape(to_spec(layer));
    *out_h = shape.h;
    *out_w = shape.w;
  });
}

// ---- transforms ----

rwconv_status rwconv_transform_generate(int32_t m, int32_t r, const int64_t* num, const int64_t* den,
                                        size_t npoints, int32_t allow_large_tiles,
                                        rwconv_transform** out) {
  return guarded([&] {
    need_out(out, "out is NULL");
    if (npoints > 0 && (!num || !den)) throw InvalidArgument{"point arrays are NULL"};
    std::vector<rwconv::Rational> points;
    points.reserve(npoints);
    for (size_t i = 0; i < npoints; ++i) points.emplace_back(num[i], den[i]);
    rwconv::GenerateOptions opts;
    opts.allow_large_tiles = allow_large_tiles != 0;
    *out = new rwconv_transform{rwconv::generate_1d(m, r, points, opts)};
  });
}

rwconv_status rwconv_transform_default(int32_t m, int32_t r, int32_t allow_large_tiles,
                                       rwconv_transform** out) {
  return guarded([&] {
    need_out(out, "out is NULL");
    rwconv::GenerateOptions opts;
    opts.allow_large_tiles = allow_large_tiles != 0;
    *out = new rwconv_transform{rwconv::default_transform(m, r, opts)};
  });
}

void rwconv_transform_destroy(rwconv_transform* ts) { delete ts; }

rwconv_status rwconv_transform_dims(const rwconv_transform* ts, int32_t* m, int32_t* r, int32_t* t) {
  return guarded([&] {
    const auto& v = need(ts, "transform is NULL").value;
    if (m) *m = v.m;
    if (r) *r = v.r;
    if (t) *t = v.t;
  });
}

rwconv_status rwconv_transform_entry(const rwconv_transform* ts, rwconv_matrix_kind kind, uint32_t row,
                                     uint32_t col, int64_t* num, int64_t* den) {
  return guarded([&] {
    const auto& mat = pick(need(ts, "transform is NULL").value, kind);
    need_out(num, "num is NULL");
    need_out(den, "den is NULL");
    if (row >= mat.rows() || col >= mat.cols()) throw InvalidArgument{"entry index out of range"};
    *num = mat(row, col).num();
    *den = mat(row, col).den();
  });
}

rwconv_status rwconv_transform_matrix_f32(const rwconv_transform* ts, rwconv_matrix_kind kind,
                                          float* out, size_t count) {
  return guarded([&] {
    const auto& mat = pick_f(need(ts, "transform is NULL").value, kind);
    need_out(out, "out is NULL");
    if (count != mat.rows() * mat.cols())
      throw rwconv::Error(rwconv::ErrorKind::Size, "buffer does not match matrix size");
    std::copy(mat.values().begin(), mat.values().end(), out);
  });
}

rwconv_status rwconv_transform_verify(const rwconv_transform* ts, int32_t* passed, size_t* failures) {
  return guarded([&] {
    const auto report = rwconv::verify_transform_set(need(ts, "transform is NULL").value);
    need_out(passed, "passed is NULL");
    *passed = report.passed ? 1 : 0;
    if (failures) *failures = report.failures.size();
  });
}

rwconv_status rwconv_transform_dump(const rwconv_transform* ts, char* buffer, size_t capacity,
                                    size_t* needed) {
  return guarded([&] {
    const std::string text = rwconv::dump_transform_set(need(ts, "transform is NULL").value);
    if (needed) *needed = text.size();
    if (buffer && capacity > text.size()) std::memcpy(buffer, text.c_str(), text.size() + 1);
  });
}

// ---- gemm ----

rwconv_status rwconv_gemm(const float* a, const float* b, float* c, size_t p, size_t q, size_t s,
                          int32_t accumulate, uint64_t* macs) {
  return guarded([&] {
    if ((p * q && !a) || (q * s && !b) || (p * s && !c)) throw InvalidArgument{"matrix is NULL"};
    rwconv::GemmContext ctx;
    rwconv::gemm({a, p, q}, {b, q, s}, {c, p, s},
                 accumulate ? rwconv::Beta::Accumulate : rwconv::Beta::Overwrite, ctx);
    if (macs) *macs = ctx.mac_count();
  });
}

// ---- engine ----

rwconv_status rwconv_plan_create(const rwconv_layer* layer, int32_t m_h, int32_t m_w, uint32_t batch,
                                 rwconv_plan** out) {
  return guarded([&] {
    need_out(out, "out is NULL");
    rwconv::PlanOptions opts;
    opts.batch = static_cast<int>(batch);
    *out = new rwconv_plan{rwconv::build_plan(to_spec(layer), m_h, m_w, opts)};
  });
}

void rwconv_plan_destroy(rwconv_plan* plan) { delete plan; }

rwconv_status rwconv_plan_get_info(const rwconv_plan* plan, rwconv_plan_info* info) {
  return guarded([&] {
    const auto& p = need(plan, "plan is NULL").value;
    need_out(info, "info is NULL");
    *info = rwconv_plan_info{p.m_h,     p.m_w,     p.t_h,
                             p.t_w,     p.out_h,   p.out_w,
                             p.tiles_h, p.tiles_w, static_cast<uint32_t>(p.batch),
                             p.regions(), p.tile_area(), rwconv::engine_macs(p)};
  });
}

rwconv_status rwconv_transform_weights(const rwconv_plan* plan, const rwconv_tensor* weights,
                                       rwconv_tile_batch** out) {
  return guarded([&] {
    const auto& p = need(plan, "plan is NULL").value;
    const auto& w = need(weights, "weights is NULL").value;
    need_out(out, "out is NULL");
    *out = new rwconv_tile_batch{rwconv::transform_weights(p, rwconv::FilterBank::from_tensor(w))};
  });
}

rwconv_status rwconv_transform_input(const rwconv_plan* plan, const rwconv_tensor* input,
                                     int32_t threads, rwconv_tile_batch** out) {
  return guarded([&] {
    const auto& p = need(plan, "plan is NULL").value;
    const auto& x = need(input, "input is NULL").value;
    need_out(out, "out is NULL");
    *out = new rwconv_tile_batch{rwconv::transform_input(p, x, exec_with(threads))};
  });
}

rwconv_status rwconv_batched_gemm(const rwconv_tile_batch* a, const rwconv_tile_batch* b,
                                  int32_t threads, uint64_t* macs, rwconv_tile_batch** out) {
  return guarded([&] {
    const auto& av = need(a, "A batch is NULL").value;
    const auto& bv = need(b, "B batch is NULL").value;
    need_out(out, "out is NULL");
    rwconv::GemmContext ctx;
    auto c = rwconv::batched_gemm(av, bv, ctx, exec_with(threads));
    if (macs) *macs = ctx.mac_count();
    *out = new rwconv_tile_batch{std::move(c)};
  });
}

rwconv_status rwconv_transform_output(const rwconv_plan* plan, const rwconv_tile_batch* c,
                                      int32_t threads, rwconv_tensor** out) {
  return guarded([&] {
    const auto& p = need(plan, "plan is NULL").value;
    const auto& cv = need(c, "C batch is NULL").value;
    need_out(out, "out is NULL");
    *out = new rwconv_tensor{rwconv::transform_output(p, cv, exec_with(threads))};
  });
}

rwconv_status rwconv_convolve(const rwconv_plan* plan, const rwconv_tensor* input,
                              const rwconv_tile_batch* weights, int32_t threads, uint64_t* macs,
                              rwconv_tensor** out) {
  return guarded([&] {
    const auto& p = need(plan, "plan is NULL").value;
    const auto& x = need(input, "input is NULL").value;
    const auto& w = need(weights, "weights is NULL").value;
    need_out(out, "out is NULL");
    rwconv::GemmContext ctx;
    auto y = rwconv::convolve(p, x, w, ctx, exec_with(threads));
    if (macs) *macs = ctx.mac_count();
    *out = new rwconv_tensor{std::move(y)};
  });
}

void rwconv_batch_destroy(rwconv_tile_batch* batch) { delete batch; }

rwconv_status rwconv_batch_shape(const rwconv_tile_batch* batch, size_t* count, size_t* rows,
                                 size_t* cols, rwconv_batch_role* role) {
  return guarded([&] {
    const auto& b = need(batch, "batch is NULL").value;
    if (count) *count = b.count();
    if (rows) *rows = b.rows();
    if (cols) *cols = b.cols();
    if (role) *role = static_cast<rwconv_batch_role>(b.role());
  });
}

const float* rwconv_batch_data(const rwconv_tile_batch* batch) {
  return batch ? batch->value.data().data() : nullptr;
}

// ---- reference ----

rwconv_status rwconv_direct_conv(const rwconv_layer* layer, const rwconv_tensor* input,
                                 const rwconv_tensor* weights, rwconv_tensor** out) {
  return guarded([&] {
    const auto spec = to_spec(layer);
    const auto& x = need(input, "input is NULL").value;
    const auto& w = need(weights, "weights is NULL").value;
    need_out(out, "out is NULL");
    *out = new rwconv_tensor{rwconv::direct_conv(x, rwconv::FilterBank::from_tensor(w), spec)};
  });
}

rwconv_status rwconv_im2row(const rwconv_layer* layer, const rwconv_tensor* input, float* out,
                            size_t count, size_t* rows, size_t* cols) {
  return guarded([&] {
    const auto spec = to_spec(layer);
    const auto& x = need(input, "input is NULL").value;
    const auto lowered = rwconv::im2row(x, spec);
    if (rows) *rows = lowered.rows;
    if (cols) *cols = lowered.cols;
    if (!out) return;
    if (count != lowered.data.size())
      throw rwconv::Error(rwconv::ErrorKind::Size, "buffer does not match lowered matrix size");
    std::copy(lowered.data.begin(), lowered.data.end(), out);
  });
}

rwconv_status rwconv_im2row_conv(const rwconv_layer* layer, const rwconv_tensor* input,
                                 const rwconv_tensor* weights, uint64_t* macs, rwconv_tensor** out) {
  return guarded([&] {
    const auto spec = to_spec(layer);
    const auto& x = need(input, "input is NULL").value;
    const auto& w = need(weights, "weights is NULL").value;
    need_out(out, "out is NULL");
    rwconv::GemmContext ctx;
    auto y = rwconv::im2row_conv(x, rwconv::FilterBank::from_tensor(w), spec, ctx);
    if (macs) *macs = ctx.mac_count();
    *out = new rwconv_tensor{std::move(y)};
  });
}

rwconv_status rwconv_max_relative_error(const rwconv_tensor* candidate, const rwconv_tensor* reference,
                                        double* out) {
  return guarded([&] {
    const auto& a = need(candidate, "candidate is NULL").value;
    const auto& b = need(reference, "reference is NULL").value;
    need_out(out, "out is NULL");
    if (a.dims() != b.dims()) throw rwconv::Error(rwconv::ErrorKind::Size, "tensor dims differ");
    const auto lhs = rwconv::convert_layout(a, rwconv::Layout::NHWC);
    const auto rhs = rwconv::convert_layout(b, rwconv::Layout::NHWC);
    *out = rwconv::max_relative_error(lhs.data(), rhs.data());
  });
}

// ---- bench ----

rwconv_status rwconv_layer_table_builtin(const char* network, rwconv_layer_table** out) {
  return guarded([&] {
    if (!network) throw InvalidArgument{"network is NULL"};
    need_out(out, "out is NULL");
    *out = new rwconv_layer_table{rwconv::bench::builtin_network(network)};
  });
}

rwconv_status rwconv_layer_table_load(const char* path, rwconv_layer_table** out) {
  return guarded([&] {
    if (!path) throw InvalidArgument{"path is NULL"};
    need_out(out, "out is NULL");
    *out = new rwconv_layer_table{rwconv::bench::load_layer_table(path)};
  });
}

rwconv_status rwconv_layer_table_parse(const char* csv_text, rwconv_layer_table** out) {
  return guarded([&] {
    if (!csv_text) throw InvalidArgument{"csv_text is NULL"};
    need_out(out, "out is NULL");
    *out = new rwconv_layer_table{rwconv::bench::parse_layer_csv(csv_text)};
  });
}

void rwconv_layer_table_destroy(rwconv_layer_table* table) { delete table; }

size_t rwconv_layer_table_size(const rwconv_layer_table* table) {
  return table ? table->layers.size() : 0;
}

rwconv_status rwconv_layer_table_get(const rwconv_layer_table* table, size_t index, rwconv_layer* out) {
  return guarded([&] {
    const auto& t = need(table, "table is NULL");
    need_out(out, "out is NULL");
    if (index >= t.layers.size()) throw InvalidArgument{"layer index out of range"};
    *out = from_spec(t.layers[index]);
  });
}

int32_t rwconv_layer_is_winograd_eligible(const rwconv_layer* layer) {
  if (!layer) return 0;
  return rwconv::bench::is_winograd_eligible(to_spec(layer)) ? 1 : 0;
}

void rwconv_bench_options_default(rwconv_bench_options* options) {
  if (!options) return;
  *options = rwconv_bench_options{1, 0, 1, 1, rwconv::bench::kDefaultSeed};
}

rwconv_status rwconv_bench_run(const rwconv_layer_table* table, const char* const* variants,
                               size_t nvariants, const rwconv_bench_options* options,
                               rwconv_bench_result** out) {
  return guarded([&] {
    const auto& t = need(table, "table is NULL");
    need_out(out, "out is NULL");
    if (nvariants > 0 && !variants) throw InvalidArgument{"variants is NULL"};
    rwconv_bench_options o;
    rwconv_bench_options_default(&o);
    if (options) o = *options;
    rwconv::bench::BenchOptions opts;
    opts.reps = o.reps;
    opts.check = o.check != 0;
    opts.threads = o.threads;
    opts.scale = o.scale;
    opts.seed = o.seed;
    if (opts.scale < 1) throw rwconv::Error(rwconv::ErrorKind::Input, "scale must be >= 1");
    std::vector<std::string> names;
    for (size_t i = 0; i < nvariants; ++i) {
      if (!variants[i]) throw InvalidArgument{"variant name is NULL"};
      rwconv::bench::find_variant(variants[i]);
      names.emplace_back(variants[i]);
    }
    *out = new rwconv_bench_result{rwconv::bench::run_table(t.layers, names, opts)};
  });
}

void rwconv_bench_result_destroy(rwconv_bench_result* result) { delete result; }

size_t rwconv_bench_result_size(const rwconv_bench_result* result) {
  return result ? result->records.size() : 0;
}

rwconv_status rwconv_bench_result_get(const rwconv_bench_result* result, size_t index,
                                      rwconv_bench_record* out) {
  return guarded([&] {
    const auto& r = need(result, "result is NULL");
    need_out(out, "out is NULL");
    if (index >= r.records.size()) throw InvalidArgument{"record index out of range"};
    const auto& rec = r.records[index];
    rwconv_bench_record c{};
    copy_name(c.layer, rec.layer);
    copy_name(c.variant, rec.variant);
    c.skipped = rec.skipped ? 1 : 0;
    copy_name(c.skip_reason, rec.skip_reason);
    c.t_in_ns = rec.t_in_ns;
    c.t_gemm_ns = rec.t_gemm_ns;
    c.t_out_ns = rec.t_out_ns;
    c.t_total_ns = rec.t_total_ns;
    c.macs = rec.macs;
    c.has_error = rec.max_rel_err.has_value() ? 1 : 0;
    c.max_rel_err = rec.max_rel_err.value_or(0.0);
    c.tolerance = rec.tolerance;
    c.speedup = rec.speedup;
    *out = c;
  });
}

size_t rwconv_bench_result_violations(const rwconv_bench_result* result) {
  return result ? rwconv::bench::count_violations(result->records) : 0;
}

rwconv_status rwconv_report_emit(const rwconv_bench_result* result, rwconv_report_format format,
                                 const char* network, char** text) {
  return guarded([&] {
    const auto& r = need(result, "result is NULL");
    need_out(text, "text is NULL");
    if (format != RWCONV_REPORT_CSV && format != RWCONV_REPORT_MARKDOWN)
      throw InvalidArgument{"unknown report format"};
    const std::string report = rwconv::bench::emit_report(
        r.records,
        format == RWCONV_REPORT_CSV ? rwconv::bench::ReportFormat::Csv
                                    : rwconv::bench::ReportFormat::Markdown,
        network ? network : "");
    char* buf = static_cast<char*>(std::malloc(report.size() + 1));
    if (!buf) throw std::bad_alloc();
    std::memcpy(buf, report.c_str(), report.size() + 1);
    *text = buf;
  });
}

void rwconv_string_free(char* text) { std::free(text); }

}  // extern "C"
