#include "rwconv/cooktoom.hpp"

#include <sstream>

#include "rwconv/error.hpp"

namespace rwconv {

namespace {

using Poly = std::vector<Rational>;  // coefficient i multiplies x^i

Poly times_linear(const Poly& p, const Rational& root) {
  // p(x) * (x - root)
  Poly out(p.size() + 1);
  for (std::size_t i = 0; i < p.size(); ++i) {
    out[i + 1] += p[i];
    out[i] -= p[i] * root;
  }
  return out;
}

Matrix<float> to_float(const Matrix<Rational>& m) {
  Matrix<float> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).to_float();
  return out;
}

// Evaluation matrix: row k holds p_k^j for finite points, the last row picks
// the leading coefficient (evaluation at infinity).
Matrix<Rational> evaluation_matrix(std::span<const Rational> points, int t, int n) {
  Matrix<Rational> v(t, n);
  for (int k = 0; k < t - 1; ++k) {
    Rational power(1);
    for (int j = 0; j < n; ++j) {
      v(k, j) = power;
      power *= points[k];
    }
  }
  v(t - 1, n - 1) = Rational(1);
  return v;
}

}  // namespace

TransformSet generate_1d(int m, int r, std::span<const Rational> points,
                         const GenerateOptions& options) {
  if (m < 1 || r < 1) {
    throw Error(ErrorKind::Construction, "F(" + std::to_string(m) + "," + std::to_string(r) +
                                             "): tile and kernel lengths must be >= 1");
  }
  const int t = m + r - 1;
  if (static_cast<int>(points.size()) != t - 1) {
    throw Error(ErrorKind::Arity, "F(" + std::to_string(m) + "," + std::to_string(r) + ") needs " +
                                      std::to_string(t - 1) + " finite points, got " +
                                      std::to_string(points.size()));
  }
  if (m > kMaxDefaultTileOutputs && !options.allow_large_tiles) {
    throw Error(ErrorKind::Construction,
                "F(" + std::to_string(m) + "," + std::to_string(r) +
                    "): tiles with more than 4 outputs are refused without allow_large_tiles");
  }
  for (std::size_t a = 0; a < points.size(); ++a)
    for (std::size_t b = a + 1; b < points.size(); ++b)
      if (points[a] == points[b])
        throw Error(ErrorKind::Construction, "duplicate interpolation point " + points[a].str());

  TransformSet ts;
  ts.m = m;
  ts.r = r;
  ts.t = t;
  ts.points.assign(points.begin(), points.end());

  const Matrix<Rational> vm = evaluation_matrix(points, t, m);
  ts.g = evaluation_matrix(points, t, r);
  ts.at = Matrix<Rational>(m, t);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < t; ++k) ts.at(i, k) = vm(k, i);

  ts.bt = Matrix<Rational>(t, t);
  for (int k = 0; k < t; ++k) {
    const bool infinite = k == t - 1;
    Poly numer{Rational(1)};
    Rational denom(1);
    int sign = 1;
    for (int j = 0; j < t - 1; ++j) {
      if (j == k) continue;
      numer = times_linear(numer, points[j]);
      if (infinite) {
        sign = -sign;  // p_j - infinity < 0
      } else {
        denom *= points[k] - points[j];
        if (points[j] < points[k]) sign = -sign;
      }
    }
    for (int col = 0; col < t; ++col)
      ts.bt(k, col) = col < static_cast<int>(numer.size()) ? numer[col] * Rational(sign) : Rational();

    // Raw Lagrange row is numer / denom; we stored sign * numer, so the
    // compensating factor 1 / (sign * denom) goes to G (finite) or AT (infinity).
    const Rational scale = Rational(1) / (Rational(sign) * denom);
    if (infinite) {
      for (int i = 0; i < m; ++i) ts.at(i, k) *= scale;
    } else {
      for (int j = 0; j < r; ++j) ts.g(k, j) *= scale;
    }
  }

  ts.at_f = to_float(ts.at);
  ts.g_f = to_float(ts.g);
  ts.bt_f = to_float(ts.bt);
  return ts;
}

std::vector<Rational> default_points(std::size_t n) {
  std::vector<Rational> pts;
  pts.reserve(n);
  if (n > 0) pts.emplace_back(0);
  for (std::int64_t v = 1; pts.size() < n; ++v) {
    pts.emplace_back(v);
    if (pts.size() < n) pts.emplace_back(-v);
  }
  return pts;
}

TransformSet default_transform(int m, int r, const GenerateOptions& options) {
  const int count = m + r - 2;
  return generate_1d(m, r, default_points(count > 0 ? static_cast<std::size_t>(count) : 0),
                     options);
}

VerifyReport verify_transform_set(const TransformSet& ts) {
  VerifyReport report;
  const int m = ts.m, r = ts.r, t = ts.t;
  if (ts.at.rows() != static_cast<std::size_t>(m) || ts.at.cols() != static_cast<std::size_t>(t) ||
      ts.g.rows() != static_cast<std::size_t>(t) || ts.g.cols() != static_cast<std::size_t>(r) ||
      ts.bt.rows() != static_cast<std::size_t>(t) || ts.bt.cols() != static_cast<std::size_t>(t) ||
      t != m + r - 1) {
    return report;  // malformed set: passed stays false with no pairs checked
  }
  for (int i = 0; i < t; ++i) {
    for (int j = 0; j < r; ++j) {
      ++report.pairs_checked;
      for (int out = 0; out < m; ++out) {
        Rational got;
        for (int k = 0; k < t; ++k) got += ts.at(out, k) * (ts.g(k, j) * ts.bt(k, i));
        // Valid correlation of e_i with e_j: y[out] = [out + j == i].
        const Rational expected(out + j == i ? 1 : 0);
        if (got != expected) report.failures.push_back({i, j, out, got, expected});
      }
    }
  }
  report.passed = report.failures.empty();
  return report;
}

std::string VerifyReport::summary() const {
  std::ostringstream os;
  os << (passed ? "pass" : "FAIL") << ": " << pairs_checked << " basis pairs, "
     << failures.size() << " mismatches";
  for (const auto& f : failures) {
    os << "\n  input e" << f.input_index << ", kernel e" << f.kernel_index << ": y["
       << f.output_index << "] = " << f.got.str() << ", expected " << f.expected.str();
  }
  return os.str();
}

std::string dump_transform_set(const TransformSet& ts) {
  std::ostringstream os;
  os << "F(" << ts.m << "," << ts.r << ") t=" << ts.t << " points:";
  for (const auto& p : ts.points) os << ' ' << p.str();
  os << " inf\n";
  auto block = [&os](const char* name, const Matrix<Rational>& mat) {
    os << name << ' ' << mat.rows() << 'x' << mat.cols() << '\n';
    for (std::size_t i = 0; i < mat.rows(); ++i) {
      for (std::size_t j = 0; j < mat.cols(); ++j) os << (j ? " " : "") << mat(i, j).str();
      os << '\n';
    }
  };
  block("AT", ts.at);
  block("G", ts.g);
  block("BT", ts.bt);
  return os.str();
}

}  // namespace rwconv
