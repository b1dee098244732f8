#include "ivex/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace ivex {

void CooMatrix::canonicalize() {
  std::vector<size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (row_idx[a] != row_idx[b]) return row_idx[a] < row_idx[b];
    return col_idx[a] < col_idx[b];
  });
  std::vector<int64_t> r, c;
  std::vector<double> v;
  r.reserve(order.size());
  c.reserve(order.size());
  v.reserve(order.size());
  for (size_t k : order) {
    if (!r.empty() && r.back() == row_idx[k] && c.back() == col_idx[k]) {
      v.back() += values[k];  // MatrixMarket convention: duplicates sum
    } else {
      r.push_back(row_idx[k]);
      c.push_back(col_idx[k]);
      v.push_back(values[k]);
    }
  }
  row_idx = std::move(r);
  col_idx = std::move(c);
  values = std::move(v);
}

namespace {

[[noreturn]] void line_error(int line, const std::string& msg) {
  std::ostringstream os;
  os << "line " << line << ": " << msg;
  throw InputError(os.str());
}

std::string lower(std::string s) {
  for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace

CooMatrix parse_matrix_market(std::istream& in) {
  std::string line;
  int lineno = 0;
  if (!next_line(in, line)) throw InputError("empty stream");
  ++lineno;

  std::istringstream hs(line);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") line_error(lineno, "missing %%MatrixMarket banner");
  if (lower(object) != "matrix") line_error(lineno, "unsupported object '" + object + "'");
  if (lower(format) != "coordinate")
    line_error(lineno, "unsupported format '" + format + "' (coordinate only)");
  field = lower(field);
  symmetry = lower(symmetry);
  if (field != "real" && field != "integer" && field != "pattern")
    line_error(lineno, "unsupported field '" + field + "'");
  if (symmetry != "general" && symmetry != "symmetric")
    line_error(lineno, "unsupported symmetry '" + symmetry + "'");

  int64_t rows = -1, cols = -1, nnz = -1;
  while (next_line(in, line)) {
    ++lineno;
    if (!line.empty() && line[0] == '%') continue;
    std::istringstream ds(line);
    if (!(ds >> rows >> cols >> nnz)) {
      if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
      line_error(lineno, "malformed size line");
    }
    break;
  }
  if (rows < 0) throw InputError("missing size line");
  if (rows == 0 || cols == 0) line_error(lineno, "zero matrix dimension");

  CooMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.row_idx.reserve(nnz);
  m.col_idx.reserve(nnz);
  m.values.reserve(nnz);

  int64_t seen = 0;
  while (seen < nnz) {
    if (!next_line(in, line)) {
      std::ostringstream os;
      os << "truncated entry list: expected " << nnz << " entries, got " << seen;
      throw InputError(os.str());
    }
    ++lineno;
    if (line.empty() || line[0] == '%' ||
        line.find_first_not_of(" \t\r\n") == std::string::npos)
      continue;
    std::istringstream es(line);
    int64_t r, c;
    double v = 1.0;
    if (!(es >> r >> c)) line_error(lineno, "malformed entry");
    if (field != "pattern" && !(es >> v)) line_error(lineno, "missing value");
    if (r < 1 || r > rows || c < 1 || c > cols)
      line_error(lineno, "entry index out of declared bounds");
    m.row_idx.push_back(r - 1);
    m.col_idx.push_back(c - 1);
    m.values.push_back(v);
    if (symmetry == "symmetric" && r != c) {
      m.row_idx.push_back(c - 1);
      m.col_idx.push_back(r - 1);
      m.values.push_back(v);
    }
    ++seen;
  }
  m.canonicalize();
  return m;
}

void write_matrix_market(std::ostream& out, const CooMatrix& m) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows << " " << m.cols << " " << m.nnz() << "\n";
  char buf[96];
  for (int64_t k = 0; k < m.nnz(); ++k) {
    std::snprintf(buf, sizeof buf, "%lld %lld %.17g\n",
                  static_cast<long long>(m.row_idx[k] + 1),
                  static_cast<long long>(m.col_idx[k] + 1), m.values[k]);
    out << buf;
  }
}

EdgeList parse_edge_list(std::istream& in, int64_t n_vertices) {
  EdgeList g;
  std::string line;
  int lineno = 0;
  int64_t max_id = -1;
  while (next_line(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#' ||
        line.find_first_not_of(" \t\r\n") == std::string::npos)
      continue;
    std::istringstream es(line);
    int64_t s, d;
    if (!(es >> s >> d)) line_error(lineno, "non-integer token in edge");
    if (s < 0 || d < 0) line_error(lineno, "negative vertex id");
    if (n_vertices >= 0 && (s >= n_vertices || d >= n_vertices)) {
      std::ostringstream os;
      os << "vertex id " << std::max(s, d) << " >= n_vertices " << n_vertices;
      line_error(lineno, os.str());
    }
    g.src.push_back(s);
    g.dst.push_back(d);
    max_id = std::max({max_id, s, d});
  }
  g.n_vertices = n_vertices >= 0 ? n_vertices : max_id + 1;
  g.out_degree.assign(g.n_vertices, 0);
  for (int64_t s : g.src) ++g.out_degree[s];
  return g;
}

CooMatrix gen_dense(int64_t rows, int64_t cols) {
  if (rows < 1 || cols < 1) throw InputError("gen_dense needs rows, cols >= 1");
  CooMatrix m;
  m.rows = rows;
  m.cols = cols;
  int64_t nnz = rows * cols;
  m.row_idx.resize(nnz);
  m.col_idx.resize(nnz);
  m.values.resize(nnz);
  int64_t k = 0;
  for (int64_t r = 0; r < rows; ++r)
    for (int64_t c = 0; c < cols; ++c, ++k) {
      m.row_idx[k] = r;
      m.col_idx[k] = c;
      m.values[k] = 1.0 + static_cast<double>((r * 7 + c * 13) % 9);
    }
  return m;
}

CooMatrix gen_random(int64_t rows, int64_t cols, int64_t nnz_per_row, uint64_t rng_seed) {
  if (nnz_per_row > cols) throw InputError("gen_random: nnz_per_row exceeds cols");
  std::mt19937_64 rng(rng_seed);
  CooMatrix m;
  m.rows = rows;
  m.cols = cols;
  std::vector<int64_t> pool(cols);
  for (int64_t r = 0; r < rows; ++r) {
    // Partial Fisher-Yates; avoids std::sample whose algorithm is
    // implementation-defined and would break cross-platform determinism.
    std::iota(pool.begin(), pool.end(), 0);
    for (int64_t k = 0; k < nnz_per_row; ++k) {
      int64_t j = k + static_cast<int64_t>(rng() % static_cast<uint64_t>(cols - k));
      std::swap(pool[k], pool[j]);
    }
    std::sort(pool.begin(), pool.begin() + nnz_per_row);
    for (int64_t k = 0; k < nnz_per_row; ++k) {
      m.row_idx.push_back(r);
      m.col_idx.push_back(pool[k]);
      m.values.push_back(static_cast<double>(1 + rng() % 9));
    }
  }
  return m;
}

EdgeList edges_from_matrix(const CooMatrix& m) {
  EdgeList g;
  g.n_vertices = std::max(m.rows, m.cols);
  g.src = m.row_idx;
  g.dst = m.col_idx;
  g.out_degree.assign(g.n_vertices, 0);
  for (int64_t s : g.src) ++g.out_degree[s];
  return g;
}

namespace {

// Deterministic fill values for the dense vectors; positive and integer-like
// so that integer instantiations are exact and float reductions never cancel.
double fill_value(int64_t i) { return static_cast<double>(1 + (i * 11 + 3) % 7); }

Buffer make_data(ElemKind kind, const std::vector<double>& v) {
  switch (kind) {
    case ElemKind::F64:
      return v;
    case ElemKind::F32: {
      std::vector<float> f(v.size());
      for (size_t i = 0; i < v.size(); ++i) f[i] = static_cast<float>(v[i]);
      return f;
    }
    default: {
      std::vector<int64_t> n(v.size());
      for (size_t i = 0; i < v.size(); ++i) n[i] = static_cast<int64_t>(std::llround(v[i]));
      return n;
    }
  }
}

Buffer zeros(ElemKind kind, size_t n) {
  switch (kind) {
    case ElemKind::F64: return std::vector<double>(n, 0.0);
    case ElemKind::F32: return std::vector<float>(n, 0.0f);
    default: return std::vector<int64_t>(n, 0);
  }
}

}  // namespace

Bindings spmv_bindings(const CooMatrix& m, ElemKind data_kind) {
  Bindings b;
  b.bind("row_ptr", m.row_idx);
  b.bind("col_ptr", m.col_idx);
  b.bind("value", make_data(data_kind, m.values));
  std::vector<double> x(m.cols);
  for (int64_t i = 0; i < m.cols; ++i) x[i] = fill_value(i);
  b.bind("x", make_data(data_kind, x));
  b.bind("y", zeros(data_kind, m.rows));
  return b;
}

Bindings pagerank_bindings(const EdgeList& g, ElemKind data_kind) {
  Bindings b;
  b.bind("n1", g.src);
  b.bind("n2", g.dst);
  std::vector<double> rank(g.n_vertices), nneighbor(g.n_vertices);
  for (int64_t v = 0; v < g.n_vertices; ++v) {
    rank[v] = fill_value(v);
    if (data_kind == ElemKind::F64 || data_kind == ElemKind::F32)
      nneighbor[v] = g.out_degree[v] > 0 ? 1.0 / static_cast<double>(g.out_degree[v]) : 0.0;
    else
      nneighbor[v] = fill_value(v + 1);  // reciprocals are not integers
  }
  b.bind("rank", make_data(data_kind, rank));
  b.bind("nneighbor", make_data(data_kind, nneighbor));
  b.bind("sum", zeros(data_kind, g.n_vertices));
  return b;
}

}  // namespace ivex
