#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ivex/core.hpp"
#include "ivex/seed.hpp"

namespace ivex {

// Coordinate-form sparse matrix, canonical: entries sorted by (row, col),
// duplicates summed away, all indices 0-based and in range.
struct CooMatrix {
  int64_t rows = 0, cols = 0;
  std::vector<int64_t> row_idx, col_idx;
  std::vector<double> values;

  int64_t nnz() const { return static_cast<int64_t>(values.size()); }
  void canonicalize();  // sort + merge duplicates
};

struct EdgeList {
  int64_t n_vertices = 0;
  std::vector<int64_t> src, dst;
  std::vector<int64_t> out_degree;

  int64_t n_edges() const { return static_cast<int64_t>(src.size()); }
};

// MatrixMarket coordinate reader. Accepts real/integer/pattern fields and
// general/symmetric storage; symmetric off-diagonals are expanded to both
// triangles. Throws InputError with a line number on malformed input.
CooMatrix parse_matrix_market(std::istream& in);
void write_matrix_market(std::ostream& out, const CooMatrix& m);

// SNAP-style "src dst" lines, '#' comments. Vertex ids are checked against
// n_vertices; pass n_vertices < 0 to infer it as max id + 1.
EdgeList parse_edge_list(std::istream& in, int64_t n_vertices);

CooMatrix gen_dense(int64_t rows, int64_t cols);
CooMatrix gen_random(int64_t rows, int64_t cols, int64_t nnz_per_row, uint64_t rng_seed);

EdgeList edges_from_matrix(const CooMatrix& m);

// Array bindings for the evaluation kernels. Values already present in the
// dataset are used as-is; the x / rank vectors are filled deterministically
// (small positive values so float reductions stay far from cancellation).
Bindings spmv_bindings(const CooMatrix& m, ElemKind data_kind = ElemKind::F64);
Bindings pagerank_bindings(const EdgeList& g, ElemKind data_kind = ElemKind::F64);

}  // namespace ivex
