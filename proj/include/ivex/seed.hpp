#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ivex/core.hpp"

namespace ivex {

// A code seed describes one loop iteration of an irregular kernel as a small
// expression DAG over declared arrays, plus a single store with an optional
// reduction combine. Arrays whose values feed addressing are access arrays;
// they must be index-typed and immutable, which is what lets the inspector
// evaluate every address before any vector code runs.

enum class ArrayRole : uint8_t { AccessArray, DataArray };
enum class Mutability : uint8_t { Immutable, Mutable };

struct ArrayDecl {
  std::string name;
  ElemKind elem = ElemKind::F64;
  ArrayRole role = ArrayRole::DataArray;
  Mutability mut = Mutability::Immutable;
};

enum class ExprKind : uint8_t { LoadDirect, LoadIndirect, Const, BinOp };
enum class BinOpKind : uint8_t { Add, Sub, Mul, Div };

inline const char* to_string(BinOpKind op) {
  switch (op) {
    case BinOpKind::Add: return "add";
    case BinOpKind::Sub: return "sub";
    case BinOpKind::Mul: return "mul";
    case BinOpKind::Div: return "div";
  }
  return "?";
}

using ExprRef = uint32_t;
inline constexpr ExprRef kNoExpr = UINT32_MAX;

struct SeedExpr {
  ExprKind kind = ExprKind::Const;
  std::string array;        // LoadDirect / LoadIndirect
  ExprRef index = kNoExpr;  // LoadIndirect subscript
  ExprRef lhs = kNoExpr, rhs = kNoExpr;
  BinOpKind op = BinOpKind::Add;
  ElemKind const_kind = ElemKind::F64;
  double const_f = 0.0;
  int64_t const_i = 0;
};

enum class Combine : uint8_t { Overwrite, ReduceAdd, ReduceMul };

inline const char* to_string(Combine c) {
  switch (c) {
    case Combine::Overwrite: return "overwrite";
    case Combine::ReduceAdd: return "reduce-add";
    case Combine::ReduceMul: return "reduce-mul";
  }
  return "?";
}

struct StoreSpec {
  std::string target;
  ExprRef index = kNoExpr;
  ExprRef value = kNoExpr;
  Combine combine = Combine::Overwrite;
};

class CodeSeed {
 public:
  std::vector<ArrayDecl> decls;
  std::vector<SeedExpr> exprs;
  int64_t trip_count = 0;
  StoreSpec store;

  ExprRef add(SeedExpr e) {
    exprs.push_back(std::move(e));
    return static_cast<ExprRef>(exprs.size() - 1);
  }
  ExprRef load_direct(std::string array);
  ExprRef load_indirect(std::string array, ExprRef index);
  ExprRef constant_f64(double v);
  ExprRef constant_i64(int64_t v);
  ExprRef binop(BinOpKind op, ExprRef lhs, ExprRef rhs);

  const ArrayDecl* find_decl(const std::string& name) const;
};

// Canonical seeds for the two evaluation kernels. The data arrays default to
// f64 but can be instantiated integer-typed for bit-exact oracle checks.
CodeSeed build_spmv_seed(int64_t n_nnz, ElemKind data_kind = ElemKind::F64);
CodeSeed build_pagerank_seed(int64_t n_edges, ElemKind data_kind = ElemKind::F64);

// Collects every invariant violation instead of stopping at the first one.
std::vector<std::string> validate_seed(const CodeSeed& seed);

// Reference interpreter: runs iterations 0..trip_count-1 strictly in order,
// mutating the store target in `bindings`. This is the correctness oracle for
// every vectorized plan.
void scalar_execute(const CodeSeed& seed, Bindings& bindings);

// Inspector-side evaluation of an index subexpression at one iteration.
// Only immutable arrays may be read (validate_seed enforces that).
int64_t eval_index_expr(const CodeSeed& seed, ExprRef e, const Bindings& bindings,
                        int64_t iteration);

}  // namespace ivex
