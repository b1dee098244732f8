#include "ivex/seed.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <unordered_set>

namespace ivex {

ExprRef CodeSeed::load_direct(std::string array) {
  SeedExpr e;
  e.kind = ExprKind::LoadDirect;
  e.array = std::move(array);
  return add(std::move(e));
}

ExprRef CodeSeed::load_indirect(std::string array, ExprRef index) {
  SeedExpr e;
  e.kind = ExprKind::LoadIndirect;
  e.array = std::move(array);
  e.index = index;
  return add(std::move(e));
}

ExprRef CodeSeed::constant_f64(double v) {
  SeedExpr e;
  e.kind = ExprKind::Const;
  e.const_kind = ElemKind::F64;
  e.const_f = v;
  return add(std::move(e));
}

ExprRef CodeSeed::constant_i64(int64_t v) {
  SeedExpr e;
  e.kind = ExprKind::Const;
  e.const_kind = ElemKind::I64;
  e.const_i = v;
  return add(std::move(e));
}

ExprRef CodeSeed::binop(BinOpKind op, ExprRef lhs, ExprRef rhs) {
  SeedExpr e;
  e.kind = ExprKind::BinOp;
  e.op = op;
  e.lhs = lhs;
  e.rhs = rhs;
  return add(std::move(e));
}

const ArrayDecl* CodeSeed::find_decl(const std::string& name) const {
  for (const auto& d : decls)
    if (d.name == name) return &d;
  return nullptr;
}

CodeSeed build_spmv_seed(int64_t n_nnz, ElemKind data_kind) {
  CodeSeed s;
  s.trip_count = n_nnz;
  s.decls = {
      {"row_ptr", ElemKind::Index, ArrayRole::AccessArray, Mutability::Immutable},
      {"col_ptr", ElemKind::Index, ArrayRole::AccessArray, Mutability::Immutable},
      {"value", data_kind, ArrayRole::DataArray, Mutability::Immutable},
      {"x", data_kind, ArrayRole::DataArray, Mutability::Immutable},
      {"y", data_kind, ArrayRole::DataArray, Mutability::Mutable},
  };
  ExprRef v = s.load_direct("value");
  ExprRef col = s.load_direct("col_ptr");
  ExprRef xv = s.load_indirect("x", col);
  s.store.target = "y";
  s.store.index = s.load_direct("row_ptr");
  s.store.value = s.binop(BinOpKind::Mul, v, xv);
  s.store.combine = Combine::ReduceAdd;
  return s;
}

CodeSeed build_pagerank_seed(int64_t n_edges, ElemKind data_kind) {
  CodeSeed s;
  s.trip_count = n_edges;
  s.decls = {
      {"n1", ElemKind::Index, ArrayRole::AccessArray, Mutability::Immutable},
      {"n2", ElemKind::Index, ArrayRole::AccessArray, Mutability::Immutable},
      {"rank", data_kind, ArrayRole::DataArray, Mutability::Immutable},
      {"nneighbor", data_kind, ArrayRole::DataArray, Mutability::Immutable},
      {"sum", data_kind, ArrayRole::DataArray, Mutability::Mutable},
  };
  // nneighbor holds the precomputed reciprocal of the out-degree, so the
  // per-edge contribution is a single multiply.
  ExprRef src = s.load_direct("n1");
  ExprRef r = s.load_indirect("rank", src);
  ExprRef nn = s.load_indirect("nneighbor", src);
  s.store.target = "sum";
  s.store.index = s.load_direct("n2");
  s.store.value = s.binop(BinOpKind::Mul, r, nn);
  s.store.combine = Combine::ReduceAdd;
  return s;
}

namespace {

struct TypeChecker {
  const CodeSeed& seed;
  std::vector<std::string>& out;
  // Memoized inferred kinds; nullopt marks "in progress" for cycle detection.
  std::vector<int> state;  // 0 unvisited, 1 visiting, 2 done
  std::vector<ElemKind> kinds;
  bool cycle = false;

  explicit TypeChecker(const CodeSeed& s, std::vector<std::string>& o)
      : seed(s), out(o), state(s.exprs.size(), 0), kinds(s.exprs.size(), ElemKind::F64) {}

  void fail(const std::string& msg) { out.push_back(msg); }

  bool valid_ref(ExprRef e) const { return e < seed.exprs.size(); }

  std::optional<ElemKind> infer(ExprRef e) {
    if (!valid_ref(e)) {
      fail("dangling expression reference");
      return std::nullopt;
    }
    if (state[e] == 1) {
      cycle = true;
      return std::nullopt;
    }
    if (state[e] == 2) return kinds[e];
    state[e] = 1;
    std::optional<ElemKind> k = infer_uncached(e);
    state[e] = 2;
    if (k) kinds[e] = *k;
    return k;
  }

  std::optional<ElemKind> infer_uncached(ExprRef e) {
    const SeedExpr& x = seed.exprs[e];
    switch (x.kind) {
      case ExprKind::Const:
        return x.const_kind;
      case ExprKind::LoadDirect: {
        const ArrayDecl* d = seed.find_decl(x.array);
        if (!d) {
          fail("unknown array '" + x.array + "'");
          return std::nullopt;
        }
        return d->elem;
      }
      case ExprKind::LoadIndirect: {
        const ArrayDecl* d = seed.find_decl(x.array);
        if (!d) {
          fail("unknown array '" + x.array + "'");
          return std::nullopt;
        }
        auto ik = infer(x.index);
        if (ik && *ik != ElemKind::Index)
          fail("subscript of '" + x.array + "' is not index-typed");
        return d->elem;
      }
      case ExprKind::BinOp: {
        auto l = infer(x.lhs);
        auto r = infer(x.rhs);
        if (l && r && *l != *r) {
          fail(std::string("binop operand kinds differ (") + to_string(*l) + " vs " +
               to_string(*r) + ")");
          return std::nullopt;
        }
        return l ? l : r;
      }
    }
    return std::nullopt;
  }

  // Reports arrays read by the subtree. `index_position` marks that the whole
  // subtree feeds an address and therefore may touch only immutable arrays.
  void check_reads(ExprRef e, bool index_position, std::unordered_set<uint32_t>& seen) {
    if (!valid_ref(e) || cycle) return;
    if (!seen.insert(e).second) return;
    const SeedExpr& x = seed.exprs[e];
    switch (x.kind) {
      case ExprKind::Const:
        return;
      case ExprKind::LoadDirect:
      case ExprKind::LoadIndirect: {
        const ArrayDecl* d = seed.find_decl(x.array);
        if (d && d->mut == Mutability::Mutable) {
          if (index_position)
            fail("index depends on mutable data ('" + x.array + "')");
          else
            fail("mutable array '" + x.array + "' read in value expression");
        }
        if (x.kind == ExprKind::LoadIndirect) {
          std::unordered_set<uint32_t> sub;
          check_reads(x.index, true, sub);
        }
        return;
      }
      case ExprKind::BinOp:
        check_reads(x.lhs, index_position, seen);
        check_reads(x.rhs, index_position, seen);
        return;
    }
  }
};

}  // namespace

std::vector<std::string> validate_seed(const CodeSeed& seed) {
  std::vector<std::string> out;
  if (seed.trip_count < 0) out.push_back("negative trip count");

  for (const auto& d : seed.decls) {
    if (d.role == ArrayRole::AccessArray) {
      if (d.elem != ElemKind::Index)
        out.push_back("access array '" + d.name + "' is not index-typed");
      if (d.mut != Mutability::Immutable)
        out.push_back("access array '" + d.name + "' is not immutable");
    }
  }

  const ArrayDecl* target = seed.find_decl(seed.store.target);
  if (!target) {
    out.push_back("unknown array '" + seed.store.target + "' (store target)");
  } else if (target->mut != Mutability::Mutable) {
    out.push_back("store target '" + target->name + "' is not mutable");
  }
  for (const auto& d : seed.decls) {
    if (d.mut == Mutability::Mutable && d.name != seed.store.target)
      out.push_back("array '" + d.name + "' is mutable but never written");
  }

  TypeChecker tc(seed, out);
  auto ik = tc.infer(seed.store.index);
  if (ik && *ik != ElemKind::Index) out.push_back("store index is not index-typed");
  auto vk = tc.infer(seed.store.value);
  if (vk && target && *vk != target->elem)
    out.push_back("store value kind does not match target '" + target->name + "'");
  if (tc.cycle) out.push_back("expression graph contains a cycle");

  if (!tc.cycle) {
    std::unordered_set<uint32_t> seen;
    tc.check_reads(seed.store.index, true, seen);
    seen.clear();
    tc.check_reads(seed.store.value, false, seen);
  }
  return out;
}

namespace {

struct Value {
  ElemKind kind;
  int64_t i = 0;
  double f = 0.0;
  float s = 0.0f;
};

[[noreturn]] void range_error(int64_t iter, const std::string& array, int64_t off,
                              size_t len) {
  std::ostringstream os;
  os << "index out of range at i=" << iter << ": " << array << "[" << off
     << "], length " << len;
  throw ExecError(os.str());
}

struct ScalarExec {
  const CodeSeed& seed;
  Bindings& b;

  Value load(const std::string& array, int64_t iter, int64_t off) {
    const ArrayDecl* d = seed.find_decl(array);
    Value v{d->elem};
    if (off < 0) range_error(iter, array, off, buffer_len(b.at(array)));
    switch (d->elem) {
      case ElemKind::Index:
      case ElemKind::I64: {
        const auto& a = b.ints(array);
        if (static_cast<size_t>(off) >= a.size()) range_error(iter, array, off, a.size());
        v.i = a[off];
        break;
      }
      case ElemKind::F64: {
        const auto& a = b.reals(array);
        if (static_cast<size_t>(off) >= a.size()) range_error(iter, array, off, a.size());
        v.f = a[off];
        break;
      }
      case ElemKind::F32: {
        const auto& a = b.reals32(array);
        if (static_cast<size_t>(off) >= a.size()) range_error(iter, array, off, a.size());
        v.s = a[off];
        break;
      }
    }
    return v;
  }

  Value eval(ExprRef e, int64_t iter) {
    const SeedExpr& x = seed.exprs[e];
    switch (x.kind) {
      case ExprKind::Const: {
        Value v{x.const_kind};
        v.i = x.const_i;
        v.f = x.const_f;
        v.s = static_cast<float>(x.const_f);
        return v;
      }
      case ExprKind::LoadDirect:
        return load(x.array, iter, iter);
      case ExprKind::LoadIndirect: {
        Value idx = eval(x.index, iter);
        return load(x.array, iter, idx.i);
      }
      case ExprKind::BinOp: {
        Value l = eval(x.lhs, iter);
        Value r = eval(x.rhs, iter);
        return apply(x.op, l, r);
      }
    }
    throw ExecError("corrupt expression node");
  }

  static Value apply(BinOpKind op, const Value& l, const Value& r) {
    Value v{l.kind};
    switch (l.kind) {
      case ElemKind::Index:
      case ElemKind::I64:
        switch (op) {
          case BinOpKind::Add: v.i = checked_add(l.i, r.i); break;
          case BinOpKind::Sub: v.i = checked_sub(l.i, r.i); break;
          case BinOpKind::Mul: v.i = checked_mul(l.i, r.i); break;
          case BinOpKind::Div: v.i = checked_div(l.i, r.i); break;
        }
        break;
      case ElemKind::F64:
        switch (op) {
          case BinOpKind::Add: v.f = l.f + r.f; break;
          case BinOpKind::Sub: v.f = l.f - r.f; break;
          case BinOpKind::Mul: v.f = l.f * r.f; break;
          case BinOpKind::Div: v.f = l.f / r.f; break;
        }
        break;
      case ElemKind::F32:
        switch (op) {
          case BinOpKind::Add: v.s = l.s + r.s; break;
          case BinOpKind::Sub: v.s = l.s - r.s; break;
          case BinOpKind::Mul: v.s = l.s * r.s; break;
          case BinOpKind::Div: v.s = l.s / r.s; break;
        }
        break;
    }
    return v;
  }
};

}  // namespace

void scalar_execute(const CodeSeed& seed, Bindings& bindings) {
  auto violations = validate_seed(seed);
  if (!violations.empty()) throw ExecError("invalid seed: " + violations.front());
  for (const auto& d : seed.decls)
    if (!bindings.has(d.name)) throw ExecError("unbound array '" + d.name + "'");

  ScalarExec ex{seed, bindings};
  const ArrayDecl* target = seed.find_decl(seed.store.target);
  for (int64_t i = 0; i < seed.trip_count; ++i) {
    Value idx = ex.eval(seed.store.index, i);
    Value val = ex.eval(seed.store.value, i);
    int64_t off = idx.i;
    size_t len = buffer_len(bindings.at(seed.store.target));
    if (off < 0 || static_cast<size_t>(off) >= len)
      range_error(i, seed.store.target, off, len);
    switch (target->elem) {
      case ElemKind::Index:
      case ElemKind::I64: {
        auto& out = bindings.ints(seed.store.target);
        switch (seed.store.combine) {
          case Combine::Overwrite: out[off] = val.i; break;
          case Combine::ReduceAdd: out[off] = checked_add(out[off], val.i); break;
          case Combine::ReduceMul: out[off] = checked_mul(out[off], val.i); break;
        }
        break;
      }
      case ElemKind::F64: {
        auto& out = bindings.reals(seed.store.target);
        switch (seed.store.combine) {
          case Combine::Overwrite: out[off] = val.f; break;
          case Combine::ReduceAdd: out[off] += val.f; break;
          case Combine::ReduceMul: out[off] *= val.f; break;
        }
        break;
      }
      case ElemKind::F32: {
        auto& out = bindings.reals32(seed.store.target);
        switch (seed.store.combine) {
          case Combine::Overwrite: out[off] = val.s; break;
          case Combine::ReduceAdd: out[off] += val.s; break;
          case Combine::ReduceMul: out[off] *= val.s; break;
        }
        break;
      }
    }
  }
}

int64_t eval_index_expr(const CodeSeed& seed, ExprRef e, const Bindings& bindings,
                        int64_t iteration) {
  const SeedExpr& x = seed.exprs[e];
  switch (x.kind) {
    case ExprKind::Const:
      return x.const_i;
    case ExprKind::LoadDirect:
    case ExprKind::LoadIndirect: {
      int64_t off = x.kind == ExprKind::LoadDirect
                        ? iteration
                        : eval_index_expr(seed, x.index, bindings, iteration);
      const auto& a = bindings.ints(x.array);
      if (off < 0 || static_cast<size_t>(off) >= a.size())
        range_error(iteration, x.array, off, a.size());
      return a[off];
    }
    case ExprKind::BinOp: {
      int64_t l = eval_index_expr(seed, x.lhs, bindings, iteration);
      int64_t r = eval_index_expr(seed, x.rhs, bindings, iteration);
      switch (x.op) {
        case BinOpKind::Add: return checked_add(l, r);
        case BinOpKind::Sub: return checked_sub(l, r);
        case BinOpKind::Mul: return checked_mul(l, r);
        case BinOpKind::Div: return checked_div(l, r);
      }
    }
  }
  throw ExecError("corrupt expression node");
}

}  // namespace ivex
