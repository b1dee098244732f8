#include "ivex/vvm.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace ivex {

namespace {

template <class T>
std::array<T, kMaxLanes>& lanes(LaneVector& v);
template <>
std::array<int64_t, kMaxLanes>& lanes(LaneVector& v) { return v.i; }
template <>
std::array<double, kMaxLanes>& lanes(LaneVector& v) { return v.f; }
template <>
std::array<float, kMaxLanes>& lanes(LaneVector& v) { return v.s; }

template <class T>
const std::array<T, kMaxLanes>& lanes(const LaneVector& v) {
  return lanes<T>(const_cast<LaneVector&>(v));
}

template <class F>
decltype(auto) with_kind(ElemKind k, F&& f) {
  switch (k) {
    case ElemKind::F64: return f(double{});
    case ElemKind::F32: return f(float{});
    default: return f(int64_t{});
  }
}

template <class T>
T alu_apply(BinOpKind op, T a, T b) {
  if constexpr (std::is_same_v<T, int64_t>) {
    switch (op) {
      case BinOpKind::Add: return checked_add(a, b);
      case BinOpKind::Sub: return checked_sub(a, b);
      case BinOpKind::Mul: return checked_mul(a, b);
      case BinOpKind::Div: return checked_div(a, b);
    }
  } else {
    switch (op) {
      case BinOpKind::Add: return a + b;
      case BinOpKind::Sub: return a - b;
      case BinOpKind::Mul: return a * b;
      case BinOpKind::Div: return a / b;
    }
  }
  return T{};
}

template <class T>
T alu_identity(BinOpKind op) {
  return op == BinOpKind::Mul ? T{1} : T{0};
}

template <class T>
std::vector<T>& typed_buffer(Buffer& buf, const ArrayRef& ar, const char* opname) {
  auto* p = std::get_if<std::vector<T>>(&buf);
  if (!p)
    throw ExecError(std::string(opname) + ": array '" + ar.name +
                    "' bound with unexpected element kind");
  return *p;
}

// Distinct-line accounting for one memory instruction.
struct MemTouch {
  uint64_t vbase = 0;
  size_t esz = 8;
  std::array<uint64_t, kMaxLanes> line{};
  int n = 0;
  uint64_t bytes = 0;

  void touch(int64_t off) {
    line[n++] = (vbase + static_cast<uint64_t>(off) * esz) / 64;
    bytes += esz;
  }
  void settle(ExecStats& stats, bool store) {
    std::sort(line.begin(), line.begin() + n);
    stats.lines_touched +=
        static_cast<uint64_t>(std::unique(line.begin(), line.begin() + n) - line.begin());
    (store ? stats.bytes_stored : stats.bytes_loaded) += bytes;
  }
};

[[noreturn]] void addr_error(const char* opname, int lane, int64_t off, size_t len) {
  std::ostringstream os;
  os << opname << ": lane " << lane << " address " << off << " out of range (length "
     << len << ")";
  throw ExecError(os.str());
}

struct GroupExec {
  const VectorProgram& prog;
  const ExecRecord& rec;
  Bindings& bindings;
  ExecStats& stats;
  std::vector<LaneVector>& regs;

  int width() const { return prog.width; }

  LaneMask mask_of(const VInstr& in) const {
    return in.mask >= 0 ? prog.masks[in.mask] : full_mask(prog.width);
  }

  int64_t slot_base(const VInstr& in) const {
    switch (in.slot) {
      case SlotKind::GatherBase: {
        size_t at = prog.site_slots[in.site].offset + in.window;
        if (at >= rec.site_ops.size())
          throw ExecError("slot schema mismatch: missing window base operand");
        return rec.site_ops[at];
      }
      case SlotKind::StoreHeadAddr:
      case SlotKind::StoreCoverBase: {
        size_t at = in.slot == SlotKind::StoreHeadAddr ? 0 : in.window;
        if (at >= rec.store_ops.size())
          throw ExecError("slot schema mismatch: missing store base operand");
        return rec.store_ops[at];
      }
      default:
        throw ExecError("slot schema mismatch: no base operand for this slot");
    }
  }

  void gather_targets(const VInstr& in, std::array<int64_t, kMaxLanes>& idx) const {
    if (in.slot == SlotKind::StoreAddrs) {
      if (rec.store_ops.size() < static_cast<size_t>(prog.width))
        throw ExecError("slot schema mismatch: store address vector missing");
      for (int l = 0; l < width(); ++l) idx[l] = rec.store_ops[l];
      return;
    }
    const SiteSlotSchema& s = prog.site_slots[in.site];
    if (s.offset + s.len > rec.site_ops.size())
      throw ExecError("slot schema mismatch: site operand record too short");
    if (s.degenerate) {
      for (int l = 0; l < width(); ++l) idx[l] = rec.site_ops[s.offset + l];
    } else {
      // Reconstruct the original targets from (bases, perm, window).
      for (int l = 0; l < width(); ++l)
        idx[l] = rec.site_ops[s.offset + s.window_of[l]] + s.perm[l];
    }
  }

  void run() {
    for (const VInstr& in : prog.code) {
      if (in.when == When::RunHead && !rec.run_head) continue;
      if (in.when == When::RunEnd && !rec.run_end) continue;
      ++stats.op_count[static_cast<size_t>(in.op)];
      ++stats.dynamic_instructions;
      if (in.begins_reduce) ++stats.reduce_sequences;
      step(in);
    }
  }

  void step(const VInstr& in) {
    switch (in.op) {
      case Opcode::VLoad: return do_vload(in);
      case Opcode::Gather: return do_gather(in);
      case Opcode::Broadcast: return do_broadcast(in);
      case Opcode::Permute: return do_permute(in);
      case Opcode::Select: return do_select(in);
      case Opcode::BinOp: return do_binop(in);
      case Opcode::ReduceStep: return do_reduce_step(in);
      case Opcode::HReduce: return do_hreduce(in);
      case Opcode::VStoreMasked: return do_store(in, false);
      case Opcode::Scatter: return do_store(in, true);
      case Opcode::AccInit: return do_acc_init(in);
      case Opcode::AccCombine: return do_acc_combine(in);
    }
  }

  void do_vload(const VInstr& in) {
    const ArrayRef& ar = prog.arrays[in.array];
    Buffer& buf = bindings.at(ar.name);
    int64_t base = slot_base(in);
    LaneMask m = mask_of(in);
    MemTouch mt{bindings.vbase(ar.name), elem_bytes(ar.elem)};
    with_kind(ar.elem, [&](auto tag) {
      using T = decltype(tag);
      auto& a = typed_buffer<T>(buf, ar, "VLOAD");
      LaneVector& d = regs[in.dst];
      d.kind = ar.elem;
      auto& out = lanes<T>(d);
      out.fill(T{});
      for (int l = 0; l < width(); ++l) {
        if (!lane_set(m, l)) continue;
        int64_t off = base + l;
        if (off < 0 || static_cast<size_t>(off) >= a.size())
          addr_error("VLOAD", l, off, a.size());
        out[l] = a[off];
        mt.touch(off);
      }
    });
    mt.settle(stats, false);
  }

  void do_gather(const VInstr& in) {
    const ArrayRef& ar = prog.arrays[in.array];
    Buffer& buf = bindings.at(ar.name);
    std::array<int64_t, kMaxLanes> idx{};
    gather_targets(in, idx);
    LaneMask m = mask_of(in);
    MemTouch mt{bindings.vbase(ar.name), elem_bytes(ar.elem)};
    with_kind(ar.elem, [&](auto tag) {
      using T = decltype(tag);
      auto& a = typed_buffer<T>(buf, ar, "GATHER");
      LaneVector& d = regs[in.dst];
      d.kind = ar.elem;
      auto& out = lanes<T>(d);
      out.fill(T{});
      for (int l = 0; l < width(); ++l) {
        if (!lane_set(m, l)) continue;
        int64_t off = idx[l];
        if (off < 0 || static_cast<size_t>(off) >= a.size())
          addr_error("GATHER", l, off, a.size());
        out[l] = a[off];
        mt.touch(off);
      }
    });
    mt.settle(stats, false);
  }

  void do_broadcast(const VInstr& in) {
    LaneVector& d = regs[in.dst];
    d.kind = prog.data_kind;
    with_kind(prog.data_kind, [&](auto tag) {
      using T = decltype(tag);
      T v;
      if constexpr (std::is_same_v<T, int64_t>)
        v = prog.scalar_consts_i[in.site];
      else
        v = static_cast<T>(prog.scalar_consts[in.site]);
      lanes<T>(d).fill(v);
    });
  }

  void do_permute(const VInstr& in) {
    const LaneVector& a = regs[in.a];
    const PermVec& p = prog.perms[in.perm];
    LaneVector& d = regs[in.dst];
    d.kind = a.kind;
    with_kind(a.kind, [&](auto tag) {
      using T = decltype(tag);
      const auto& src = lanes<T>(a);
      std::array<T, kMaxLanes> tmp{};
      for (int l = 0; l < width(); ++l) tmp[l] = src[p[l]];
      lanes<T>(d) = tmp;
    });
  }

  void do_select(const VInstr& in) {
    const LaneVector& a = regs[in.a];
    const LaneVector& b = regs[in.b];
    LaneMask m = mask_of(in);
    LaneVector& d = regs[in.dst];
    d.kind = a.kind;
    with_kind(a.kind, [&](auto tag) {
      using T = decltype(tag);
      const auto& va = lanes<T>(a);
      const auto& vb = lanes<T>(b);
      auto& out = lanes<T>(d);
      for (int l = 0; l < width(); ++l) out[l] = lane_set(m, l) ? va[l] : vb[l];
    });
  }

  void do_binop(const VInstr& in) {
    const LaneVector& a = regs[in.a];
    const LaneVector& b = regs[in.b];
    LaneVector& d = regs[in.dst];
    d.kind = a.kind;
    with_kind(a.kind, [&](auto tag) {
      using T = decltype(tag);
      const auto& va = lanes<T>(a);
      const auto& vb = lanes<T>(b);
      auto& out = lanes<T>(d);
      if constexpr (std::is_same_v<T, int64_t>) {
        // Integer lanes outside the active set may hold junk from masked
        // loads; computing them could fault the overflow check spuriously.
        for (int l = 0; l < width(); ++l)
          out[l] = lane_set(prog.active_mask, l) ? alu_apply(in.alu, va[l], vb[l]) : 0;
      } else {
        for (int l = 0; l < width(); ++l) out[l] = alu_apply(in.alu, va[l], vb[l]);
      }
    });
  }

  void do_reduce_step(const VInstr& in) {
    const LaneVector& a = regs[in.a];
    const PermVec& p = prog.perms[in.perm];
    LaneMask m = mask_of(in);
    LaneVector& d = regs[in.dst];
    d.kind = a.kind;
    with_kind(a.kind, [&](auto tag) {
      using T = decltype(tag);
      const auto& src = lanes<T>(a);
      std::array<T, kMaxLanes> tmp{};
      for (int l = 0; l < width(); ++l)
        tmp[l] = lane_set(m, l) ? alu_apply(in.alu, src[l], src[p[l]]) : src[l];
      lanes<T>(d) = tmp;
    });
  }

  void do_hreduce(const VInstr& in) {
    const LaneVector& a = regs[in.a];
    LaneMask m = mask_of(in);
    LaneVector& d = regs[in.dst];
    d.kind = a.kind;
    with_kind(a.kind, [&](auto tag) {
      using T = decltype(tag);
      const auto& src = lanes<T>(a);
      T acc = alu_identity<T>(in.alu);
      bool first = true;
      for (int l = 0; l < width(); ++l) {
        if (!lane_set(m, l)) continue;
        acc = first ? src[l] : alu_apply(in.alu, acc, src[l]);
        first = false;
      }
      lanes<T>(d).fill(acc);
    });
  }

  void do_store(const VInstr& in, bool scatter) {
    const ArrayRef& ar = prog.arrays[in.array];
    Buffer& buf = bindings.at(ar.name);
    LaneMask m = mask_of(in);
    const LaneVector& a = regs[in.a];
    std::array<int64_t, kMaxLanes> idx{};
    int64_t base = 0;
    if (scatter)
      gather_targets(in, idx);
    else
      base = slot_base(in);
    MemTouch mt{bindings.vbase(ar.name), elem_bytes(ar.elem)};
    with_kind(ar.elem, [&](auto tag) {
      using T = decltype(tag);
      auto& out = typed_buffer<T>(buf, ar, scatter ? "SCATTER" : "VSTORE_MASKED");
      const auto& src = lanes<T>(a);
      // Ascending lane order: duplicate scatter targets resolve last-wins,
      // matching scalar iteration order.
      for (int l = 0; l < width(); ++l) {
        if (!lane_set(m, l)) continue;
        int64_t off = scatter ? idx[l] : base + l;
        if (off < 0 || static_cast<size_t>(off) >= out.size())
          addr_error(scatter ? "SCATTER" : "VSTORE_MASKED", l, off, out.size());
        out[off] = src[l];
        mt.touch(off);
      }
    });
    mt.settle(stats, true);
  }

  void do_acc_init(const VInstr& in) {
    LaneVector& d = regs[in.dst];
    d.kind = prog.data_kind;
    with_kind(prog.data_kind, [&](auto tag) {
      using T = decltype(tag);
      lanes<T>(d).fill(alu_identity<T>(in.alu));
    });
  }

  void do_acc_combine(const VInstr& in) {
    const LaneVector& a = regs[in.a];
    LaneMask m = mask_of(in);
    LaneVector& d = regs[in.dst];
    d.kind = a.kind;
    with_kind(a.kind, [&](auto tag) {
      using T = decltype(tag);
      const auto& va = lanes<T>(a);
      auto& acc = lanes<T>(d);
      for (int l = 0; l < width(); ++l)
        if (lane_set(m, l)) acc[l] = alu_apply(in.alu, acc[l], va[l]);
    });
  }
};

}  // namespace

void exec_group(const VectorProgram& prog, const ExecRecord& rec, Bindings& bindings,
                ExecStats& stats, VmState& state) {
  thread_local std::vector<LaneVector> regs;
  if (regs.size() < prog.n_regs) regs.resize(prog.n_regs);
  try {
    if (prog.uses_acc) regs[0] = state.acc;
    GroupExec ex{prog, rec, bindings, stats, regs};
    ex.run();
    if (prog.uses_acc) state.acc = regs[0];
    ++stats.groups_executed;
  } catch (const ExecError& e) {
    std::ostringstream os;
    os << "group " << rec.group << ": " << e.what();
    throw ExecError(os.str());
  }
}

PlannedKernel prepare_plan(const CodeSeed& seed, const Bindings& bindings,
                           VectorShape shape, const CostModel& policy) {
  auto violations = validate_seed(seed);
  if (!violations.empty()) throw ExecError("invalid seed: " + violations.front());

  PlannedKernel plan;
  plan.shape = shape;
  plan.layout = analyze_seed(seed);
  ClassAccumulator acc(plan.layout.combine, plan.layout.data_kind, shape, false);

  bool prev_qualifies = false;
  int64_t prev_addr = -1;
  bool reducing = plan.layout.combine != Combine::Overwrite;

  scan_feature_columns(seed, plan.layout, bindings, shape, [&](FeatureColumn&& col) {
    uint32_t cls = acc.insert(col);
    if (cls == plan.programs.size()) {
      VectorProgram prog =
          lower_class(acc.classes()[cls], seed, plan.layout, shape, policy);
      prog.cls = cls;
      plan.programs.push_back(std::move(prog));
    }
    const VectorProgram& prog = plan.programs[cls];

    ExecRecord rec;
    rec.group = col.group;
    rec.cls = cls;
    rec.site_ops.reserve(prog.site_ops_len);
    for (size_t s = 0; s < col.sites.size(); ++s) {
      const GatherFeature& g = col.sites[s].cover;
      if (g.degenerate(shape.width))
        rec.site_ops.insert(rec.site_ops.end(), g.raw_indices.begin(),
                            g.raw_indices.end());
      else
        rec.site_ops.insert(rec.site_ops.end(), g.bases.begin(), g.bases.end());
    }
    switch (prog.store_payload) {
      case StorePayload::None:
        break;
      case StorePayload::HeadAddr:
        rec.store_ops.push_back(col.store_addrs[0]);
        break;
      case StorePayload::Addrs:
        rec.store_ops = col.store_addrs;
        break;
      case StorePayload::CoverBase:
        rec.store_ops.push_back(col.store_cover.bases.at(0));
        break;
    }

    // Same-address run detection, one group of lookahead via the previous
    // record (mirrors merge_same_address_runs).
    bool qualifies = reducing && col.reduction.distinct_addrs == 1;
    int64_t addr = col.store_addrs.empty() ? -1 : col.store_addrs[0];
    if (!plan.records.empty() && prev_qualifies && qualifies && prev_addr == addr) {
      plan.records.back().run_end = false;
      rec.run_head = false;
    }
    prev_qualifies = qualifies;
    prev_addr = addr;
    plan.records.push_back(std::move(rec));
  });

  plan.classes = acc.take();
  plan.group_count = plan.records.size();
  return plan;
}

ExecStats execute_plan(const PlannedKernel& plan, Bindings& bindings) {
  ExecStats stats;
  VmState state;
  for (const ExecRecord& rec : plan.records)
    exec_group(plan.programs[rec.cls], rec, bindings, stats, state);
  return stats;
}

ExecStats run_plan(const CodeSeed& seed, Bindings& bindings, VectorShape shape,
                   const CostModel& policy) {
  PlannedKernel plan = prepare_plan(seed, bindings, shape, policy);
  return execute_plan(plan, bindings);
}

uint64_t output_checksum(const CodeSeed& seed, const Bindings& bindings) {
  Fnv1a h;
  for (const auto& d : seed.decls) {
    if (d.mut != Mutability::Mutable) continue;
    std::visit(
        [&](const auto& v) {
          using T = typename std::decay_t<decltype(v)>::value_type;
          h.feed(v.data(), v.size() * sizeof(T));
        },
        bindings.at(d.name));
  }
  return h.digest();
}

std::vector<Buffer> snapshot_outputs(const CodeSeed& seed, const Bindings& bindings) {
  std::vector<Buffer> out;
  for (const auto& d : seed.decls)
    if (d.mut == Mutability::Mutable) out.push_back(bindings.at(d.name));
  return out;
}

void restore_outputs(const CodeSeed& seed, Bindings& bindings,
                     const std::vector<Buffer>& snap) {
  size_t k = 0;
  for (const auto& d : seed.decls)
    if (d.mut == Mutability::Mutable) bindings.at(d.name) = snap[k++];
}

std::string stats_to_json(const ExecStats& stats) {
  nlohmann::json j;
  j["schema"] = 1;
  nlohmann::json ops;
  for (int i = 0; i < kOpcodeCount; ++i)
    ops[to_string(static_cast<Opcode>(i))] = stats.op_count[i];
  j["op_count"] = ops;
  j["dynamic_instructions"] = stats.dynamic_instructions;
  j["bytes_loaded"] = stats.bytes_loaded;
  j["bytes_stored"] = stats.bytes_stored;
  j["lines_touched"] = stats.lines_touched;
  j["groups_executed"] = stats.groups_executed;
  j["reduce_sequences"] = stats.reduce_sequences;
  return j.dump(2);
}

}  // namespace ivex
