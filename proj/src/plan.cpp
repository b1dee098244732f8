#include "ivex/plan.hpp"

#include <algorithm>
#include <istream>
#include <unordered_map>

#include "json.hpp"

namespace ivex {

const char* to_string(Opcode op) {
  switch (op) {
    case Opcode::VLoad: return "VLOAD";
    case Opcode::Gather: return "GATHER";
    case Opcode::Broadcast: return "BROADCAST";
    case Opcode::Permute: return "PERMUTE";
    case Opcode::Select: return "SELECT";
    case Opcode::BinOp: return "BINOP";
    case Opcode::ReduceStep: return "REDUCE_STEP";
    case Opcode::HReduce: return "HREDUCE";
    case Opcode::VStoreMasked: return "VSTORE_MASKED";
    case Opcode::Scatter: return "SCATTER";
    case Opcode::AccInit: return "ACC_INIT";
    case Opcode::AccCombine: return "ACC_COMBINE";
  }
  return "?";
}

bool CostModel::hreduce_cheaper(VectorShape shape) const {
  return cost(Opcode::HReduce) < shape.log2w() * cost(Opcode::ReduceStep);
}

CostModel default_policy(VectorShape shape) {
  (void)shape;
  CostModel m;
  m.gather_threshold = 2;
  m.op_cost.fill(1.0);
  m.index_bits = 64;
  return m;
}

CostModel load_cost_model(std::istream& in, VectorShape shape) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("cost model config: ") + e.what());
  }
  CostModel m = default_policy(shape);
  if (j.contains("gather_threshold")) m.gather_threshold = j["gather_threshold"].get<int>();
  if (j.contains("index_bits")) m.index_bits = j["index_bits"].get<int>();
  if (j.contains("op_cost")) {
    for (auto& [key, val] : j["op_cost"].items()) {
      bool known = false;
      for (int i = 0; i < kOpcodeCount; ++i) {
        if (key == to_string(static_cast<Opcode>(i))) {
          double c = val.get<double>();
          if (c < 0) throw InputError("cost model config: negative cost for " + key);
          m.op_cost[i] = c;
          known = true;
          break;
        }
      }
      if (!known) throw InputError("cost model config: unknown opcode '" + key + "'");
    }
  }
  if (m.gather_threshold < 0) throw InputError("cost model config: negative threshold");
  return m;
}

NormalizedReduce normalize_reduction_op(BinOpKind op) {
  NormalizedReduce n;
  switch (op) {
    case BinOpKind::Add: n.canonical = BinOpKind::Add; break;
    case BinOpKind::Sub:
      n.canonical = BinOpKind::Add;
      n.pre.kind = PreTransform::Negate;
      break;
    case BinOpKind::Mul: n.canonical = BinOpKind::Mul; break;
    case BinOpKind::Div:
      n.canonical = BinOpKind::Mul;
      n.pre.kind = PreTransform::Reciprocal;
      break;
  }
  return n;
}

namespace {

BinOpKind combine_op(Combine c) {
  return c == Combine::ReduceMul ? BinOpKind::Mul : BinOpKind::Add;
}

// Inverse lane mapping for scatter replacement: position p in the store
// window receives the (unique) lane writing base + p.
void invert_cover(const GatherFeature& cover, LaneMask active, int width,
                  PermVec& pos_perm, LaneMask& pos_mask) {
  pos_perm.fill(0);
  pos_mask = 0;
  for (int l = 0; l < width; ++l) {
    if (!lane_set(active, l)) continue;
    int p = cover.perm[l];
    pos_perm[p] = static_cast<uint8_t>(l);
    pos_mask |= static_cast<LaneMask>(1u << p);
  }
}

struct Lowerer {
  const PatternClass& cls;
  const CodeSeed& seed;
  const SeedLayout& layout;
  VectorShape shape;
  const CostModel& policy;
  VectorProgram prog;
  uint16_t next_reg = 1;
  std::unordered_map<uint32_t, uint16_t> expr_reg;

  uint16_t fresh() { return next_reg++; }

  uint8_t array_id(const std::string& name) {
    for (size_t i = 0; i < prog.arrays.size(); ++i)
      if (prog.arrays[i].name == name) return static_cast<uint8_t>(i);
    const ArrayDecl* d = seed.find_decl(name);
    prog.arrays.push_back({name, d ? d->elem : ElemKind::F64});
    return static_cast<uint8_t>(prog.arrays.size() - 1);
  }

  int16_t perm_id(const PermVec& p) {
    for (size_t i = 0; i < prog.perms.size(); ++i)
      if (prog.perms[i] == p) return static_cast<int16_t>(i);
    prog.perms.push_back(p);
    return static_cast<int16_t>(prog.perms.size() - 1);
  }

  int16_t mask_id(LaneMask m) {
    for (size_t i = 0; i < prog.masks.size(); ++i)
      if (prog.masks[i] == m) return static_cast<int16_t>(i);
    prog.masks.push_back(m);
    return static_cast<int16_t>(prog.masks.size() - 1);
  }

  VInstr& emit(VInstr in) {
    prog.code.push_back(in);
    return prog.code.back();
  }

  bool replaceable(const SiteFeature& sf) const {
    if (sf.cover.degenerate(shape.width)) return false;
    if (sf.kind == SiteKind::DirectLoad) return true;  // statically contiguous
    return sf.cover.flag <= policy.gather_threshold;
  }

  uint16_t emit_site_load(uint16_t site_ix) {
    const SiteFeature& sf = cls.shape.sites[site_ix];
    const GatherFeature& g = sf.cover;
    uint8_t arr = array_id(layout.sites[site_ix].array);
    if (!replaceable(sf)) {
      uint16_t d = fresh();
      VInstr in;
      in.op = Opcode::Gather;
      in.dst = d;
      in.array = arr;
      in.slot = SlotKind::GatherIndices;
      in.site = site_ix;
      in.mask = mask_id(prog.active_mask);
      emit(in);
      return d;
    }
    int16_t shared_perm = perm_id(g.perm);
    int16_t all = mask_id(full_mask(shape.width));
    uint16_t cur = 0;
    for (int w = 0; w < g.flag; ++w) {
      uint16_t ld = fresh();
      VInstr vl;
      vl.op = Opcode::VLoad;
      vl.dst = ld;
      vl.array = arr;
      vl.slot = SlotKind::GatherBase;
      vl.site = site_ix;
      vl.window = static_cast<uint16_t>(w);
      vl.mask = all;
      emit(vl);
      uint16_t pm = fresh();
      VInstr pe;
      pe.op = Opcode::Permute;
      pe.dst = pm;
      pe.a = ld;
      pe.perm = shared_perm;
      emit(pe);
      if (w == 0) {
        cur = pm;
      } else {
        uint16_t sel = fresh();
        VInstr se;
        se.op = Opcode::Select;
        se.dst = sel;
        se.a = pm;  // lanes of window w
        se.b = cur;
        se.mask = mask_id(g.masks[w - 1]);
        emit(se);
        cur = sel;
      }
    }
    return cur;
  }

  uint16_t eval(ExprRef e) {
    auto it = expr_reg.find(e);
    if (it != expr_reg.end()) return it->second;
    const SeedExpr& x = seed.exprs[e];
    uint16_t r = 0;
    switch (x.kind) {
      case ExprKind::Const: {
        uint16_t ordinal = 0;
        for (; ordinal < layout.consts.size(); ++ordinal)
          if (layout.consts[ordinal] == e) break;
        r = fresh();
        VInstr in;
        in.op = Opcode::Broadcast;
        in.dst = r;
        in.slot = SlotKind::ConstScalar;
        in.site = ordinal;
        emit(in);
        break;
      }
      case ExprKind::LoadDirect:
      case ExprKind::LoadIndirect: {
        uint16_t site = 0;
        for (; site < layout.sites.size(); ++site)
          if (layout.sites[site].expr == e) break;
        r = emit_site_load(site);
        break;
      }
      case ExprKind::BinOp: {
        uint16_t a = eval(x.lhs);
        uint16_t b = eval(x.rhs);
        r = fresh();
        VInstr in;
        in.op = Opcode::BinOp;
        in.dst = r;
        in.a = a;
        in.b = b;
        in.alu = x.op;
        emit(in);
        break;
      }
    }
    expr_reg.emplace(e, r);
    return r;
  }

  void emit_store_overwrite(uint16_t vreg) {
    const GatherFeature& cover = cls.shape.store_cover;
    const ReductionFeature& red = cls.shape.reduction;
    uint8_t arr = array_id(layout.store_array);
    bool replace = red.flag == 0 && red.distinct_addrs == cls.shape.active &&
                   cover.flag == 1 && !cover.degenerate(shape.width);
    if (replace) {
      PermVec pos_perm;
      LaneMask pos_mask;
      invert_cover(cover, cls.shape.tail_mask, shape.width, pos_perm, pos_mask);
      uint16_t pw = fresh();
      VInstr pe;
      pe.op = Opcode::Permute;
      pe.dst = pw;
      pe.a = vreg;
      pe.perm = perm_id(pos_perm);
      emit(pe);
      VInstr st;
      st.op = Opcode::VStoreMasked;
      st.a = pw;
      st.array = arr;
      st.slot = SlotKind::StoreCoverBase;
      st.window = 0;
      st.mask = mask_id(pos_mask);
      emit(st);
      prog.store_payload = StorePayload::CoverBase;
    } else {
      VInstr st;
      st.op = Opcode::Scatter;
      st.a = vreg;
      st.array = arr;
      st.slot = SlotKind::StoreAddrs;
      st.mask = mask_id(prog.active_mask);
      emit(st);
      prog.store_payload = StorePayload::Addrs;
    }
  }

  void emit_store_reduce(uint16_t vreg) {
    const ReductionFeature& red = cls.shape.reduction;
    const GatherFeature& cover = cls.shape.store_cover;
    BinOpKind op = combine_op(layout.combine);
    uint8_t arr = array_id(layout.store_array);

    if (red.distinct_addrs == 1) {
      // All active lanes hit one address: accumulate across the
      // same-address run, reduce and store once at the run end.
      prog.uses_acc = true;
      VInstr init;
      init.op = Opcode::AccInit;
      init.when = When::RunHead;
      init.dst = 0;
      init.alu = op;
      emit(init);
      VInstr comb;
      comb.op = Opcode::AccCombine;
      comb.dst = 0;
      comb.a = vreg;
      comb.alu = op;
      comb.mask = mask_id(prog.active_mask);
      emit(comb);

      uint16_t folded;
      if (policy.hreduce_cheaper(shape)) {
        folded = fresh();
        VInstr hr;
        hr.op = Opcode::HReduce;
        hr.when = When::RunEnd;
        hr.dst = folded;
        hr.a = 0;
        hr.alu = op;
        hr.mask = mask_id(full_mask(shape.width));
        hr.begins_reduce = true;
        emit(hr);
      } else {
        // Inactive acc lanes hold the operator identity, so the fold spans
        // the full width regardless of this class's tail mask.
        std::array<int64_t, kMaxLanes> zeros{};
        ReductionFeature fold = reduction_feature(
            {zeros.data(), static_cast<size_t>(shape.width)}, full_mask(shape.width),
            shape);
        uint16_t cur = 0;
        for (size_t t = 0; t < fold.steps.size(); ++t) {
          uint16_t d = fresh();
          VInstr rs;
          rs.op = Opcode::ReduceStep;
          rs.when = When::RunEnd;
          rs.dst = d;
          rs.a = cur;
          rs.alu = op;
          rs.perm = perm_id(fold.steps[t].perm);
          rs.mask = mask_id(fold.steps[t].combine);
          rs.begins_reduce = t == 0;
          emit(rs);
          cur = d;
        }
        folded = cur;
      }

      int16_t lane0 = mask_id(1);
      uint16_t old = fresh();
      VInstr ld;
      ld.op = Opcode::VLoad;
      ld.when = When::RunEnd;
      ld.dst = old;
      ld.array = arr;
      ld.slot = SlotKind::StoreHeadAddr;
      ld.mask = lane0;
      emit(ld);
      uint16_t upd = fresh();
      VInstr bi;
      bi.op = Opcode::BinOp;
      bi.when = When::RunEnd;
      bi.dst = upd;
      bi.a = old;
      bi.b = folded;
      bi.alu = op;
      emit(bi);
      VInstr st;
      st.op = Opcode::VStoreMasked;
      st.when = When::RunEnd;
      st.a = upd;
      st.array = arr;
      st.slot = SlotKind::StoreHeadAddr;
      st.mask = lane0;
      emit(st);
      prog.store_payload = StorePayload::HeadAddr;
      return;
    }

    uint16_t cur = vreg;
    for (size_t t = 0; t < red.steps.size(); ++t) {
      uint16_t d = fresh();
      VInstr rs;
      rs.op = Opcode::ReduceStep;
      rs.dst = d;
      rs.a = cur;
      rs.alu = op;
      rs.perm = perm_id(red.steps[t].perm);
      rs.mask = mask_id(red.steps[t].combine);
      rs.begins_reduce = t == 0;
      emit(rs);
      cur = d;
    }

    bool replace = red.flag == 0 && cover.flag == 1 && !cover.degenerate(shape.width);
    if (replace) {
      PermVec pos_perm;
      LaneMask pos_mask;
      invert_cover(cover, cls.shape.tail_mask, shape.width, pos_perm, pos_mask);
      uint16_t oldw = fresh();
      VInstr ld;
      ld.op = Opcode::VLoad;
      ld.dst = oldw;
      ld.array = arr;
      ld.slot = SlotKind::StoreCoverBase;
      ld.window = 0;
      ld.mask = mask_id(pos_mask);
      emit(ld);
      uint16_t old = fresh();
      VInstr pe;
      pe.op = Opcode::Permute;
      pe.dst = old;
      pe.a = oldw;
      pe.perm = perm_id(cover.perm);
      emit(pe);
      uint16_t upd = fresh();
      VInstr bi;
      bi.op = Opcode::BinOp;
      bi.dst = upd;
      bi.a = old;
      bi.b = cur;
      bi.alu = op;
      emit(bi);
      uint16_t updw = fresh();
      VInstr pw;
      pw.op = Opcode::Permute;
      pw.dst = updw;
      pw.a = upd;
      pw.perm = perm_id(pos_perm);
      emit(pw);
      VInstr st;
      st.op = Opcode::VStoreMasked;
      st.a = updw;
      st.array = arr;
      st.slot = SlotKind::StoreCoverBase;
      st.window = 0;
      st.mask = mask_id(pos_mask);
      emit(st);
      prog.store_payload = StorePayload::CoverBase;
    } else {
      int16_t reps = mask_id(red.rep_mask);
      uint16_t old = fresh();
      VInstr ld;
      ld.op = Opcode::Gather;
      ld.dst = old;
      ld.array = arr;
      ld.slot = SlotKind::StoreAddrs;
      ld.mask = reps;
      emit(ld);
      uint16_t upd = fresh();
      VInstr bi;
      bi.op = Opcode::BinOp;
      bi.dst = upd;
      bi.a = old;
      bi.b = cur;
      bi.alu = op;
      emit(bi);
      VInstr st;
      st.op = Opcode::Scatter;
      st.a = upd;
      st.array = arr;
      st.slot = SlotKind::StoreAddrs;
      st.mask = reps;
      emit(st);
      prog.store_payload = StorePayload::Addrs;
    }
  }

  VectorProgram run() {
    prog.width = shape.width;
    prog.data_kind = layout.data_kind;
    prog.combine = layout.combine;
    prog.active_mask = cls.shape.tail_mask;

    uint32_t offset = 0;
    for (const SiteFeature& sf : cls.shape.sites) {
      SiteSlotSchema s;
      s.offset = offset;
      s.degenerate = sf.cover.degenerate(shape.width);
      s.len = s.degenerate ? static_cast<uint32_t>(shape.width)
                           : static_cast<uint32_t>(sf.cover.flag);
      s.perm = sf.cover.perm;
      s.window_of = sf.cover.window_of;
      offset += s.len;
      prog.site_slots.push_back(s);
    }
    prog.site_ops_len = offset;

    for (ExprRef c : layout.consts) {
      const SeedExpr& x = seed.exprs[c];
      prog.scalar_consts.push_back(x.const_f);
      prog.scalar_consts_i.push_back(x.const_i);
    }

    uint16_t v = eval(seed.store.value);
    if (layout.combine == Combine::Overwrite)
      emit_store_overwrite(v);
    else
      emit_store_reduce(v);
    prog.n_regs = next_reg;
    return std::move(prog);
  }
};

}  // namespace

VectorProgram lower_class(const PatternClass& cls, const CodeSeed& seed,
                          const SeedLayout& layout, VectorShape shape,
                          const CostModel& policy) {
  Lowerer lw{cls, seed, layout, shape, policy, {}, 1, {}};
  return lw.run();
}

CostReport cost_of(const PatternClass& cls, const SeedLayout& layout,
                   VectorShape shape, const CostModel& policy) {
  const int W = shape.width;
  const uint64_t idx_bits = static_cast<uint64_t>(policy.index_bits);
  const uint64_t data_bits = elem_bytes(layout.data_kind) * 8;
  CostReport rep;
  auto& ops = rep.predicted_ops;
  auto bump = [&](Opcode op, uint64_t n = 1) { ops[static_cast<size_t>(op)] += n; };

  bump(Opcode::Broadcast, layout.consts.size());
  bump(Opcode::BinOp, layout.value_binops);

  for (size_t s = 0; s < cls.shape.sites.size(); ++s) {
    const SiteFeature& sf = cls.shape.sites[s];
    const GatherFeature& g = sf.cover;
    bool degen = g.degenerate(W);
    bool replaced =
        !degen && (sf.kind == SiteKind::DirectLoad || g.flag <= policy.gather_threshold);
    if (replaced) {
      bump(Opcode::VLoad, g.flag);
      bump(Opcode::Permute, g.flag);
      bump(Opcode::Select, g.flag - 1);
    } else {
      bump(Opcode::Gather);
    }

    SiteCost sc;
    sc.kind = sf.kind;
    sc.flag = g.flag;
    sc.replaced = replaced;
    uint64_t m = static_cast<uint64_t>(degen ? W : g.flag);
    bool indirect = sf.kind == SiteKind::IndirectLoad;
    sc.orig_index_bits = indirect ? W * idx_bits : 0;
    sc.orig_data_bits = W * data_bits;
    sc.opt_index_bits = indirect && replaced ? m * idx_bits : sc.orig_index_bits;
    sc.opt_data_bits = replaced ? m * W * data_bits : sc.orig_data_bits;
    sc.info_bits = replaced ? static_cast<uint64_t>(W) * shape.log2w() + (m - 1) * W : 0;
    sc.profitable = indirect
                        ? !degen && g.flag < W &&
                              m * idx_bits + sc.info_bits <
                                  static_cast<uint64_t>(W) * idx_bits
                        : replaced;
    rep.sites.push_back(sc);
  }

  const ReductionFeature& red = cls.shape.reduction;
  const GatherFeature& cover = cls.shape.store_cover;
  bool store_replaced = false;
  if (layout.combine == Combine::Overwrite) {
    store_replaced = red.flag == 0 && red.distinct_addrs == cls.shape.active &&
                     cover.flag == 1 && !cover.degenerate(W);
    if (store_replaced) {
      bump(Opcode::Permute);
      bump(Opcode::VStoreMasked);
    } else {
      bump(Opcode::Scatter);
    }
  } else {
    rep.has_reduction = true;
    if (red.distinct_addrs == 1) {
      bump(Opcode::AccInit);
      bump(Opcode::AccCombine);
      if (policy.hreduce_cheaper(shape))
        bump(Opcode::HReduce);
      else
        bump(Opcode::ReduceStep, shape.log2w());
      bump(Opcode::VLoad);
      bump(Opcode::BinOp);
      bump(Opcode::VStoreMasked);
    } else {
      bump(Opcode::ReduceStep, red.steps.size());
      store_replaced = red.flag == 0 && cover.flag == 1 && !cover.degenerate(W);
      if (store_replaced) {
        bump(Opcode::VLoad);
        bump(Opcode::Permute, 2);
        bump(Opcode::BinOp);
        bump(Opcode::VStoreMasked);
      } else {
        bump(Opcode::Gather);
        bump(Opcode::BinOp);
        bump(Opcode::Scatter);
      }
    }

    ReductionCost& rc = rep.reduction;
    rc.flag = red.flag;
    rc.distinct_addrs = red.distinct_addrs;
    rc.orig_calc = W;
    rc.orig_red = W;
    rc.orig_perm = 0;
    rc.opt_calc = 1;
    rc.opt_red = static_cast<uint64_t>(red.flag);
    rc.opt_perm = static_cast<uint64_t>(red.flag);
    uint64_t k = static_cast<uint64_t>(red.distinct_addrs);
    rc.orig_widx_bits = W * idx_bits;
    rc.orig_wdata_bits = W * data_bits;
    rc.orig_store_bits = W * data_bits;
    rc.opt_widx_bits = k * idx_bits;
    rc.opt_wdata_bits = k * data_bits;
    rc.opt_store_bits = k * data_bits;
    rc.opt_info_bits = static_cast<uint64_t>(red.flag) * W * shape.log2w();
    uint64_t saved = (rc.orig_widx_bits - rc.opt_widx_bits) +
                     (rc.orig_wdata_bits - rc.opt_wdata_bits) +
                     (rc.orig_store_bits - rc.opt_store_bits);
    rc.mem_profitable = rc.opt_info_bits < saved;
  }

  // Store site viewed as a scatter cover (the combined gather/scatter view).
  SiteCost st;
  st.kind = SiteKind::Store;
  st.flag = cover.flag;
  st.replaced = store_replaced;
  uint64_t m = static_cast<uint64_t>(cover.degenerate(W) ? W : cover.flag);
  st.orig_index_bits = W * idx_bits;
  st.orig_data_bits = W * data_bits;
  st.opt_index_bits = store_replaced ? m * idx_bits : st.orig_index_bits;
  st.opt_data_bits = store_replaced ? m * W * data_bits : st.orig_data_bits;
  st.info_bits =
      store_replaced ? static_cast<uint64_t>(W) * shape.log2w() + (m - 1) * W : 0;
  st.profitable = !cover.degenerate(W) && cover.flag < W &&
                  m * idx_bits + st.info_bits < static_cast<uint64_t>(W) * idx_bits;
  rep.sites.push_back(st);
  return rep;
}

std::array<uint64_t, kOpcodeCount> count_ops(const VectorProgram& prog) {
  std::array<uint64_t, kOpcodeCount> out{};
  for (const VInstr& in : prog.code) ++out[static_cast<size_t>(in.op)];
  return out;
}

std::string program_to_json(const VectorProgram& prog) {
  nlohmann::json j;
  j["schema"] = 1;
  j["class"] = prog.cls;
  j["width"] = prog.width;
  j["combine"] = to_string(prog.combine);
  j["data_kind"] = to_string(prog.data_kind);
  j["uses_acc"] = prog.uses_acc;
  j["n_regs"] = prog.n_regs;
  j["active_mask"] = prog.active_mask;

  nlohmann::json code = nlohmann::json::array();
  for (const VInstr& in : prog.code) {
    nlohmann::json op;
    op["op"] = to_string(in.op);
    switch (in.when) {
      case When::Always: break;
      case When::RunHead: op["when"] = "run_head"; break;
      case When::RunEnd: op["when"] = "run_end"; break;
    }
    op["dst"] = in.dst;
    op["a"] = in.a;
    op["b"] = in.b;
    if (in.op == Opcode::BinOp || in.op == Opcode::ReduceStep || in.op == Opcode::HReduce ||
        in.op == Opcode::AccInit || in.op == Opcode::AccCombine)
      op["alu"] = to_string(in.alu);
    if (in.perm >= 0) op["perm"] = in.perm;
    if (in.mask >= 0) op["mask"] = in.mask;
    if (in.slot != SlotKind::None) {
      op["slot"] = static_cast<int>(in.slot);
      op["site"] = in.site;
      op["window"] = in.window;
    }
    if (in.op == Opcode::VLoad || in.op == Opcode::Gather || in.op == Opcode::Scatter ||
        in.op == Opcode::VStoreMasked)
      op["array"] = prog.arrays[in.array].name;
    code.push_back(op);
  }
  j["code"] = code;

  nlohmann::json perms = nlohmann::json::array();
  for (const PermVec& p : prog.perms)
    perms.push_back(std::vector<int>(p.begin(), p.begin() + prog.width));
  j["perms"] = perms;
  j["masks"] = prog.masks;

  nlohmann::json slots = nlohmann::json::array();
  for (const SiteSlotSchema& s : prog.site_slots) {
    nlohmann::json js;
    js["offset"] = s.offset;
    js["len"] = s.len;
    js["degenerate"] = s.degenerate;
    slots.push_back(js);
  }
  j["site_slots"] = slots;
  j["store_payload"] = static_cast<int>(prog.store_payload);
  j["scalar_consts"] = prog.scalar_consts;
  return j.dump(2);
}

}  // namespace ivex
