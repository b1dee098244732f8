#include "ivex/feature.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <unordered_map>

namespace ivex {

VectorShape VectorShape::make(int w) {
  if (w < 2 || w > 16 || (w & (w - 1)) != 0)
    throw InputError("width must be a power of two in 2..16");
  return VectorShape{w};
}

int VectorShape::log2w() const {
  return std::bit_width(static_cast<unsigned>(width)) - 1;
}

int ceil_log2(int64_t m) {
  if (m <= 1) return 0;
  return std::bit_width(static_cast<uint64_t>(m - 1));
}

const char* to_string(SiteKind k) {
  switch (k) {
    case SiteKind::DirectLoad: return "direct";
    case SiteKind::IndirectLoad: return "gather";
    case SiteKind::Store: return "scatter";
  }
  return "?";
}

std::vector<GroupChunk> chunk_iterations(int64_t trip_count, VectorShape shape) {
  std::vector<GroupChunk> out;
  if (trip_count <= 0) return out;
  const int W = shape.width;
  int64_t n_groups = (trip_count + W - 1) / W;
  out.reserve(n_groups);
  for (int64_t g = 0; g < n_groups; ++g) {
    GroupChunk c;
    c.group = static_cast<uint32_t>(g);
    c.first_iter = g * W;
    c.lanes = static_cast<uint8_t>(std::min<int64_t>(W, trip_count - c.first_iter));
    c.tail_mask = static_cast<LaneMask>((1u << c.lanes) - 1);
    out.push_back(c);
  }
  return out;
}

GatherFeature gather_feature(std::span<const int64_t> indices, LaneMask tail_mask,
                             int64_t array_len, VectorShape shape) {
  const int W = shape.width;
  if (tail_mask == 0) throw ExecError("gather_feature: no active lanes");

  int first_active = std::countr_zero(tail_mask);
  std::array<int64_t, kMaxLanes> idx{};
  for (int l = 0; l < W; ++l) {
    if (lane_set(tail_mask, l)) {
      int64_t v = indices[l];
      if (v < 0 || v >= array_len) {
        std::ostringstream os;
        os << "gather index out of range: lane " << l << " -> " << v << ", length "
           << array_len;
        throw ExecError(os.str());
      }
      idx[l] = v;
    } else {
      // Inactive tail lanes borrow the first active index: loaded safely,
      // discarded by the store mask.
      idx[l] = indices[first_active];
    }
  }

  GatherFeature f;
  if (array_len < W) {
    f.flag = irreplaceable_flag(W);
    f.raw_indices.assign(idx.begin(), idx.begin() + W);
    return f;
  }

  std::array<int, kMaxLanes> win;
  win.fill(-1);
  while (true) {
    int64_t lowest = -1;
    for (int l = 0; l < W; ++l)
      if (win[l] < 0 && (lowest < 0 || idx[l] < lowest)) lowest = idx[l];
    if (lowest < 0) break;
    int64_t base = std::min(lowest, array_len - W);
    int w = static_cast<int>(f.bases.size());
    for (int l = 0; l < W; ++l)
      if (win[l] < 0 && idx[l] >= base && idx[l] < base + W) {
        win[l] = w;
        f.perm[l] = static_cast<uint8_t>(idx[l] - base);
      }
    f.bases.push_back(base);
  }
  f.flag = static_cast<int>(f.bases.size());
  f.masks.assign(f.flag - 1, 0);
  for (int l = 0; l < W; ++l) {
    f.window_of[l] = static_cast<uint8_t>(win[l]);
    if (win[l] > 0) f.masks[win[l] - 1] |= static_cast<LaneMask>(1u << l);
  }
  return f;
}

ReductionFeature reduction_feature(std::span<const int64_t> write_addrs,
                                   LaneMask tail_mask, VectorShape shape) {
  const int W = shape.width;
  if (tail_mask == 0) throw ExecError("reduction_feature: no active lanes");

  // Partition active lanes by address, order preserved by first occurrence.
  std::vector<std::vector<int>> parts;
  std::vector<int64_t> part_addr;
  for (int l = 0; l < W; ++l) {
    if (!lane_set(tail_mask, l)) continue;
    int64_t a = write_addrs[l];
    size_t p = 0;
    for (; p < part_addr.size(); ++p)
      if (part_addr[p] == a) break;
    if (p == part_addr.size()) {
      part_addr.push_back(a);
      parts.emplace_back();
    }
    parts[p].push_back(l);
  }

  size_t max_mult = 0;
  for (const auto& p : parts) max_mult = std::max(max_mult, p.size());

  ReductionFeature f;
  f.flag = ceil_log2(static_cast<int64_t>(max_mult));
  f.distinct_addrs = static_cast<int>(parts.size());
  f.use_hreduce = parts.size() == 1;
  for (const auto& p : parts) f.rep_mask |= static_cast<LaneMask>(1u << p.front());

  std::vector<std::vector<int>> live = parts;
  for (int t = 0; t < f.flag; ++t) {
    ReductionStep step;
    for (int l = 0; l < W; ++l) step.perm[l] = static_cast<uint8_t>(l);
    for (auto& lanes : live) {
      int s = static_cast<int>(lanes.size());
      if (s <= 1) continue;
      int h = (s + 1) / 2;
      for (int k = 0; k + h < s; ++k) {
        step.perm[lanes[k]] = static_cast<uint8_t>(lanes[k + h]);
        step.combine |= static_cast<LaneMask>(1u << lanes[k]);
      }
      lanes.resize(h);
    }
    f.steps.push_back(step);
  }
  return f;
}

SeedLayout analyze_seed(const CodeSeed& seed) {
  SeedLayout out;
  out.combine = seed.store.combine;
  out.store_array = seed.store.target;
  const ArrayDecl* target = seed.find_decl(seed.store.target);
  out.data_kind = target ? target->elem : ElemKind::F64;

  std::vector<bool> seen(seed.exprs.size(), false);
  // Pre-order over the value expression; index subexpressions are evaluated
  // by the inspector and contribute no executor sites.
  std::function<void(ExprRef)> walk = [&](ExprRef e) {
    if (e >= seed.exprs.size() || seen[e]) return;
    seen[e] = true;
    const SeedExpr& x = seed.exprs[e];
    switch (x.kind) {
      case ExprKind::Const:
        out.consts.push_back(e);
        return;
      case ExprKind::LoadDirect:
        out.sites.push_back({SiteKind::DirectLoad, x.array, e, kNoExpr});
        return;
      case ExprKind::LoadIndirect:
        out.sites.push_back({SiteKind::IndirectLoad, x.array, e, x.index});
        return;
      case ExprKind::BinOp:
        ++out.value_binops;
        walk(x.lhs);
        walk(x.rhs);
        return;
    }
  };
  walk(seed.store.value);
  return out;
}

void scan_feature_columns(const CodeSeed& seed, const SeedLayout& layout,
                          const Bindings& bindings, VectorShape shape,
                          const std::function<void(FeatureColumn&&)>& sink) {
  const int W = shape.width;
  std::vector<int64_t> site_len(layout.sites.size());
  for (size_t s = 0; s < layout.sites.size(); ++s)
    site_len[s] = static_cast<int64_t>(buffer_len(bindings.at(layout.sites[s].array)));
  int64_t store_len = static_cast<int64_t>(buffer_len(bindings.at(layout.store_array)));

  std::array<int64_t, kMaxLanes> lane_idx{};
  std::array<int64_t, kMaxLanes> addrs{};

  for (const GroupChunk& chunk : chunk_iterations(seed.trip_count, shape)) {
    try {
      FeatureColumn col;
      col.group = chunk.group;
      col.tail_mask = chunk.tail_mask;
      col.active = chunk.lanes;
      col.sites.reserve(layout.sites.size());

      for (size_t s = 0; s < layout.sites.size(); ++s) {
        const LoadSite& site = layout.sites[s];
        for (int l = 0; l < chunk.lanes; ++l) {
          int64_t iter = chunk.first_iter + l;
          lane_idx[l] = site.kind == SiteKind::DirectLoad
                            ? iter
                            : eval_index_expr(seed, site.index, bindings, iter);
        }
        for (int l = chunk.lanes; l < W; ++l) lane_idx[l] = lane_idx[0];
        SiteFeature sf;
        sf.kind = site.kind;
        sf.cover = gather_feature({lane_idx.data(), static_cast<size_t>(W)},
                                  chunk.tail_mask, site_len[s], shape);
        col.sites.push_back(std::move(sf));
      }

      for (int l = 0; l < chunk.lanes; ++l)
        addrs[l] = eval_index_expr(seed, seed.store.index, bindings, chunk.first_iter + l);
      for (int l = chunk.lanes; l < W; ++l) addrs[l] = addrs[0];
      col.store_addrs.assign(addrs.begin(), addrs.begin() + W);
      col.reduction = reduction_feature({addrs.data(), static_cast<size_t>(W)},
                                        chunk.tail_mask, shape);
      col.store_cover = gather_feature({addrs.data(), static_cast<size_t>(W)},
                                       chunk.tail_mask, store_len, shape);
      sink(std::move(col));
    } catch (const ExecError& e) {
      std::ostringstream os;
      os << "group " << chunk.group << ": " << e.what();
      throw ExecError(os.str());
    }
  }
}

FeatureTable build_feature_table(const CodeSeed& seed, const Bindings& bindings,
                                 VectorShape shape) {
  auto violations = validate_seed(seed);
  if (!violations.empty()) throw ExecError("invalid seed: " + violations.front());
  FeatureTable t;
  t.shape = shape;
  t.layout = analyze_seed(seed);
  scan_feature_columns(seed, t.layout, bindings, shape,
                       [&](FeatureColumn&& col) { t.columns.push_back(std::move(col)); });
  return t;
}

namespace {

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v & 0xff));
  out.push_back(static_cast<uint8_t>(v >> 8));
}

void put_cover(std::vector<uint8_t>& out, const GatherFeature& g, int width,
               bool lane_detail) {
  out.push_back(static_cast<uint8_t>(g.flag));
  if (g.degenerate(width) || !lane_detail) return;
  for (int l = 0; l < width; ++l) out.push_back(g.perm[l]);
  for (int l = 0; l < width; ++l) out.push_back(g.window_of[l]);
  out.push_back(static_cast<uint8_t>(g.masks.size()));
  for (LaneMask m : g.masks) put_u16(out, m);
}

}  // namespace

std::vector<uint8_t> canonical_key(const FeatureColumn& col, Combine combine,
                                   ElemKind data_kind, VectorShape shape) {
  const int W = shape.width;
  std::vector<uint8_t> out;
  out.reserve(64);
  out.push_back(1);  // layout version
  out.push_back(static_cast<uint8_t>(W));
  out.push_back(static_cast<uint8_t>(combine));
  out.push_back(static_cast<uint8_t>(data_kind));
  put_u16(out, col.tail_mask);

  out.push_back(static_cast<uint8_t>(col.sites.size()));
  for (const SiteFeature& s : col.sites) {
    out.push_back(static_cast<uint8_t>(s.kind));
    put_cover(out, s.cover, W, true);
  }

  const ReductionFeature& r = col.reduction;
  out.push_back(static_cast<uint8_t>(r.flag));
  put_u16(out, r.rep_mask);
  out.push_back(static_cast<uint8_t>(r.use_hreduce));
  out.push_back(static_cast<uint8_t>(r.distinct_addrs));
  for (const ReductionStep& st : r.steps) {
    for (int l = 0; l < W; ++l) out.push_back(st.perm[l]);
    put_u16(out, st.combine);
  }

  // The generated store only consumes the cover's lane structure on the
  // scatter-replacement path (conflict-free, single window); elsewhere only
  // the flag is pattern-relevant, so clamping noise near the array tail does
  // not split classes.
  bool store_lane_detail = r.flag == 0 && r.distinct_addrs == col.active &&
                           col.store_cover.flag == 1;
  put_cover(out, col.store_cover, W, store_lane_detail);
  return out;
}

ClassAccumulator::ClassAccumulator(Combine combine, ElemKind data_kind,
                                   VectorShape shape, bool track_members)
    : combine_(combine), data_kind_(data_kind), shape_(shape),
      track_members_(track_members) {}

uint32_t ClassAccumulator::insert(const FeatureColumn& col) {
  std::vector<uint8_t> key = canonical_key(col, combine_, data_kind_, shape_);
  Fnv1a h;
  h.feed(key.data(), key.size());
  uint64_t digest = h.digest();

  auto& bucket = by_hash_[digest];
  for (uint32_t id : bucket) {
    if (classes_[id].key == key) {  // structural re-comparison on hash hit
      ++classes_[id].member_count;
      if (track_members_) classes_[id].members.push_back(col.group);
      return id;
    }
  }

  PatternClass pc;
  pc.hash = digest;
  pc.key = std::move(key);
  pc.shape = col;
  pc.shape.group = 0;
  for (auto& s : pc.shape.sites) {
    s.cover.bases.clear();
    s.cover.raw_indices.clear();
  }
  pc.shape.store_cover.bases.clear();
  pc.shape.store_cover.raw_indices.clear();
  pc.shape.store_addrs.clear();
  pc.shape.run_head = pc.shape.run_end = true;
  pc.shape.run_len = 1;
  pc.member_count = 1;
  if (track_members_) pc.members.push_back(col.group);

  uint32_t id = static_cast<uint32_t>(classes_.size());
  bucket.push_back(id);
  classes_.push_back(std::move(pc));
  return id;
}

DedupResult dedup_patterns(const FeatureTable& table) {
  DedupResult out;
  ClassAccumulator acc(table.layout.combine, table.layout.data_kind, table.shape, true);
  out.class_of.reserve(table.columns.size());
  for (const FeatureColumn& col : table.columns) out.class_of.push_back(acc.insert(col));
  out.classes = acc.take();
  return out;
}

void merge_same_address_runs(FeatureTable& table) {
  bool reducing = table.layout.combine != Combine::Overwrite;
  size_t head = 0;
  auto qualifies = [&](const FeatureColumn& c) {
    return reducing && c.reduction.distinct_addrs == 1;
  };
  auto addr_of = [](const FeatureColumn& c) { return c.store_addrs.empty() ? -1 : c.store_addrs[0]; };

  size_t n = table.columns.size();
  for (size_t i = 0; i < n; ++i) {
    auto& col = table.columns[i];
    col.run_head = true;
    col.run_end = true;
    col.run_len = 1;
    if (i > head) {
      auto& prev = table.columns[i - 1];
      if (qualifies(prev) && qualifies(col) && addr_of(prev) == addr_of(col)) {
        prev.run_end = false;
        col.run_head = false;
        ++table.columns[head].run_len;
        continue;
      }
    }
    head = i;
  }
}

}  // namespace ivex
