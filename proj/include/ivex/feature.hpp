#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ivex/core.hpp"
#include "ivex/seed.hpp"

namespace ivex {

inline constexpr int kMaxLanes = 16;

struct VectorShape {
  int width = 8;

  static VectorShape make(int w);  // throws InputError unless w is a power of two in 2..16
  int log2w() const;
};

// Lane set as a bit mask, lane l = bit l.
using LaneMask = uint16_t;
using PermVec = std::array<uint8_t, kMaxLanes>;

inline bool lane_set(LaneMask m, int l) { return (m >> l) & 1; }
inline LaneMask full_mask(int width) { return static_cast<LaneMask>((1u << width) - 1); }

int ceil_log2(int64_t m);

// Window cover of one vector group's load (or store) targets: `flag` windows
// of `width` consecutive elements, a single shared permutation, and flag-1
// select masks deciding which window feeds each lane. Windows are placed
// greedily at the smallest uncovered index, clamped so a full-width load
// never runs past the array; greedy placement is minimal for fixed-length
// interval covers (checked against verify::oracle_min_cover).
//
// When the array itself is shorter than the vector, no full-width window
// fits; flag is the width+1 sentinel and the native per-lane gather is kept,
// with the raw target indices as the per-group operand.
struct GatherFeature {
  int flag = 1;
  std::vector<int64_t> bases;      // per-group operand, strictly ascending
  PermVec perm{};                  // lane -> offset within its window
  std::vector<LaneMask> masks;     // masks[k] selects lanes of window k+1 (window 0 = unselected)
  PermVec window_of{};             // lane -> window index (derived from masks)
  std::vector<int64_t> raw_indices;  // degenerate case only

  bool degenerate(int width) const { return flag > width; }
};

inline int irreplaceable_flag(int width) { return width + 1; }

struct ReductionStep {
  PermVec perm{};        // lane -> shuffle source lane
  LaneMask combine = 0;  // lanes that fold op(self, source) this step
};

// Conflict-resolution schedule for one group's write addresses. Lanes are
// partitioned by address in lane order; each step halves every partition
// (destination k takes source k + ceil(s/2)), so flag = ceil(log2(max
// multiplicity)) steps leave each partition's fold in its first lane.
struct ReductionFeature {
  int flag = 0;
  std::vector<ReductionStep> steps;
  LaneMask rep_mask = 0;      // first lane of each address partition
  bool use_hreduce = false;   // eligible only when all active lanes share one address
  int distinct_addrs = 0;     // K: partition count, reported alongside flag
};

enum class SiteKind : uint8_t { DirectLoad, IndirectLoad, Store };

const char* to_string(SiteKind k);

struct SiteFeature {
  SiteKind kind = SiteKind::IndirectLoad;
  GatherFeature cover;
};

// One vector group's extracted features plus its per-group operands
// (window bases and write addresses). Operands are excluded from the
// canonical form used for pattern-class deduplication.
struct FeatureColumn {
  uint32_t group = 0;
  LaneMask tail_mask = 0;
  uint8_t active = 0;
  std::vector<SiteFeature> sites;  // load sites in seed traversal order
  ReductionFeature reduction;
  GatherFeature store_cover;       // window cover of the write addresses
  std::vector<int64_t> store_addrs;

  // Same-address run annotations (merge_same_address_runs).
  bool run_head = true;
  bool run_end = true;
  uint32_t run_len = 1;  // valid on run heads
};

// Static per-seed layout: executor-visible load sites (direct loads and the
// outermost indirect loads of the value expression), constants, and the
// store. Index subexpressions are inspector-side and never become sites.
struct LoadSite {
  SiteKind kind = SiteKind::IndirectLoad;
  std::string array;
  ExprRef expr = kNoExpr;
  ExprRef index = kNoExpr;  // indirect only
};

struct SeedLayout {
  std::vector<LoadSite> sites;
  std::vector<ExprRef> consts;
  int value_binops = 0;
  Combine combine = Combine::Overwrite;
  std::string store_array;
  ElemKind data_kind = ElemKind::F64;
};

SeedLayout analyze_seed(const CodeSeed& seed);

struct GroupChunk {
  uint32_t group = 0;
  int64_t first_iter = 0;  // lane l maps to iteration first_iter + l
  uint8_t lanes = 0;       // active lane count
  LaneMask tail_mask = 0;
};

std::vector<GroupChunk> chunk_iterations(int64_t trip_count, VectorShape shape);

GatherFeature gather_feature(std::span<const int64_t> indices, LaneMask tail_mask,
                             int64_t array_len, VectorShape shape);

ReductionFeature reduction_feature(std::span<const int64_t> write_addrs,
                                   LaneMask tail_mask, VectorShape shape);

struct FeatureTable {
  VectorShape shape;
  SeedLayout layout;
  std::vector<FeatureColumn> columns;
};

FeatureTable build_feature_table(const CodeSeed& seed, const Bindings& bindings,
                                 VectorShape shape);

// Streaming variant: invokes the sink once per group in ascending group
// order without materializing the table.
void scan_feature_columns(const CodeSeed& seed, const SeedLayout& layout,
                          const Bindings& bindings, VectorShape shape,
                          const std::function<void(FeatureColumn&&)>& sink);

// Canonical byte form of a column: every field the generated program depends
// on, in a fixed little-endian layout, operands excluded. Store-cover lane
// detail is included only when the scatter-replacement path would consume it
// (conflict-free group, single window); otherwise only its flag matters.
std::vector<uint8_t> canonical_key(const FeatureColumn& col, Combine combine,
                                   ElemKind data_kind, VectorShape shape);

struct PatternClass {
  uint64_t hash = 0;
  std::vector<uint8_t> key;  // canonical byte form; equality = structural equality
  FeatureColumn shape;       // representative column, operands cleared
  uint64_t member_count = 0;
  std::vector<uint32_t> members;  // group ids (only when tracked)
};

// Hash-then-compare dedup. Columns whose 64-bit digests collide are merged
// only if their canonical keys compare equal byte for byte.
class ClassAccumulator {
 public:
  ClassAccumulator(Combine combine, ElemKind data_kind, VectorShape shape,
                   bool track_members);

  uint32_t insert(const FeatureColumn& col);

  const std::vector<PatternClass>& classes() const { return classes_; }
  std::vector<PatternClass> take() { return std::move(classes_); }

 private:
  Combine combine_;
  ElemKind data_kind_;
  VectorShape shape_;
  bool track_members_;
  std::vector<PatternClass> classes_;
  std::unordered_map<uint64_t, std::vector<uint32_t>> by_hash_;
};

struct DedupResult {
  std::vector<PatternClass> classes;
  std::vector<uint32_t> class_of;  // group -> class id
};

DedupResult dedup_patterns(const FeatureTable& table);

// Annotates maximal runs of consecutive groups whose active lanes all reduce
// into one identical address. Downstream plans accumulate a vector register
// across such a run and emit a single reduction + store at the run end.
void merge_same_address_runs(FeatureTable& table);

}  // namespace ivex
