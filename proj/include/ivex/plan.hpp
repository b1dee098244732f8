#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ivex/feature.hpp"

namespace ivex {

// Abstract vector instruction set. Register allocation is SSA-like (fresh
// register per result); register 0 is reserved for the cross-group
// accumulator in run-merged programs.
enum class Opcode : uint8_t {
  VLoad,        // dst[l] = array[base + l] for masked lanes
  Gather,       // dst[l] = array[idx[l]] for masked lanes
  Broadcast,    // dst[l] = scalar operand
  Permute,      // dst[l] = a[perm[l]]
  Select,       // dst[l] = mask[l] ? a[l] : b[l]
  BinOp,        // dst[l] = a[l] op b[l]
  ReduceStep,   // dst[l] = mask[l] ? op(a[l], a[perm[l]]) : a[l]
  HReduce,      // dst[*] = fold of a over masked lanes
  VStoreMasked, // array[base + l] = a[l] for masked lanes, ascending
  Scatter,      // array[addr[l]] = a[l] for masked lanes, ascending
  AccInit,      // acc[l] = identity(op)
  AccCombine,   // acc[l] = mask[l] ? op(acc[l], a[l]) : acc[l]
};

inline constexpr int kOpcodeCount = 12;
const char* to_string(Opcode op);

// Run-position gating: run-merged programs initialize the accumulator only
// at a run head and reduce + store only at the run end. Groups outside any
// merged run are both, so the same program degrades to per-group behavior.
enum class When : uint8_t { Always, RunHead, RunEnd };

enum class SlotKind : uint8_t {
  None,
  GatherBase,     // site window base (site, window)
  GatherIndices,  // site native-gather target vector (site)
  StoreAddrs,     // per-lane write addresses
  StoreHeadAddr,  // shared write address of a run-merged group
  StoreCoverBase, // store window base (window)
  ConstScalar,    // seed constant (site = const ordinal)
};

struct VInstr {
  Opcode op = Opcode::BinOp;
  When when = When::Always;
  uint16_t dst = 0, a = 0, b = 0;
  BinOpKind alu = BinOpKind::Add;
  int16_t perm = -1;  // index into VectorProgram::perms
  int16_t mask = -1;  // index into VectorProgram::masks
  SlotKind slot = SlotKind::None;
  uint16_t site = 0;
  uint16_t window = 0;
  uint8_t array = 0;  // index into VectorProgram::arrays
  bool begins_reduce = false;  // first instruction of a reduction sequence
};

// How one group's operand record is laid out for this program.
struct SiteSlotSchema {
  uint32_t offset = 0;  // into ExecRecord::site_ops
  uint32_t len = 0;     // window-base count, or width when degenerate
  bool degenerate = false;
  PermVec perm{};       // reconstruction: idx[l] = bases[window_of[l]] + perm[l]
  PermVec window_of{};
};

enum class StorePayload : uint8_t { None, HeadAddr, Addrs, CoverBase };

struct ArrayRef {
  std::string name;
  ElemKind elem = ElemKind::F64;
};

struct VectorProgram {
  uint32_t cls = 0;
  int width = 8;
  ElemKind data_kind = ElemKind::F64;
  Combine combine = Combine::Overwrite;
  bool uses_acc = false;
  uint16_t n_regs = 1;
  LaneMask active_mask = 0;
  std::vector<VInstr> code;
  std::vector<PermVec> perms;
  std::vector<LaneMask> masks;
  std::vector<ArrayRef> arrays;
  std::vector<SiteSlotSchema> site_slots;  // one per load site
  uint32_t site_ops_len = 0;               // total ExecRecord::site_ops length
  StorePayload store_payload = StorePayload::None;
  std::vector<double> scalar_consts;       // seed constants, broadcast operands
  std::vector<int64_t> scalar_consts_i;    // same constants for integer kinds
};

struct CostModel {
  int gather_threshold = 2;  // replace a gather with at most this many vloads
  std::array<double, kOpcodeCount> op_cost{};
  int index_bits = 64;

  double cost(Opcode op) const { return op_cost[static_cast<size_t>(op)]; }
  bool hreduce_cheaper(VectorShape shape) const;
};

// Default policy: a gather is replaced when its window cover needs no more
// than two vloads, the population where replacement pays off on most sparse
// datasets; all opcodes cost one unit.
CostModel default_policy(VectorShape shape);

// JSON config: {"gather_threshold": int, "index_bits": int,
//               "op_cost": {"VLOAD": 1.0, ...}} — all fields optional.
CostModel load_cost_model(std::istream& in, VectorShape shape);

struct PreTransform { enum Kind { None, Negate, Reciprocal } kind = None; };

struct NormalizedReduce {
  BinOpKind canonical = BinOpKind::Add;
  PreTransform pre;
};

// sub folds as add over negated elements, div as mul over reciprocals; add
// and mul pass through. Keeps the scheduler's associativity assumption valid.
NormalizedReduce normalize_reduction_op(BinOpKind op);

VectorProgram lower_class(const PatternClass& cls, const CodeSeed& seed,
                          const SeedLayout& layout, VectorShape shape,
                          const CostModel& policy);

// Per-site instruction/memory accounting in the shape of the standard
// before/after comparison: a reduction site costs (N, N, 0) scalar
// calculations/reductions/permutations originally and (1, M, M) optimized;
// a gather site trades N*Bit(Index) of index loads for M*Bit(Index) plus
// N*log2(N) + (M-1)*N bits of permutation/select metadata.
struct SiteCost {
  SiteKind kind = SiteKind::IndirectLoad;
  int flag = 1;
  bool replaced = false;
  bool profitable = false;
  uint64_t orig_index_bits = 0, opt_index_bits = 0;
  uint64_t orig_data_bits = 0, opt_data_bits = 0;
  uint64_t info_bits = 0;
};

struct ReductionCost {
  int flag = 0;
  int distinct_addrs = 0;
  uint64_t orig_calc = 0, orig_red = 0, orig_perm = 0;
  uint64_t opt_calc = 0, opt_red = 0, opt_perm = 0;
  uint64_t orig_widx_bits = 0, orig_wdata_bits = 0, orig_store_bits = 0;
  uint64_t opt_widx_bits = 0, opt_wdata_bits = 0, opt_store_bits = 0;
  uint64_t opt_info_bits = 0;
  bool mem_profitable = false;
};

struct CostReport {
  std::vector<SiteCost> sites;  // load sites in order, then the store site
  bool has_reduction = false;
  ReductionCost reduction;
  // Static opcode histogram the lowered program must match exactly.
  std::array<uint64_t, kOpcodeCount> predicted_ops{};
};

CostReport cost_of(const PatternClass& cls, const SeedLayout& layout,
                   VectorShape shape, const CostModel& policy);

std::array<uint64_t, kOpcodeCount> count_ops(const VectorProgram& prog);

std::string program_to_json(const VectorProgram& prog);

}  // namespace ivex
