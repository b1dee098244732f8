#pragma once

#include <string>
#include <vector>

#include "ivex/plan.hpp"

namespace ivex {

// Lane-explicit register value. Only the member matching the vector's element
// kind is meaningful; float lanes are kept in real float storage so that
// real-32 arithmetic rounds exactly like the modeled hardware.
struct LaneVector {
  ElemKind kind = ElemKind::F64;
  std::array<int64_t, kMaxLanes> i{};
  std::array<double, kMaxLanes> f{};
  std::array<float, kMaxLanes> s{};
};

struct ExecStats {
  std::array<uint64_t, kOpcodeCount> op_count{};
  uint64_t dynamic_instructions = 0;
  uint64_t bytes_loaded = 0;
  uint64_t bytes_stored = 0;
  uint64_t lines_touched = 0;  // distinct 64-byte lines per memory instruction, summed
  uint64_t groups_executed = 0;
  uint64_t reduce_sequences = 0;

  bool operator==(const ExecStats&) const = default;
  uint64_t ops(Opcode op) const { return op_count[static_cast<size_t>(op)]; }
};

std::string stats_to_json(const ExecStats& stats);

// Per-group operand record, laid out per the owning program's slot schema:
// window bases (or raw indices at degenerate sites) for each load site, and
// the store payload the program's store path asked for.
struct ExecRecord {
  uint32_t group = 0;
  uint32_t cls = 0;
  bool run_head = true;
  bool run_end = true;
  std::vector<int64_t> site_ops;
  std::vector<int64_t> store_ops;
};

// Accumulator state carried across the groups of a same-address run.
struct VmState {
  LaneVector acc;
};

void exec_group(const VectorProgram& prog, const ExecRecord& rec, Bindings& bindings,
                ExecStats& stats, VmState& state);

// Inspector output: everything the executor needs, reusable across any number
// of executor passes over rebound data.
struct PlannedKernel {
  VectorShape shape;
  SeedLayout layout;
  std::vector<PatternClass> classes;
  std::vector<VectorProgram> programs;  // one per class
  std::vector<ExecRecord> records;      // one per group, ascending
  uint64_t group_count = 0;
};

PlannedKernel prepare_plan(const CodeSeed& seed, const Bindings& bindings,
                           VectorShape shape, const CostModel& policy);

ExecStats execute_plan(const PlannedKernel& plan, Bindings& bindings);

// chunk -> feature -> dedup -> merge -> lower -> execute, in group order.
ExecStats run_plan(const CodeSeed& seed, Bindings& bindings, VectorShape shape,
                   const CostModel& policy);

// FNV-1a digest of the mutable output buffers, in declaration order.
uint64_t output_checksum(const CodeSeed& seed, const Bindings& bindings);

std::vector<Buffer> snapshot_outputs(const CodeSeed& seed, const Bindings& bindings);
void restore_outputs(const CodeSeed& seed, Bindings& bindings,
                     const std::vector<Buffer>& snap);

}  // namespace ivex
