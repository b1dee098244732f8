#include <random>

#include "doctest.h"
#include "ivex/ingest.hpp"
#include "ivex/verify.hpp"
#include "ivex/vvm.hpp"
#include "testutil.hpp"

using namespace ivex;
using namespace ivex::testutil;

namespace {

// Bare program scaffold for single-opcode semantic checks: one input array,
// one output array, W=4 doubles.
struct MiniVm {
  VectorProgram prog;
  Bindings b;
  ExecRecord rec;

  explicit MiniVm(std::vector<double> input, int n_out = 8) {
    prog.width = 4;
    prog.data_kind = ElemKind::F64;
    prog.active_mask = 0xf;
    prog.arrays = {{"in", ElemKind::F64}, {"out", ElemKind::F64}};
    prog.site_slots.push_back({0, 1, false, {}, {}});
    prog.site_ops_len = 1;
    prog.store_payload = StorePayload::CoverBase;
    b.bind("in", std::move(input));
    b.bind("out", std::vector<double>(n_out, 0.0));
    rec.site_ops = {0};
    rec.store_ops = {0};
  }

  int16_t mask(LaneMask m) {
    prog.masks.push_back(m);
    return static_cast<int16_t>(prog.masks.size() - 1);
  }
  int16_t perm(std::initializer_list<int> lanes) {
    PermVec p{};
    int l = 0;
    for (int v : lanes) p[l++] = static_cast<uint8_t>(v);
    prog.perms.push_back(p);
    return static_cast<int16_t>(prog.perms.size() - 1);
  }

  std::vector<double> run(std::vector<VInstr> code, uint16_t n_regs) {
    prog.code = std::move(code);
    prog.n_regs = n_regs;
    ExecStats stats;
    VmState state;
    exec_group(prog, rec, b, stats, state);
    return b.reals("out");
  }
};

VInstr vload(uint16_t dst, int16_t mask) {
  VInstr in;
  in.op = Opcode::VLoad;
  in.dst = dst;
  in.array = 0;
  in.slot = SlotKind::GatherBase;
  in.site = 0;
  in.window = 0;
  in.mask = mask;
  return in;
}

VInstr vstore(uint16_t src, int16_t mask) {
  VInstr in;
  in.op = Opcode::VStoreMasked;
  in.a = src;
  in.array = 1;
  in.slot = SlotKind::StoreCoverBase;
  in.window = 0;
  in.mask = mask;
  return in;
}

}  // namespace

TEST_CASE("PERMUTE rearranges lanes by constant sources") {
  MiniVm vm({10, 20, 30, 40});  // A,B,C,D
  int16_t all = vm.mask(0xf);
  int16_t p = vm.perm({0, 0, 1, 1});
  VInstr pe;
  pe.op = Opcode::Permute;
  pe.dst = 2;
  pe.a = 1;
  pe.perm = p;
  auto out = vm.run({vload(1, all), pe, vstore(2, all)}, 3);
  CHECK(out[0] == 10);
  CHECK(out[1] == 10);
  CHECK(out[2] == 20);
  CHECK(out[3] == 20);
}

TEST_CASE("SELECT picks lanes from a where the mask is set") {
  // SELECT(mask [0,1,1,0], [E,E,F,F], [A,A,B,B]) -> [A,E,F,B]
  MiniVm vm({65, 66, 67, 68, 69, 70, 71, 72});  // A..H
  int16_t all = vm.mask(0xf);
  int16_t sel_mask = vm.mask(0b0110);
  int16_t p = vm.perm({0, 0, 1, 1});

  // windows at 0 and 4 need two base slots
  vm.prog.site_slots[0].len = 2;
  vm.prog.site_ops_len = 2;
  vm.rec.site_ops = {0, 4};
  VInstr load_b = vload(1, all);
  load_b.window = 0;
  VInstr load_a = vload(2, all);
  load_a.window = 1;
  VInstr perm_b;
  perm_b.op = Opcode::Permute;
  perm_b.dst = 3;
  perm_b.a = 1;
  perm_b.perm = p;
  VInstr perm_a;
  perm_a.op = Opcode::Permute;
  perm_a.dst = 4;
  perm_a.a = 2;
  perm_a.perm = p;
  VInstr sel;
  sel.op = Opcode::Select;
  sel.dst = 5;
  sel.a = 4;  // EEFF
  sel.b = 3;  // AABB
  sel.mask = sel_mask;
  auto out = vm.run({load_b, load_a, perm_b, perm_a, sel, vstore(5, vm.mask(0xf))}, 6);
  CHECK(out[0] == 65);  // A
  CHECK(out[1] == 69);  // E
  CHECK(out[2] == 70);  // F
  CHECK(out[3] == 66);  // B
}

TEST_CASE("REDUCE_STEP folds masked lanes against shuffled sources") {
  // on [1,2,3,4] with perm [2,3,0,0], mask [1,1,0,0], add -> [4,6,3,4]
  MiniVm vm({1, 2, 3, 4});
  int16_t all = vm.mask(0xf);
  int16_t m = vm.mask(0b0011);
  int16_t p = vm.perm({2, 3, 0, 0});
  VInstr rs;
  rs.op = Opcode::ReduceStep;
  rs.dst = 2;
  rs.a = 1;
  rs.alu = BinOpKind::Add;
  rs.perm = p;
  rs.mask = m;
  auto out = vm.run({vload(1, all), rs, vstore(2, all)}, 3);
  CHECK(out == std::vector<double>{4, 6, 3, 4, 0, 0, 0, 0});
}

TEST_CASE("HREDUCE folds masked lanes and broadcasts the result") {
  MiniVm vm({1.5, 2.0, 3.0, 4.0});
  int16_t all = vm.mask(0xf);
  int16_t three = vm.mask(0b0111);
  VInstr hr;
  hr.op = Opcode::HReduce;
  hr.dst = 2;
  hr.a = 1;
  hr.alu = BinOpKind::Add;
  hr.mask = three;
  auto out = vm.run({vload(1, all), hr, vstore(2, all)}, 3);
  CHECK(out[0] == 6.5);
  CHECK(out[3] == 6.5);
}

TEST_CASE("VM address errors name the opcode, lane and group") {
  MiniVm vm({1, 2, 3, 4});
  int16_t all = vm.mask(0xf);
  vm.rec.site_ops = {2};  // base 2 + lane 3 -> offset 5 of a length-4 array
  vm.rec.group = 7;
  vm.prog.code = {vload(1, all)};
  vm.prog.n_regs = 2;
  ExecStats stats;
  VmState state;
  CHECK_THROWS_WITH_AS(exec_group(vm.prog, vm.rec, vm.b, stats, state),
                       doctest::Contains("group 7"), ExecError);
}

TEST_CASE("a missing store operand reports a slot schema mismatch") {
  MiniVm vm({1, 2, 3, 4});
  int16_t all = vm.mask(0xf);
  VInstr sc;
  sc.op = Opcode::Scatter;
  sc.a = 1;
  sc.array = 1;
  sc.slot = SlotKind::StoreAddrs;
  sc.mask = all;
  vm.rec.store_ops = {0};  // scatter needs W addresses
  vm.prog.code = {vload(1, all), sc};
  vm.prog.n_regs = 2;
  ExecStats stats;
  VmState state;
  CHECK_THROWS_WITH_AS(exec_group(vm.prog, vm.rec, vm.b, stats, state),
                       doctest::Contains("slot schema mismatch"), ExecError);
}

TEST_CASE("integer overflow in lane arithmetic is a checked error") {
  CodeSeed s = build_spmv_seed(4, ElemKind::I64);
  Bindings b;
  b.bind("row_ptr", std::vector<int64_t>{0, 1, 2, 3});
  b.bind("col_ptr", std::vector<int64_t>{0, 1, 2, 3});
  b.bind("value", std::vector<int64_t>(4, INT64_C(1) << 62));
  b.bind("x", std::vector<int64_t>(4, 4));
  b.bind("y", std::vector<int64_t>(4, 0));
  CHECK_THROWS_WITH_AS(
      run_plan(s, b, VectorShape::make(4), default_policy(VectorShape::make(4))),
      doctest::Contains("overflow"), ExecError);
}

TEST_CASE("pagerank groups writing one vertex merge into a single run") {
  int64_t ne = 20;
  EdgeList g;
  g.n_vertices = 8;
  for (int64_t e = 0; e < ne; ++e) {
    g.src.push_back(e % 8);
    g.dst.push_back(3);
  }
  g.out_degree.assign(8, 0);
  for (int64_t v : g.src) ++g.out_degree[v];
  CodeSeed s = build_pagerank_seed(ne, ElemKind::I64);
  Bindings vec = pagerank_bindings(g, ElemKind::I64);
  Bindings ref = pagerank_bindings(g, ElemKind::I64);
  ExecStats stats = run_plan(s, vec, VectorShape::make(8),
                             default_policy(VectorShape::make(8)));
  scalar_execute(s, ref);
  CHECK(vec.ints("sum") == ref.ints("sum"));
  CHECK(stats.groups_executed == 3);
  CHECK(stats.reduce_sequences == 1);
}

TEST_CASE("run_plan matches the scalar oracle on the 5-nnz instance") {
  CodeSeed s = build_spmv_seed(5, ElemKind::I64);
  auto mk = [] {
    Bindings b;
    b.bind("row_ptr", std::vector<int64_t>{0, 0, 0, 1, 1});
    b.bind("col_ptr", std::vector<int64_t>{0, 1, 2, 3, 4});
    b.bind("value", std::vector<int64_t>{1, 2, 3, 4, 5});
    b.bind("x", std::vector<int64_t>(5, 1));
    b.bind("y", std::vector<int64_t>(2, 0));
    return b;
  };
  Bindings vec = mk();
  run_plan(s, vec, VectorShape::make(4), default_policy(VectorShape::make(4)));
  CHECK(vec.ints("y") == std::vector<int64_t>{6, 9});
}

TEST_CASE("zero trip count leaves outputs untouched with zero stats") {
  CodeSeed s = build_spmv_seed(0);
  Bindings b;
  b.bind("row_ptr", std::vector<int64_t>{});
  b.bind("col_ptr", std::vector<int64_t>{});
  b.bind("value", std::vector<double>{});
  b.bind("x", std::vector<double>{1.0});
  b.bind("y", std::vector<double>{3.0});
  ExecStats stats = run_plan(s, b, VectorShape::make(8), default_policy(VectorShape::make(8)));
  CHECK(b.reals("y") == std::vector<double>{3.0});
  CHECK(stats.dynamic_instructions == 0);
  CHECK(stats.groups_executed == 0);
}

TEST_CASE("integer equivalence across random matrices and widths") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    int64_t rows = 1 + draw(rng, 24);
    int64_t cols = 1 + draw(rng, 24);
    int64_t per_row = 1 + draw(rng, cols);
    CooMatrix m = gen_random(rows, cols, per_row, rng());
    for (int w : {4, 8}) {
      CodeSeed s = build_spmv_seed(m.nnz(), ElemKind::I64);
      Bindings vec = spmv_bindings(m, ElemKind::I64);
      Bindings ref = spmv_bindings(m, ElemKind::I64);
      run_plan(s, vec, VectorShape::make(w), default_policy(VectorShape::make(w)));
      scalar_execute(s, ref);
      CHECK(vec.ints("y") == ref.ints("y"));
    }
  }
}

TEST_CASE("pagerank integer equivalence on random edge lists") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    int64_t nv = 2 + draw(rng, 40);
    int64_t ne = 1 + draw(rng, 120);
    EdgeList g;
    g.n_vertices = nv;
    for (int64_t e = 0; e < ne; ++e) {
      g.src.push_back(draw(rng, nv));
      g.dst.push_back(draw(rng, nv));
    }
    g.out_degree.assign(nv, 0);
    for (int64_t v : g.src) ++g.out_degree[v];
    CodeSeed s = build_pagerank_seed(ne, ElemKind::I64);
    Bindings vec = pagerank_bindings(g, ElemKind::I64);
    Bindings ref = pagerank_bindings(g, ElemKind::I64);
    run_plan(s, vec, VectorShape::make(8), default_policy(VectorShape::make(8)));
    scalar_execute(s, ref);
    CHECK(vec.ints("sum") == ref.ints("sum"));
  }
}

TEST_CASE("f64 outputs stay within tolerance of the scalar oracle") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    int64_t rows = 1 + draw(rng, 32);
    int64_t cols = 1 + draw(rng, 32);
    int64_t per_row = 1 + draw(rng, std::min<int64_t>(cols, 6));
    CooMatrix m = gen_random(rows, cols, per_row, rng());
    for (auto& v : m.values) v *= 1.0 / 3.0;  // force inexact sums
    CodeSeed s = build_spmv_seed(m.nnz());
    Bindings vec = spmv_bindings(m);
    Bindings ref = spmv_bindings(m);
    run_plan(s, vec, VectorShape::make(8), default_policy(VectorShape::make(8)));
    scalar_execute(s, ref);
    CHECK(within_tolerance(vec.at("y"), ref.at("y"), ElemKind::F64, 1e-9, 1e-12));
  }
}

TEST_CASE("f32 outputs stay within the wider float tolerance") {
  CooMatrix m = gen_random(24, 24, 6, 77);
  CodeSeed s = build_spmv_seed(m.nnz(), ElemKind::F32);
  Bindings vec = spmv_bindings(m, ElemKind::F32);
  Bindings ref = spmv_bindings(m, ElemKind::F32);
  run_plan(s, vec, VectorShape::make(8), default_policy(VectorShape::make(8)));
  scalar_execute(s, ref);
  CHECK(within_tolerance(vec.at("y"), ref.at("y"), ElemKind::F32, 1e-4, 1e-6));
}

TEST_CASE("degenerate gather (array shorter than W) still matches the oracle") {
  CooMatrix m = gen_random(3, 4, 2, 9);
  CodeSeed s = build_spmv_seed(m.nnz(), ElemKind::I64);
  Bindings vec = spmv_bindings(m, ElemKind::I64);
  Bindings ref = spmv_bindings(m, ElemKind::I64);
  run_plan(s, vec, VectorShape::make(8), default_policy(VectorShape::make(8)));
  scalar_execute(s, ref);
  CHECK(vec.ints("y") == ref.ints("y"));
}

TEST_CASE("a run with a tail group accumulates across groups exactly") {
  // 12 identical rows at W=8: groups of 8 and 4 lanes, one run, one store.
  CodeSeed s = build_spmv_seed(12, ElemKind::I64);
  Bindings b;
  b.bind("row_ptr", std::vector<int64_t>(12, 0));
  std::vector<int64_t> cols(12);
  for (int i = 0; i < 12; ++i) cols[i] = i;
  b.bind("col_ptr", cols);
  std::vector<int64_t> vals(12);
  for (int i = 0; i < 12; ++i) vals[i] = i + 1;
  b.bind("value", vals);
  b.bind("x", std::vector<int64_t>(12, 1));
  b.bind("y", std::vector<int64_t>(1, 0));
  ExecStats stats = run_plan(s, b, VectorShape::make(8), default_policy(VectorShape::make(8)));
  CHECK(b.ints("y") == std::vector<int64_t>{78});  // 1+..+12
  CHECK(stats.reduce_sequences == 1);
  CHECK(stats.groups_executed == 2);
}

TEST_CASE("overwrite semantics keep last-lane-wins for duplicate addresses") {
  // y[out_idx[i]] = x[col[i]] with duplicated targets inside one group.
  CodeSeed s;
  s.trip_count = 4;
  s.decls = {
      {"out_idx", ElemKind::Index, ArrayRole::AccessArray, Mutability::Immutable},
      {"col", ElemKind::Index, ArrayRole::AccessArray, Mutability::Immutable},
      {"x", ElemKind::F64, ArrayRole::DataArray, Mutability::Immutable},
      {"y", ElemKind::F64, ArrayRole::DataArray, Mutability::Mutable},
  };
  s.store.target = "y";
  s.store.index = s.load_direct("out_idx");
  s.store.value = s.load_indirect("x", s.load_direct("col"));
  s.store.combine = Combine::Overwrite;

  Bindings vec;
  vec.bind("out_idx", std::vector<int64_t>{0, 0, 1, 1});
  vec.bind("col", std::vector<int64_t>{3, 2, 1, 0});
  vec.bind("x", std::vector<double>{10, 20, 30, 40});
  vec.bind("y", std::vector<double>(2, -1));
  Bindings ref = vec;
  ref.bind("out_idx", std::vector<int64_t>{0, 0, 1, 1});

  run_plan(s, vec, VectorShape::make(4), default_policy(VectorShape::make(4)));
  scalar_execute(s, ref);
  CHECK(vec.reals("y") == ref.reals("y"));
  CHECK(vec.reals("y") == std::vector<double>{30, 10});
}

TEST_CASE("stats are identical across repeated runs") {
  CooMatrix m = gen_random(20, 20, 4, 3);
  CodeSeed s = build_spmv_seed(m.nnz());
  VectorShape shape = VectorShape::make(8);
  Bindings b1 = spmv_bindings(m);
  Bindings b2 = spmv_bindings(m);
  ExecStats s1 = run_plan(s, b1, shape, default_policy(shape));
  ExecStats s2 = run_plan(s, b2, shape, default_policy(shape));
  CHECK(s1 == s2);
  CHECK(output_checksum(s, b1) == output_checksum(s, b2));
}

TEST_CASE("default policy never gathers more than threshold zero") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    CooMatrix m = gen_random(16, 32, 4, rng());
    CodeSeed s = build_spmv_seed(m.nnz());
    VectorShape shape = VectorShape::make(8);
    CostModel never = default_policy(shape);
    never.gather_threshold = 0;
    Bindings b1 = spmv_bindings(m);
    Bindings b2 = spmv_bindings(m);
    ExecStats def = run_plan(s, b1, shape, default_policy(shape));
    ExecStats none = run_plan(s, b2, shape, never);
    CHECK(def.ops(Opcode::Gather) <= none.ops(Opcode::Gather));
  }
}

TEST_CASE("execute_plan reuses one analysis across passes") {
  CooMatrix m = gen_random(16, 16, 4, 5);
  CodeSeed s = build_spmv_seed(m.nnz());
  VectorShape shape = VectorShape::make(8);
  Bindings b = spmv_bindings(m);
  auto initial = snapshot_outputs(s, b);
  PlannedKernel plan = prepare_plan(s, b, shape, default_policy(shape));
  ExecStats first = execute_plan(plan, b);
  uint64_t c1 = output_checksum(s, b);
  restore_outputs(s, b, initial);
  ExecStats second = execute_plan(plan, b);
  CHECK(first == second);
  CHECK(output_checksum(s, b) == c1);
}

TEST_CASE("cache line accounting counts distinct 64-byte lines per instruction") {
  // 8 doubles from one base span exactly one line when 64-byte aligned.
  CodeSeed s = build_spmv_seed(8);
  Bindings b;
  b.bind("row_ptr", std::vector<int64_t>(8, 0));
  std::vector<int64_t> cols{0, 1, 2, 3, 4, 5, 6, 7};
  b.bind("col_ptr", cols);
  b.bind("value", std::vector<double>(8, 1.0));
  b.bind("x", std::vector<double>(8, 1.0));
  b.bind("y", std::vector<double>(1, 0.0));
  ExecStats stats = run_plan(s, b, VectorShape::make(8), default_policy(VectorShape::make(8)));
  CHECK(stats.bytes_loaded > 0);
  CHECK(stats.lines_touched > 0);
  // value + x vloads read one line each; epilogue load/store touch one line.
  CHECK(stats.lines_touched <= stats.bytes_loaded / 8 + 2);
}

TEST_CASE("equivalence holds at the width extremes W=2 and W=16") {
  std::mt19937_64 rng(41);
  for (int w : {2, 16}) {
    for (int trial = 0; trial < 10; ++trial) {
      int64_t cols = 1 + draw(rng, 20);
      int64_t per_row = 1 + draw(rng, std::min<int64_t>(cols, 3));
      CooMatrix m = gen_random(1 + draw(rng, 20), cols, per_row, rng());
      CodeSeed s = build_spmv_seed(m.nnz(), ElemKind::I64);
      Bindings vec = spmv_bindings(m, ElemKind::I64);
      Bindings ref = spmv_bindings(m, ElemKind::I64);
      run_plan(s, vec, VectorShape::make(w), default_policy(VectorShape::make(w)));
      scalar_execute(s, ref);
      CHECK(vec.ints("y") == ref.ints("y"));
    }
  }
}

TEST_CASE("f32 accumulator runs reduce through HREDUCE within tolerance") {
  // One long all-conflict run in f32: exercises identity padding and the
  // horizontal fold in float precision.
  int64_t n = 37;
  CodeSeed s = build_spmv_seed(n, ElemKind::F32);
  Bindings vec, ref;
  for (Bindings* b : {&vec, &ref}) {
    b->bind("row_ptr", std::vector<int64_t>(n, 0));
    std::vector<int64_t> cols(n);
    for (int64_t i = 0; i < n; ++i) cols[i] = i;
    b->bind("col_ptr", cols);
    std::vector<float> vals(n);
    for (int64_t i = 0; i < n; ++i) vals[i] = 0.1f * static_cast<float>(i + 1);
    b->bind("value", vals);
    b->bind("x", std::vector<float>(n, 1.0f));
    b->bind("y", std::vector<float>(1, 0.0f));
  }
  ExecStats stats = run_plan(s, vec, VectorShape::make(8),
                             default_policy(VectorShape::make(8)));
  scalar_execute(s, ref);
  CHECK(stats.reduce_sequences == 1);
  CHECK(within_tolerance(vec.at("y"), ref.at("y"), ElemKind::F32, 1e-4, 1e-6));
}

TEST_CASE("shuffle-step epilogue matches hreduce across a multi-group run") {
  CodeSeed s = build_spmv_seed(24, ElemKind::I64);
  auto mk = [] {
    Bindings b;
    b.bind("row_ptr", std::vector<int64_t>(24, 2));
    std::vector<int64_t> cols(24);
    for (int i = 0; i < 24; ++i) cols[i] = i;
    b.bind("col_ptr", cols);
    std::vector<int64_t> vals(24);
    for (int i = 0; i < 24; ++i) vals[i] = i - 7;
    b.bind("value", vals);
    b.bind("x", std::vector<int64_t>(24, 3));
    b.bind("y", std::vector<int64_t>(4, 0));
    return b;
  };
  VectorShape shape = VectorShape::make(8);
  CostModel no_hr = default_policy(shape);
  no_hr.op_cost[static_cast<size_t>(Opcode::HReduce)] = 100.0;
  Bindings b1 = mk(), b2 = mk(), ref = mk();
  ExecStats with_hr = run_plan(s, b1, shape, default_policy(shape));
  ExecStats steps = run_plan(s, b2, shape, no_hr);
  scalar_execute(s, ref);
  CHECK(b1.ints("y") == ref.ints("y"));
  CHECK(b2.ints("y") == ref.ints("y"));
  CHECK(with_hr.ops(Opcode::HReduce) == 1);
  CHECK(steps.ops(Opcode::HReduce) == 0);
  CHECK(steps.ops(Opcode::ReduceStep) == 3);
  CHECK(with_hr.reduce_sequences == steps.reduce_sequences);
}

TEST_CASE("dense all-ones spmv yields the row width in every output") {
  CooMatrix m = gen_dense(2000, 2000);
  for (auto& v : m.values) v = 1.0;
  CodeSeed s = build_spmv_seed(m.nnz());
  Bindings b = spmv_bindings(m);
  b.bind("x", std::vector<double>(2000, 1.0));
  run_plan(s, b, VectorShape::make(8), default_policy(VectorShape::make(8)));
  const auto& y = b.reals("y");
  for (double v : y) CHECK(v == 2000.0);
}

TEST_CASE("threshold zero strictly increases gathers on a dense pattern") {
  CooMatrix m = gen_dense(16, 16);
  CodeSeed s = build_spmv_seed(m.nnz());
  VectorShape shape = VectorShape::make(8);
  CostModel never = default_policy(shape);
  never.gather_threshold = 0;
  Bindings b1 = spmv_bindings(m);
  Bindings b2 = spmv_bindings(m);
  ExecStats def = run_plan(s, b1, shape, default_policy(shape));
  ExecStats none = run_plan(s, b2, shape, never);
  CHECK(def.ops(Opcode::Gather) == 0);
  CHECK(none.ops(Opcode::Gather) > def.ops(Opcode::Gather));
  CHECK(b1.reals("y") == b2.reals("y"));  // policy never changes results
}

TEST_CASE("stats json emission carries the opcode histogram") {
  CooMatrix m = gen_dense(4, 8);
  CodeSeed s = build_spmv_seed(m.nnz());
  Bindings b = spmv_bindings(m);
  ExecStats stats = run_plan(s, b, VectorShape::make(8), default_policy(VectorShape::make(8)));
  std::string js = stats_to_json(stats);
  CHECK(js.find("\"VLOAD\"") != std::string::npos);
  CHECK(js.find("reduce_sequences") != std::string::npos);
}
