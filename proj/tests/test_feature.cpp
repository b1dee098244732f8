#include <random>

#include "doctest.h"
#include "ivex/feature.hpp"
#include "ivex/ingest.hpp"
#include "ivex/verify.hpp"
#include "testutil.hpp"

using namespace ivex;
using namespace ivex::testutil;

TEST_CASE("vector shape validation") {
  CHECK(VectorShape::make(8).log2w() == 3);
  CHECK(VectorShape::make(2).log2w() == 1);
  CHECK(VectorShape::make(16).log2w() == 4);
  CHECK_THROWS_AS(VectorShape::make(6), InputError);
  CHECK_THROWS_AS(VectorShape::make(1), InputError);
  CHECK_THROWS_AS(VectorShape::make(32), InputError);
}

TEST_CASE("chunking full and tail groups") {
  auto full = chunk_iterations(16, VectorShape::make(8));
  REQUIRE(full.size() == 2);
  CHECK(full[0].lanes == 8);
  CHECK(full[1].tail_mask == 0xff);

  auto tail = chunk_iterations(10, VectorShape::make(8));
  REQUIRE(tail.size() == 2);
  CHECK(tail[0].lanes == 8);
  CHECK(tail[1].lanes == 2);
  CHECK(tail[1].tail_mask == 0x03);

  CHECK(chunk_iterations(0, VectorShape::make(8)).empty());
}

TEST_CASE("gather feature reproduces the two-window worked example") {
  // indices [0,4,5,1] over A..H: two vloads, shared perm, one select mask.
  std::vector<int64_t> idx{0, 4, 5, 1};
  GatherFeature g = gather_feature(idx, 0xf, 8, VectorShape::make(4));
  CHECK(g.flag == 2);
  CHECK(g.bases == std::vector<int64_t>{0, 4});
  CHECK(g.perm[0] == 0);
  CHECK(g.perm[1] == 0);
  CHECK(g.perm[2] == 1);
  CHECK(g.perm[3] == 1);
  REQUIRE(g.masks.size() == 1);
  CHECK(g.masks[0] == 0b0110);
}

TEST_CASE("gather feature single distinct index") {
  std::vector<int64_t> idx{3, 3, 3, 3};
  GatherFeature g = gather_feature(idx, 0xf, 8, VectorShape::make(4));
  CHECK(g.flag == 1);
  CHECK(g.bases == std::vector<int64_t>{3});
  for (int l = 0; l < 4; ++l) CHECK(g.perm[l] == 0);
}

TEST_CASE("gather feature clamps bases near the array tail") {
  std::vector<int64_t> idx{6, 7, 6, 7};
  GatherFeature g = gather_feature(idx, 0xf, 8, VectorShape::make(4));
  CHECK(g.flag == 1);
  CHECK(g.bases == std::vector<int64_t>{4});  // 6 clamped to len-W
  CHECK(g.perm[0] == 2);
  CHECK(g.perm[1] == 3);
}

TEST_CASE("gather feature worst case needs W windows") {
  std::vector<int64_t> idx{0, 5, 10, 15};
  GatherFeature g = gather_feature(idx, 0xf, 16, VectorShape::make(4));
  CHECK(g.flag == 4);
  CHECK(g.flag == oracle_min_cover(idx, 4));
}

TEST_CASE("gather feature degenerates when the array is shorter than W") {
  std::vector<int64_t> idx{0, 1, 2, 0};
  GatherFeature g = gather_feature(idx, 0xf, 3, VectorShape::make(4));
  CHECK(g.degenerate(4));
  CHECK(g.flag == irreplaceable_flag(4));
  CHECK(g.raw_indices == std::vector<int64_t>{0, 1, 2, 0});
}

TEST_CASE("gather feature rejects out-of-range targets") {
  std::vector<int64_t> idx{0, 9, 0, 0};
  CHECK_THROWS_AS(gather_feature(idx, 0xf, 8, VectorShape::make(4)), ExecError);
}

TEST_CASE("gather flag matches the exhaustive cover oracle") {
  std::mt19937_64 rng(7);
  for (int w : {4, 8}) {
    VectorShape shape = VectorShape::make(w);
    for (int trial = 0; trial < 2000; ++trial) {
      int64_t len = 32;
      std::vector<int64_t> idx(w);
      for (auto& v : idx) v = draw(rng, len);
      GatherFeature g = gather_feature(idx, full_mask(w), len, shape);
      CHECK(g.flag == oracle_min_cover(idx, w));
    }
  }
}

TEST_CASE("reconstruction reproduces the active gather targets") {
  std::mt19937_64 rng(11);
  VectorShape shape = VectorShape::make(8);
  for (int trial = 0; trial < 500; ++trial) {
    int64_t len = 24 + draw(rng, 40);
    int active = 1 + static_cast<int>(draw(rng, 8));
    LaneMask mask = static_cast<LaneMask>((1u << active) - 1);
    std::vector<int64_t> idx(8, 0);
    for (int l = 0; l < active; ++l) idx[l] = draw(rng, len);
    GatherFeature g = gather_feature(idx, mask, len, shape);
    auto rec = reconstruct_indices(g, 8);
    for (int l = 0; l < active; ++l) CHECK(rec[l] == idx[l]);
  }
}

TEST_CASE("reduction feature on spec examples") {
  VectorShape w4 = VectorShape::make(4);

  std::vector<int64_t> distinct{1, 2, 3, 4};
  ReductionFeature a = reduction_feature(distinct, 0xf, w4);
  CHECK(a.flag == 0);
  CHECK(a.steps.empty());
  CHECK(a.distinct_addrs == 4);
  CHECK(a.rep_mask == 0xf);
  CHECK(!a.use_hreduce);

  std::vector<int64_t> same{5, 5, 5, 5};
  ReductionFeature b = reduction_feature(same, 0xf, w4);
  CHECK(b.flag == 2);
  CHECK(b.use_hreduce);
  CHECK(b.rep_mask == 0x1);
  auto folded = apply_schedule(b, {1, 2, 3, 4}, BinOpKind::Add, 4);
  CHECK(folded[0] == 10);

  std::vector<int64_t> pairs{7, 7, 2, 2};
  ReductionFeature c = reduction_feature(pairs, 0xf, w4);
  CHECK(c.flag == 1);
  CHECK(c.rep_mask == 0b0101);  // lanes 0 and 2
  auto f2 = apply_schedule(c, {1, 2, 3, 4}, BinOpKind::Add, 4);
  CHECK(f2[0] == 3);
  CHECK(f2[2] == 7);
}

TEST_CASE("reduction flag equals ceil(log2(max multiplicity))") {
  std::mt19937_64 rng(13);
  for (int w : {4, 8, 16}) {
    VectorShape shape = VectorShape::make(w);
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<int64_t> addrs(w);
      for (auto& a : addrs) a = draw(rng, 1 + draw(rng, w));
      ReductionFeature f = reduction_feature(addrs, full_mask(w), shape);
      int64_t max_mult = 0;
      for (int64_t a : addrs)
        max_mult = std::max<int64_t>(max_mult, std::count(addrs.begin(), addrs.end(), a));
      CHECK(f.flag == ceil_log2(max_mult));
      CHECK(f.flag <= shape.log2w());
      CHECK(f.flag >= 0);
    }
  }
}

TEST_CASE("reduction schedule matches the fold oracle on integers") {
  std::mt19937_64 rng(17);
  for (int w : {4, 8, 16}) {
    VectorShape shape = VectorShape::make(w);
    for (int trial = 0; trial < 500; ++trial) {
      std::vector<int64_t> addrs(w), vals(w);
      for (auto& a : addrs) a = draw(rng, 5);
      for (auto& v : vals) v = 1 + draw(rng, 3);
      BinOpKind op = trial % 2 ? BinOpKind::Mul : BinOpKind::Add;
      ReductionFeature f = reduction_feature(addrs, full_mask(w), shape);
      auto lanes = apply_schedule(f, vals, op, w);
      auto want = oracle_group_fold(vals, addrs, op);
      for (int l = 0; l < w; ++l) {
        if (!lane_set(f.rep_mask, l)) continue;
        CHECK(lanes[l] == want[addrs[l]]);
      }
    }
  }
}

TEST_CASE("feature table for the 5-nnz spmv instance at W=4") {
  CodeSeed s = build_spmv_seed(5);
  Bindings b;
  b.bind("row_ptr", std::vector<int64_t>{0, 0, 0, 1, 1});
  b.bind("col_ptr", std::vector<int64_t>{0, 1, 2, 3, 4});
  b.bind("value", std::vector<double>{1, 2, 3, 4, 5});
  b.bind("x", std::vector<double>(5, 1.0));
  b.bind("y", std::vector<double>(2, 0.0));
  FeatureTable t = build_feature_table(s, b, VectorShape::make(4));
  REQUIRE(t.columns.size() == 2);
  // group 0 writes rows [0,0,0,1]: multiplicity 3 -> flag 2
  CHECK(t.columns[0].reduction.flag == 2);
  CHECK(t.columns[0].reduction.distinct_addrs == 2);
  // group 1 holds the single remaining iteration -> conflict-free
  CHECK(t.columns[1].active == 1);
  CHECK(t.columns[1].reduction.flag == 0);
  CHECK(t.columns[1].tail_mask == 0x1);
  // two load sites: value (direct) and x (indirect)
  REQUIRE(t.columns[0].sites.size() == 2);
  CHECK(t.columns[0].sites[0].kind == SiteKind::DirectLoad);
  CHECK(t.columns[0].sites[1].kind == SiteKind::IndirectLoad);
}

TEST_CASE("empty trip count gives an empty table") {
  CodeSeed s = build_spmv_seed(0);
  Bindings b;
  b.bind("row_ptr", std::vector<int64_t>{});
  b.bind("col_ptr", std::vector<int64_t>{});
  b.bind("value", std::vector<double>{});
  b.bind("x", std::vector<double>(1, 0.0));
  b.bind("y", std::vector<double>(1, 0.0));
  CHECK(build_feature_table(s, b, VectorShape::make(8)).columns.empty());
}

TEST_CASE("feature extraction errors carry the group id") {
  CodeSeed s = build_spmv_seed(9);
  Bindings b;
  b.bind("row_ptr", std::vector<int64_t>(9, 0));
  std::vector<int64_t> cols(9, 0);
  cols[8] = 99;  // group 1
  b.bind("col_ptr", cols);
  b.bind("value", std::vector<double>(9, 1.0));
  b.bind("x", std::vector<double>(8, 1.0));
  b.bind("y", std::vector<double>(1, 0.0));
  CHECK_THROWS_WITH_AS(build_feature_table(s, b, VectorShape::make(8)),
                       doctest::Contains("group 1"), ExecError);
}

TEST_CASE("dense feature table collapses to one pattern class") {
  CooMatrix m = gen_dense(64, 64);
  CodeSeed s = build_spmv_seed(m.nnz());
  Bindings b = spmv_bindings(m);
  FeatureTable t = build_feature_table(s, b, VectorShape::make(8));
  CHECK(t.columns.size() == 512);
  for (const auto& col : t.columns) {
    CHECK(col.sites[1].cover.flag == 1);  // x loads contiguous
    CHECK(col.reduction.flag == 3);       // whole group shares one row
  }
  DedupResult d = dedup_patterns(t);
  CHECK(d.classes.size() == 1);
  CHECK(d.classes[0].member_count == 512);
  CHECK(d.class_of == std::vector<uint32_t>(512, 0));
}

TEST_CASE("single group dedups to a single class") {
  CooMatrix m = gen_dense(1, 8);
  CodeSeed s = build_spmv_seed(m.nnz());
  Bindings b = spmv_bindings(m);
  FeatureTable t = build_feature_table(s, b, VectorShape::make(8));
  DedupResult d = dedup_patterns(t);
  CHECK(d.classes.size() == 1);
}

TEST_CASE("operand differences do not split classes") {
  // Two rows of 8: same shape, different bases and write addresses.
  CooMatrix m = gen_dense(2, 8);
  CodeSeed s = build_spmv_seed(m.nnz());
  Bindings b = spmv_bindings(m);
  FeatureTable t = build_feature_table(s, b, VectorShape::make(8));
  REQUIRE(t.columns.size() == 2);
  CHECK(t.columns[0].store_addrs[0] != t.columns[1].store_addrs[0]);
  DedupResult d = dedup_patterns(t);
  CHECK(d.classes.size() == 1);
}

TEST_CASE("dedup keeps structurally different columns apart") {
  // Random matrix: verify every member of every class shares the class key.
  CooMatrix m = gen_random(16, 16, 3, 5);
  CodeSeed s = build_spmv_seed(m.nnz());
  Bindings b = spmv_bindings(m);
  FeatureTable t = build_feature_table(s, b, VectorShape::make(4));
  DedupResult d = dedup_patterns(t);
  for (size_t g = 0; g < t.columns.size(); ++g) {
    auto key = canonical_key(t.columns[g], t.layout.combine, t.layout.data_kind, t.shape);
    CHECK(key == d.classes[d.class_of[g]].key);
  }
}

TEST_CASE("same-address runs merge consecutive all-conflict groups") {
  // Dense rows of 16 at W=8: two groups per row, one run per row.
  CooMatrix m = gen_dense(4, 16);
  CodeSeed s = build_spmv_seed(m.nnz());
  Bindings b = spmv_bindings(m);
  FeatureTable t = build_feature_table(s, b, VectorShape::make(8));
  merge_same_address_runs(t);
  REQUIRE(t.columns.size() == 8);
  int heads = 0, ends = 0;
  for (const auto& col : t.columns) {
    heads += col.run_head;
    ends += col.run_end;
  }
  CHECK(heads == 4);
  CHECK(ends == 4);
  CHECK(t.columns[0].run_len == 2);
  CHECK(t.columns[0].run_head);
  CHECK(!t.columns[0].run_end);
  CHECK(!t.columns[1].run_head);
  CHECK(t.columns[1].run_end);
}

TEST_CASE("alternating addresses give only singleton runs") {
  // 8 nnz per row at W=8, rows alternate: every group is its own run.
  CooMatrix m = gen_dense(4, 8);
  CodeSeed s = build_spmv_seed(m.nnz());
  Bindings b = spmv_bindings(m);
  FeatureTable t = build_feature_table(s, b, VectorShape::make(8));
  merge_same_address_runs(t);
  for (const auto& col : t.columns) {
    CHECK(col.run_head);
    CHECK(col.run_end);
    CHECK(col.run_len == 1);
  }
}

TEST_CASE("two consecutive all-conflict groups to one address form a run of 2") {
  CodeSeed s = build_spmv_seed(16);
  Bindings b;
  b.bind("row_ptr", std::vector<int64_t>(16, 9));
  std::vector<int64_t> cols(16);
  for (int i = 0; i < 16; ++i) cols[i] = i;
  b.bind("col_ptr", cols);
  b.bind("value", std::vector<double>(16, 1.0));
  b.bind("x", std::vector<double>(16, 1.0));
  b.bind("y", std::vector<double>(10, 0.0));
  FeatureTable t = build_feature_table(s, b, VectorShape::make(8));
  merge_same_address_runs(t);
  REQUIRE(t.columns.size() == 2);
  CHECK(t.columns[0].run_len == 2);
  CHECK(!t.columns[0].run_end);
  CHECK(t.columns[1].run_end);
}
