#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "ivex/core.hpp"
#include "ivex/seed.hpp"

namespace ivex {

// Brute-force oracles, deliberately independent of the feature/plan
// implementations they check. Size caps are hard errors, never silent
// sampling.

// True minimum number of length-W windows covering every index, by
// exhaustive search over base-address subsets (any cover can be normalized
// so each window starts at the smallest index it covers). Caps: at most 16
// distinct indices spanning a range of at most 32.
int oracle_min_cover(std::span<const int64_t> indices, int window);

// Sequential per-address fold in lane order.
std::map<int64_t, int64_t> oracle_group_fold(std::span<const int64_t> values,
                                             std::span<const int64_t> addrs,
                                             BinOpKind op);

struct DiffResult {
  double max_abs = 0.0;
  double max_rel = 0.0;
  ptrdiff_t first_mismatch = -1;  // first bitwise-unequal element, -1 if none
  size_t mismatches = 0;
};

DiffResult diff_outputs(const Buffer& a, const Buffer& b, ElemKind kind);

// Element-wise |a-b| <= max(abs_floor, rel_tol * |b|); integers must match
// exactly.
bool within_tolerance(const Buffer& got, const Buffer& want, ElemKind kind,
                      double rel_tol, double abs_floor);

}  // namespace ivex
