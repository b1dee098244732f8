#include "ivex/verify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>

namespace ivex {

int oracle_min_cover(std::span<const int64_t> indices, int window) {
  if (indices.empty()) return 0;
  std::set<int64_t> uniq(indices.begin(), indices.end());
  std::vector<int64_t> pts(uniq.begin(), uniq.end());
  int d = static_cast<int>(pts.size());
  if (d > 16 || pts.back() - pts.front() > 32)
    throw InputError("oracle_min_cover: instance too large for exhaustive search");

  // Candidate bases are the points themselves; enumerate all subsets and
  // keep the smallest one that covers everything.
  int best = d;
  for (uint32_t sub = 1; sub < (1u << d); ++sub) {
    int size = std::popcount(sub);
    if (size >= best) continue;
    bool ok = true;
    for (int p = 0; p < d && ok; ++p) {
      bool covered = false;
      for (int c = 0; c < d && !covered; ++c)
        if ((sub >> c) & 1)
          covered = pts[p] >= pts[c] && pts[p] < pts[c] + window;
      ok = covered;
    }
    if (ok) best = size;
  }
  return best;
}

std::map<int64_t, int64_t> oracle_group_fold(std::span<const int64_t> values,
                                             std::span<const int64_t> addrs,
                                             BinOpKind op) {
  if (values.size() != addrs.size())
    throw InputError("oracle_group_fold: length mismatch");
  std::map<int64_t, int64_t> out;
  for (size_t l = 0; l < values.size(); ++l) {
    auto [it, fresh] = out.emplace(addrs[l], values[l]);
    if (fresh) continue;
    switch (op) {
      case BinOpKind::Add: it->second = checked_add(it->second, values[l]); break;
      case BinOpKind::Mul: it->second = checked_mul(it->second, values[l]); break;
      default: throw InputError("oracle_group_fold: op must be add or mul");
    }
  }
  return out;
}

namespace {

template <class T>
DiffResult diff_typed(const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != b.size()) throw InputError("diff_outputs: length mismatch");
  DiffResult r;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) continue;  // NaN pairs compare unequal and count as mismatch
    if (r.first_mismatch < 0) r.first_mismatch = static_cast<ptrdiff_t>(i);
    ++r.mismatches;
    double da = static_cast<double>(a[i]);
    double db = static_cast<double>(b[i]);
    double abs = std::abs(da - db);
    r.max_abs = std::max(r.max_abs, abs);
    if (db != 0.0) r.max_rel = std::max(r.max_rel, abs / std::abs(db));
    else if (abs > 0.0) r.max_rel = std::max(r.max_rel, std::numeric_limits<double>::infinity());
  }
  return r;
}

}  // namespace

DiffResult diff_outputs(const Buffer& a, const Buffer& b, ElemKind kind) {
  switch (kind) {
    case ElemKind::F64:
      return diff_typed(std::get<std::vector<double>>(a), std::get<std::vector<double>>(b));
    case ElemKind::F32:
      return diff_typed(std::get<std::vector<float>>(a), std::get<std::vector<float>>(b));
    default:
      return diff_typed(std::get<std::vector<int64_t>>(a), std::get<std::vector<int64_t>>(b));
  }
}

namespace {

template <class T>
bool within_typed(const std::vector<T>& got, const std::vector<T>& want, double rel,
                  double floor) {
  if (got.size() != want.size()) return false;
  for (size_t i = 0; i < got.size(); ++i) {
    double g = static_cast<double>(got[i]);
    double w = static_cast<double>(want[i]);
    if (std::isnan(g) || std::isnan(w)) return false;
    double tol = std::max(floor, rel * std::abs(w));
    if (std::abs(g - w) > tol) return false;
  }
  return true;
}

}  // namespace

bool within_tolerance(const Buffer& got, const Buffer& want, ElemKind kind,
                      double rel_tol, double abs_floor) {
  if (is_integer(kind)) {
    const auto& a = std::get<std::vector<int64_t>>(got);
    const auto& b = std::get<std::vector<int64_t>>(want);
    return a == b;
  }
  if (kind == ElemKind::F64)
    return within_typed(std::get<std::vector<double>>(got),
                        std::get<std::vector<double>>(want), rel_tol, abs_floor);
  return within_typed(std::get<std::vector<float>>(got),
                      std::get<std::vector<float>>(want), rel_tol, abs_floor);
}

}  // namespace ivex
