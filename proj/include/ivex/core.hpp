#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace ivex {

// Element kinds carried by arrays and expression values. Index is a 64-bit
// signed integer used for addressing; I64 is 64-bit integer payload data.
enum class ElemKind : uint8_t { Index, I64, F64, F32 };

inline const char* to_string(ElemKind k) {
  switch (k) {
    case ElemKind::Index: return "index";
    case ElemKind::I64: return "i64";
    case ElemKind::F64: return "f64";
    case ElemKind::F32: return "f32";
  }
  return "?";
}

inline size_t elem_bytes(ElemKind k) {
  return k == ElemKind::F32 ? 4 : 8;
}

inline bool is_integer(ElemKind k) {
  return k == ElemKind::Index || k == ElemKind::I64;
}

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or out-of-spec input data (parsers, CLI dataset specs).
struct InputError : Error {
  explicit InputError(const std::string& msg) : Error(msg) {}
};

// Runtime failure during scalar or vector execution (range, overflow, schema).
struct ExecError : Error {
  explicit ExecError(const std::string& msg) : Error(msg) {}
};

int64_t checked_add(int64_t a, int64_t b);
int64_t checked_sub(int64_t a, int64_t b);
int64_t checked_mul(int64_t a, int64_t b);
int64_t checked_div(int64_t a, int64_t b);

// One bound array. Index and I64 share int64_t storage; the declared kind
// lives in the seed, not here.
using Buffer = std::variant<std::vector<int64_t>, std::vector<double>, std::vector<float>>;

size_t buffer_len(const Buffer& b);

// Named buffers plus a deterministic virtual address per buffer so the VM can
// account distinct 64-byte cache lines. Addresses are assigned in insertion
// order, 64-byte aligned, and never overlap.
class Bindings {
 public:
  void bind(const std::string& name, Buffer buf);

  bool has(const std::string& name) const { return index_.count(name) != 0; }
  Buffer& at(const std::string& name);
  const Buffer& at(const std::string& name) const;
  uint64_t vbase(const std::string& name) const;

  std::vector<int64_t>& ints(const std::string& name);
  std::vector<double>& reals(const std::string& name);
  std::vector<float>& reals32(const std::string& name);
  const std::vector<int64_t>& ints(const std::string& name) const;
  const std::vector<double>& reals(const std::string& name) const;
  const std::vector<float>& reals32(const std::string& name) const;

  size_t size() const { return entries_.size(); }
  const std::string& name_at(size_t i) const { return entries_[i].name; }
  const Buffer& buffer_at(size_t i) const { return entries_[i].buf; }
  Buffer& buffer_at(size_t i) { return entries_[i].buf; }

 private:
  struct Entry {
    std::string name;
    Buffer buf;
    uint64_t vbase = 0;
  };
  Entry& entry(const std::string& name);
  const Entry& entry(const std::string& name) const;

  std::vector<Entry> entries_;
  std::unordered_map<std::string, size_t> index_;
  uint64_t next_vbase_ = 64;
};

// FNV-1a, used for pattern-class hashing and output checksums.
struct Fnv1a {
  uint64_t state = 1469598103934665603ull;
  void feed(const void* data, size_t n);
  void feed_u8(uint8_t v) { feed(&v, 1); }
  void feed_u16(uint16_t v) { feed(&v, 2); }
  void feed_u32(uint32_t v) { feed(&v, 4); }
  void feed_i64(int64_t v) { feed(&v, 8); }
  uint64_t digest() const { return state; }
};

std::string hex64(uint64_t v);

}  // namespace ivex
