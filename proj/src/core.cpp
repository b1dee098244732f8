#include "ivex/core.hpp"

#include <cstdio>

namespace ivex {

int64_t checked_add(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_add_overflow(a, b, &r))
    throw ExecError("integer overflow in add");
  return r;
}

int64_t checked_sub(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_sub_overflow(a, b, &r))
    throw ExecError("integer overflow in sub");
  return r;
}

int64_t checked_mul(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw ExecError("integer overflow in mul");
  return r;
}

int64_t checked_div(int64_t a, int64_t b) {
  if (b == 0) throw ExecError("integer division by zero");
  if (a == INT64_MIN && b == -1) throw ExecError("integer overflow in div");
  return a / b;
}

size_t buffer_len(const Buffer& b) {
  return std::visit([](const auto& v) { return v.size(); }, b);
}

void Bindings::bind(const std::string& name, Buffer buf) {
  size_t bytes = std::visit(
      [](const auto& v) {
        using T = typename std::decay_t<decltype(v)>::value_type;
        return v.size() * sizeof(T);
      },
      buf);
  auto it = index_.find(name);
  if (it != index_.end()) {
    // Rebinding keeps the original virtual base when the footprint fits.
    Entry& e = entries_[it->second];
    e.buf = std::move(buf);
    return;
  }
  Entry e;
  e.name = name;
  e.buf = std::move(buf);
  e.vbase = next_vbase_;
  next_vbase_ += (bytes + 63) / 64 * 64 + 64;
  index_.emplace(name, entries_.size());
  entries_.push_back(std::move(e));
}

Bindings::Entry& Bindings::entry(const std::string& name) {
  auto it = index_.find(name);
  if (it == index_.end()) throw ExecError("unbound array '" + name + "'");
  return entries_[it->second];
}

const Bindings::Entry& Bindings::entry(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw ExecError("unbound array '" + name + "'");
  return entries_[it->second];
}

Buffer& Bindings::at(const std::string& name) { return entry(name).buf; }
const Buffer& Bindings::at(const std::string& name) const { return entry(name).buf; }
uint64_t Bindings::vbase(const std::string& name) const { return entry(name).vbase; }

template <class T>
static std::vector<T>& typed(Buffer& b, const std::string& name, const char* want) {
  auto* p = std::get_if<std::vector<T>>(&b);
  if (!p) throw ExecError("array '" + name + "' is not bound as " + want);
  return *p;
}

std::vector<int64_t>& Bindings::ints(const std::string& name) {
  return typed<int64_t>(entry(name).buf, name, "integer");
}
std::vector<double>& Bindings::reals(const std::string& name) {
  return typed<double>(entry(name).buf, name, "f64");
}
std::vector<float>& Bindings::reals32(const std::string& name) {
  return typed<float>(entry(name).buf, name, "f32");
}
const std::vector<int64_t>& Bindings::ints(const std::string& name) const {
  return const_cast<Bindings*>(this)->ints(name);
}
const std::vector<double>& Bindings::reals(const std::string& name) const {
  return const_cast<Bindings*>(this)->reals(name);
}
const std::vector<float>& Bindings::reals32(const std::string& name) const {
  return const_cast<Bindings*>(this)->reals32(name);
}

void Fnv1a::feed(const void* data, size_t n) {
  const auto* p = static_cast<const uint8_t*>(data);
  for (size_t i = 0; i < n; ++i) {
    state ^= p[i];
    state *= 1099511628211ull;
  }
}

std::string hex64(uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace ivex
