#pragma once

#include <cstdint>
#include <cstring>
#include <string_view>

namespace honeycomb {

/// FNV-1a, used for provenance and cache keys (not cryptographic).
class Fnv1a {
 public:
  void add_bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      state_ ^= p[i];
      state_ *= 0x100000001b3ULL;
    }
  }
  void add(std::string_view s) { add_bytes(s.data(), s.size()); }
  void add(double x) {
    if (x == 0.0) x = 0.0;  // fold -0.0
    add_bytes(&x, sizeof x);
  }
  void add(std::int64_t x) { add_bytes(&x, sizeof x); }
  void add(int x) { add(static_cast<std::int64_t>(x)); }
  std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace honeycomb
