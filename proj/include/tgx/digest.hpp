#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

namespace tgx {

// FNV-1a over raw bytes; used for stable result digests in reports.
class Digest {
 public:
  void update_bytes(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      state_ ^= p[i];
      state_ *= 0x100000001b3ull;
    }
  }

  template <class T>
  void update(std::span<const T> values) {
    static_assert(std::is_trivially_copyable_v<T>);
    update_bytes(values.data(), values.size() * sizeof(T));
  }

  template <class T>
  void update_value(const T& v) {
    static_assert(std::is_trivially_copyable_v<T>);
    update_bytes(&v, sizeof(v));
  }

  void update_string(const std::string& s) { update_bytes(s.data(), s.size()); }

  std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ull;
};

template <class T>
std::uint64_t digest_of(std::span<const T> values) {
  Digest d;
  d.update(values);
  return d.value();
}

template <class T>
std::uint64_t digest_of(const std::vector<T>& values) {
  return digest_of(std::span<const T>(values));
}

}  // namespace tgx
