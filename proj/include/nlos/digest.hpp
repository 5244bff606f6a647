#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

namespace nlos {

// FNV-1a 64-bit; used for manifest integrity and determinism checks.
class Digest {
 public:
  void update(const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h_ ^= p[i];
      h_ *= 0x100000001b3ull;
    }
  }

  template <typename T>
  void update_value(const T& v) {
    static_assert(std::is_trivially_copyable_v<T>);
    update(&v, sizeof(T));
  }

  template <typename T>
  void update_vector(const std::vector<T>& v) {
    static_assert(std::is_trivially_copyable_v<T>);
    update_value<std::uint64_t>(v.size());
    if (!v.empty()) update(v.data(), v.size() * sizeof(T));
  }

  void update_string(const std::string& s) {
    update_value<std::uint64_t>(s.size());
    update(s.data(), s.size());
  }

  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 1469598103934665603ull;
};

std::string to_hex(std::uint64_t v);
std::uint64_t digest_file(const std::string& path);

}  // namespace nlos
