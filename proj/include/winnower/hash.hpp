#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace winnower {

// 64-bit FNV-1a. Fields are length-prefixed so that ("ab","c") and ("a","bc")
// hash differently.
class Fnv1a {
 public:
  void bytes(std::string_view data) {
    for (const char c : data) {
      state_ ^= static_cast<unsigned char>(c);
      state_ *= 0x100000001b3ULL;
    }
  }

  void field(std::string_view data) {
    bytes(std::to_string(data.size()));
    bytes(":");
    bytes(data);
  }

  std::uint64_t value() const { return state_; }

  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(state_));
    return buf;
  }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

}  // namespace winnower
