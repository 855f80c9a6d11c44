#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace invh {

/// A machine value. Only the low `Width::bits()` bits are ever set.
using Value = std::uint32_t;

/// Bit width of every program variable. Arithmetic is modulo 2^bits and
/// values are read as unsigned residues in [0, 2^bits).
class Width {
 public:
  static constexpr unsigned kMin = 2;
  static constexpr unsigned kMax = 16;

  constexpr Width() = default;
  explicit Width(unsigned bits) : bits_(bits) {
    if (bits < kMin || bits > kMax) {
      throw std::invalid_argument("width must be in [2, 16], got " +
                                  std::to_string(bits));
    }
  }

  constexpr unsigned bits() const { return bits_; }
  constexpr std::int64_t modulus() const { return std::int64_t{1} << bits_; }
  constexpr Value max_value() const { return static_cast<Value>(modulus() - 1); }

  constexpr Value wrap(std::int64_t v) const {
    const std::int64_t m = modulus();
    std::int64_t r = v % m;
    if (r < 0) r += m;
    return static_cast<Value>(r);
  }

  /// Number of distinct states over `vars` variables, saturating at 2^63.
  std::uint64_t state_count(std::size_t vars) const {
    const std::uint64_t total_bits = std::uint64_t{bits_} * vars;
    if (total_bits >= 63) return std::uint64_t{1} << 63;
    return std::uint64_t{1} << total_bits;
  }

  friend constexpr bool operator==(Width, Width) = default;

 private:
  unsigned bits_ = 8;
};

}  // namespace invh

#include <vector>

namespace invh {

/// A total assignment of values to a program's declared variables,
/// indexed by VarId.
using State = std::vector<Value>;

}  // namespace invh
