#pragma once

#include <compare>
#include <cstdint>

namespace cooc {

/// Non-negative exact fraction of two counts. A zero denominator reads as 0.
///
/// Probabilities and baseline scores are ratios of document counts; keeping
/// them exact makes every ranking independent of floating-point rounding and
/// invariant under uniform scaling of the counts.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  constexpr Ratio() = default;
  constexpr Ratio(std::uint64_t n, std::uint64_t d) : num(d == 0 ? 0 : n), den(d == 0 ? 1 : d) {}

  [[nodiscard]] constexpr double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  [[nodiscard]] constexpr bool is_zero() const { return num == 0; }

  friend constexpr std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
    using u128 = unsigned __int128;
    return u128(a.num) * b.den <=> u128(b.num) * a.den;
  }
  friend constexpr bool operator==(const Ratio& a, const Ratio& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }
};

}  // namespace cooc
