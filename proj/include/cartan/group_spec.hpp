#pragma once

#include <string>
#include <string_view>

namespace cartan {

enum class GroupFamily {
  SpecialLinear,         // SL(n, R),   K = SO(n),  p = symmetric traceless matrices
  IndefiniteOrthogonal,  // SO_0(n, 1), K = SO(n),  p = R^n
};

/// A real form from the supported families, written "sl:n" or "so:n,1".
struct GroupSpec {
  GroupFamily family = GroupFamily::SpecialLinear;
  int n = 2;

  static GroupSpec parse(std::string_view text);
  [[nodiscard]] std::string str() const;

  /// Size of the matrices realizing K = SO(n).
  [[nodiscard]] int k_size() const noexcept { return n; }

  bool operator==(const GroupSpec&) const = default;
};

}  // namespace cartan
