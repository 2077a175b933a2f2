#pragma once

#include "podles/qnum.hpp"

#include <cstddef>
#include <vector>

namespace podles {

/// Copy label of the two summands of H; doubles as the grading eigenvalue.
enum class Sign : int { plus = +1, minus = -1 };

constexpr double sign_value(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }

struct BasisIndex {
  Sign sign;
  HalfInt l;
  HalfInt m;
  friend constexpr bool operator==(const BasisIndex&, const BasisIndex&) = default;
};

/// The truncated space  H(l_max) = (V_{1/2} + V_{3/2} + ... + V_{l_max}) x {+,-}.
///
/// The basis order is frozen so matrices and reports are stable across runs:
/// the whole sign=+ copy first (levels by ascending l, each level by
/// ascending m), then the sign=- copy in the same order.
class HilbertSpec {
 public:
  explicit HilbertSpec(HalfInt l_max);

  HalfInt l_max() const { return l_max_; }
  int level_count() const { return (l_max_.twice + 1) / 2; }
  std::size_t half_dim() const;
  std::size_t dim() const { return 2 * half_dim(); }

  std::size_t level_size(HalfInt l) const;    // 2l + 1
  std::size_t level_offset(HalfInt l) const;  // within one copy
  std::vector<HalfInt> levels() const;
  bool contains_level(HalfInt l) const;
  bool contains(const BasisIndex& idx) const;

  friend bool operator==(const HilbertSpec&, const HilbertSpec&) = default;

 private:
  HalfInt l_max_;
};

/// Position of a basis vector in the frozen order; bijective onto [0, dim).
std::size_t ordinal(const HilbertSpec& spec, const BasisIndex& idx);

/// Inverse of ordinal().
BasisIndex basis_at(const HilbertSpec& spec, std::size_t ord);

}  // namespace podles
