#include "podles/hilbert.hpp"

#include <cmath>
#include <stdexcept>

namespace podles {

HilbertSpec::HilbertSpec(HalfInt l_max) : l_max_(l_max) {
  if (!is_level_label(l_max))
    throw std::invalid_argument("l_max must be a positive half-odd integer, got " +
                                to_string(l_max));
}

std::size_t HilbertSpec::half_dim() const {
  // sum of (2l+1) over l = 1/2 .. l_max is K(K+1) with K = l_max + 1/2
  const std::size_t k = static_cast<std::size_t>(level_count());
  return k * (k + 1);
}

std::size_t HilbertSpec::level_size(HalfInt l) const {
  return static_cast<std::size_t>(l.twice + 1);
}

std::size_t HilbertSpec::level_offset(HalfInt l) const {
  const std::size_t k = static_cast<std::size_t>((l.twice + 1) / 2);
  return k * (k - 1);
}

std::vector<HalfInt> HilbertSpec::levels() const {
  std::vector<HalfInt> out;
  out.reserve(static_cast<std::size_t>(level_count()));
  for (int t = 1; t <= l_max_.twice; t += 2) out.push_back(half_int(t));
  return out;
}

bool HilbertSpec::contains_level(HalfInt l) const {
  return is_level_label(l) && l.twice <= l_max_.twice;
}

bool HilbertSpec::contains(const BasisIndex& idx) const {
  return contains_level(idx.l) && valid_pair(idx.l, idx.m);
}

std::size_t ordinal(const HilbertSpec& spec, const BasisIndex& idx) {
  if (!spec.contains(idx))
    throw std::out_of_range("basis index (" + to_string(idx.l) + "," + to_string(idx.m) +
                            ") not in H(l_max=" + to_string(spec.l_max()) + ")");
  const std::size_t copy = idx.sign == Sign::plus ? 0 : spec.half_dim();
  const std::size_t within = static_cast<std::size_t>((idx.m.twice + idx.l.twice) / 2);
  return copy + spec.level_offset(idx.l) + within;
}

BasisIndex basis_at(const HilbertSpec& spec, std::size_t ord) {
  if (ord >= spec.dim()) throw std::out_of_range("ordinal out of range");
  const std::size_t half = spec.half_dim();
  const Sign sign = ord < half ? Sign::plus : Sign::minus;
  std::size_t r = ord % half;
  // find k with k(k-1) <= r < k(k+1)
  std::size_t k = static_cast<std::size_t>((1.0 + std::sqrt(1.0 + 4.0 * static_cast<double>(r))) / 2.0);
  while (k * (k - 1) > r) --k;
  while (k * (k + 1) <= r) ++k;
  const HalfInt l = half_int(static_cast<int>(2 * k - 1));
  const std::size_t within = r - k * (k - 1);
  const HalfInt m = half_int(static_cast<int>(2 * within) - l.twice);
  return BasisIndex{sign, l, m};
}

}  // namespace podles
