#pragma once

#include <compare>
#include <complex>
#include <cstdlib>
#include <string>

namespace podles {

using cplx = std::complex<double>;

/// Exact half-integer, stored as its doubled value (l = twice/2).
/// All (l, m) index arithmetic stays in integers; no parity or rounding
/// surprises.
struct HalfInt {
  int twice = 0;

  constexpr double value() const { return 0.5 * twice; }
  constexpr bool is_whole() const { return twice % 2 == 0; }

  friend constexpr auto operator<=>(HalfInt, HalfInt) = default;
  friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return {a.twice + b.twice}; }
  friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return {a.twice - b.twice}; }
  friend constexpr HalfInt operator-(HalfInt a) { return {-a.twice}; }
};

constexpr HalfInt half_int(int twice) { return HalfInt{twice}; }
constexpr HalfInt whole(int n) { return HalfInt{2 * n}; }

/// Level labels l of the spaces V_l: positive half-odd integers 1/2, 3/2, ...
constexpr bool is_level_label(HalfInt l) { return l.twice >= 1 && l.twice % 2 != 0; }

/// (l, m) pairing: |m| <= l and m = l (mod 1).
constexpr bool valid_pair(HalfInt l, HalfInt m) {
  return std::abs(m.twice) <= l.twice && (l.twice - m.twice) % 2 == 0;
}

/// "3", "-1/2", "21/2", ...
std::string to_string(HalfInt h);

/// Parses "21/2", "10.5" or "3"; throws std::invalid_argument on junk.
HalfInt parse_half_int(const std::string& text);

/// Deformation parameter. 0 < q < 1 for everything decay-based; q = 1 is
/// admitted only so q-numbers can be evaluated in the limit.
struct QParam {
  double q = 0.5;
};

/// q-number [n] = (q^n - q^{-n}) / (q - q^{-1}); equals n at q = 1.
double q_number(int n, QParam qp);

/// q^e with a half-integer exponent.
double q_pow(QParam qp, HalfInt e);

/// i^n, exact ({1, i, -1, -i}).
cplx i_pow(int n);

}  // namespace podles
