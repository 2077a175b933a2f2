#pragma once

#include "podles/qnum.hpp"

#include <map>
#include <string>
#include <string_view>

namespace podles {

/// A word in the sphere-algebra generators, one letter per factor:
/// 'a' = a, 'A' = a*, 'b' = b. The empty word is the unit.
using Word = std::string;

/// Finite complex combination of words. Normal-form words have every 'b'
/// to the left of a single run of 'a' or of 'A' (a and a* never coexist).
class AlgebraElement {
 public:
  AlgebraElement() = default;

  static AlgebraElement unit(cplx c = 1.0);
  static AlgebraElement gen_a();
  static AlgebraElement gen_a_star();
  static AlgebraElement gen_b();
  static AlgebraElement from_word(std::string_view letters, cplx coeff = 1.0);

  const std::map<Word, cplx>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Adds c * word, dropping the term if the total coefficient is exactly 0.
  void add_term(const Word& w, cplx c);

  /// Sum of |coefficient| over all terms.
  double coeff_norm() const;
  /// Largest |difference of coefficients| against another element.
  double coeff_distance(const AlgebraElement& o) const;

  AlgebraElement& operator+=(const AlgebraElement& o);
  AlgebraElement& operator-=(const AlgebraElement& o);
  AlgebraElement& operator*=(cplx s);
  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator*(cplx s, AlgebraElement a) { return a *= s; }

 private:
  std::map<Word, cplx> terms_;
};

bool is_normal_word(const Word& w);

/// Rewrites every word into the b-left normal form using
///   ab -> q^{-2} ba,  Ab -> q^{2} bA,  Aa -> 1 - bb,  aA -> 1 - q^{-4} bb.
/// Idempotent.
AlgebraElement normal_form(const AlgebraElement& x, QParam q);

/// Concatenation followed by normal_form.
AlgebraElement multiply(const AlgebraElement& x, const AlgebraElement& y, QParam q);

/// Antilinear antihomomorphism: reverses words, swaps a <-> a*, fixes b,
/// conjugates coefficients; result in normal form.
AlgebraElement star(const AlgebraElement& x, QParam q);

enum class HopfGenerator { k, k_inv, e, f };

/// Coproduct orientation for e (and independently for f):
///   partner_k:      D(h) = h (x) k  +  k^{-1} (x) h
///   partner_k_inv:  D(h) = h (x) k^{-1}  +  k (x) h
enum class CoproductVariant { partner_k, partner_k_inv };

struct HopfConvention {
  CoproductVariant e_coproduct = CoproductVariant::partner_k;
  CoproductVariant f_coproduct = CoproductVariant::partner_k;
  friend bool operator==(const HopfConvention&, const HopfConvention&) = default;
};

/// Action of a symmetry generator on an algebra element. Generators act by
/// the module rules
///   k|>a = q a     e|>a = -(1+q^2) q^{-5/2} b   f|>a  = 0
///   k|>a* = q^-1 a*  e|>a* = 0                  f|>a* = (1+q^2) q^{-3/2} b
///   k|>b = b       e|>b = q^{1/2} a*            f|>b  = -q^{3/2} a
/// extended to words through the coproduct of the given convention; the unit
/// is acted on by the counit.
AlgebraElement module_action(HopfGenerator h, const AlgebraElement& x, QParam q,
                             const HopfConvention& conv);

/// Character b -> 0, a -> lambda, a* -> conj(lambda); requires |lambda| = 1
/// within 1e-12.
cplx classical_point_eval(const AlgebraElement& x, cplx lambda, QParam q);

/// Expression grammar: terms over `a`, `a^*`, `b`, `i`, real literals,
/// `+`, `-`, `*` and parentheses, e.g. "a^* * a + b*b - 1".
AlgebraElement parse_element(std::string_view text);

std::string to_string(const AlgebraElement& x);

}  // namespace podles
