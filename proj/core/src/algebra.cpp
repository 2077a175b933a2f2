#include "podles/algebra.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace podles {

AlgebraElement AlgebraElement::unit(cplx c) {
  AlgebraElement x;
  x.add_term("", c);
  return x;
}
AlgebraElement AlgebraElement::gen_a() { return from_word("a"); }
AlgebraElement AlgebraElement::gen_a_star() { return from_word("A"); }
AlgebraElement AlgebraElement::gen_b() { return from_word("b"); }

AlgebraElement AlgebraElement::from_word(std::string_view letters, cplx coeff) {
  for (char ch : letters)
    if (ch != 'a' && ch != 'A' && ch != 'b')
      throw std::invalid_argument(std::string("bad generator letter '") + ch + "'");
  AlgebraElement x;
  x.add_term(Word(letters), coeff);
  return x;
}

void AlgebraElement::add_term(const Word& w, cplx c) {
  if (c == cplx{0.0, 0.0}) return;
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx{0.0, 0.0}) terms_.erase(it);
  }
}

double AlgebraElement::coeff_norm() const {
  double s = 0.0;
  for (const auto& [w, c] : terms_) s += std::abs(c);
  return s;
}

double AlgebraElement::coeff_distance(const AlgebraElement& o) const {
  double d = 0.0;
  for (const auto& [w, c] : terms_) {
    auto it = o.terms_.find(w);
    d = std::max(d, std::abs(c - (it == o.terms_.end() ? cplx{} : it->second)));
  }
  for (const auto& [w, c] : o.terms_)
    if (!terms_.count(w)) d = std::max(d, std::abs(c));
  return d;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
  for (const auto& [w, c] : o.terms_) add_term(w, c);
  return *this;
}
AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) {
  for (const auto& [w, c] : o.terms_) add_term(w, -c);
  return *this;
}
AlgebraElement& AlgebraElement::operator*=(cplx s) {
  if (s == cplx{0.0, 0.0}) {
    terms_.clear();
    return *this;
  }
  for (auto& [w, c] : terms_) c *= s;
  return *this;
}

bool is_normal_word(const Word& w) {
  // b* (a* | A*) : all b first, then one kind of letter
  std::size_t i = 0;
  while (i < w.size() && w[i] == 'b') ++i;
  if (i == w.size()) return true;
  const char kind = w[i];
  for (; i < w.size(); ++i)
    if (w[i] != kind) return false;
  return true;
}

AlgebraElement normal_form(const AlgebraElement& x, QParam qp) {
  const double q = qp.q;
  const double q2 = q * q;
  AlgebraElement out;
  std::deque<std::pair<Word, cplx>> work(x.terms().begin(), x.terms().end());
  while (!work.empty()) {
    auto [w, c] = work.front();
    work.pop_front();
    if (c == cplx{0.0, 0.0}) continue;

    // leftmost reducible adjacent pair
    std::size_t pos = w.size();
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      const char p = w[i], n = w[i + 1];
      if ((p == 'a' && n == 'b') || (p == 'A' && n == 'b') || (p == 'A' && n == 'a') ||
          (p == 'a' && n == 'A')) {
        pos = i;
        break;
      }
    }
    if (pos == w.size()) {
      out.add_term(w, c);
      continue;
    }

    const Word head = w.substr(0, pos);
    const Word tail = w.substr(pos + 2);
    const char p = w[pos], n = w[pos + 1];
    if (p == 'a' && n == 'b') {
      work.emplace_back(head + "ba" + tail, c / q2);
    } else if (p == 'A' && n == 'b') {
      work.emplace_back(head + "bA" + tail, c * q2);
    } else if (p == 'A' && n == 'a') {
      // a* a = 1 - b^2
      work.emplace_back(head + tail, c);
      work.emplace_back(head + "bb" + tail, -c);
    } else {
      // a a* = 1 - q^{-4} b^2
      work.emplace_back(head + tail, c);
      work.emplace_back(head + "bb" + tail, -c / (q2 * q2));
    }
  }
  return out;
}

AlgebraElement multiply(const AlgebraElement& x, const AlgebraElement& y, QParam q) {
  AlgebraElement prod;
  for (const auto& [wx, cx] : x.terms())
    for (const auto& [wy, cy] : y.terms()) prod.add_term(wx + wy, cx * cy);
  return normal_form(prod, q);
}

AlgebraElement star(const AlgebraElement& x, QParam q) {
  AlgebraElement s;
  for (const auto& [w, c] : x.terms()) {
    Word r(w.rbegin(), w.rend());
    for (char& ch : r) {
      if (ch == 'a') ch = 'A';
      else if (ch == 'A') ch = 'a';
    }
    s.add_term(r, std::conj(c));
  }
  return normal_form(s, q);
}

namespace {

int weight(const Word& w) {
  int wt = 0;
  for (char ch : w) wt += (ch == 'a') ? 1 : (ch == 'A') ? -1 : 0;
  return wt;
}

AlgebraElement act_on_letter(HopfGenerator h, char g, QParam qp) {
  const double q = qp.q;
  AlgebraElement out;
  switch (h) {
    case HopfGenerator::k:
      out.add_term(Word(1, g), g == 'a' ? q : g == 'A' ? 1.0 / q : 1.0);
      return out;
    case HopfGenerator::k_inv:
      out.add_term(Word(1, g), g == 'a' ? 1.0 / q : g == 'A' ? q : 1.0);
      return out;
    case HopfGenerator::e:
      if (g == 'a') out.add_term("b", -(1.0 + q * q) * std::pow(q, -2.5));
      else if (g == 'b') out.add_term("A", std::sqrt(q));
      return out;
    case HopfGenerator::f:
      if (g == 'A') out.add_term("b", (1.0 + q * q) * std::pow(q, -1.5));
      else if (g == 'b') out.add_term("a", -std::pow(q, 1.5));
      return out;
  }
  return out;
}

// action of e or f on one word through the two coproduct legs
AlgebraElement act_word(HopfGenerator h, const Word& w, QParam qp, CoproductVariant variant) {
  AlgebraElement out;
  if (w.empty()) return out;  // counit of e and f is 0
  const double q = qp.q;
  for (std::size_t i = 0; i < w.size(); ++i) {
    // h acts on letter i; the k-leg scales the rest
    const int wt_left = weight(w.substr(0, i));
    const int wt_right = weight(w.substr(i + 1));
    // partner_k: (k^{-1} x .. x k^{-1}) (x) h (x) (k x .. x k) after iterated
    // coproduct; partner_k_inv is the mirror
    const double left_scale =
        variant == CoproductVariant::partner_k ? std::pow(q, -wt_left) : std::pow(q, wt_left);
    const double right_scale =
        variant == CoproductVariant::partner_k ? std::pow(q, wt_right) : std::pow(q, -wt_right);
    AlgebraElement mid = act_on_letter(h, w[i], qp);
    for (const auto& [mw, mc] : mid.terms())
      out.add_term(w.substr(0, i) + mw + w.substr(i + 1), mc * left_scale * right_scale);
  }
  return out;
}

}  // namespace

AlgebraElement module_action(HopfGenerator h, const AlgebraElement& x, QParam qp,
                             const HopfConvention& conv) {
  AlgebraElement out;
  if (h == HopfGenerator::k || h == HopfGenerator::k_inv) {
    const double q = qp.q;
    for (const auto& [w, c] : x.terms()) {
      const int wt = weight(w);
      out.add_term(w, c * std::pow(q, h == HopfGenerator::k ? wt : -wt));
    }
    return normal_form(out, qp);
  }
  const CoproductVariant variant =
      h == HopfGenerator::e ? conv.e_coproduct : conv.f_coproduct;
  for (const auto& [w, c] : x.terms()) {
    AlgebraElement part = act_word(h, w, qp, variant);
    part *= c;
    out += part;
  }
  return normal_form(out, qp);
}

cplx classical_point_eval(const AlgebraElement& x, cplx lambda, QParam q) {
  if (std::abs(std::abs(lambda) - 1.0) > 1e-12)
    throw std::invalid_argument("classical point requires |lambda| = 1");
  AlgebraElement nf = normal_form(x, q);
  cplx val{0.0, 0.0};
  for (const auto& [w, c] : nf.terms()) {
    if (w.find('b') != Word::npos) continue;
    cplx factor{1.0, 0.0};
    for (char ch : w) factor *= (ch == 'a') ? lambda : std::conj(lambda);
    val += c * factor;
  }
  return val;
}

namespace {

// plain concatenation; parsing must not bake any q into coefficients
AlgebraElement concat_product(const AlgebraElement& x, const AlgebraElement& y) {
  AlgebraElement prod;
  for (const auto& [wx, cx] : x.terms())
    for (const auto& [wy, cy] : y.terms()) prod.add_term(wx + wy, cx * cy);
  return prod;
}

struct Parser {
  std::string_view s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("parse error at position " + std::to_string(pos) + ": " + what);
  }

  AlgebraElement parse_expr() {
    AlgebraElement acc = parse_term();
    while (true) {
      skip_ws();
      if (eat('+')) acc += parse_term();
      else if (eat('-')) acc -= parse_term();
      else return acc;
    }
  }

  AlgebraElement parse_term() {
    AlgebraElement acc = parse_factor();
    while (true) {
      skip_ws();
      if (eat('*')) acc = concat_product(acc, parse_factor());
      else return acc;
    }
  }

  AlgebraElement parse_factor() {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end of input");
    const char c = s[pos];
    if (c == '(') {
      ++pos;
      AlgebraElement inner = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (c == '-') {
      ++pos;
      return cplx{-1.0, 0.0} * parse_factor();
    }
    if (c == 'a') {
      ++pos;
      if (pos + 1 < s.size() && s[pos] == '^' && s[pos + 1] == '*') {
        pos += 2;
        return AlgebraElement::gen_a_star();
      }
      return AlgebraElement::gen_a();
    }
    if (c == 'b') {
      ++pos;
      return AlgebraElement::gen_b();
    }
    if (c == 'i') {
      ++pos;
      return AlgebraElement::unit(cplx{0.0, 1.0});
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(std::string(s.substr(pos)), &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      pos += used;
      if (pos < s.size() && s[pos] == 'i') {
        ++pos;
        return AlgebraElement::unit(cplx{0.0, v});
      }
      return AlgebraElement::unit(cplx{v, 0.0});
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

AlgebraElement parse_element(std::string_view text) {
  Parser p{text};
  AlgebraElement out = p.parse_expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return out;
}

std::string to_string(const AlgebraElement& x) {
  if (x.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : x.terms()) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.real() << (c.imag() < 0 ? "" : "+") << c.imag() << "i)";
    if (!w.empty()) {
      os << "*";
      for (char ch : w) os << (ch == 'A' ? std::string("a^*") : std::string(1, ch));
    }
  }
  return os.str();
}

}  // namespace podles
