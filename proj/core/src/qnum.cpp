#include "podles/qnum.hpp"

#include <cmath>
#include <stdexcept>

namespace podles {

std::string to_string(HalfInt h) {
  if (h.is_whole()) return std::to_string(h.twice / 2);
  return std::to_string(h.twice) + "/2";
}

HalfInt parse_half_int(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty half-integer");
  std::size_t pos = 0;
  if (auto slash = text.find('/'); slash != std::string::npos) {
    if (text.substr(slash + 1) != "2")
      throw std::invalid_argument("half-integer denominator must be 2: " + text);
    const int num = std::stoi(text.substr(0, slash), &pos);
    if (pos != slash) throw std::invalid_argument("bad half-integer: " + text);
    return half_int(num);
  }
  const double v = std::stod(text, &pos);
  if (pos != text.size()) throw std::invalid_argument("bad half-integer: " + text);
  const double tw = 2.0 * v;
  const double rounded = std::round(tw);
  if (std::abs(tw - rounded) > 1e-9)
    throw std::invalid_argument("not a half-integer: " + text);
  return half_int(static_cast<int>(rounded));
}

double q_number(int n, QParam qp) {
  const double q = qp.q;
  if (!(q > 0.0)) throw std::invalid_argument("q must be positive");
  if (q == 1.0) return static_cast<double>(n);
  return (std::pow(q, n) - std::pow(q, -n)) / (q - 1.0 / q);
}

double q_pow(QParam qp, HalfInt e) { return std::pow(qp.q, 0.5 * e.twice); }

cplx i_pow(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace podles
