#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "podles/operators.hpp"

#include <array>
#include <cmath>

using namespace podles;

TEST_CASE("dimensions") {
  CHECK(HilbertSpec{half_int(1)}.dim() == 4);
  CHECK(HilbertSpec{half_int(3)}.dim() == 12);   // 2*(2+4)
  CHECK(HilbertSpec{half_int(21)}.dim() == 264);
  CHECK(HilbertSpec{half_int(41)}.dim() == 924);
  CHECK_THROWS_AS(HilbertSpec{whole(2)}, std::invalid_argument);
  CHECK_THROWS_AS(HilbertSpec{half_int(-1)}, std::invalid_argument);
}

TEST_CASE("frozen order starts at (+, 1/2, -1/2)") {
  HilbertSpec spec{half_int(1)};
  CHECK(ordinal(spec, {Sign::plus, half_int(1), half_int(-1)}) == 0);
  CHECK(ordinal(spec, {Sign::plus, half_int(1), half_int(1)}) == 1);
  CHECK(ordinal(spec, {Sign::minus, half_int(1), half_int(-1)}) == 2);
  CHECK(ordinal(spec, {Sign::minus, half_int(1), half_int(1)}) == 3);
}

TEST_CASE("ordinal round trip over the whole basis") {
  HilbertSpec spec{half_int(41)};
  for (std::size_t o = 0; o < spec.dim(); ++o) {
    const BasisIndex bi = basis_at(spec, o);
    CHECK(spec.contains(bi));
    CHECK(ordinal(spec, bi) == o);
  }
  CHECK_THROWS_AS(basis_at(spec, spec.dim()), std::out_of_range);
  CHECK_THROWS_AS(ordinal(spec, {Sign::plus, half_int(43), half_int(1)}), std::out_of_range);
  CHECK_THROWS_AS(ordinal(spec, {Sign::plus, half_int(3), half_int(0)}), std::out_of_range);
}

TEST_CASE("grading is the copy sign") {
  HilbertSpec spec{half_int(5)};
  LinearOperator g = grading(spec);
  CHECK(g.at(ordinal(spec, {Sign::plus, half_int(1), half_int(1)}),
             ordinal(spec, {Sign::plus, half_int(1), half_int(1)})) == cplx{1.0, 0.0});
  CHECK(g.at(ordinal(spec, {Sign::minus, half_int(1), half_int(1)}),
             ordinal(spec, {Sign::minus, half_int(1), half_int(1)})) == cplx{-1.0, 0.0});

  // gamma^2 = 1 and gamma = gamma* exactly
  LinearOperator g2 = g * g;
  g2 -= LinearOperator::identity(spec);
  CHECK(g2.matrix().max_abs() == 0.0);
  Dense diff = g.matrix() - g.adjoint().matrix();
  CHECK(diff.max_abs() == 0.0);

  cplx tr{0.0, 0.0};
  for (std::size_t i = 0; i < spec.dim(); ++i) tr += g.at(i, i);
  CHECK(tr == cplx{0.0, 0.0});
}

TEST_CASE("level projectors") {
  HilbertSpec spec{half_int(3)};
  const auto levels = spec.levels();

  LinearOperator all = level_projector(spec, levels);
  all -= LinearOperator::identity(spec);
  CHECK(all.matrix().max_abs() == 0.0);

  LinearOperator none = level_projector(spec, {});
  CHECK(none.matrix().max_abs() == 0.0);

  const std::array<HalfInt, 1> lowest{half_int(1)};
  LinearOperator p = level_projector(spec, lowest);
  double rank = 0;
  for (std::size_t i = 0; i < spec.dim(); ++i) rank += p.at(i, i).real();
  CHECK(rank == 4.0);  // 2*(2*1/2+1)
  LinearOperator idem = p * p - p;
  CHECK(idem.matrix().max_abs() == 0.0);
  Dense herm = p.matrix() - p.adjoint().matrix();
  CHECK(herm.max_abs() == 0.0);

  // disjoint projectors resolve the identity
  LinearOperator sum{spec};
  for (HalfInt l : levels) {
    const std::array<HalfInt, 1> one{l};
    sum += level_projector(spec, one);
  }
  sum -= LinearOperator::identity(spec);
  CHECK(sum.matrix().max_abs() == 0.0);

  const std::array<HalfInt, 1> bad{half_int(5)};
  CHECK_THROWS_AS(level_projector(spec, bad), std::invalid_argument);
}

TEST_CASE("q^l diagonal operator") {
  HilbertSpec spec{half_int(5)};
  const QParam q{0.25};
  LinearOperator lq = lq_operator(spec, q);
  const std::size_t i0 = ordinal(spec, {Sign::plus, half_int(1), half_int(1)});
  CHECK(lq.at(i0, i0).real() == doctest::Approx(std::sqrt(0.25)).epsilon(1e-15));
  const std::size_t i1 = ordinal(spec, {Sign::minus, half_int(3), half_int(-1)});
  CHECK(lq.at(i1, i1).real() == doctest::Approx(0.125).epsilon(1e-15));  // 0.25^{3/2}

  CHECK(op_norm(lq_operator(spec, QParam{0.5})) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}
