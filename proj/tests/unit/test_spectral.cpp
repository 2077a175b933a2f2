#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "podles/axioms.hpp"
#include "podles/spectral.hpp"

#include <cmath>

using namespace podles;

namespace {
const QParam kQ{0.5};
}

TEST_CASE("pi matrix elements at the lowest level") {
  HilbertSpec spec{half_int(5)};
  PiHalf plus = build_pi_half(spec, kQ, Sign::plus);
  PiHalf minus = build_pi_half(spec, kQ, Sign::minus);

  const std::size_t up = spec.level_offset(half_int(1)) + 1;    // (1/2, +1/2)
  const std::size_t down = spec.level_offset(half_int(1));      // (1/2, -1/2)

  // <1/2,1/2| pi_+(b) |1/2,1/2> = 1/[3] and <1/2,-1/2| ... |1/2,-1/2> = -q^2/[3]
  const double q3 = q_number(3, kQ);
  CHECK(plus.b(up, up).real() == doctest::Approx(1.0 / q3).epsilon(1e-14));
  CHECK(plus.b(up, up).real() == doctest::Approx(0.19047619047619).epsilon(1e-12));
  CHECK(plus.b(down, down).real() == doctest::Approx(-0.25 / q3).epsilon(1e-14));
  CHECK(plus.b(down, down).real() == doctest::Approx(-0.047619047619048).epsilon(1e-12));

  // the branch sign flips only the level-preserving part
  for (std::size_t r = 0; r < spec.half_dim(); ++r)
    for (std::size_t c = 0; c < spec.half_dim(); ++c) {
      const bool same_level = basis_at(spec, r).l == basis_at(spec, c).l;
      const cplx expect = same_level ? -minus.b(r, c) : minus.b(r, c);
      CHECK(std::abs(plus.b(r, c) - expect) <= 1e-15);
      const cplx expect_a = same_level ? -minus.a(r, c) : minus.a(r, c);
      CHECK(std::abs(plus.a(r, c) - expect_a) <= 1e-15);
    }
}

TEST_CASE("pi structural properties") {
  HilbertSpec spec{half_int(7)};
  PiOperators pi = build_pi(spec, kQ);

  // b is Hermitian and a* is the adjoint, exactly by construction
  Dense bh = pi.b.matrix() - pi.b.adjoint().matrix();
  CHECK(bh.max_abs() == 0.0);
  Dense ad = pi.a_star.matrix() - pi.a.adjoint().matrix();
  CHECK(ad.max_abs() == 0.0);

  // every term of pi(a) raises m by one, pi(b) preserves m
  for (std::size_t r = 0; r < spec.dim(); ++r)
    for (std::size_t c = 0; c < spec.dim(); ++c) {
      if (std::abs(pi.a.at(r, c)) > 0.0)
        CHECK(basis_at(spec, r).m.twice == basis_at(spec, c).m.twice + 2);
      if (std::abs(pi.b.at(r, c)) > 0.0)
        CHECK(basis_at(spec, r).m.twice == basis_at(spec, c).m.twice);
    }
}

TEST_CASE("paper-literal index breaks the relations") {
  HilbertSpec spec{half_int(9)};
  PiOperators lit = build_pi(spec, kQ, true);
  LinearOperator defect = lit.b * lit.a - cplx{kQ.q * kQ.q} * (lit.a * lit.b);
  const double res = op_norm(restrict_levels(defect, half_int(7)));
  CHECK(res > 1e-3);

  // and the literal third term no longer raises m uniformly
  bool mixed_weight = false;
  for (std::size_t r = 0; r < spec.dim() && !mixed_weight; ++r)
    for (std::size_t c = 0; c < spec.dim(); ++c)
      if (std::abs(lit.a.at(r, c)) > 0.0 &&
          basis_at(spec, r).m.twice != basis_at(spec, c).m.twice + 2) {
        mixed_weight = true;
        break;
      }
  CHECK(mixed_weight);
}

TEST_CASE("symmetry operators") {
  HilbertSpec spec{half_int(5)};
  ConventionChoice conv;  // the calibrated default
  RhoOperators rho = build_rho(spec, kQ, conv);

  const std::size_t i0 = ordinal(spec, {Sign::plus, half_int(1), half_int(1)});
  CHECK(rho.k.at(i0, i0).real() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));

  // e lowers: the bottom-weight vector of each level dies; f raises: the top
  for (HalfInt l : spec.levels()) {
    const std::size_t bottom = ordinal(spec, {Sign::plus, l, -l});
    const std::size_t top = ordinal(spec, {Sign::plus, l, l});
    for (std::size_t r = 0; r < spec.dim(); ++r) {
      CHECK(rho.e.at(r, bottom) == cplx{0.0, 0.0});
      CHECK(rho.f.at(r, top) == cplx{0.0, 0.0});
    }
  }

  // k e k^-1 = q^-1 e, k f k^-1 = q f (the module rules force this
  // orientation), [e, f] diagonal with entries [-2m]
  LinearOperator kinv = rho_of(rho, HopfGenerator::k_inv);
  LinearOperator lhs = rho.k * rho.e * kinv - cplx{1.0 / kQ.q} * rho.e;
  CHECK(lhs.matrix().max_abs() <= 1e-13);
  LinearOperator lhsf = rho.k * rho.f * kinv - cplx{kQ.q} * rho.f;
  CHECK(lhsf.matrix().max_abs() <= 1e-13);

  LinearOperator ef = commutator(rho.e, rho.f);
  for (std::size_t i = 0; i < spec.dim(); ++i) {
    const BasisIndex bi = basis_at(spec, i);
    CHECK(ef.at(i, i).real() == doctest::Approx(q_number(-bi.m.twice, kQ)).epsilon(1e-12));
    for (std::size_t j = 0; j < spec.dim(); ++j)
      if (i != j) CHECK(std::abs(ef.at(i, j)) <= 1e-13);
  }
}

TEST_CASE("real structure") {
  HilbertSpec spec{half_int(3)};
  AntilinearOperator j = build_real_structure(spec);
  const Dense& u = j.unitary_part.matrix();

  // J |1/2,1/2>_+ = i |1/2,-1/2>_-  and  J |1/2,-1/2>_+ = -i |1/2,1/2>_-
  CHECK(u(ordinal(spec, {Sign::minus, half_int(1), half_int(-1)}),
          ordinal(spec, {Sign::plus, half_int(1), half_int(1)})) == cplx{0.0, 1.0});
  CHECK(u(ordinal(spec, {Sign::minus, half_int(1), half_int(1)}),
          ordinal(spec, {Sign::plus, half_int(1), half_int(-1)})) == cplx{0.0, -1.0});

  CHECK(is_unitary(u));
  Dense j2 = u * u.conj();
  j2 += Dense::identity(spec.dim());
  CHECK(j2.max_abs() == 0.0);  // J^2 = -1 exactly
}

TEST_CASE("Dirac operator spectrum at l_max = 3/2") {
  HilbertSpec spec{half_int(3)};
  LinearOperator d = build_dirac(spec, dirac_profile("default").fn);
  const std::vector<double> ev = eig_hermitian(d.matrix());
  const std::vector<double> expected{-2, -2, -2, -2, -1, -1, 1, 1, 2, 2, 2, 2};
  REQUIRE(ev.size() == expected.size());
  for (std::size_t i = 0; i < ev.size(); ++i)
    CHECK(ev[i] == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("Dirac structure identities") {
  HilbertSpec spec{half_int(7)};
  SpectralData data = build_spectral_data(spec, kQ, {});

  CHECK(anticommutator(data.dirac, data.gamma).matrix().max_abs() == 0.0);

  LinearOperator jd = conjugate_by(data.real_structure, data.dirac);
  jd -= data.dirac;
  CHECK(jd.matrix().max_abs() == 0.0);

  for (const LinearOperator* r : {&data.rho.k, &data.rho.e, &data.rho.f})
    CHECK(commutator(data.dirac, *r).matrix().max_abs() == 0.0);

  Dense herm = data.dirac.matrix() - data.dirac.adjoint().matrix();
  CHECK(herm.max_abs() == 0.0);
}

TEST_CASE("named profiles") {
  CHECK(dirac_profile("default").fn(half_int(3)) == doctest::Approx(2.0));
  CHECK(dirac_profile("affine5").fn(half_int(1)) == doctest::Approx(5.0));
  CHECK(dirac_profile("affine2p3").fn(half_int(1)) == doctest::Approx(5.0));
  CHECK(dirac_profile("quadratic").fn(half_int(3)) == doctest::Approx(4.0));
  CHECK(dirac_profile("alternating").fn(half_int(1)) == doctest::Approx(-0.5));
  CHECK(dirac_profile("quadratic").affine_in_level == false);
  // inline polynomial in (l + 1/2)
  NamedProfile poly = dirac_profile("3,2");
  CHECK(poly.fn(half_int(3)) == doctest::Approx(3.0 + 2.0 * 2.0));
  CHECK(poly.affine_in_level);
  CHECK_THROWS_AS(dirac_profile("nope"), std::invalid_argument);
}

TEST_CASE("calibration selects exactly one convention") {
  HilbertSpec small{half_int(7)};
  ConventionChoice conv = calibrate_conventions(small, kQ);
  CHECK(conv.id() == "cop[e:k,f:k]|rho[e-lowers,plain]");
  CHECK(conv.direction == LadderDirection::e_lowers);
  CHECK(conv.twist == LadderTwist::none);
  CHECK(conv.calibration_residual < 1e-9);

  // same winner at the other default q values
  CHECK(calibrate_conventions(small, QParam{0.3}).id() == conv.id());
  CHECK(calibrate_conventions(small, QParam{0.8}).id() == conv.id());
}

TEST_CASE("calibration failure modes") {
  HilbertSpec small{half_int(7)};
  CHECK_THROWS_AS(calibrate_conventions(small, kQ, 1e-9, {}), CalibrationError);
  CHECK_THROWS_AS(calibrate_conventions(small, kQ, 1e-30), CalibrationError);
  CHECK_THROWS_AS(calibrate_conventions(small, kQ, 1e30), CalibrationError);

  try {
    calibrate_conventions(small, kQ, 1e-30);
    FAIL("expected no-winner error");
  } catch (const CalibrationError& e) {
    CHECK(e.per_candidate.size() == default_convention_candidates().size());
    CHECK(std::string(e.what()).find("no candidate") != std::string::npos);
  }
  try {
    calibrate_conventions(small, kQ, 1e30);
    FAIL("expected ambiguity error");
  } catch (const CalibrationError& e) {
    CHECK(std::string(e.what()).find("ambiguous") != std::string::npos);
  }
}

TEST_CASE("equivariance defect is tiny for the calibrated convention") {
  HilbertSpec spec{half_int(11)};
  SpectralData data = build_spectral_data(spec, kQ, {});
  CompressionRule rule;
  for (HopfGenerator h : {HopfGenerator::k, HopfGenerator::e, HopfGenerator::f})
    for (char x : {'a', 'A', 'b'}) {
      LinearOperator defect =
          equivariance_defect(spec, kQ, data.pi, data.rho, data.convention, h, x);
      CHECK(op_norm(restrict_levels(defect, rule.compressed_l_max(spec, 1))) <= 1e-10);
    }
}

TEST_CASE("single-branch representation is irreducible") {
  // commutant of {pi_+(a), pi_+(a*), pi_+(b)} on the half space, as the null
  // space of M -> [M, pi(x)]: dimension 1
  HilbertSpec spec{half_int(5)};
  PiHalf pi = build_pi_half(spec, kQ, Sign::plus);
  const std::size_t n = spec.half_dim();

  // normal matrix of the stacked constraints: sum_x C_x^* C_x with
  // (C_x M) = M pi(x) - pi(x) M, unfolded over the n^2 matrix entries
  Dense big(n * n, n * n);
  for (const Dense* x : {&pi.a, &pi.a_star, &pi.b}) {
    // C = X^T (x) 1 - 1 (x) X acting on vec(M), column-major vec
    Dense c(n * n, n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          c(i * n + j, k * n + j) += (*x)(k, i);   // (X^T (x) 1)
          c(i * n + j, i * n + k) -= (*x)(j, k);   // (1 (x) X)
        }
    big += c.adjoint() * c;
  }
  const std::vector<double> ev = eig_hermitian(big, 1e-8);
  const double scale = ev.back();
  int null_dim = 0;
  for (double v : ev)
    if (v <= 1e-10 * scale) ++null_dim;
  CHECK(null_dim == 1);
}

TEST_CASE("spectral data carries a consistent bundle") {
  HilbertSpec spec{half_int(5)};
  BuildOptions opts;
  opts.profile = "affine5";
  SpectralData data = build_spectral_data(spec, kQ, opts);
  CHECK(data.profile_name == "affine5");
  CHECK(data.convention.id() == "cop[e:k,f:k]|rho[e-lowers,plain]");
  CHECK(data.spec.dim() == 24);
  const std::size_t half = spec.half_dim();
  CHECK(data.dirac.at(half, 0).real() == doctest::Approx(5.0));
}
