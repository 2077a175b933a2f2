#pragma once

#include "podles/algebra.hpp"
#include "podles/operators.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace podles {

/// Direction of the symmetry ladder inside each V_l. The module rules pin
/// this down (only one direction is equivariance-compatible); both are kept
/// in the calibration candidate set so the winner is measured, not assumed.
enum class LadderDirection { e_lowers, e_raises };

/// Optional q^{+-1/2} factor on e (f gets the inverse), preserving the
/// symmetry-algebra relations.
enum class LadderTwist { none, half_up, half_down };

struct ConventionChoice {
  HopfConvention coproduct;
  LadderDirection direction = LadderDirection::e_lowers;
  LadderTwist twist = LadderTwist::none;
  double calibration_residual = 0.0;

  std::string id() const;
  friend bool operator==(const ConventionChoice& a, const ConventionChoice& b) {
    return a.coproduct == b.coproduct && a.direction == b.direction && a.twist == b.twist;
  }
};

/// All candidate conventions the calibration scans (24 of them).
std::vector<ConventionChoice> default_convention_candidates();

struct PiOperators {
  LinearOperator a, a_star, b;
  const LinearOperator& of_letter(char g) const;
};

/// Single-branch representation on one copy (the half space), with the same
/// frozen level-major ordering.
struct PiHalf {
  Dense a, a_star, b;
};

/// The two irreducible equivariant representations. Each column of pi(a) has
/// at most three targets: (l, m+1), (l+1, m+1) and (l-1, m+1); for pi(b):
/// (l, m), (l+1, m), (l-1, m). Terms whose target lies outside the truncation
/// are dropped. `paper_literal_index` switches the third target of pi(a) to
/// the uncorrected (l-1, m) reading, which breaks the defining relations and
/// is kept only as a sentinel.
PiHalf build_pi_half(const HilbertSpec& spec, QParam q, Sign branch,
                     bool paper_literal_index = false);

/// pi = pi_+ (+) pi_- on the full space.
PiOperators build_pi(const HilbertSpec& spec, QParam q, bool paper_literal_index = false);

struct RhoOperators {
  LinearOperator k, e, f;
};

/// Block-diagonal symmetry action, identical on both copies: k = diag(q^m),
/// e and f the ladder operators of the given convention.
RhoOperators build_rho(const HilbertSpec& spec, QParam q, const ConventionChoice& conv);

LinearOperator rho_of(const RhoOperators& rho, HopfGenerator h);

/// Antipode of h realized through rho: S(k) = k^{-1}, S(e) = -k e k^{-1},
/// S(f) = -k f k^{-1}.
LinearOperator rho_of_antipode(const RhoOperators& rho, HopfGenerator h);

/// J |l,m,+-> = i^{2m} |l,-m,-+> composed with complex conjugation.
AntilinearOperator build_real_structure(const HilbertSpec& spec);

using DiracProfile = std::function<double(HalfInt l)>;

struct NamedProfile {
  std::string name;
  DiracProfile fn;
  bool affine_in_level = true;  // rescale + constant of the default shape
};

/// default: l+1/2; affine5: 5(l+1/2); affine2p3: 2(l+1/2)+3;
/// quadratic: (l+1/2)^2; alternating: -(l+1/2) l. A comma list
/// "c0,c1,..." is read as a polynomial in x = l+1/2.
NamedProfile dirac_profile(const std::string& name);
std::vector<std::string> builtin_profile_names();

/// Copy-swapping operator with value profile(l) on each (l, m); Hermitian,
/// anticommutes with the grading.
LinearOperator build_dirac(const HilbertSpec& spec, const DiracProfile& profile);

struct CalibrationError : std::runtime_error {
  explicit CalibrationError(const std::string& msg,
                            std::vector<std::pair<std::string, double>> residuals = {})
      : std::runtime_error(msg), per_candidate(std::move(residuals)) {}
  std::vector<std::pair<std::string, double>> per_candidate;
};

/// Scans the candidate set on a small truncation and returns the unique
/// convention for which (i) the covariance identity holds for every
/// (h, generator) pair and (ii) the real structure is equivariant through
/// the matching antipode. Zero or multiple winners raise CalibrationError.
ConventionChoice calibrate_conventions(const HilbertSpec& small_spec, QParam q,
                                       double tol = 1e-9,
                                       std::vector<ConventionChoice> candidates =
                                           default_convention_candidates());

struct SpectralData {
  HilbertSpec spec;
  QParam q;
  PiOperators pi;
  RhoOperators rho;
  AntilinearOperator real_structure;
  LinearOperator gamma;
  LinearOperator dirac;
  ConventionChoice convention;
  std::string profile_name;
  bool paper_literal_index = false;
};

struct BuildOptions {
  std::string profile = "default";
  bool paper_literal_index = false;
  std::optional<ConventionChoice> convention;  // default: calibrate at min(l_max, 7/2)
  HalfInt calibration_l_max = half_int(7);
  double calibration_tol = 1e-9;
};

SpectralData build_spectral_data(const HilbertSpec& spec, QParam q,
                                 const BuildOptions& options = {});

/// pi applied to an element: sum of coefficient-weighted products of the
/// generator matrices.
LinearOperator pi_of(const PiOperators& pi, const AlgebraElement& x);

/// Defect of the covariance identity rho(h) pi(x) - pi(h_1 |> x) rho(h_2)
/// for a single-generator x, uncompressed.
LinearOperator equivariance_defect(const HilbertSpec& spec, QParam q, const PiOperators& pi,
                                   const RhoOperators& rho, const ConventionChoice& conv,
                                   HopfGenerator h, char x_letter);

/// Residual of rho(h) T = T rho(S h)^* for h in {k, e, f}, with T the
/// antilinear operator whose phases are those of the real structure and whose
/// positive moduli are solved from the candidate's own e-recursion.
double real_structure_equivariance_residual(const HilbertSpec& spec, QParam q,
                                            const RhoOperators& rho,
                                            LadderDirection direction);

}  // namespace podles
