#pragma once

#include "podles/spectral.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace podles {

/// Finite-truncation discipline: a check whose operator words have total
/// generator length w is asserted on the compression to levels
/// l <= l_max - w * margin (truncation error of a length-w product lives in
/// the top w-1 levels).
struct CompressionRule {
  int margin = 1;
  /// Throws std::invalid_argument when nothing remains.
  HalfInt compressed_l_max(const HilbertSpec& spec, int word_length) const;
};

struct CheckItem {
  std::string id;
  double value = 0.0;
  double threshold = 0.0;
  std::string comparator;  // "<", "<=", ">=", "==", "info"
  bool pass = false;
  std::string note;
  std::optional<DecayFit> fit;
  std::optional<int> band;  // band index of the reported fit, in whole levels
};

struct VerificationReport {
  std::string suite;
  double q = 0.0;
  HalfInt l_max{1};
  int margin = 1;
  std::string convention_id;
  std::string profile;
  std::uint64_t seed = 0;
  bool pass = false;
  std::vector<CheckItem> items;
  std::vector<std::pair<std::string, std::string>> info;

  void finalize();  // pass = all items pass
};

/// Membership test for the compact ideal generated by the q^l diagonal:
/// worst per-band fitted rate at most rate_margin * ln q with a clean fit.
struct KqCriterion {
  double rate_margin = 0.9;
  double max_log_residual = 0.5;
  double floor = 1e-13;
};

/// The three generator letters and the nine ordered pairs.
std::span<const char> generator_letters();

/// Seeded random words over {a, a*, b} of length 1..3; engine-stable across
/// platforms (raw mt19937_64 draws, no distribution adapters).
std::vector<std::pair<Word, Word>> random_word_pairs(int count, std::uint64_t seed);

// --- suites ---

/// Residual norms of the four defining relations on the compression.
VerificationReport check_relations(const SpectralData& data, const CompressionRule& rule = {});

/// Covariance identity residual for every (symmetry generator, algebra
/// generator) pair on the compression.
VerificationReport check_equivariance(const SpectralData& data, const CompressionRule& rule = {});

/// J^2 = -1, gamma J = -J gamma, D gamma = -gamma D, J D J^{-1} = D,
/// [D, rho(h)] = 0, and the real-structure equivariance through the
/// calibrated antipode.
VerificationReport check_structure_identities(const SpectralData& data);

/// The commutant requirement genuinely fails: some generator pair has
/// ||[pi(x), J pi(y) J^{-1}]|| >= lower_bound, stable across truncations.
VerificationReport check_commutant_failure(QParam q, const BuildOptions& options = {},
                                           std::span<const HalfInt> l_maxes = {},
                                           const CompressionRule& rule = {},
                                           double lower_bound = 1e-3,
                                           double stability_tol = 1e-6);

/// [pi(x), J pi(y) J^{-1}] decays like q^l: per-band block-norm fits for all
/// nine generator pairs plus optional seeded random word pairs.
VerificationReport check_commutant_mod_kq(const SpectralData& data,
                                          const CompressionRule& rule = {},
                                          const KqCriterion& criterion = {},
                                          int random_words = 0, std::uint64_t seed = 1);

/// Same decay test for [J pi(x) J^{-1}, [D, pi(y)]].
VerificationReport check_first_order_mod_kq(const SpectralData& data,
                                            const CompressionRule& rule = {},
                                            const KqCriterion& criterion = {},
                                            int random_words = 0, std::uint64_t seed = 1);

/// ||[D, pi(x)]|| saturates as the truncation grows.
VerificationReport check_bounded_commutators(QParam q, const BuildOptions& options = {},
                                             std::span<const HalfInt> l_maxes = {},
                                             double saturation_tol = 1e-6);

/// Spectrum of the default-shape operator: +-(l+1/2) with multiplicities
/// 2(2l+1), counting-function growth exponent 2, vanishing resolvent proxy.
VerificationReport check_spectrum_and_dimension(const std::string& profile_name = "default",
                                                int lambda_max = 200,
                                                HalfInt crosscheck_l_max = half_int(3));

/// Shape table: every affine-in-(l+1/2) profile passes the first-order decay
/// and boundedness checks, every violator fails at least one.
VerificationReport uniqueness_scan(QParam q, HalfInt l_max,
                                   std::span<const std::string> profile_names = {},
                                   const CompressionRule& rule = {},
                                   const KqCriterion& criterion = {});

/// The trio of truncation sizes the multi-size suites are stated over.
std::vector<HalfInt> default_l_max_trio();

}  // namespace podles
