#include "podles/axioms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

namespace podles {

namespace {

std::string letter_name(char g) { return g == 'A' ? "a*" : std::string(1, g); }

std::string word_name(const Word& w) {
  std::string s;
  for (char g : w) s += letter_name(g);
  return s;
}

CheckItem residual_item(std::string id, double value, double threshold, std::string cmp = "<") {
  CheckItem it;
  it.id = std::move(id);
  it.value = value;
  it.threshold = threshold;
  it.comparator = std::move(cmp);
  if (it.comparator == "<") it.pass = value < threshold;
  else if (it.comparator == "<=") it.pass = value <= threshold;
  else if (it.comparator == ">=") it.pass = value >= threshold;
  else if (it.comparator == "==") it.pass = value == threshold;
  else it.pass = true;  // info
  return it;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void VerificationReport::finalize() {
  pass = std::all_of(items.begin(), items.end(), [](const CheckItem& i) { return i.pass; });
}

HalfInt CompressionRule::compressed_l_max(const HilbertSpec& spec, int word_length) const {
  const int keep = spec.l_max().twice - 2 * margin * word_length;
  if (keep < 1)
    throw std::invalid_argument("compression leaves no levels: l_max=" +
                                to_string(spec.l_max()) + ", word length " +
                                std::to_string(word_length) + ", margin " +
                                std::to_string(margin));
  return half_int(keep);
}

std::span<const char> generator_letters() {
  static constexpr std::array<char, 3> letters{'a', 'A', 'b'};
  return {letters.data(), letters.size()};
}

std::vector<std::pair<Word, Word>> random_word_pairs(int count, std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  auto word = [&]() {
    const std::size_t len = 1 + static_cast<std::size_t>(eng() % 3);
    Word w;
    for (std::size_t i = 0; i < len; ++i) w += generator_letters()[eng() % 3];
    return w;
  };
  std::vector<std::pair<Word, Word>> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Word x = word();
    Word y = word();
    out.emplace_back(std::move(x), std::move(y));
  }
  return out;
}

std::vector<HalfInt> default_l_max_trio() { return {half_int(21), half_int(31), half_int(41)}; }

namespace {

VerificationReport base_report(std::string suite, const SpectralData& data,
                               const CompressionRule& rule) {
  VerificationReport r;
  r.suite = std::move(suite);
  r.q = data.q.q;
  r.l_max = data.spec.l_max();
  r.margin = rule.margin;
  r.convention_id = data.convention.id();
  r.profile = data.profile_name;
  return r;
}

double compressed_norm(const LinearOperator& op, const CompressionRule& rule, int word_length) {
  return op_norm(restrict_levels(op, rule.compressed_l_max(op.spec(), word_length)));
}

// worst-band decay fit of a (compressed) operator; returns items for rate and
// log-residual, or a single vacuous/below-floor item
void append_kq_items(VerificationReport& rep, const LinearOperator& compressed, double q,
                     const KqCriterion& crit, const std::string& prefix) {
  const double rate_threshold = crit.rate_margin * std::log(q);

  std::map<int, std::vector<DecaySample>> bands;
  for (const LevelBlockNorm& b : block_norms(compressed)) {
    const int band = (b.l_row.twice - b.l_col.twice) / 2;
    const double l_min = 0.5 * std::min(b.l_row.twice, b.l_col.twice);
    bands[band].push_back({l_min, b.norm});
  }

  bool any_above_floor = false;
  std::optional<DecayFit> worst;
  int worst_band = 0;
  for (auto& [band, samples] : bands) {
    for (const auto& s : samples)
      if (s.norm > crit.floor) {
        any_above_floor = true;
        break;
      }
    DecayFit fit;
    try {
      fit = decay_fit(samples, crit.floor);
    } catch (const std::runtime_error&) {
      continue;  // fewer than 3 usable samples in this band
    }
    if (!worst || fit.rate > worst->rate) {
      worst = fit;
      worst_band = band;
    }
  }

  if (!any_above_floor) {
    CheckItem it = residual_item(prefix + ":rate", 0.0, rate_threshold, "info");
    it.note = "below floor";
    rep.items.push_back(std::move(it));
    return;
  }
  if (!worst) {
    CheckItem it = residual_item(prefix + ":rate", 0.0, rate_threshold, "<=");
    it.pass = false;
    it.note = "insufficient samples";
    rep.items.push_back(std::move(it));
    return;
  }

  CheckItem rate = residual_item(prefix + ":rate", worst->rate, rate_threshold, "<=");
  rate.fit = *worst;
  rate.band = worst_band;
  rep.items.push_back(std::move(rate));
  rep.items.push_back(
      residual_item(prefix + ":logres", worst->residual, crit.max_log_residual, "<"));
}

LinearOperator pi_word_op(const PiOperators& pi, const Word& w) {
  LinearOperator out = LinearOperator::identity(pi.a.spec());
  for (char g : w) out = out * pi.of_letter(g);
  return out;
}

}  // namespace

VerificationReport check_relations(const SpectralData& data, const CompressionRule& rule) {
  VerificationReport rep = base_report("relations", data, rule);
  const QParam q = data.q;
  const double q2 = q.q * q.q;
  const LinearOperator& a = data.pi.a;
  const LinearOperator& as = data.pi.a_star;
  const LinearOperator& b = data.pi.b;
  const LinearOperator one = LinearOperator::identity(data.spec);

  const std::array<std::pair<std::string, LinearOperator>, 4> defs{
      std::pair{std::string("ba=q2.ab"), b * a - cplx{q2} * (a * b)},
      std::pair{std::string("a*b=q2.ba*"), as * b - cplx{q2} * (b * as)},
      std::pair{std::string("a*a+b2=1"), as * a + b * b - one},
      std::pair{std::string("q2.aa*+q-2.b2=q2"),
                cplx{q2} * (a * as) + cplx{1.0 / q2} * (b * b) - cplx{q2} * one}};
  for (const auto& [id, defect] : defs)
    rep.items.push_back(residual_item("relation:" + id, compressed_norm(defect, rule, 2), 1e-10));
  rep.finalize();
  return rep;
}

VerificationReport check_equivariance(const SpectralData& data, const CompressionRule& rule) {
  VerificationReport rep = base_report("equivariance", data, rule);
  for (HopfGenerator h : {HopfGenerator::k, HopfGenerator::e, HopfGenerator::f}) {
    const char* hn = h == HopfGenerator::k ? "k" : h == HopfGenerator::e ? "e" : "f";
    for (char x : generator_letters()) {
      LinearOperator defect = equivariance_defect(data.spec, data.q, data.pi, data.rho,
                                                  data.convention, h, x);
      rep.items.push_back(residual_item("eq4:" + std::string(hn) + "," + letter_name(x),
                                        compressed_norm(defect, rule, 1), 1e-9));
    }
  }
  rep.finalize();
  return rep;
}

VerificationReport check_structure_identities(const SpectralData& data) {
  VerificationReport rep = base_report("structure", data, CompressionRule{0});
  const Dense& u = data.real_structure.unitary_part.matrix();
  const std::size_t n = data.spec.dim();

  Dense j2 = u * u.conj();
  j2 += Dense::identity(n);
  rep.items.push_back(residual_item("J2=-1", spectral_norm(j2), 1e-12));

  Dense gj = data.gamma.matrix() * u;
  gj += u * data.gamma.matrix().conj();
  rep.items.push_back(residual_item("gammaJ+Jgamma=0", spectral_norm(gj), 1e-12));

  rep.items.push_back(residual_item("Dgamma+gammaD=0",
                                    op_norm(anticommutator(data.dirac, data.gamma)), 1e-12));
  rep.items.push_back(residual_item(
      "JDJ-1=D", op_norm(conjugate_by(data.real_structure, data.dirac) - data.dirac), 1e-12));

  rep.items.push_back(
      residual_item("[D,rho_k]=0", op_norm(commutator(data.dirac, data.rho.k)), 1e-12));
  rep.items.push_back(
      residual_item("[D,rho_e]=0", op_norm(commutator(data.dirac, data.rho.e)), 1e-12));
  rep.items.push_back(
      residual_item("[D,rho_f]=0", op_norm(commutator(data.dirac, data.rho.f)), 1e-12));

  rep.items.push_back(residual_item(
      "rho(h)T=Trho(Sh)*",
      real_structure_equivariance_residual(data.spec, data.q, data.rho,
                                           data.convention.direction),
      1e-9));
  rep.finalize();
  return rep;
}

VerificationReport check_commutant_failure(QParam q, const BuildOptions& options,
                                           std::span<const HalfInt> l_maxes,
                                           const CompressionRule& rule, double lower_bound,
                                           double stability_tol) {
  std::vector<HalfInt> sizes(l_maxes.begin(), l_maxes.end());
  if (sizes.empty()) sizes = default_l_max_trio();
  std::sort(sizes.begin(), sizes.end());

  BuildOptions opts = options;
  if (!opts.convention)
    opts.convention = calibrate_conventions(
        HilbertSpec{std::min(opts.calibration_l_max, sizes.front())}, q, opts.calibration_tol);

  std::map<std::pair<char, char>, std::vector<double>> norms;
  VerificationReport rep;
  for (HalfInt lm : sizes) {
    SpectralData data = build_spectral_data(HilbertSpec{lm}, q, opts);
    if (lm == sizes.back()) rep = base_report("commutant-failure", data, rule);
    for (char x : generator_letters()) {
      const LinearOperator tx = data.pi.of_letter(x);
      for (char y : generator_letters()) {
        const LinearOperator ty = conjugate_by(data.real_structure, data.pi.of_letter(y));
        norms[{x, y}].push_back(compressed_norm(commutator(tx, ty), rule, 2));
      }
    }
  }

  double max_norm = 0.0;
  std::pair<char, char> max_pair{'a', 'a'};
  for (const auto& [pair, vals] : norms)
    if (vals.back() > max_norm) {
      max_norm = vals.back();
      max_pair = pair;
    }

  for (const auto& [pair, vals] : norms) {
    const std::string id =
        "pair:" + letter_name(pair.first) + "," + letter_name(pair.second);
    const bool is_witness = pair == max_pair;
    CheckItem norm_item = residual_item(id + ":norm", vals.back(), lower_bound,
                                        is_witness ? ">=" : "info");
    if (is_witness) norm_item.note = "witness pair";
    rep.items.push_back(std::move(norm_item));

    double max_step = 0.0;
    for (std::size_t i = 1; i < vals.size(); ++i)
      max_step = std::max(max_step, std::abs(vals[i] - vals[i - 1]));
    rep.items.push_back(residual_item(id + ":stability", max_step, stability_tol, "<="));
  }

  std::string sizes_str;
  for (HalfInt s : sizes) sizes_str += (sizes_str.empty() ? "" : ",") + to_string(s);
  rep.info.emplace_back("l_max_values", sizes_str);
  rep.info.emplace_back("max_pair", letter_name(max_pair.first) + "," + letter_name(max_pair.second));
  rep.info.emplace_back("max_norm", fmt(max_norm));
  rep.finalize();
  return rep;
}

namespace {

VerificationReport mod_kq_common(const char* suite, bool first_order, const SpectralData& data,
                                 const CompressionRule& rule, const KqCriterion& crit,
                                 int random_words, std::uint64_t seed) {
  VerificationReport rep = base_report(suite, data, rule);
  rep.seed = seed;
  if (!(data.q.q < 1.0))
    throw std::invalid_argument(std::string(suite) + " requires q < 1");

  std::map<char, LinearOperator> tilde;
  for (char g : generator_letters())
    tilde.emplace(g, conjugate_by(data.real_structure, data.pi.of_letter(g)));

  auto defect = [&](const LinearOperator& px, const LinearOperator& tpy) {
    return commutator(px, tpy);
  };

  const char* tag = first_order ? "eq8" : "eq6";
  for (char x : generator_letters())
    for (char y : generator_letters()) {
      const std::string prefix =
          std::string(tag) + ":" + letter_name(x) + "," + letter_name(y);
      LinearOperator op = first_order
                              ? commutator(tilde.at(x), commutator(data.dirac, data.pi.of_letter(y)))
                              : defect(data.pi.of_letter(x), tilde.at(y));
      LinearOperator compressed = restrict_levels(op, rule.compressed_l_max(data.spec, 2));
      append_kq_items(rep, compressed, data.q.q, crit, prefix);
    }

  if (random_words > 0) {
    int idx = 0;
    for (const auto& [wx, wy] : random_word_pairs(random_words, seed)) {
      const int wlen = static_cast<int>(wx.size() + wy.size());
      const std::string prefix = std::string(tag) + ":w" + std::to_string(idx++) + ":" +
                                 word_name(wx) + "," + word_name(wy);
      LinearOperator px = pi_word_op(data.pi, wx);
      LinearOperator py = pi_word_op(data.pi, wy);
      LinearOperator op =
          first_order
              ? commutator(conjugate_by(data.real_structure, px), commutator(data.dirac, py))
              : commutator(px, conjugate_by(data.real_structure, py));
      LinearOperator compressed = restrict_levels(op, rule.compressed_l_max(data.spec, wlen));
      append_kq_items(rep, compressed, data.q.q, crit, prefix);
    }
  }
  rep.finalize();
  return rep;
}

}  // namespace

VerificationReport check_commutant_mod_kq(const SpectralData& data, const CompressionRule& rule,
                                          const KqCriterion& criterion, int random_words,
                                          std::uint64_t seed) {
  return mod_kq_common("commutant-mod-kq", false, data, rule, criterion, random_words, seed);
}

VerificationReport check_first_order_mod_kq(const SpectralData& data, const CompressionRule& rule,
                                            const KqCriterion& criterion, int random_words,
                                            std::uint64_t seed) {
  return mod_kq_common("first-order-mod-kq", true, data, rule, criterion, random_words, seed);
}

VerificationReport check_bounded_commutators(QParam q, const BuildOptions& options,
                                             std::span<const HalfInt> l_maxes,
                                             double saturation_tol) {
  std::vector<HalfInt> sizes(l_maxes.begin(), l_maxes.end());
  if (sizes.empty()) sizes = default_l_max_trio();
  std::sort(sizes.begin(), sizes.end());
  if (sizes.size() < 3)
    throw std::invalid_argument("check_bounded_commutators needs at least 3 truncation sizes");

  BuildOptions opts = options;
  if (!opts.convention)
    opts.convention = calibrate_conventions(
        HilbertSpec{std::min(opts.calibration_l_max, sizes.front())}, q, opts.calibration_tol);

  std::map<char, std::vector<double>> norms;
  VerificationReport rep;
  for (HalfInt lm : sizes) {
    SpectralData data = build_spectral_data(HilbertSpec{lm}, q, opts);
    if (lm == sizes.back()) rep = base_report("bounded-commutators", data, CompressionRule{0});
    for (char x : generator_letters())
      norms[x].push_back(op_norm(commutator(data.dirac, data.pi.of_letter(x))));
  }

  for (char x : generator_letters()) {
    const auto& vals = norms[x];
    for (std::size_t i = 0; i < vals.size(); ++i) {
      CheckItem it = residual_item("norm:[D,pi(" + letter_name(x) + ")]@" +
                                       to_string(sizes[i]),
                                   vals[i], 0.0, "info");
      rep.items.push_back(std::move(it));
    }
    double min_step = 0.0;
    for (std::size_t i = 1; i < vals.size(); ++i)
      min_step = std::min(min_step, vals[i] - vals[i - 1]);
    // compressions of a fixed bounded operator: nondecreasing up to roundoff
    rep.items.push_back(
        residual_item("monotone:" + letter_name(x), min_step, -1e-10, ">="));
    rep.items.push_back(residual_item("saturation:" + letter_name(x),
                                      std::abs(vals.back() - vals[vals.size() - 2]),
                                      saturation_tol, "<"));
  }
  std::string sizes_str;
  for (HalfInt s : sizes) sizes_str += (sizes_str.empty() ? "" : ",") + to_string(s);
  rep.info.emplace_back("l_max_values", sizes_str);
  rep.finalize();
  return rep;
}

VerificationReport check_spectrum_and_dimension(const std::string& profile_name, int lambda_max,
                                                HalfInt crosscheck_l_max) {
  NamedProfile prof = dirac_profile(profile_name);
  VerificationReport rep;
  rep.suite = "spectrum";
  rep.l_max = crosscheck_l_max;
  rep.profile = prof.name;

  // (i) eigenvalues of the actual matrix at a small truncation: +-d_l with
  // multiplicity 2l+1 each
  {
    HilbertSpec spec{crosscheck_l_max};
    LinearOperator d = build_dirac(spec, prof.fn);
    std::vector<double> eig = eig_hermitian(d.matrix());
    std::vector<double> expected;
    for (HalfInt l : spec.levels()) {
      const double v = prof.fn(l);
      for (std::size_t i = 0; i < spec.level_size(l); ++i) {
        expected.push_back(-std::abs(v));
        expected.push_back(std::abs(v));
      }
    }
    std::sort(expected.begin(), expected.end());
    double dev = 0.0;
    for (std::size_t i = 0; i < eig.size(); ++i) dev = std::max(dev, std::abs(eig[i] - expected[i]));
    rep.items.push_back(residual_item("dirac-eigenvalues@" + to_string(crosscheck_l_max), dev,
                                      1e-10, "<"));

    if (prof.name == "default") {
      // |D| eigenvalue k has multiplicity 4k
      std::map<long, long> mult;
      for (double v : eig) mult[std::lround(std::abs(v))]++;
      bool ok = true;
      for (const auto& [k, m] : mult) ok = ok && (m == 4 * k);
      CheckItem it = residual_item("multiplicity-4k@" + to_string(crosscheck_l_max),
                                   ok ? 1.0 : 0.0, 1.0, "==");
      rep.items.push_back(std::move(it));
    }
  }

  // (ii) counting function N(Lambda) = sum_{k<=Lambda} 4k = 2 Lambda(Lambda+1)
  {
    const long n10 = 2L * 10 * 11;
    rep.items.push_back(residual_item("counting:N(10)", static_cast<double>(n10), 220.0, "=="));

    // log-log slope over the asymptotic window [20, lambda_max]
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int lam = 20; lam <= lambda_max; ++lam) {
      const double x = std::log(static_cast<double>(lam));
      const double y = std::log(2.0 * lam * (lam + 1.0));
      sx += x; sy += y; sxx += x * x; sxy += x * y;
      ++n;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    rep.items.push_back(residual_item("counting-exponent:low", slope, 1.95, ">="));
    rep.items.push_back(residual_item("counting-exponent:high", slope, 2.05, "<="));
    rep.info.emplace_back("counting_fit_window", "20.." + std::to_string(lambda_max));
    rep.info.emplace_back("counting_exponent", fmt(slope));
  }

  // (iii) resolvent proxy: eigenvalues of (1+D^2)^{-1/2} decrease through the
  // levels and the tail vanishes with the truncation
  {
    const HalfInt big = half_int(41);
    HilbertSpec spec{big};
    double prev = 2.0;
    bool monotone = true;
    double last = 0.0;
    for (HalfInt l : spec.levels()) {
      const double mu = 1.0 / std::sqrt(1.0 + prof.fn(l) * prof.fn(l));
      monotone = monotone && (mu < prev);
      prev = mu;
      last = mu;
    }
    rep.items.push_back(
        residual_item("resolvent-monotone", monotone ? 1.0 : 0.0, 1.0, "=="));
    const double k_top = 0.5 * big.twice + 0.5;
    rep.items.push_back(residual_item("resolvent-tail", last, 1.0 / k_top, "<="));

    HilbertSpec small{crosscheck_l_max};
    LinearOperator d = build_dirac(small, prof.fn);
    LinearOperator d2 = d * d;
    Dense res(small.dim(), small.dim());
    for (std::size_t i = 0; i < small.dim(); ++i)
      res(i, i) = 1.0 / std::sqrt(1.0 + d2.at(i, i).real());
    std::vector<double> eig = eig_hermitian(res);
    std::vector<double> expected;
    for (std::size_t i = 0; i < small.dim(); ++i) {
      const BasisIndex bi = basis_at(small, i);
      expected.push_back(1.0 / std::sqrt(1.0 + prof.fn(bi.l) * prof.fn(bi.l)));
    }
    std::sort(expected.begin(), expected.end());
    double dev = 0.0;
    for (std::size_t i = 0; i < eig.size(); ++i) dev = std::max(dev, std::abs(eig[i] - expected[i]));
    rep.items.push_back(residual_item("resolvent-crosscheck@" + to_string(crosscheck_l_max),
                                      dev, 1e-12, "<"));
  }
  rep.finalize();
  return rep;
}

VerificationReport uniqueness_scan(QParam q, HalfInt l_max,
                                   std::span<const std::string> profile_names,
                                   const CompressionRule& rule, const KqCriterion& criterion) {
  std::vector<std::string> names(profile_names.begin(), profile_names.end());
  if (names.empty()) names = builtin_profile_names();

  ConventionChoice conv = calibrate_conventions(HilbertSpec{half_int(7)}, q);
  BuildOptions opts;
  opts.convention = conv;

  HilbertSpec spec{l_max};
  VerificationReport rep;
  rep.suite = "uniqueness";
  rep.q = q.q;
  rep.l_max = l_max;
  rep.margin = rule.margin;
  rep.convention_id = conv.id();

  int n_compatible = 0, n_violators = 0;
  for (const std::string& name : names) {
    NamedProfile prof = dirac_profile(name);
    opts.profile = name;
    SpectralData data = build_spectral_data(spec, q, opts);

    VerificationReport decay = check_first_order_mod_kq(data, rule, criterion);
    const bool decay_pass = decay.pass;

    VerificationReport bounded = check_bounded_commutators(q, opts, {});
    const bool bounded_pass = bounded.pass;

    const bool expected = prof.affine_in_level;
    (expected ? n_compatible : n_violators)++;

    CheckItem it;
    it.id = "profile:" + name;
    it.value = (decay_pass ? 1.0 : 0.0) + (bounded_pass ? 2.0 : 0.0);
    it.threshold = expected ? 3.0 : 0.0;
    it.comparator = expected ? "==" : "<";
    it.pass = expected ? (decay_pass && bounded_pass) : !(decay_pass && bounded_pass);
    it.note = std::string(expected ? "affine shape: " : "violator: ") +
              "first-order " + (decay_pass ? "pass" : "fail") + ", bounded " +
              (bounded_pass ? "pass" : "fail");
    rep.items.push_back(std::move(it));
  }
  rep.info.emplace_back("compatible_profiles", std::to_string(n_compatible));
  rep.info.emplace_back("violator_profiles", std::to_string(n_violators));
  rep.finalize();
  return rep;
}

}  // namespace podles
