// Command-line front end: builds the truncated spectral geometry of the
// equatorial Podles sphere, runs the verification suites, and dumps
// plot-ready tables.

#include "podles/report.hpp"
#include "podles/version.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
using namespace podles;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kAllSuites = {
    "relations",        "equivariance",       "structure",
    "commutant-failure", "commutant-mod-kq",  "first-order-mod-kq",
    "bounded-commutators", "spectrum",        "uniqueness"};

const std::set<std::string> kDecaySuites = {"commutant-failure", "commutant-mod-kq",
                                            "first-order-mod-kq", "uniqueness"};

std::vector<std::string> expand_suites(const std::vector<std::string>& requested) {
  std::vector<std::string> out;
  for (const std::string& s : requested) {
    if (s == "all") {
      for (const std::string& name : kAllSuites) out.push_back(name);
    } else if (s == "none") {
      // explicit empty selection
    } else if (std::find(kAllSuites.begin(), kAllSuites.end(), s) != kAllSuites.end()) {
      out.push_back(s);
    } else {
      throw ConfigError("unknown suite '" + s + "'");
    }
  }
  // de-duplicate, keep order
  std::vector<std::string> uniq;
  for (const std::string& s : out)
    if (std::find(uniq.begin(), uniq.end(), s) == uniq.end()) uniq.push_back(s);
  return uniq;
}

std::string q_tag(double q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

fs::path default_out_dir() {
  if (const char* env = std::getenv("PODLES_OUT_DIR"); env && *env) return fs::path(env);
  return fs::path("reports");
}

struct RunConfig {
  std::vector<double> qs{0.3, 0.5, 0.8};
  // deep enough that the q = 0.8 commutators reach their asymptotic decay
  std::string lmax_text = "31/2";
  std::vector<std::string> suites{"all"};
  std::string profile = "default";
  std::uint64_t seed = 1;
  std::string out_dir;
  std::string format = "json";
  bool paper_literal_index = false;
  int margin = 1;
  int words = 0;
  bool stamp = false;
};

void validate(const RunConfig& cfg, const std::vector<std::string>& suites, HalfInt l_max) {
  if (!is_level_label(l_max))
    throw ConfigError("--lmax must be a positive half-odd integer such as 21/2");
  if (cfg.margin < 1) throw ConfigError("--margin must be >= 1");
  if (cfg.words < 0) throw ConfigError("--words must be >= 0");

  const bool only_spectrum =
      !suites.empty() &&
      std::all_of(suites.begin(), suites.end(), [](const std::string& s) { return s == "spectrum"; });
  for (double q : cfg.qs) {
    if (only_spectrum) continue;
    if (!(q > 0.0 && q < 1.0)) {
      const bool has_decay = std::any_of(suites.begin(), suites.end(), [](const std::string& s) {
        return kDecaySuites.count(s) > 0;
      });
      if (has_decay) throw ConfigError("decay suites require q < 1");
      if (!(q > 0.0 && q <= 1.0)) throw ConfigError("q must lie in (0, 1]");
    }
  }
  const bool has_decay = std::any_of(suites.begin(), suites.end(), [](const std::string& s) {
    return kDecaySuites.count(s) > 0;
  });
  if (has_decay && l_max.twice < 7)
    throw ConfigError("decay suites require --lmax >= 7/2");
  // seeded word pairs reach total generator length 6
  if (cfg.words > 0 && l_max.twice <= 12 * cfg.margin)
    throw ConfigError("--words needs --lmax > " + to_string(half_int(12 * cfg.margin)) +
                      " at margin " + std::to_string(cfg.margin));
}

int run_command(const RunConfig& cfg) {
  const HalfInt l_max = parse_half_int(cfg.lmax_text);
  const std::vector<std::string> suites = expand_suites(cfg.suites);
  validate(cfg, suites, l_max);
  dirac_profile(cfg.profile);  // validates the name early

  if (suites.empty()) return kExitPass;

  const fs::path out = cfg.out_dir.empty() ? default_out_dir() : fs::path(cfg.out_dir);
  fs::create_directories(out);

  const CompressionRule rule{cfg.margin};
  bool all_pass = true;

  for (double qv : cfg.qs) {
    const QParam q{qv};

    // one calibration per q, shared by the suites that need built data
    std::optional<SpectralData> data;
    auto ensure_data = [&]() -> SpectralData& {
      if (!data) {
        BuildOptions opts;
        opts.profile = cfg.profile;
        opts.paper_literal_index = cfg.paper_literal_index;
        data.emplace(build_spectral_data(HilbertSpec{l_max}, q, opts));
      }
      return *data;
    };

    for (const std::string& suite : suites) {
      VerificationReport rep;
      if (suite == "relations") {
        rep = check_relations(ensure_data(), rule);
      } else if (suite == "equivariance") {
        rep = check_equivariance(ensure_data(), rule);
      } else if (suite == "structure") {
        rep = check_structure_identities(ensure_data());
      } else if (suite == "commutant-failure") {
        BuildOptions opts;
        opts.profile = cfg.profile;
        opts.paper_literal_index = cfg.paper_literal_index;
        rep = check_commutant_failure(q, opts, {}, rule);
      } else if (suite == "commutant-mod-kq") {
        rep = check_commutant_mod_kq(ensure_data(), rule, {}, cfg.words, cfg.seed);
      } else if (suite == "first-order-mod-kq") {
        rep = check_first_order_mod_kq(ensure_data(), rule, {}, cfg.words, cfg.seed);
      } else if (suite == "bounded-commutators") {
        BuildOptions opts;
        opts.profile = cfg.profile;
        opts.paper_literal_index = cfg.paper_literal_index;
        rep = check_bounded_commutators(q, opts, {});
      } else if (suite == "spectrum") {
        rep = check_spectrum_and_dimension(cfg.profile);
        rep.q = qv;
      } else if (suite == "uniqueness") {
        rep = uniqueness_scan(q, l_max, {}, rule);
      }
      rep.seed = cfg.seed;
      rep.info.emplace_back("config_q", q_tag(qv));
      rep.info.emplace_back("config_lmax", to_string(l_max));
      rep.info.emplace_back("config_profile", cfg.profile);
      rep.info.emplace_back("config_paper_literal_index",
                            cfg.paper_literal_index ? "true" : "false");

      const std::string stem = suite + "_q" + q_tag(qv);
      const fs::path file = out / (stem + (cfg.format == "json" ? ".json" : ".csv"));
      std::ofstream ofs(file, std::ios::binary);
      if (!ofs) throw std::runtime_error("cannot write " + file.string());
      ofs << (cfg.format == "json" ? report_to_json(rep, cfg.stamp) : report_to_csv(rep));
      std::cout << (rep.pass ? "PASS" : "FAIL") << "  " << suite << "  q=" << q_tag(qv) << "  -> "
                << file.string() << "\n";
      all_pass = all_pass && rep.pass;
    }
  }
  return all_pass ? kExitPass : kExitFail;
}

struct DumpConfig {
  std::string what;
  std::string op = "dirac";
  double q = 0.5;
  std::string lmax_text = "21/2";
  std::string profile = "default";
  std::string out_dir;
  bool paper_literal_index = false;
};

LinearOperator named_operator(const SpectralData& data, const std::string& name) {
  if (name == "pi_a") return data.pi.a;
  if (name == "pi_a_star") return data.pi.a_star;
  if (name == "pi_b") return data.pi.b;
  if (name == "rho_k") return data.rho.k;
  if (name == "rho_e") return data.rho.e;
  if (name == "rho_f") return data.rho.f;
  if (name == "dirac") return data.dirac;
  if (name == "gamma") return data.gamma;
  if (name == "lq") return lq_operator(data.spec, data.q);
  if (name.rfind("expr:", 0) == 0)
    return pi_of(data.pi, parse_element(name.substr(5)));
  throw ConfigError("unknown operator '" + name +
                    "' (try pi_a, pi_a_star, pi_b, rho_k, rho_e, rho_f, dirac, gamma, lq, "
                    "or expr:<expression>)");
}

int dump_command(const DumpConfig& cfg) {
  const HalfInt l_max = parse_half_int(cfg.lmax_text);
  if (!is_level_label(l_max))
    throw ConfigError("--lmax must be a positive half-odd integer such as 21/2");
  if (!(cfg.q > 0.0 && cfg.q < 1.0)) throw ConfigError("dump requires 0 < q < 1");

  const fs::path out = cfg.out_dir.empty() ? default_out_dir() : fs::path(cfg.out_dir);
  fs::create_directories(out);

  if (cfg.what == "spectrum") {
    NamedProfile prof = dirac_profile(cfg.profile);
    HilbertSpec spec{l_max};
    std::map<double, std::size_t> mult;
    for (HalfInt l : spec.levels()) {
      const double v = prof.fn(l);
      mult[-std::abs(v)] += spec.level_size(l);
      mult[std::abs(v)] += spec.level_size(l);
    }
    const fs::path file = out / "spectrum.csv";
    std::ofstream ofs(file, std::ios::binary);
    ofs.precision(17);
    ofs << "eigenvalue,multiplicity\n";
    for (const auto& [v, m] : mult) ofs << v << ',' << m << '\n';
    std::cout << "wrote " << file.string() << "\n";
    return kExitPass;
  }

  BuildOptions opts;
  opts.profile = cfg.profile;
  opts.paper_literal_index = cfg.paper_literal_index;
  SpectralData data = build_spectral_data(HilbertSpec{l_max}, QParam{cfg.q}, opts);
  LinearOperator op = named_operator(data, cfg.op);
  std::string tag = cfg.op;
  for (char& c : tag)
    if (c == ':' || c == '*' || c == '^' || c == ' ' || c == '(' || c == ')') c = '_';

  if (cfg.what == "block-norms") {
    const fs::path file = out / ("block_norms_" + tag + ".csv");
    std::ofstream ofs(file, std::ios::binary);
    ofs.precision(17);
    ofs << "operator,l_row,l_col,norm\n";
    for (const LevelBlockNorm& b : block_norms(op))
      ofs << cfg.op << ',' << to_string(b.l_row) << ',' << to_string(b.l_col) << ',' << b.norm
          << '\n';
    std::cout << "wrote " << file.string() << "\n";
    return kExitPass;
  }
  if (cfg.what == "operator") {
    const fs::path file = out / ("operator_" + tag + ".csv");
    std::ofstream ofs(file, std::ios::binary);
    ofs.precision(17);
    ofs << "row,col,re,im\n";
    for (std::size_t r = 0; r < op.dim(); ++r)
      for (std::size_t c = 0; c < op.dim(); ++c) {
        const cplx v = op.at(r, c);
        if (v != cplx{0.0, 0.0}) ofs << r << ',' << c << ',' << v.real() << ',' << v.imag() << '\n';
      }
    std::cout << "wrote " << file.string() << "\n";
    return kExitPass;
  }
  throw ConfigError("unknown dump target '" + cfg.what + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equatorial Podles sphere spectral geometry: truncated construction and "
               "verification suites"};
  app.set_version_flag("--version", library_version);
  app.require_subcommand(1);

  RunConfig run_cfg;
  CLI::App* run = app.add_subcommand("run", "run verification suites and write reports");
  run->add_option("--q", run_cfg.qs, "deformation parameter(s)")->expected(-1);
  run->add_option("--lmax", run_cfg.lmax_text, "truncation level, e.g. 21/2 or 10.5");
  run->add_option("--suite", run_cfg.suites,
                  "suites to run (all, none, relations, equivariance, structure, "
                  "commutant-failure, commutant-mod-kq, first-order-mod-kq, "
                  "bounded-commutators, spectrum, uniqueness)")
      ->expected(-1);
  run->add_option("--d-profile", run_cfg.profile,
                  "Dirac profile: default, affine5, affine2p3, quadratic, alternating, or "
                  "polynomial coefficients c0,c1,... in (l+1/2)");
  run->add_option("--seed", run_cfg.seed, "seed for the random-word extension");
  run->add_option("--words", run_cfg.words,
                  "number of seeded random word pairs added to the mod-Kq suites");
  run->add_option("--out", run_cfg.out_dir, "output directory (default $PODLES_OUT_DIR or ./reports)");
  run->add_option("--format", run_cfg.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));
  run->add_flag("--paper-literal-index", run_cfg.paper_literal_index,
                "use the uncorrected (l-1, m) third target in pi(a) (sentinel; breaks the "
                "relations suite)");
  run->add_option("--margin", run_cfg.margin, "compression margin (levels per unit word length)");
  run->add_flag("--stamp", run_cfg.stamp, "include a wall-clock timestamp in JSON reports");

  DumpConfig dump_cfg;
  CLI::App* dump = app.add_subcommand("dump", "write plot-ready tables");
  dump->add_option("--what", dump_cfg.what, "spectrum | block-norms | operator")
      ->required()
      ->check(CLI::IsMember({"spectrum", "block-norms", "operator"}));
  dump->add_option("--op", dump_cfg.op,
                   "operator id (pi_a, pi_a_star, pi_b, rho_k, rho_e, rho_f, dirac, gamma, lq, "
                   "expr:<expression>)");
  dump->add_option("--q", dump_cfg.q, "deformation parameter");
  dump->add_option("--lmax", dump_cfg.lmax_text, "truncation level");
  dump->add_option("--d-profile", dump_cfg.profile, "Dirac profile");
  dump->add_option("--out", dump_cfg.out_dir, "output directory");
  dump->add_flag("--paper-literal-index", dump_cfg.paper_literal_index,
                 "use the uncorrected third target in pi(a)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return 0;  // --help / --version
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (run->parsed()) return run_command(run_cfg);
    if (dump->parsed()) return dump_command(dump_cfg);
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}
