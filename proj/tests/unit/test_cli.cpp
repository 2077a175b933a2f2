#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(PODLES_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return RunResult{WEXITSTATUS(status)};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

fs::path fresh_dir(const std::string& tag) {
  fs::path d = fs::temp_directory_path() / ("podles_cli_" + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

// structural validation against the subset of JSON Schema the shipped schema
// uses: type, enum, required, properties, additionalProperties, items
bool validate(const json& schema, const json& value, std::string& err) {
  if (schema.contains("type")) {
    const std::string t = schema["type"];
    const bool ok = (t == "object" && value.is_object()) ||
                    (t == "array" && value.is_array()) ||
                    (t == "string" && value.is_string()) ||
                    (t == "number" && value.is_number()) ||
                    (t == "integer" && value.is_number_integer()) ||
                    (t == "boolean" && value.is_boolean());
    if (!ok) {
      err = "type mismatch: expected " + t + " got " + value.dump().substr(0, 40);
      return false;
    }
  }
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& e : schema["enum"]) found = found || e == value;
    if (!found) {
      err = "enum mismatch at " + value.dump();
      return false;
    }
  }
  if (value.is_object()) {
    if (schema.contains("required"))
      for (const auto& key : schema["required"])
        if (!value.contains(key.get<std::string>())) {
          err = "missing required key " + key.get<std::string>();
          return false;
        }
    const json props = schema.value("properties", json::object());
    for (const auto& [key, sub] : value.items()) {
      if (props.contains(key)) {
        if (!validate(props[key], sub, err)) {
          err = key + ": " + err;
          return false;
        }
      } else if (schema.value("additionalProperties", json(true)) == json(false)) {
        err = "unexpected key " + key;
        return false;
      }
    }
  }
  if (value.is_array() && schema.contains("items")) {
    for (const auto& el : value) {
      if (!validate(schema["items"], el, err)) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("run writes schema-valid reports and exits 0") {
  const fs::path out = fresh_dir("run");
  RunResult r = run_cli("run --q 0.5 --lmax 9/2 --suite relations structure --out " +
                        out.string());
  CHECK(r.exit_code == 0);
  REQUIRE(fs::exists(out / "relations_q0.5.json"));
  REQUIRE(fs::exists(out / "structure_q0.5.json"));

  const json schema = json::parse(slurp(PODLES_SCHEMA_PATH));
  for (const char* name : {"relations_q0.5.json", "structure_q0.5.json"}) {
    const json rep = json::parse(slurp(out / name));
    std::string err;
    const bool ok = validate(schema, rep, err);
    INFO(name << ": " << err);
    CHECK(ok);
    CHECK(rep["pass"] == true);
  }
}

TEST_CASE("identical runs produce byte-identical reports") {
  const fs::path out1 = fresh_dir("det1");
  const fs::path out2 = fresh_dir("det2");
  const std::string args = "run --q 0.5 --lmax 9/2 --suite relations equivariance --seed 5 ";
  CHECK(run_cli(args + "--out " + out1.string()).exit_code == 0);
  CHECK(run_cli(args + "--out " + out2.string()).exit_code == 0);
  for (const char* name : {"relations_q0.5.json", "equivariance_q0.5.json"})
    CHECK(slurp(out1 / name) == slurp(out2 / name));
}

TEST_CASE("config errors exit 2") {
  CHECK(run_cli("run --q 1.0 --suite commutant-mod-kq").exit_code == 2);
  CHECK(run_cli("run --q 0.5 --lmax 4 --suite relations").exit_code == 2);
  CHECK(run_cli("run --q 0.5 --lmax 9/2 --suite no-such-suite").exit_code == 2);
  CHECK(run_cli("run --q 0.5 --lmax 9/2 --suite relations --format yaml").exit_code == 2);
  CHECK(run_cli("run --q 0.5 --lmax 3/2 --suite commutant-mod-kq").exit_code == 2);
  CHECK(run_cli("run --q 0.5 --lmax 9/2 --suite relations --d-profile bogus").exit_code == 2);
  CHECK(run_cli("nonsense").exit_code == 2);
}

TEST_CASE("suite failure exits 1") {
  const fs::path out = fresh_dir("literal");
  RunResult r = run_cli("run --q 0.5 --lmax 9/2 --suite relations --paper-literal-index --out " +
                        out.string());
  CHECK(r.exit_code == 1);
  const json rep = json::parse(slurp(out / "relations_q0.5.json"));
  CHECK(rep["pass"] == false);
}

TEST_CASE("empty suite selection writes nothing and exits 0") {
  const fs::path out = fresh_dir("none");
  RunResult r = run_cli("run --q 0.5 --suite none --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(fs::is_empty(out));
}

TEST_CASE("csv format has the frozen header") {
  const fs::path out = fresh_dir("csv");
  CHECK(run_cli("run --q 0.5 --lmax 9/2 --suite relations --format csv --out " + out.string())
            .exit_code == 0);
  const std::string csv = slurp(out / "relations_q0.5.csv");
  CHECK(csv.rfind("suite,q,l_max,item,value,threshold,comparator,pass,note\n", 0) == 0);
}

TEST_CASE("dump spectrum") {
  const fs::path out = fresh_dir("spectrum");
  CHECK(run_cli("dump --what spectrum --lmax 3/2 --out " + out.string()).exit_code == 0);
  const std::string csv = slurp(out / "spectrum.csv");
  CHECK(csv == "eigenvalue,multiplicity\n-2,4\n-1,2\n1,2\n2,4\n");
}

TEST_CASE("dump block norms of the q^l diagonal") {
  const fs::path out = fresh_dir("blocks");
  CHECK(run_cli("dump --what block-norms --op lq --q 0.5 --lmax 5/2 --out " + out.string())
            .exit_code == 0);
  const std::string csv = slurp(out / "block_norms_lq.csv");
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  CHECK(line == "operator,l_row,l_col,norm");
  int diag = 0;
  while (std::getline(is, line)) {
    std::istringstream row(line);
    std::string op, lr, lc, nrm;
    std::getline(row, op, ',');
    std::getline(row, lr, ',');
    std::getline(row, lc, ',');
    std::getline(row, nrm, ',');
    if (lr == lc) {
      ++diag;
      const double expect = lr == "1/2" ? std::sqrt(0.5) : lr == "3/2" ? std::pow(0.5, 1.5)
                                                                       : std::pow(0.5, 2.5);
      CHECK(std::stod(nrm) == doctest::Approx(expect).epsilon(1e-12));
    } else {
      CHECK(std::stod(nrm) == 0.0);
    }
  }
  CHECK(diag == 3);
}

TEST_CASE("dump full operator and parsed expressions") {
  const fs::path out = fresh_dir("op");
  CHECK(run_cli("dump --what operator --op dirac --q 0.5 --lmax 1/2 --out " + out.string())
            .exit_code == 0);
  const std::string csv = slurp(out / "operator_dirac.csv");
  CHECK(csv == "row,col,re,im\n0,2,1,0\n1,3,1,0\n2,0,1,0\n3,1,1,0\n");

  CHECK(run_cli("dump --what block-norms --op 'expr:a^* * a + b*b - 1' --q 0.5 --lmax 9/2 "
                "--out " +
                out.string())
            .exit_code == 0);
  CHECK(run_cli("dump --what block-norms --op no_such --q 0.5 --lmax 5/2 --out " + out.string())
            .exit_code == 2);
}

TEST_CASE("env var supplies the default output directory") {
  const fs::path out = fresh_dir("env");
  const std::string cmd = "PODLES_OUT_DIR=" + out.string() + " " + PODLES_CLI_PATH +
                          " run --q 0.5 --lmax 9/2 --suite relations > /dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  CHECK(fs::exists(out / "relations_q0.5.json"));
}
