// End-to-end checks of the command-line tool: every subcommand is exercised
// through a real child process, pinning exit codes, the deterministic JSON
// result shapes, and the error convention (JSON on stdout, a diagnostic line
// on stderr). The binary path and the fixture directory arrive in the
// HOTEQ_CLI and HOTEQ_FIXTURES environment variables.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hoteq/rational.hpp"

using Json = nlohmann::json;

namespace {

const std::string& cli_path() {
  static std::string p = [] {
    const char* v = std::getenv("HOTEQ_CLI");
    REQUIRE_MESSAGE(v != nullptr, "HOTEQ_CLI must point at the built binary");
    return std::string(v);
  }();
  return p;
}

const std::string& fixture_dir() {
  static std::string p = [] {
    const char* v = std::getenv("HOTEQ_FIXTURES");
    REQUIRE_MESSAGE(v != nullptr, "HOTEQ_FIXTURES must point at the fixture files");
    return std::string(v);
  }();
  return p;
}

std::string fixture(const std::string& name) { return fixture_dir() + "/" + name; }

const std::string& temp_dir() {
  static std::string p = [] {
    char tmpl[] = "/tmp/hoteq_cli_XXXXXX";
    char* d = mkdtemp(tmpl);
    REQUIRE(d != nullptr);
    return std::string(d);
  }();
  return p;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string write_file(const std::string& name, const std::string& text) {
  const std::string path = temp_dir() + "/" + name;
  std::ofstream out(path);
  out << text;
  return path;
}

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

// Runs the tool with the given (pre-quoted) argument string; `env` is an
// optional VAR=value prefix for the child only.
RunResult run_cli(const std::string& args, const std::string& env = "") {
  static int counter = 0;
  const std::string out_path = temp_dir() + "/stdout." + std::to_string(counter);
  const std::string err_path = temp_dir() + "/stderr." + std::to_string(counter);
  ++counter;
  std::string cmd;
  if (!env.empty()) cmd += env + " ";
  cmd += "'" + cli_path() + "' " + args + " >'" + out_path + "' 2>'" + err_path + "'";
  int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

Json jparse(const std::string& text) { return Json::parse(text); }

// Joins a JSON profile array back into the --profile comma syntax.
std::string profile_flag_of(const Json& arr) {
  std::string s;
  for (const auto& x : arr) {
    if (!s.empty()) s += ",";
    s += x.get<std::string>();
  }
  return s;
}

// --- instances written once into the temp directory ------------------------

const std::string& units5() {
  static std::string p = write_file("units5.json", R"({
    "m": 2,
    "space": {"type": "finite", "positions": ["0", "1", "2", "3", "4"]},
    "voters": {"atoms": [
      {"pos": "0", "weight": "1"}, {"pos": "1", "weight": "1"},
      {"pos": "2", "weight": "1"}, {"pos": "3", "weight": "1"},
      {"pos": "4", "weight": "1"}]}
  })");
  return p;
}

const std::string& contested3() {
  static std::string p = write_file("contested3.json", R"({
    "m": 3,
    "space": {"type": "finite", "positions": ["0", "1", "2", "3", "4"]},
    "voters": {"atoms": [
      {"pos": "1", "weight": "2"}, {"pos": "2", "weight": "1"},
      {"pos": "3", "weight": "1"}, {"pos": "4", "weight": "2"}]}
  })");
  return p;
}

const std::string& contested_interval() {
  static std::string p = write_file("contested_interval.json", R"({
    "m": 3,
    "space": {"type": "interval", "R": "3"},
    "voters": {"atoms": [
      {"pos": "0", "weight": "2"}, {"pos": "1", "weight": "1"},
      {"pos": "2", "weight": "1"}, {"pos": "3", "weight": "2"}]}
  })");
  return p;
}

std::string uniform(int m) {
  return write_file("uniform" + std::to_string(m) + ".json",
                    R"({"m": )" + std::to_string(m) + R"(,
    "space": {"type": "interval", "R": "1"},
    "voters": {"density": [{"x": "0", "f": "1"}, {"x": "1", "f": "1"}]},
    "M": "1"})");
}

const std::string& mixed_voters() {
  static std::string p = write_file("mixed.json", R"({
    "m": 2,
    "space": {"type": "interval", "R": "2"},
    "voters": {
      "atoms": [{"pos": "1", "weight": "1"}],
      "density": [{"x": "0", "f": "1"}, {"x": "2", "f": "1"}]},
    "M": "1"
  })");
  return p;
}

}  // namespace

TEST_CASE("solve routes automatically and reports deterministically") {
  SUBCASE("interval atoms go to the dyadic grid solver") {
    RunResult r = run_cli("solve --instance '" + fixture("fig1.json") + "'");
    REQUIRE(r.code == 0);
    CHECK(r.err.empty());
    CHECK(!r.out.empty());
    CHECK(r.out.back() == '\n');
    Json j = jparse(r.out);
    CHECK(j["mode"] == "grid");
    CHECK(j["status"] == "equilibrium");
    CHECK(j["profile"] == Json::array({"0", "2", "10"}));
    CHECK(j["utilities"] == Json::array({"10", "10", "10"}));

    RunResult again = run_cli("solve --instance '" + fixture("fig1.json") + "'");
    CHECK(again.code == 0);
    CHECK(again.out == r.out);  // byte-identical on repeat
  }
  SUBCASE("finite spaces go to the dynamic program") {
    RunResult r = run_cli("solve --instance '" + units5() + "'");
    REQUIRE(r.code == 0);
    Json j = jparse(r.out);
    CHECK(j["mode"] == "dp");
    CHECK(j["status"] == "equilibrium");
    CHECK(j["profile"] == Json::array({"1", "2"}));
    CHECK(j["utilities"] == Json::array({"2", "3"}));
    CHECK(!j.contains("epsilon"));
  }
  SUBCASE("a tolerance turns the dynamic program approximate") {
    RunResult r = run_cli("solve --instance '" + units5() + "' --epsilon 1");
    REQUIRE(r.code == 0);
    Json j = jparse(r.out);
    CHECK(j["status"] == "eps_equilibrium");
    CHECK(j["epsilon"] == "1");
    // Round-trip: the reported profile verifies at the same tolerance.
    RunResult v = run_cli("verify --instance '" + units5() + "' --profile '" +
                          profile_flag_of(j["profile"]) + "' --epsilon 1");
    CHECK(v.code == 0);
  }
  SUBCASE("pure densities go to the approximate solver") {
    RunResult r = run_cli("solve --instance '" + uniform(3) + "' --epsilon 1/2");
    REQUIRE(r.code == 0);
    Json j = jparse(r.out);
    CHECK(j["mode"] == "cc");
    CHECK(j["status"] == "eps_equilibrium");
    CHECK(j["approx"]["kind"] == "quantile_fallback");
    CHECK(j["approx"]["guarantee"] == "1/4");
    CHECK(j["approx"]["certifies_no_eps_equilibrium"] == false);
    CHECK(j["profile"] == Json::array({"1/4", "1/2", "3/4"}));
  }
  SUBCASE("without a tolerance the approximate solver brackets by halving") {
    RunResult r = run_cli("solve --instance '" + uniform(2) + "'",
                          "HOTEQ_GRID_LIMIT=600");
    REQUIRE(r.code == 0);
    Json j = jparse(r.out);
    CHECK(j["mode"] == "cc");
    CHECK(j["approx"]["kind"] == "binary_search_bracket");
    CHECK(j["approx"]["eps_high"] == "1/128");
    CHECK(!j["approx"].contains("eps_low"));
    CHECK(j["approx"]["guarantee"] == "1/32");
  }
  SUBCASE("mixed atom and density voters have no automatic route") {
    RunResult r = run_cli("solve --instance '" + mixed_voters() + "'");
    CHECK(r.code == 2);
    CHECK(r.err.find("error:") != std::string::npos);
    Json j = jparse(r.out);
    CHECK(j["status"] == "error");
    CHECK(j["message"].get<std::string>().find("mixed") != std::string::npos);
  }
}

TEST_CASE("solve reports absence with exit code 1") {
  SUBCASE("finite space") {
    RunResult r = run_cli("solve --instance '" + contested3() + "'");
    CHECK(r.code == 1);
    Json j = jparse(r.out);
    CHECK(j["status"] == "none");
    CHECK(j["mode"] == "dp");
    CHECK(!j.contains("profile"));
  }
  SUBCASE("interval space, atom voters") {
    RunResult r = run_cli("solve --instance '" + contested_interval() + "'");
    CHECK(r.code == 1);
    Json j = jparse(r.out);
    CHECK(j["status"] == "none");
    CHECK(j["mode"] == "grid");
  }
}

TEST_CASE("solve rejects mode mismatches") {
  CHECK(run_cli("solve --instance '" + fixture("fig1.json") + "' --mode dp").code == 2);
  CHECK(run_cli("solve --instance '" + units5() + "' --mode grid").code == 2);
  CHECK(run_cli("solve --instance '" + units5() + "' --mode cc").code == 2);
  CHECK(run_cli("solve --instance '" + uniform(2) + "' --mode dp").code == 2);
  CHECK(run_cli("solve --instance '" + fixture("fig1.json") + "' --mode nonsense").code == 2);
  SUBCASE("the exact grid route takes no tolerance") {
    RunResult r = run_cli("solve --instance '" + fixture("fig1.json") +
                          "' --mode grid --epsilon 1/4");
    CHECK(r.code == 2);
    Json j = jparse(r.out);
    CHECK(j["message"].get<std::string>().find("epsilon") != std::string::npos);
  }
}

TEST_CASE("verify reports equilibria, violations, and tolerances") {
  const std::string fig1 = fixture("fig1.json");
  SUBCASE("an equilibrium verifies with exit 0") {
    RunResult r = run_cli("verify --instance '" + fig1 + "' --profile 0,2,10");
    REQUIRE(r.code == 0);
    Json j = jparse(r.out);
    CHECK(j["status"] == "equilibrium");
    CHECK(j["ok"] == true);
    CHECK(j["utilities"] == Json::array({"10", "10", "10"}));
    CHECK(j["min_utility"] == "10");
    CHECK(j["max_gap_value"] == "0");
    CHECK(!j.contains("witness"));
    CHECK(j["profile"] == Json::array({"0", "2", "10"}));
  }
  SUBCASE("other placements of the free candidate also verify") {
    CHECK(run_cli("verify --instance '" + fig1 + "' --profile 0,2,5").code == 0);
    CHECK(run_cli("verify --instance '" + fig1 + "' --profile 0,2,15/2").code == 0);
  }
  SUBCASE("a violation reports a concrete improving move and exits 1") {
    RunResult r = run_cli("verify --instance '" + fig1 + "' --profile 0,5,10");
    REQUIRE(r.code == 1);
    Json j = jparse(r.out);
    CHECK(j["status"] == "none");
    CHECK(j["ok"] == false);
    CHECK(j["min_utility"] == "0");
    REQUIRE(j.contains("witness"));
    CHECK(j["witness"]["candidate"] == 1);
    CHECK(j["witness"]["value"] == "10");
    CHECK(j["witness"]["gain"] == "10");
    hoteq::Rat pos = hoteq::rat_from_string(j["witness"]["position"].get<std::string>());
    CHECK(pos > 0);
    CHECK(pos < 10);
  }
  SUBCASE("tolerant verification") {
    const std::string u4 = uniform(4);
    RunResult ok = run_cli("verify --instance '" + u4 +
                           "' --profile 1/5,2/5,3/5,4/5 --epsilon 1/5");
    REQUIRE(ok.code == 0);
    Json j = jparse(ok.out);
    CHECK(j["status"] == "eps_equilibrium");
    CHECK(j["epsilon"] == "1/5");
    RunResult bad = run_cli("verify --instance '" + u4 +
                            "' --profile 1/5,2/5,3/5,4/5 --epsilon 1/100");
    CHECK(bad.code == 1);
    CHECK(jparse(bad.out)["status"] == "none");
    CHECK(run_cli("verify --instance '" + u4 +
                  "' --profile 1/5,2/5,3/5,4/5 --epsilon -1").code == 2);
  }
  SUBCASE("malformed profiles are data errors") {
    CHECK(run_cli("verify --instance '" + fig1 + "' --profile 2,0,10").code == 2);
    CHECK(run_cli("verify --instance '" + fig1 + "' --profile 0,2").code == 2);
    CHECK(run_cli("verify --instance '" + fig1 + "' --profile 0,2,11").code == 2);
    CHECK(run_cli("verify --instance '" + units5() + "' --profile 0,3/2").code == 2);
  }
}

TEST_CASE("profiles arrive inline or from files, never both") {
  const std::string fig1 = fixture("fig1.json");
  const std::string obj = write_file("profile_obj.json", R"({"profile": ["0", "2", "10"]})");
  const std::string arr = write_file("profile_arr.json", R"(["0", "2", "10"])");
  CHECK(run_cli("verify --instance '" + fig1 + "' --profile-file '" + obj + "'").code == 0);
  CHECK(run_cli("verify --instance '" + fig1 + "' --profile-file '" + arr + "'").code == 0);
  SUBCASE("both sources at once") {
    RunResult r = run_cli("verify --instance '" + fig1 +
                          "' --profile 0,2,10 --profile-file '" + obj + "'");
    CHECK(r.code == 2);
    CHECK(jparse(r.out)["message"].get<std::string>().find("not both") != std::string::npos);
  }
  SUBCASE("no source at all") {
    RunResult r = run_cli("verify --instance '" + fig1 + "'");
    CHECK(r.code == 2);
    CHECK(jparse(r.out)["message"].get<std::string>().find("profile") != std::string::npos);
  }
  SUBCASE("missing profile file") {
    CHECK(run_cli("verify --instance '" + fig1 + "' --profile-file '" +
                  temp_dir() + "/no_such.json'").code == 2);
  }
  SUBCASE("profiles obey the strict rational syntax") {
    CHECK(run_cli("verify --instance '" + fig1 + "' --profile 0,2,2/4").code == 2);
    CHECK(run_cli("verify --instance '" + fig1 + "' --profile 0,2,3.5").code == 2);
    CHECK(run_cli("verify --instance '" + fig1 + "' --profile 0,2,").code == 2);
  }
}

TEST_CASE("deviate reports the entrant landscape of one gap") {
  SUBCASE("finite spaces scan unoccupied grid points") {
    RunResult r = run_cli("deviate --instance '" + units5() + "' --profile 0,4 --gap 1");
    REQUIRE(r.code == 0);
    Json j = jparse(r.out);
    CHECK(j["gap"] == 1);
    CHECK(j["sup"] == "2");
    CHECK(j["best_point"] == "1");  // ties resolve to the leftmost point
    CHECK(j["pieces"] == Json::array());
    RunResult left = run_cli("deviate --instance '" + units5() + "' --profile 0,4 --gap 0");
    REQUIRE(left.code == 0);
    Json jl = jparse(left.out);
    CHECK(jl["sup"] == "0");
    CHECK(!jl.contains("best_point"));
  }
  SUBCASE("interval gaps come back as value pieces") {
    RunResult r = run_cli("deviate --instance '" + fixture("fig1.json") +
                          "' --profile 0,2,10 --gap 3");
    REQUIRE(r.code == 0);
    Json j = jparse(r.out);
    CHECK(j["sup"] == "0");
    REQUIRE(j["pieces"].size() == 1);
    CHECK(j["pieces"][0]["lo"] == "10");
    CHECK(j["pieces"][0]["hi"] == "+inf");
    CHECK(j["pieces"][0]["value"] == "0");
  }
  SUBCASE("gap indices outside 0..m are usage errors") {
    CHECK(run_cli("deviate --instance '" + units5() + "' --profile 0,4 --gap 3").code == 2);
    CHECK(run_cli("deviate --instance '" + units5() + "' --profile 0,4 --gap -1").code == 2);
  }
}

TEST_CASE("shift canonicalizes equilibria onto low dyadic bits") {
  const std::string fig4 = fixture("fig4.json");
  SUBCASE("already-canonical profiles pass through unchanged") {
    RunResult r = run_cli("shift --instance '" + fig4 + "' --profile 0,2,9,16,18");
    REQUIRE(r.code == 0);
    Json j = jparse(r.out);
    CHECK(j["status"] == "equilibrium");
    CHECK(j["profile"] == Json::array({"0", "2", "9", "16", "18"}));
    CHECK(j["trace"] == Json::array());
  }
  SUBCASE("a deep middle candidate walks to a shallow bit") {
    RunResult r = run_cli("shift --instance '" + fig4 + "' --profile 0,2,26/3,16,18");
    REQUIRE(r.code == 0);
    Json j = jparse(r.out);
    CHECK(j["profile"] == Json::array({"0", "2", "17/2", "16", "18"}));
    REQUIRE(j["trace"].size() == 1);
    CHECK(j["trace"][0]["kind"] == "shift_left");
    CHECK(j["trace"][0]["iteration"] == 1);
    CHECK(j["trace"][0]["candidate"] == 2);
    CHECK(j["trace"][0]["from"] == "26/3");
    CHECK(j["trace"][0]["to"] == "17/2");
    // Round-trip: the canonicalized profile is still an equilibrium.
    RunResult v = run_cli("verify --instance '" + fig4 + "' --profile '" +
                          profile_flag_of(j["profile"]) + "'");
    CHECK(v.code == 0);
  }
  SUBCASE("the walk direction adapts to the starting side") {
    RunResult r = run_cli("shift --instance '" + fig4 + "' --profile 0,2,67/8,16,18");
    REQUIRE(r.code == 0);
    Json j = jparse(r.out);
    CHECK(j["profile"] == Json::array({"0", "2", "17/2", "16", "18"}));
    REQUIRE(j["trace"].size() == 1);
    CHECK(j["trace"][0]["kind"] == "shift_right");
  }
  SUBCASE("non-equilibrium input is a data error") {
    RunResult r = run_cli("shift --instance '" + fig4 + "' --profile 0,2,4,16,18");
    CHECK(r.code == 2);
    CHECK(jparse(r.out)["status"] == "error");
  }
}

TEST_CASE("gen-hard emits solved family members") {
  SUBCASE("the second member matches its frozen form") {
    RunResult r = run_cli("gen-hard --k 2");
    REQUIRE(r.code == 0);
    Json got = jparse(r.out);
    Json want = jparse(slurp(fixture("gen_hard_k2.json")));
    CHECK(got == want);
  }
  SUBCASE("the emitted file is its own verification input") {
    const std::string out = temp_dir() + "/gh1.json";
    REQUIRE(run_cli("gen-hard --k 1 --output '" + out + "'").code == 0);
    RunResult v = run_cli("verify --instance '" + out + "' --profile-file '" + out + "'");
    CHECK(v.code == 0);
    CHECK(jparse(v.out)["status"] == "equilibrium");
  }
  SUBCASE("the family starts at k = 1") {
    CHECK(run_cli("gen-hard --k 0").code == 2);
    CHECK(run_cli("gen-hard").code == 2);
  }
}

TEST_CASE("el-check evaluates the paired-profile conditions") {
  SUBCASE("the bump family near-equilibrium satisfies all four") {
    RunResult r = run_cli("el-check --instance '" + fixture("violation.json") +
                          "' --profile 1999/2000,2001/2000,4,13999/2000,14001/2000" +
                          " --delta 1/1000");
    REQUIRE(r.code == 0);
    Json j = jparse(r.out);
    CHECK(j["c1"] == true);
    CHECK(j["c2"] == true);
    CHECK(j["c3"] == true);
    CHECK(j["c4"] == true);
    CHECK(j["all"] == true);
  }
  SUBCASE("unpaired ends fail the pairing condition and exit 1") {
    RunResult r = run_cli("el-check --instance '" + uniform(2) +
                          "' --profile 1/4,3/4 --delta 1/100");
    CHECK(r.code == 1);
    Json j = jparse(r.out);
    CHECK(j["c2"] == false);
    CHECK(j["c1"] == true);
    CHECK(j["all"] == false);
  }
  SUBCASE("atom voters and nonpositive distances are data errors") {
    CHECK(run_cli("el-check --instance '" + fixture("fig1.json") +
                  "' --profile 0,2,10 --delta 1/100").code == 2);
    CHECK(run_cli("el-check --instance '" + uniform(2) +
                  "' --profile 1/4,3/4 --delta 0").code == 2);
  }
}

TEST_CASE("quantiles emits the even mass split") {
  RunResult r = run_cli("quantiles --instance '" + uniform(4) + "'");
  REQUIRE(r.code == 0);
  CHECK(jparse(r.out)["profile"] == Json::array({"1/5", "2/5", "3/5", "4/5"}));
  CHECK(run_cli("quantiles --instance '" + fixture("fig1.json") + "'").code == 2);
}

TEST_CASE("oracle enumerates every finite-space equilibrium") {
  SUBCASE("both equilibria of the five-point line") {
    RunResult r = run_cli("oracle --instance '" + units5() + "'");
    REQUIRE(r.code == 0);
    Json j = jparse(r.out);
    CHECK(j["count"] == 2);
    CHECK(j["equilibria"] == Json::array({Json::array({"1", "2"}), Json::array({"2", "3"})}));
  }
  SUBCASE("an empty enumeration exits 1") {
    RunResult r = run_cli("oracle --instance '" + contested3() + "'");
    CHECK(r.code == 1);
    Json j = jparse(r.out);
    CHECK(j["count"] == 0);
    CHECK(j["equilibria"] == Json::array());
  }
}

TEST_CASE("results can be diverted to a file") {
  const std::string out_file = temp_dir() + "/solve_fig1.json";
  RunResult direct = run_cli("solve --instance '" + fixture("fig1.json") + "'");
  REQUIRE(direct.code == 0);
  RunResult diverted = run_cli("solve --instance '" + fixture("fig1.json") +
                               "' --output '" + out_file + "'");
  REQUIRE(diverted.code == 0);
  CHECK(diverted.out.empty());
  CHECK(slurp(out_file) == direct.out);
  SUBCASE("an unwritable output path is an error") {
    CHECK(run_cli("solve --instance '" + fixture("fig1.json") +
                  "' --output '/no/such/dir/x.json'").code == 2);
  }
}

TEST_CASE("bad invocations and bad data exit with code 2") {
  CHECK(run_cli("").code == 2);               // a subcommand is required
  CHECK(run_cli("frobnicate").code == 2);     // unknown subcommand
  CHECK(run_cli("solve").code == 2);          // --instance is required
  CHECK(run_cli("solve --instance '" + temp_dir() + "/absent.json'").code == 2);
  SUBCASE("instance file errors are reported as JSON plus a stderr line") {
    const std::string bad = write_file("badjson.json", "{nope");
    RunResult r = run_cli("solve --instance '" + bad + "'");
    CHECK(r.code == 2);
    CHECK(r.err.find("error:") != std::string::npos);
    CHECK(jparse(r.out)["status"] == "error");
  }
  SUBCASE("non-canonical rationals in instances are rejected") {
    const std::string bad = write_file("badrat.json", R"({
      "m": 1,
      "space": {"type": "interval", "R": "2"},
      "voters": {"atoms": [{"pos": "2/4", "weight": "1"}]}
    })");
    CHECK(run_cli("solve --instance '" + bad + "'").code == 2);
  }
  SUBCASE("unknown space types are rejected") {
    const std::string bad = write_file("badspace.json", R"({
      "m": 1,
      "space": {"type": "segment", "R": "2"},
      "voters": {"atoms": [{"pos": "1", "weight": "1"}]}
    })");
    CHECK(run_cli("solve --instance '" + bad + "'").code == 2);
  }
  SUBCASE("help is not an error") {
    RunResult r = run_cli("--help");
    CHECK(r.code == 0);
    CHECK(r.out.find("solve") != std::string::npos);
  }
}
