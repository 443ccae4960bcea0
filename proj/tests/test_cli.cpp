#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "pseudodet/fixtures.hpp"

using namespace pseudodet;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

std::filesystem::path temp_path(const std::string& stem) {
  return std::filesystem::temp_directory_path() / stem;
}

CliResult run_cli(const std::string& args) {
  static const bool env_ready = [] {
    setenv("PSEUDODET_FIXTURES", PSEUDODET_FIXTURES_DIR, 1);
    return true;
  }();
  (void)env_ready;
  static int counter = 0;
  auto tmp = temp_path("cli_capture_" + std::to_string(counter++) + ".txt");
  std::string cmd = std::string(PSEUDODET_CLI_PATH) + " " + args + " > " +
                    tmp.string() + " 2>&1";
  int rc = std::system(cmd.c_str());
  std::ifstream in(tmp);
  std::stringstream ss;
  ss << in.rdbuf();
  std::filesystem::remove(tmp);
  CliResult r;
  r.code = (rc != -1 && WIFEXITED(rc)) ? WEXITSTATUS(rc) : -1;
  r.out = ss.str();
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli validate") {
  SECTION("bundled fixtures validate cleanly") {
    for (const std::string name :
         {"s3_level23_p2", "ramified_control", "ordinary_uppertri_f4",
          "w2_level46_mod2_target", "w1_level23_mod2_aux",
          "w2_level11_mod9_basis"}) {
      auto r = run_cli("validate " + name);
      INFO(name << ": " << r.out);
      CHECK(r.code == 0);
      CHECK(r.out.find("\"ok\": true") != std::string::npos);
    }
  }
  SECTION("missing file exits 1 and names the path") {
    auto r = run_cli("validate no_such_fixture");
    CHECK(r.code == 1);
    CHECK(r.out.find("no_such_fixture") != std::string::npos);
  }
  SECTION("malformed JSON exits 2") {
    auto bad = temp_path("cli_malformed.json");
    std::ofstream(bad) << "{ not json";
    auto r = run_cli("validate " + bad.string());
    CHECK(r.code == 2);
    std::filesystem::remove(bad);
  }
  SECTION("validation failure exits 2") {
    auto f = load_galois_fixture(std::string(PSEUDODET_FIXTURES_DIR) +
                                 "/s3_level23_p2.json");
    auto j = galois_fixture_to_json(f);
    j["prime"] = 3;
    auto bad = temp_path("cli_wrong_prime.json");
    write_fixture_file(bad.string(), j);
    auto r = run_cli("validate " + bad.string());
    CHECK(r.code == 2);
    std::filesystem::remove(bad);
  }
}

TEST_CASE("cli certify") {
  SECTION("adjoined root certifies the level-23 fixture") {
    auto r = run_cli("certify s3_level23_p2 --alpha root");
    INFO(r.out);
    CHECK(r.code == 0);
    CHECK(r.out.find("Unramified") != std::string::npos);
  }
  SECTION("ramified control stays undetermined") {
    auto r = run_cli("certify ramified_control --alpha 1");
    INFO(r.out);
    CHECK(r.code == 0);
    CHECK(r.out.find("Undetermined") != std::string::npos);
    CHECK(r.out.find("\"ok\": false") != std::string::npos);
  }
  SECTION("non-root alpha fails the quadratic condition") {
    auto r = run_cli("certify s3_level23_p2 --alpha 1");
    INFO(r.out);
    CHECK(r.code == 2);
    CHECK(r.out.find("condition (2)") != std::string::npos);
  }
}

TEST_CASE("cli stabilize") {
  SECTION("mod 9 keeps the non-unit companion") {
    auto r = run_cli("stabilize --m 2");
    INFO(r.out);
    CHECK(r.code == 0);
    CHECK(r.out.find("alpha = 2") != std::string::npos);
    CHECK(r.out.find("beta = 6") != std::string::npos);
    CHECK(r.out.find("non-unit companion") != std::string::npos);
  }
  SECTION("mod 3 reduction") {
    auto r = run_cli("stabilize --m 1");
    INFO(r.out);
    CHECK(r.code == 0);
    CHECK(r.out.find("alpha = 2") != std::string::npos);
    CHECK(r.out.find("beta = 0") != std::string::npos);
  }
}

TEST_CASE("cli weight1 and doubling") {
  SECTION("weight-one dimension at the Sturm bound") {
    auto r = run_cli("weight1 --b 133 --expected 2");
    INFO(r.out);
    CHECK(r.code == 0);
    CHECK(r.out.find("dimension 2") != std::string::npos);
  }
  SECTION("doubling ring is free and identifies Frobenius") {
    auto r = run_cli("doubling --bound 20");
    INFO(r.out);
    CHECK(r.code == 0);
    CHECK(r.out.find("free on {1, U_p}") != std::string::npos);
    CHECK(r.out.find("Frobenius identification: ok") != std::string::npos);
  }
}

TEST_CASE("cli main-theorem") {
  SECTION("small bound run matches at every prime") {
    auto out = temp_path("cli_mt_small.json");
    auto r = run_cli("main-theorem --bound 10 --out " + out.string());
    INFO(r.out);
    CHECK(r.code == 0);
    CHECK(r.out.find("ell 2 (= p)") != std::string::npos);
    CHECK(r.out.find("0 mismatches over 4 primes") != std::string::npos);
    std::ifstream in(out);
    Json report = Json::parse(in);
    CHECK(report.at("all_match").get<bool>());
    CHECK(report.at("weight_one").at("matches_bundled").get<bool>());
    CHECK(report.at("t_p_redundancy").at("ok").get<bool>());
    CHECK(report.at("certification").at("verdict") == "Unramified");
    std::filesystem::remove(out);
  }
  SECTION("reports are byte-for-byte deterministic") {
    auto a = temp_path("cli_mt_a.json");
    auto b = temp_path("cli_mt_b.json");
    auto ra = run_cli("main-theorem --bound 10 --out " + a.string());
    auto rb = run_cli("main-theorem --bound 10 --out " + b.string());
    CHECK(ra.code == 0);
    CHECK(rb.code == 0);
    CHECK(ra.out == rb.out);
    auto ja = slurp(a);
    CHECK(!ja.empty());
    CHECK(ja == slurp(b));
    std::filesystem::remove(a);
    std::filesystem::remove(b);
  }
}
