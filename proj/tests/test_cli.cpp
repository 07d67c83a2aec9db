#include "doctest.h"

#include "greencm/cli.hpp"
#include "greencm/errors.hpp"
#include "greencm/greeneval.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

using namespace greencm;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out, err;
  nlohmann::json json() const { return nlohmann::json::parse(out); }
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "greencm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("greencm_cli_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("point tokens") {
  CHECK(cli::parse_point("i") == quadforms::make_form(1, 0, 1));
  CHECK(cli::parse_point("rho") == quadforms::make_form(1, 1, 1));
  CHECK(cli::parse_point("2i") == quadforms::make_form(1, 0, 4));
  CHECK(cli::parse_point("(2,1,-23)") == quadforms::make_form(2, 1, 3));
  CHECK(cli::parse_point("( 1, 1, -3 )").disc() == -3);
  CHECK_THROWS_AS(cli::parse_point("0.5i"), DomainError);
  CHECK_THROWS_AS(cli::parse_point("(2,1,-22)"), DomainError);
  CHECK_THROWS_AS(cli::parse_point("1+i"), DomainError);
}

TEST_CASE("fnv1a reference values") {
  CHECK(cli::fnv1a("") == 0xcbf29ce484222325ull);
  CHECK(cli::fnv1a("a") == 0xaf63dc4c8601ec8cull);
  CHECK(cli::fnv1a("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("green command") {
  Outcome o = invoke({"green", "--z1", "i", "--z2", "2i", "--s", "2", "--prec", "128", "--no-cache"});
  REQUIRE(o.code == cli::kOk);
  nlohmann::json j = o.json();
  CHECK(j.contains("value"));
  CHECK(j.contains("tail"));
  CHECK(j.contains("terms"));
  green::GreenParams gp;
  gp.prec = 160;
  Complex i(Real(0L, 160), Real(1L, 160)), two_i(Real(0L, 160), Real(2L, 160));
  Real direct = green::green_core(i, two_i, 2, gp).value;
  Real printed(j["value"].get<std::string>(), 160);
  CHECK(abs(direct - printed).to_double() < 1e-30);
  CHECK(j["valid_digits"].get<int>() >= 30);

  Outcome h = invoke({"hecke", "--z1", "i", "--z2", "rho", "--s", "3", "--m", "2", "--prec", "96", "--no-cache"});
  CHECK(h.code == cli::kOk);
  CHECK(h.json()["m"] == 2);
}

TEST_CASE("errors and usage") {
  Outcome sing = invoke({"green", "--z1", "i", "--z2", "i", "--no-cache"});
  CHECK(sing.code == cli::kError);
  CHECK(sing.json()["error"]["kind"] == "singularity");

  Outcome range = invoke({"green", "--prec", "8", "--no-cache"});
  CHECK(range.code == cli::kError);
  CHECK(range.json()["error"]["kind"] == "domain");

  Outcome bad_flag = invoke({"green", "--frobnicate"});
  CHECK(bad_flag.code == cli::kError);
  CHECK(bad_flag.out.empty());
  CHECK_FALSE(bad_flag.err.empty());

  Outcome none = invoke({});
  CHECK(none.code == cli::kError);

  Outcome mismatch = invoke({"cm-value", "--d1", "-3", "--d2", "-4", "--z1", "i", "--no-cache"});
  CHECK(mismatch.code == cli::kError);
  CHECK(mismatch.json()["error"]["message"].get<std::string>().find("discriminant") != std::string::npos);
}

TEST_CASE("cm-value then recognize") {
  fs::path dir = scratch("cm");
  fs::create_directories(dir);
  std::string value_file = (dir / "value.json").string();
  Outcome v = invoke({"cm-value", "--d1", "-3", "--d2", "-4", "--r", "1", "--f-index", "1", "--prec", "256",
                      "--out", value_file, "--no-cache"});
  REQUIRE(v.code == cli::kOk);
  CHECK(v.out.empty());
  Outcome r = invoke({"recognize", "--input", value_file, "--no-cache"});
  REQUIRE(r.code == cli::kOk);
  nlohmann::json j = r.json();
  CHECK(j["verified"] == true);
  CHECK(j["kappa"] == 1);
  CHECK(j["precision"] == 256);

  std::ifstream in(value_file);
  std::string literal = nlohmann::json::parse(in)["value"];
  Outcome lit = invoke({"recognize", "--d1", "-3", "--d2", "-4", "--value", literal, "--prec", "240", "--no-cache"});
  CHECK(lit.code == cli::kNotFound);
  CHECK(lit.json()["verified"] == false);
  fs::remove_all(dir);
}

TEST_CASE("deterministic output and cache") {
  fs::path dir = scratch("cache");
  std::vector<std::string> args{"green", "--z1", "(1,1,-7)", "--z2", "i", "--s", "3", "--prec", "96",
                                "--cache", dir.string()};
  Outcome a = invoke(args);
  REQUIRE(a.code == cli::kOk);
  CHECK(fs::exists(dir));
  size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir)) files += e.path().extension() == ".json";
  CHECK(files == 1);
  Outcome b = invoke(args);
  CHECK(a.out == b.out);
  fs::remove_all(dir);
  Outcome c = invoke(args);
  CHECK(a.out == c.out);
  std::vector<std::string> plain(args.begin(), args.end() - 2);
  plain.push_back("--no-cache");
  CHECK(invoke(plain).out == a.out);

  // concurrent invocations sharing one cache directory
  fs::remove_all(dir);
  std::vector<std::string> outs(4);
  std::vector<std::thread> pool;
  for (int t = 0; t < 4; ++t) pool.emplace_back([&, t] { outs[t] = invoke(args).out; });
  for (auto& th : pool) th.join();
  for (const auto& o : outs) CHECK(o == a.out);
  fs::remove_all(dir);
}

TEST_CASE("environment cache directory") {
  fs::path dir = scratch("env");
  ::setenv("GREENCM_CACHE", dir.string().c_str(), 1);
  Outcome a = invoke({"green", "--s", "2", "--prec", "64"});
  CHECK(a.code == cli::kOk);
  CHECK(fs::exists(dir));
  ::unsetenv("GREENCM_CACHE");
  fs::remove_all(dir);
}

TEST_CASE("pou certificates") {
  fs::path dir = scratch("pou");
  fs::create_directories(dir);
  std::string cert = (dir / "cert.json").string();
  Outcome o = invoke({"pou", "--lattices", "E8,Leech", "--order", "50", "--out", cert, "--no-cache"});
  REQUIRE(o.code == cli::kOk);
  Outcome v = invoke({"pou", "--verify", cert});
  CHECK(v.code == cli::kOk);
  CHECK(v.json()["verified"] == true);

  std::ifstream in(cert);
  nlohmann::json j = nlohmann::json::parse(in);
  j["g"][1]["coeffs"][0][1] = "7";
  std::string bad = (dir / "bad.json").string();
  std::ofstream(bad) << j.dump();
  Outcome t = invoke({"pou", "--verify", bad});
  CHECK(t.code == cli::kNotFound);
  CHECK(t.json()["verified"] == false);

  Outcome single = invoke({"pou", "--lattices", "E8", "--order", "10", "--no-cache"});
  CHECK(single.code == cli::kError);
  CHECK(single.json()["error"]["message"].get<std::string>().find("j^4") != std::string::npos);

  Outcome ex = invoke({"pou", "--lattices", "E8,Leech", "--exponents", "2,1", "--order", "20", "--no-cache"});
  CHECK(ex.code == cli::kOk);
  fs::remove_all(dir);
}

TEST_CASE("selftest") {
  Outcome o = invoke({"selftest"});
  CHECK(o.code == cli::kOk);
  CHECK(o.json()["passed"] == true);
  CHECK(o.json()["checks"].size() >= 4);
}

}  // TEST_SUITE
