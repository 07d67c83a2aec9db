#pragma once

#include "greencm/quadforms.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace greencm::cli {

// Exit codes.
constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kNotFound = 2;

// Desk-scale ceilings for validated parameters.
constexpr long kMaxPrecision = 8192;
constexpr long kMaxB = 4096;
constexpr long kMaxOrder = 2000;
constexpr long kMaxKappa = 1000000;
constexpr long kMaxFactorBound = 1000000;
constexpr int kMaxR = 12;
constexpr long kMaxFIndex = 50;

struct RunConfig {
  std::string command;
  long prec = 128;
  long B = 32;
  long order = 50;
  std::string z1, z2;   // empty: command default (i and rho, or the principal forms)
  int s = 2;
  long m = 1;
  long d1 = 0, d2 = 0;
  int r = 1;
  long f_index = 1;
  long factor_bound = 1000;
  long kappa_bound = 10000;
  std::string method = "auto";
  std::string tail = "heuristic";
  std::string lattices = "E8,Leech";
  std::string exponents;
  std::string value;     // recognize: literal value instead of recomputation
  std::string input;     // recognize: cm-value JSON; pou: certificate to re-verify
  std::string cache_dir;
  std::string out;

  void validate() const;
  // Inputs that determine the output; the cache key.
  nlohmann::json key() const;
};

// Exact point tokens: "i", "rho", "<k>i" for k >= 1, or a Heegner triple "(a,b,d)".
quadforms::Form parse_point(const std::string& token);

// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& s);

// Directory of JSON results keyed by RunConfig::key, guarded by an advisory lock.
class Cache {
 public:
  explicit Cache(std::string dir);
  std::optional<std::string> get(const std::string& key) const;
  void put(const std::string& key, const std::string& value) const;

 private:
  std::string dir_;
};

// Runs one command and returns its exit code; the report goes to `out` (or to
// the --out file), usage text and diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Executes a validated configuration, returning the JSON report and exit code.
std::pair<nlohmann::json, int> execute(const RunConfig& cfg);

}  // namespace greencm::cli
