#include "greencm/cli.hpp"
#include "greencm/errors.hpp"
#include "greencm/greeneval.hpp"
#include "greencm/lattices.hpp"
#include "greencm/recognition.hpp"

#include "CLI11.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

namespace greencm::cli {

namespace fs = std::filesystem;

namespace {

void check_range(const std::string& name, long v, long lo, long hi) {
  if (v < lo || v > hi)
    throw DomainError(name + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " +
                      std::to_string(v));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

// Digits of `value` that survive the tail estimate.
int valid_digits(const Real& value, const Real& tail, Precision prec) {
  int cap = int(double(prec) * 0.30103) - 2;
  if (tail.is_zero()) return cap;
  double rel = tail.to_double();
  double mag = std::max(std::fabs(value.to_double()), 1e-300);
  if (!(rel > 0) || !std::isfinite(rel)) return cap;
  int d = int(std::floor(std::log10(mag) - std::log10(rel)));
  return std::clamp(d, 1, cap);
}

nlohmann::json green_json(const green::GreenValue& g, const RunConfig& cfg) {
  int digits = valid_digits(g.value, g.tail_estimate, cfg.prec);
  return {{"value", g.value.to_string(digits)},
          {"valid_digits", digits},
          {"tail", g.tail_estimate.to_string(6)},
          {"terms", g.terms_summed},
          {"B_used", g.B_used},
          {"method", g.method},
          {"z1", cfg.z1},
          {"z2", cfg.z2},
          {"s", cfg.s},
          {"prec", cfg.prec}};
}

green::GreenParams green_params(const RunConfig& cfg) {
  green::GreenParams gp;
  gp.prec = cfg.prec;
  gp.B = cfg.B;
  gp.tail_policy = cfg.tail == "bound" ? green::TailPolicy::bound : green::TailPolicy::heuristic;
  gp.method = cfg.method == "lattice"   ? green::Method::lattice
              : cfg.method == "fourier" ? green::Method::fourier
                                        : green::Method::automatic;
  return gp;
}

lattices::IntegralLattice builtin_lattice(const std::string& name) {
  if (name == "E8") return lattices::e8();
  if (name == "Leech") return lattices::leech();
  throw DomainError("unknown lattice '" + name + "' (built-ins: E8, Leech)");
}

nlohmann::json error_json(const Error& e) {
  nlohmann::json j{{"kind", to_string(e.kind())}, {"message", e.what()}};
  if (auto* t = dynamic_cast<const TruncationError*>(&e)) j["required_order"] = t->required_order();
  return {{"error", j}};
}

nlohmann::json selftest() {
  nlohmann::json checks = nlohmann::json::array();
  bool all = true;
  auto record = [&](const std::string& name, bool ok, const std::string& detail) {
    checks.push_back({{"name", name}, {"passed", ok}, {"detail", detail}});
    all = all && ok;
  };
  {
    const Precision p = 192;
    green::GreenParams gp;
    gp.prec = p;
    Complex i(Real(0L, p), Real(1L, p));
    Complex rho(Real(-1L, p) / 2L, sqrt(Real(3L, p)) / 2L);
    Real g = green::green_core(i, rho, 2, gp).value * sqrt(Real(12L, p));
    Real closed = log(sqrt(Real(3L, p)) + 2L) * -48L;
    double err = abs(g - closed).to_double();
    record("G_2(i, rho) closed form", err < 1e-45, "abs error " + std::to_string(err));
  }
  {
    auto t = lattices::theta_series_enumerated(lattices::e8(), 8);
    auto e4 = qseries::standard_form(qseries::StandardForm::E4, 8);
    bool ok = true;
    for (long n = 0; n < 8; ++n) ok = ok && t.coeff(n) == e4.coeff(n);
    record("theta_E8 = E4", ok, "order 8");
  }
  {
    const Precision p = 128;
    Real phi = (sqrt(Real(5L, p)) + 1L) / 2L;
    auto rel = recognition::integer_relation({Real(1L, p), phi, phi * phi}, p, mpz_class(100));
    bool ok = rel.found && rel.coeffs == std::vector<mpz_class>{1, 1, -1};
    record("golden ratio relation", ok, ok ? "(1, 1, -1)" : "not recovered");
  }
  {
    auto g = quadforms::class_group(-23);
    record("class number h(-23)", g.order() == 3 && quadforms::class_number_by_scan(-23) == 3, "3");
  }
  return {{"checks", checks}, {"passed", all}};
}

}  // namespace

void RunConfig::validate() const {
  check_range("--prec", prec, 32, kMaxPrecision);
  check_range("--B", B, 1, kMaxB);
  check_range("--order", order, 1, kMaxOrder);
  check_range("--s", s, 2, 64);
  check_range("--m", m, 1, 1000);
  check_range("--r", r, 1, kMaxR);
  check_range("--f-index", f_index, 1, kMaxFIndex);
  check_range("--factor-bound", factor_bound, 2, kMaxFactorBound);
  check_range("--kappa-bound", kappa_bound, 1, kMaxKappa);
  if (method != "auto" && method != "lattice" && method != "fourier")
    throw DomainError("--method must be auto, lattice or fourier");
  if (tail != "heuristic" && tail != "bound") throw DomainError("--tail must be heuristic or bound");
}

nlohmann::json RunConfig::key() const {
  nlohmann::json j{{"command", command}, {"prec", prec}};
  if (command == "green" || command == "hecke") {
    j.update({{"z1", z1}, {"z2", z2}, {"s", s}, {"B", B}, {"method", method}, {"tail", tail}});
    if (command == "hecke") j["m"] = m;
  } else if (command == "cm-value" || command == "recognize" || command == "orbit-check") {
    j.update({{"d1", d1}, {"d2", d2}, {"r", r}, {"f_index", f_index}, {"z1", z1}, {"z2", z2}});
    if (command != "cm-value") j.update({{"factor_bound", factor_bound}, {"kappa_bound", kappa_bound}});
    if (!value.empty()) j["value"] = value;
  } else if (command == "pou") {
    j.update({{"lattices", lattices}, {"exponents", exponents}, {"order", order}});
  }
  return j;
}

quadforms::Form parse_point(const std::string& token) {
  if (token == "i") return quadforms::make_form(1, 0, 1);
  if (token == "rho") return quadforms::make_form(1, 1, 1);
  static const std::regex multiple(R"(^([1-9][0-9]*)i$)");
  static const std::regex triple(R"(^\(\s*(-?[0-9]+)\s*,\s*(-?[0-9]+)\s*,\s*(-?[0-9]+)\s*\)$)");
  std::smatch m;
  if (std::regex_match(token, m, multiple)) {
    long k = std::stol(m[1]);
    return quadforms::make_form(1, 0, k * k);
  }
  if (std::regex_match(token, m, triple))
    return quadforms::form_from_triple(std::stol(m[1]), std::stol(m[2]), std::stol(m[3]));
  throw DomainError("point token '" + token + "' is not i, rho, <k>i or (a,b,d)");
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

Cache::Cache(std::string dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

namespace {

class FileLock {
 public:
  FileLock(const std::string& path, int op) : fd_(::open(path.c_str(), O_RDWR | O_CREAT, 0644)) {
    if (fd_ >= 0) ::flock(fd_, op);
  }
  ~FileLock() {
    if (fd_ >= 0) {
      ::flock(fd_, LOCK_UN);
      ::close(fd_);
    }
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_;
};

std::string hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

std::optional<std::string> Cache::get(const std::string& key) const {
  FileLock lock(dir_ + "/.lock", LOCK_SH);
  std::ifstream in(dir_ + "/" + hex(fnv1a(key)) + ".json");
  if (!in) return std::nullopt;
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.contains("key") || j["key"] != key) return std::nullopt;
  return j["value"].get<std::string>();
}

void Cache::put(const std::string& key, const std::string& value) const {
  FileLock lock(dir_ + "/.lock", LOCK_EX);
  std::string path = dir_ + "/" + hex(fnv1a(key)) + ".json";
  std::string tmp = path + ".tmp" + std::to_string(::getpid());
  {
    std::ofstream o(tmp);
    o << nlohmann::json{{"key", key}, {"value", value}}.dump();
  }
  fs::rename(tmp, path);
}

std::pair<nlohmann::json, int> execute(const RunConfig& given) {
  RunConfig cfg = given;
  bool green_like = cfg.command == "green" || cfg.command == "hecke";
  if (cfg.z1.empty()) cfg.z1 = green_like ? "i" : "principal";
  if (cfg.z2.empty()) cfg.z2 = green_like ? "rho" : "principal";
  cfg.validate();
  const Precision p = cfg.prec;
  const std::string& c = cfg.command;
  if (c == "selftest") {
    auto j = selftest();
    return {j, j["passed"].get<bool>() ? kOk : kError};
  }
  if (c == "green" || c == "hecke") {
    auto f1 = parse_point(cfg.z1), f2 = parse_point(cfg.z2);
    Complex z1 = quadforms::HeegnerPoint{f1}.z(p + 16), z2 = quadforms::HeegnerPoint{f2}.z(p + 16);
    auto gp = green_params(cfg);
    auto g = c == "green" ? green::green_core(z1, z2, cfg.s, gp) : green::green_hecke(z1, z2, cfg.s, cfg.m, gp);
    auto j = green_json(g, cfg);
    if (c == "hecke") j["m"] = cfg.m;
    return {j, kOk};
  }
  auto forms = [&]() {
    quadforms::Form f1 = cfg.z1 == "principal" ? quadforms::principal_form(cfg.d1) : parse_point(cfg.z1);
    quadforms::Form f2 = cfg.z2 == "principal" ? quadforms::principal_form(cfg.d2) : parse_point(cfg.z2);
    if (f1.disc() != cfg.d1 || f2.disc() != cfg.d2)
      throw DomainError("point discriminants " + std::to_string(f1.disc()) + ", " + std::to_string(f2.disc()) +
                        " do not match --d1 " + std::to_string(cfg.d1) + ", --d2 " + std::to_string(cfg.d2));
    return std::make_pair(f1, f2);
  };
  if (c == "cm-value") {
    auto [f1, f2] = forms();
    return {recognition::to_json(recognition::cm_value(f1, f2, cfg.r, cfg.f_index, p)), kOk};
  }
  if (c == "recognize") {
    auto [f1, f2] = forms();
    recognition::LogAlgebraicCandidate cand;
    nlohmann::json extra;
    if (!cfg.value.empty()) {
      Real x(cfg.value, p);
      // a literal is only good to its printed digits, so the 2p recomputation cannot shrink the residual
      cand = recognition::recognize_log_algebraic([&](Precision q) { return x.with_precision(q); },
                                                  recognition::gz_factor_base(cfg.d1, cfg.d2, cfg.factor_bound),
                                                  cfg.kappa_bound, p);
      extra = "value supplied as a literal: no independent recomputation at 2p bits";
    } else {
      cand = recognition::recognize_cm_value(f1, f2, cfg.r, cfg.f_index, cfg.factor_bound, cfg.kappa_bound, p);
    }
    auto j = recognition::to_json(cand);
    j.update({{"d1", cfg.d1}, {"d2", cfg.d2}, {"r", cfg.r}, {"f_index", cfg.f_index},
              {"form1", f1.to_string()}, {"form2", f2.to_string()}});
    if (!extra.is_null()) j["source"] = extra;
    return {j, cand.found && cand.relation.verified_at_double_precision ? kOk : kNotFound};
  }
  if (c == "orbit-check") {
    auto rep = recognition::orbit_average_check(cfg.d1, cfg.d2, cfg.r, cfg.f_index, cfg.factor_bound,
                                                cfg.kappa_bound, p);
    auto j = recognition::to_json(rep);
    bool ok = rep.recognition.found && rep.additivity_error <= rep.additivity_tolerance;
    return {j, ok ? kOk : kNotFound};
  }
  if (c == "pou") {
    if (!cfg.input.empty()) {
      std::ifstream in(cfg.input);
      if (!in) throw DomainError("cannot read certificate '" + cfg.input + "'");
      auto cert = lattices::certificate_from_json(nlohmann::json::parse(in));
      bool ok = lattices::verify_certificate(cert);
      return {{{"certificate", cfg.input}, {"verified", ok}, {"verified_order", cert.verified_order}},
              ok ? kOk : kNotFound};
    }
    auto names = split(cfg.lattices, ',');
    if (names.empty()) throw DomainError("--lattices needs at least one name");
    std::vector<long> ex(names.size(), 1);
    if (!cfg.exponents.empty()) {
      auto parts = split(cfg.exponents, ',');
      if (parts.size() != names.size()) throw DomainError("--exponents must match --lattices");
      for (size_t i = 0; i < parts.size(); ++i) ex[i] = std::stol(parts[i]);
    }
    std::vector<lattices::PouInput> inputs;
    long need = cfg.order;
    for (size_t i = 0; i < names.size(); ++i) need = std::max(need, cfg.order + 64 * ex[i] + 32);
    for (size_t i = 0; i < names.size(); ++i)
      inputs.push_back({names[i], lattices::theta_series(builtin_lattice(names[i]), need), ex[i]});
    auto cert = lattices::partition_of_unity(inputs, cfg.order);
    return {lattices::to_json(cert), kOk};
  }
  throw DomainError("unknown command '" + c + "'");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  bool no_cache = false;
  CLI::App app{"Higher Green functions at CM points: evaluation, recognition and theta certificates", "greencm"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--cache", cfg.cache_dir, "Cache directory (default: $GREENCM_CACHE)");
  app.add_flag("--no-cache", no_cache, "Bypass the cache");
  app.add_option("--out", cfg.out, "Write the JSON report to this file");

  auto add_prec = [&](CLI::App* s) { s->add_option("--prec", cfg.prec, "Working precision in bits"); };
  auto add_points = [&](CLI::App* s, const std::string& d1, const std::string& d2) {
    s->add_option("--z1", cfg.z1, "First point: i, rho, <k>i or (a,b,d) [default " + d1 + "]");
    s->add_option("--z2", cfg.z2, "Second point [default " + d2 + "]");
  };
  auto add_green = [&](CLI::App* s) {
    add_prec(s);
    add_points(s, "i", "rho");
    s->add_option("--s", cfg.s, "Spectral parameter s >= 2");
    s->add_option("--B", cfg.B, "Matrix-entry bound for lattice sums");
    s->add_option("--method", cfg.method, "auto, lattice or fourier");
    s->add_option("--tail", cfg.tail, "heuristic or bound");
  };
  auto add_cm = [&](CLI::App* s) {
    add_prec(s);
    add_points(s, "principal", "principal");
    s->add_option("--d1", cfg.d1, "First discriminant")->required();
    s->add_option("--d2", cfg.d2, "Second discriminant")->required();
    s->add_option("--r", cfg.r, "r >= 1; G_{r+1,f}");
    s->add_option("--f-index", cfg.f_index, "f = q^{-m} + O(q) in M^!_{-2r}");
  };
  auto add_search = [&](CLI::App* s) {
    s->add_option("--factor-bound", cfg.factor_bound, "Largest prime in the factor base");
    s->add_option("--kappa-bound", cfg.kappa_bound, "Largest kappa tried");
  };

  auto* green = app.add_subcommand("green", "Evaluate G_s(z1, z2)");
  add_green(green);
  auto* hecke = app.add_subcommand("hecke", "Evaluate G^m_s(z1, z2)");
  add_green(hecke);
  hecke->add_option("--m", cfg.m, "Hecke index");
  auto* cm = app.add_subcommand("cm-value", "(d1 d2)^{r/2} G_{r+1,f} at CM points");
  add_cm(cm);
  auto* rec = app.add_subcommand("recognize", "Recognize a CM value as (1/kappa) log|alpha|");
  add_cm(rec);
  add_search(rec);
  rec->add_option("--value", cfg.value, "Recognize this decimal literal instead of recomputing");
  rec->add_option("--input", cfg.input, "cm-value JSON report to recognize");
  auto* orbit = app.add_subcommand("orbit-check", "Averaged rationality over the Galois orbit");
  add_cm(orbit);
  add_search(orbit);
  auto* pou = app.add_subcommand("pou", "Partition of unity certificate for theta series");
  pou->add_option("--lattices", cfg.lattices, "Comma-separated built-in lattices");
  pou->add_option("--exponents", cfg.exponents, "Comma-separated exponents e_i");
  pou->add_option("--order", cfg.order, "Verified order N");
  pou->add_option("--verify", cfg.input, "Re-verify a stored certificate");
  app.add_subcommand("selftest", "Quick consistency checks");

  // recognize --input fills the CM parameters from a cm-value report
  for (auto* s : {rec})
    s->get_option("--d1")->required(false), s->get_option("--d2")->required(false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kError;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  bool green_like = cfg.command == "green" || cfg.command == "hecke";
  if (cfg.z1.empty()) cfg.z1 = green_like ? "i" : "principal";
  if (cfg.z2.empty()) cfg.z2 = green_like ? "rho" : "principal";

  nlohmann::json report;
  int code = kOk;
  try {
    if (cfg.command == "recognize") {
      if (!cfg.input.empty()) {
        std::ifstream in(cfg.input);
        if (!in) throw DomainError("cannot read '" + cfg.input + "'");
        nlohmann::json v = nlohmann::json::parse(in);
        cfg.d1 = v.at("d1").get<long>();
        cfg.d2 = v.at("d2").get<long>();
        cfg.r = v.at("r").get<int>();
        cfg.f_index = v.at("f_index").get<long>();
        cfg.prec = v.at("precision").get<long>();
        auto triple = [](const std::string& form) {
          auto parts = split(form.substr(1, form.size() - 2), ',');
          long a = std::stol(parts[0]), b = std::stol(parts[1]), c = std::stol(parts[2]);
          return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(b * b - 4 * a * c) + ")";
        };
        cfg.z1 = triple(v.at("form1").get<std::string>());
        cfg.z2 = triple(v.at("form2").get<std::string>());
      } else if (cfg.d1 == 0 || cfg.d2 == 0) {
        throw DomainError("recognize needs --d1 and --d2, or --input");
      }
    }
    std::string dir = cfg.cache_dir;
    if (dir.empty())
      if (const char* env = std::getenv("GREENCM_CACHE")) dir = env;
    bool cacheable = !no_cache && !dir.empty() && cfg.command != "selftest" &&
                     !(cfg.command == "pou" && !cfg.input.empty());
    std::string key = cfg.key().dump();
    std::optional<std::string> hit;
    if (cacheable) hit = Cache(dir).get(key);
    if (hit) {
      nlohmann::json stored = nlohmann::json::parse(*hit);
      report = stored["report"];
      code = stored["exit"].get<int>();
    } else {
      std::tie(report, code) = execute(cfg);
      if (cacheable) Cache(dir).put(key, nlohmann::json{{"report", report}, {"exit", code}}.dump());
    }
  } catch (const Error& e) {
    report = error_json(e);
    code = kError;
  } catch (const nlohmann::json::exception& e) {
    report = {{"error", {{"kind", "domain"}, {"message", std::string("malformed JSON input: ") + e.what()}}}};
    code = kError;
  } catch (const std::invalid_argument& e) {
    report = {{"error", {{"kind", "domain"}, {"message", std::string("malformed number: ") + e.what()}}}};
    code = kError;
  }

  std::string text = report.dump(2) + "\n";
  if (!cfg.out.empty()) {
    std::ofstream o(cfg.out);
    if (!o) {
      err << "cannot write " << cfg.out << "\n";
      return kError;
    }
    o << text;
  } else {
    out << text;
  }
  return code;
}

}  // namespace greencm::cli
