#include "greencm/quadforms.hpp"
#include "greencm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace greencm::quadforms {

namespace {

using i128 = __int128;

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

long mod_pos(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

// g = gcd(a, b) = u a + v b
long ext_gcd(long a, long b, long& u, long& v) {
  long u0 = 1, v0 = 0, u1 = 0, v1 = 1;
  while (b != 0) {
    long q = floor_div(a, b);
    long t = a - q * b;
    a = b;
    b = t;
    t = u0 - q * u1; u0 = u1; u1 = t;
    t = v0 - q * v1; v0 = v1; v1 = t;
  }
  if (a < 0) {
    a = -a;
    u0 = -u0;
    v0 = -v0;
  }
  u = u0;
  v = v0;
  return a;
}

void check_disc(long d) {
  if (d >= 0) throw DomainError("discriminant must be negative, got " + std::to_string(d));
  if (!is_discriminant(d)) throw DomainError("not a discriminant (d mod 4 must be 0 or 1): " + std::to_string(d));
}

}  // namespace

bool Form::operator<(const Form& o) const {
  if (a != o.a) return a < o.a;
  if (b != o.b) return b < o.b;
  return c < o.c;
}

std::string Form::to_string() const {
  return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
}

Form make_form(long a, long b, long c) {
  Form f{a, b, c};
  if (f.disc() >= 0) throw DomainError("form " + f.to_string() + " is not positive definite (d >= 0)");
  if (a <= 0) throw DomainError("form " + f.to_string() + " is negative definite");
  if (std::gcd(std::gcd(a, std::labs(b)), c) != 1)
    throw DomainError("form " + f.to_string() + " is imprimitive");
  return f;
}

Form form_from_triple(long a, long b, long d) {
  check_disc(d);
  if (a <= 0) throw DomainError("Heegner triple needs a > 0");
  long num = b * b - d;
  if (num % (4 * a) != 0)
    throw DomainError("(b^2 - d)/(4a) is not an integer for (" + std::to_string(a) + "," + std::to_string(b) +
                      "," + std::to_string(d) + ")");
  return make_form(a, b, num / (4 * a));
}

bool is_discriminant(long d) {
  long r = mod_pos(d, 4);
  return r == 0 || r == 1;
}

bool is_fundamental(long d) {
  if (!is_discriminant(d) || d == 0 || d == 1) return false;
  auto squarefree = [](long n) {
    n = std::labs(n);
    for (long p = 2; p * p <= n; ++p)
      if (n % (p * p) == 0) return false;
    return true;
  };
  if (mod_pos(d, 4) == 1) return squarefree(d);
  long m = d / 4;
  long r = mod_pos(m, 4);
  return (r == 2 || r == 3) && squarefree(m);
}

bool is_reduced(const Form& f) {
  if (!(std::labs(f.b) <= f.a && f.a <= f.c)) return false;
  if ((std::labs(f.b) == f.a || f.a == f.c) && f.b < 0) return false;
  return true;
}

Form reduce(const Form& input) {
  if (input.disc() >= 0) throw DomainError("reduce: non-negative discriminant");
  if (input.a <= 0) throw DomainError("reduce: form is not positive definite");
  long a = input.a, b = input.b, c = input.c;
  for (;;) {
    // Normalize b into (-a, a].
    if (b <= -a || b > a) {
      long k = floor_div(a - b, 2 * a);
      long nb = b + 2 * k * a;
      c = c + k * b + k * k * a;
      b = nb;
    }
    if (a > c) {
      std::swap(a, c);
      b = -b;
      continue;
    }
    if (a == c && b < 0) b = -b;
    break;
  }
  return Form{a, b, c};
}

Form principal_form(long d) {
  check_disc(d);
  long b = mod_pos(d, 4) == 0 ? 0 : 1;
  return Form{1, b, (b * b - d) / 4};
}

Form inverse(const Form& f) { return reduce(Form{f.a, -f.b, f.c}); }

Form compose(const Form& f1in, const Form& f2in) {
  if (f1in.disc() != f2in.disc()) throw DomainError("compose: discriminants differ");
  long D = f1in.disc();
  Form f1 = f1in, f2 = f2in;
  if (f1.a > f2.a) std::swap(f1, f2);
  long a1 = f1.a, b1 = f1.b, a2 = f2.a, b2 = f2.b, c2 = f2.c;
  long s = (b1 + b2) / 2;
  long n = b2 - s;
  long y1, d;
  if (a2 % a1 == 0) {
    y1 = 0;
    d = a1;
  } else {
    long u, v;
    d = ext_gcd(a2, a1, u, v);
    y1 = u;
  }
  long x2, y2, d1;
  if (s % d == 0) {
    y2 = -1;
    x2 = 0;
    d1 = d;
  } else {
    long u, v;
    d1 = ext_gcd(s, d, u, v);
    x2 = u;
    y2 = -v;
  }
  long v1 = a1 / d1, v2 = a2 / d1;
  i128 rr = (i128(y1) * y2 * n - i128(x2) * c2) % v1;
  if (rr < 0) rr += v1;
  long r = long(rr);
  long b3 = b2 + 2 * v2 * r;
  long a3 = v1 * v2;
  i128 num = i128(b3) * b3 - D;
  if (num % (4 * i128(a3)) != 0) throw DomainError("compose: internal inconsistency");
  long c3 = long(num / (4 * i128(a3)));
  return reduce(Form{a3, b3, c3});
}

int ClassGroup::index_of(const Form& f) const {
  Form r = reduce(f);
  auto it = std::lower_bound(forms.begin(), forms.end(), r);
  if (it == forms.end() || !(*it == r)) throw DomainError("form " + f.to_string() + " not in class group");
  return int(it - forms.begin());
}

int ClassGroup::inverse_index(int i) const { return index_of(inverse(forms[size_t(i)])); }

bool ClassGroup::is_cyclic() const {
  long h = order();
  for (size_t g = 0; g < forms.size(); ++g) {
    int x = int(g);
    long ord = 1;
    while (x != identity) {
      x = table[size_t(x)][g];
      ++ord;
    }
    if (ord == h) return true;
  }
  return h == 1;
}

ClassGroup class_group(long d) {
  check_disc(d);
  ClassGroup g;
  g.d = d;
  long amax = long(std::sqrt(double(-d) / 3.0)) + 1;
  for (long a = 1; a <= amax; ++a) {
    for (long b = -a + 1; b <= a; ++b) {
      if (mod_pos(b - d, 2) != 0) continue;
      long num = b * b - d;
      if (num % (4 * a) != 0) continue;
      long c = num / (4 * a);
      Form f{a, b, c};
      if (!is_reduced(f)) continue;
      if (std::gcd(std::gcd(a, std::labs(b)), c) != 1) continue;
      g.forms.push_back(f);
    }
  }
  std::sort(g.forms.begin(), g.forms.end());
  g.identity = g.index_of(principal_form(d));
  size_t h = g.forms.size();
  g.table.assign(h, std::vector<int>(h, 0));
  for (size_t i = 0; i < h; ++i)
    for (size_t j = 0; j < h; ++j) g.table[i][j] = g.index_of(compose(g.forms[i], g.forms[j]));
  for (size_t i = 0; i < h; ++i)
    for (size_t j = 0; j < h; ++j)
      for (size_t k = 0; k < h; ++k)
        if (g.table[size_t(g.table[i][j])][k] != g.table[i][size_t(g.table[j][k])])
          throw DomainError("class group composition is not associative for d = " + std::to_string(d));
  return g;
}

long class_number_by_scan(long d) {
  check_disc(d);
  long count = 0;
  long amax = long(std::sqrt(double(-d))) + 1;
  for (long a = 1; a <= amax; ++a) {
    for (long b = -a; b <= a; ++b) {
      long num = b * b - d;
      if (num % (4 * a) != 0) continue;
      long c = num / (4 * a);
      if (c < a) continue;
      Form f{a, b, c};
      if (is_reduced(f) && std::gcd(std::gcd(a, std::labs(b)), c) == 1) ++count;
    }
  }
  return count;
}

nlohmann::json to_json(const ClassGroup& g) {
  nlohmann::json forms = nlohmann::json::array(), table = nlohmann::json::array();
  for (const auto& f : g.forms) forms.push_back({f.a, f.b, f.c});
  for (size_t i = 0; i < g.forms.size(); ++i)
    for (size_t j = 0; j < g.forms.size(); ++j) table.push_back({i, j, g.table[i][j]});
  return {{"d", g.d}, {"forms", forms}, {"table", table}};
}

ClassGroup class_group_from_json(const nlohmann::json& j) {
  ClassGroup g;
  g.d = j.at("d").get<long>();
  for (const auto& f : j.at("forms")) g.forms.push_back(make_form(f.at(0), f.at(1), f.at(2)));
  std::sort(g.forms.begin(), g.forms.end());
  size_t h = g.forms.size();
  g.table.assign(h, std::vector<int>(h, -1));
  for (const auto& e : j.at("table")) g.table.at(e.at(0).get<size_t>()).at(e.at(1).get<size_t>()) = e.at(2).get<int>();
  for (const auto& row : g.table)
    for (int v : row)
      if (v < 0 || size_t(v) >= h) throw DomainError("class group JSON: incomplete table");
  g.identity = g.index_of(principal_form(g.d));
  return g;
}

Complex HeegnerPoint::z(Precision prec) const {
  Real two_a(2 * form.a, prec);
  return Complex(Real(-form.b, prec) / two_a, sqrt(Real(-form.disc(), prec)) / two_a);
}

Form act(const Form& point, const Form& sigma) {
  if (point.disc() != sigma.disc()) throw DomainError("act: discriminants differ");
  return compose(point, inverse(sigma));
}

std::vector<OrbitPair> galois_orbit_pairs(long d1, long d2) {
  check_disc(d1);
  check_disc(d2);
  if (std::gcd(std::labs(d1), std::labs(d2)) != 1)
    throw UnsupportedError("discriminants " + std::to_string(d1) + ", " + std::to_string(d2) +
                           " are not coprime: H_0 possibly nontrivial, unsupported");
  if (!is_fundamental(d1) && !is_fundamental(d2))
    throw DomainError("galois_orbit_pairs: one discriminant must be fundamental");
  ClassGroup g1 = class_group(d1), g2 = class_group(d2);
  std::vector<OrbitPair> out;
  for (const auto& s1 : g1.forms)
    for (const auto& s2 : g2.forms) out.push_back(OrbitPair{s1, s2});
  return out;
}

}  // namespace greencm::quadforms
