#pragma once

#include "greencm/real.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace greencm::quadforms {

// Positive definite primitive binary quadratic form a x^2 + b xy + c y^2.
struct Form {
  long a = 1, b = 0, c = 1;
  long disc() const { return b * b - 4 * a * c; }
  bool operator==(const Form& o) const { return a == o.a && b == o.b && c == o.c; }
  bool operator<(const Form& o) const;
  std::string to_string() const;
};

// Validates d < 0, a > 0 and primitivity.
Form make_form(long a, long b, long c);
// Form (a, b, (b^2 - d)/(4a)); throws if c is not integral.
Form form_from_triple(long a, long b, long d);

bool is_discriminant(long d);
bool is_fundamental(long d);

bool is_reduced(const Form& f);
Form reduce(const Form& f);
Form principal_form(long d);
Form inverse(const Form& f);
// Gauss composition (Shanks/Cohen), result reduced.
Form compose(const Form& f, const Form& g);

struct ClassGroup {
  long d = 0;
  std::vector<Form> forms;                // reduced representatives, sorted
  std::vector<std::vector<int>> table;    // table[i][j] = index of forms[i] * forms[j]
  int identity = 0;
  long order() const { return long(forms.size()); }
  int index_of(const Form& f) const;      // f need not be reduced
  int inverse_index(int i) const;
  bool is_cyclic() const;
};

ClassGroup class_group(long d);
// h(d) by a second enumeration that scans a up to sqrt(|d|) and tests
// reducedness form by form.
long class_number_by_scan(long d);

nlohmann::json to_json(const ClassGroup& g);
ClassGroup class_group_from_json(const nlohmann::json& j);

// CM point z = (-b + sqrt(d)) / (2a) of a form.
struct HeegnerPoint {
  Form form;
  long d() const { return form.disc(); }
  Complex z(Precision prec) const;
};

// Galois action sigma on a CM point: [A] -> [A][C]^{-1}.
Form act(const Form& point, const Form& sigma);

struct OrbitPair {
  Form sigma1, sigma2;
};

// Cl(d1) x Cl(d2) for coprime discriminants, one of which is fundamental.
std::vector<OrbitPair> galois_orbit_pairs(long d1, long d2);

}  // namespace greencm::quadforms
