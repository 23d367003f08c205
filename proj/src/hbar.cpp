#include "qdeg/hbar.hpp"

#include <sstream>
#include <stdexcept>

namespace qdeg {

HbarPoly::HbarPoly(const Rat& constant) {
  if (constant != 0) c.push_back(constant);
}

HbarPoly HbarPoly::monomial(const Rat& coeff, int degree) {
  HbarPoly p;
  if (coeff != 0) {
    p.c.assign(degree + 1, Rat(0));
    p.c[degree] = coeff;
  }
  return p;
}

void HbarPoly::trim() {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

HbarPoly operator+(const HbarPoly& a, const HbarPoly& b) {
  HbarPoly r;
  r.c.resize(std::max(a.c.size(), b.c.size()), Rat(0));
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
  r.trim();
  return r;
}

HbarPoly operator-(const HbarPoly& a, const HbarPoly& b) {
  HbarPoly r;
  r.c.resize(std::max(a.c.size(), b.c.size()), Rat(0));
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
  for (size_t i = 0; i < b.c.size(); ++i) r.c[i] -= b.c[i];
  r.trim();
  return r;
}

HbarPoly operator*(const HbarPoly& a, const HbarPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  HbarPoly r;
  r.c.assign(a.c.size() + b.c.size() - 1, Rat(0));
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  r.trim();
  return r;
}

std::pair<HbarPoly, HbarPoly> divmod(const HbarPoly& a, const HbarPoly& b) {
  if (b.is_zero()) throw std::invalid_argument("polynomial division by zero");
  HbarPoly q, r = a;
  if (r.degree() >= b.degree()) q.c.assign(r.degree() - b.degree() + 1, Rat(0));
  while (!r.is_zero() && r.degree() >= b.degree()) {
    int k = r.degree() - b.degree();
    Rat f = r.c.back() / b.c.back();
    q.c[k] = f;
    for (size_t i = 0; i < b.c.size(); ++i) r.c[k + i] -= f * b.c[i];
    r.trim();
  }
  q.trim();
  return {q, r};
}

HbarPoly poly_gcd(const HbarPoly& a, const HbarPoly& b) {
  HbarPoly x = a, y = b;
  while (!y.is_zero()) {
    HbarPoly r = divmod(x, y).second;
    x = y;
    y = r;
  }
  if (!x.is_zero()) {
    Rat lead = x.c.back();
    for (Rat& ci : x.c) ci /= lead;
  }
  return x;
}

std::string to_string(const HbarPoly& p) {
  if (p.is_zero()) return "0";
  std::string s;
  for (int k = p.degree(); k >= 0; --k) {
    const Rat& ck = p.c[k];
    if (ck == 0) continue;
    if (!s.empty()) s += ck > 0 ? " + " : " - ";
    else if (ck < 0) s += "-";
    Rat a = abs(ck);
    std::string coeff = to_string(a);
    if (k == 0) {
      s += coeff;
    } else {
      if (a != 1) s += coeff + "*";
      s += k == 1 ? "h" : "h^" + std::to_string(k);
    }
  }
  return s;
}

HbarRational::HbarRational() : den(HbarPoly(Rat(1))) {}

HbarRational::HbarRational(const Rat& constant) : num(constant), den(HbarPoly(Rat(1))) {}

HbarRational::HbarRational(HbarPoly n, HbarPoly d) {
  if (d.is_zero()) throw std::invalid_argument("zero denominator");
  if (n.is_zero()) {
    num = HbarPoly();
    den = HbarPoly(Rat(1));
    return;
  }
  HbarPoly g = poly_gcd(n, d);
  n = divmod(n, g).first;
  d = divmod(d, g).first;
  Rat lead = d.c.back();
  for (Rat& ci : d.c) ci /= lead;
  for (Rat& ci : n.c) ci /= lead;
  num = n;
  den = d;
}

Rat HbarRational::constant_value() const {
  if (!is_constant()) throw std::runtime_error("not a constant");
  return num.is_zero() ? Rat(0) : num.c[0];
}

HbarRational operator+(const HbarRational& a, const HbarRational& b) {
  return {a.num * b.den + b.num * a.den, a.den * b.den};
}

HbarRational operator-(const HbarRational& a, const HbarRational& b) {
  return {a.num * b.den - b.num * a.den, a.den * b.den};
}

HbarRational operator*(const HbarRational& a, const HbarRational& b) {
  return {a.num * b.num, a.den * b.den};
}

HbarRational operator/(const HbarRational& a, const HbarRational& b) {
  if (b.num.is_zero()) throw std::invalid_argument("division by zero");
  return {a.num * b.den, a.den * b.num};
}

HbarRational inverse(const HbarRational& a) { return HbarRational(Rat(1)) / a; }

std::string to_string(const HbarRational& r) {
  if (r.den.degree() == 0) return to_string(r.num);
  return "(" + to_string(r.num) + ")/(" + to_string(r.den) + ")";
}

HbarRational hbar() { return {HbarPoly::monomial(Rat(1), 1), HbarPoly(Rat(1))}; }

HbarRational flag_euler() {
  return {HbarPoly(Rat(-1)), HbarPoly::monomial(Rat(1), 2)};
}

HbarRational vertex_euler() {
  return {HbarPoly::monomial(Rat(1), 2), HbarPoly(Rat(1))};
}

HbarRational edge_euler(long d) {
  if (d < 1) throw std::invalid_argument("edge degree must be >= 1");
  Int fact;
  mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(d));
  Int pow;
  mpz_ui_pow_ui(pow.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(d));
  Rat coeff(fact, pow);
  coeff.canonicalize();
  if (d % 2 == 1) coeff = -coeff;
  return {HbarPoly::monomial(coeff, int(d)), HbarPoly(Rat(1))};
}

HbarRational virtual_normal_euler(const LocalizationGraph& g) {
  return flag_euler() * vertex_euler() * edge_euler(g.edge_degree);
}

HbarRational obstruction_euler(long d) {
  if (d < 1) throw std::invalid_argument("edge degree must be >= 1");
  Int fact;
  mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(d - 1));
  Int pow;
  mpz_ui_pow_ui(pow.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(d - 1));
  Rat coeff(fact, pow);
  coeff.canonicalize();
  return {HbarPoly::monomial(coeff, int(d - 1)), HbarPoly(Rat(1))};
}

Rat graph_contribution(const LocalizationGraph& g, const HbarRational& insertion) {
  HbarRational cover(Rat(Int(1), Int(g.automorphism_order())));
  HbarRational value = cover * obstruction_euler(g.edge_degree) * insertion /
                       virtual_normal_euler(g);
  if (!value.is_constant())
    throw std::runtime_error("localization result not equivariantly closed");
  return value.constant_value();
}

Rat graph_contribution(const LocalizationGraph& g) { return graph_contribution(g, hbar()); }

Rat pushed_point_class(long d) {
  if (d < 1) throw std::invalid_argument("edge degree must be >= 1");
  return graph_contribution(LocalizationGraph{d});
}

}  // namespace qdeg
