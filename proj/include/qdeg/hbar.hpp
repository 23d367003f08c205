#pragma once

#include "qdeg/rational.hpp"

namespace qdeg {

// Dense univariate polynomial in the equivariant parameter hbar.
struct HbarPoly {
  std::vector<Rat> c;  // c[k] is the hbar^k coefficient; no trailing zeros

  HbarPoly() = default;
  explicit HbarPoly(const Rat& constant);
  static HbarPoly monomial(const Rat& coeff, int degree);

  int degree() const { return int(c.size()) - 1; }  // -1 for the zero polynomial
  bool is_zero() const { return c.empty(); }
  void trim();

  bool operator==(const HbarPoly&) const = default;
};

HbarPoly operator+(const HbarPoly& a, const HbarPoly& b);
HbarPoly operator-(const HbarPoly& a, const HbarPoly& b);
HbarPoly operator*(const HbarPoly& a, const HbarPoly& b);
std::pair<HbarPoly, HbarPoly> divmod(const HbarPoly& a, const HbarPoly& b);
HbarPoly poly_gcd(const HbarPoly& a, const HbarPoly& b);  // monic
std::string to_string(const HbarPoly& p);

// Rational function in hbar, always reduced with monic denominator.
struct HbarRational {
  HbarPoly num, den;  // den monic, gcd(num, den) = 1

  HbarRational();  // zero
  explicit HbarRational(const Rat& constant);
  HbarRational(HbarPoly n, HbarPoly d);  // normalizes; throws on zero denominator

  bool is_constant() const { return num.degree() <= 0 && den.degree() == 0; }
  Rat constant_value() const;  // throws unless is_constant()

  bool operator==(const HbarRational&) const = default;
};

HbarRational operator+(const HbarRational& a, const HbarRational& b);
HbarRational operator-(const HbarRational& a, const HbarRational& b);
HbarRational operator*(const HbarRational& a, const HbarRational& b);
HbarRational operator/(const HbarRational& a, const HbarRational& b);
HbarRational inverse(const HbarRational& a);
std::string to_string(const HbarRational& r);

// hbar itself, as a rational function.
HbarRational hbar();

// The fixed-locus data of the single contributing localization graph for the
// P^1-fibre geometry: a degree-d Galois cover with one vertex over 0 and one
// over infinity.
struct LocalizationGraph {
  long edge_degree = 1;  // d >= 1
  int marking_at_zero = 1, marking_at_infinity = 2;

  Int automorphism_order() const { return Int(edge_degree); }  // the Z_d cover
};

HbarRational flag_euler();                   // -1/hbar^2
HbarRational vertex_euler();                 // hbar^2
HbarRational edge_euler(long d);             // (-1)^d d! hbar^d / d^d
HbarRational virtual_normal_euler(const LocalizationGraph& g);  // flag * vertex * edge
HbarRational obstruction_euler(long d);      // (d-1)! hbar^{d-1} / d^{d-1}

// (1/d) * obstruction * insertion / normal; must be hbar-free.
Rat graph_contribution(const LocalizationGraph& g, const HbarRational& insertion);
Rat graph_contribution(const LocalizationGraph& g);  // insertion = hbar

// Coefficient of [H] after pushforward along ev_1: (-1)^{d+1}/d.
Rat pushed_point_class(long d);

}  // namespace qdeg
