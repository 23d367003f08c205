#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace qdeg {

// Arbitrary-precision integers and rationals. mpq_class keeps the
// denominator positive and the fraction reduced, which is exactly the
// invariant we need for exact coefficients.
using Int = mpz_class;
using Rat = mpq_class;

using IntVec = std::vector<Int>;

inline Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

// Exact fraction rendering: "p/q", or just "p" when q = 1.
inline std::string to_string(const Rat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline std::string to_string(const Int& n) { return n.get_str(); }

inline Int dot(const IntVec& a, const IntVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch in pairing");
  Int s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Int lcm_list(const std::vector<Int>& ws) {
  if (ws.empty()) throw std::invalid_argument("empty weight list");
  Int l = 1;
  for (const Int& w : ws) {
    if (w < 1) throw std::invalid_argument("weights must be positive");
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), w.get_mpz_t());
  }
  return l;
}

}  // namespace qdeg
