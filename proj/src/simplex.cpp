#include "qdeg/simplex.hpp"

#include <stdexcept>

namespace qdeg {

namespace {

// Dense simplex tableau with Bland's rule (guarantees termination).
// Columns 0..n-1 are structural, n..n+m-1 artificial; the last column is b.
class Tableau {
 public:
  Tableau(const LinearProgram& lp) : m_(lp.m), n_(lp.n) {
    width_ = n_ + m_ + 1;
    t_.assign(size_t(m_ + 1) * width_, Rat(0));
    basis_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      bool flip = lp.b[i] < 0;
      for (int j = 0; j < n_; ++j) at(i, j) = flip ? -lp.at(i, j) : lp.at(i, j);
      at(i, n_ + i) = 1;
      rhs(i) = flip ? -lp.b[i] : lp.b[i];
      basis_[i] = n_ + i;
    }
  }

  // Phase 1: minimise the sum of artificials. Returns true iff feasible.
  bool phase1() {
    for (int j = 0; j < width_; ++j) obj(j) = 0;
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < width_; ++j) obj(j) -= at(i, j);
    for (int i = 0; i < m_; ++i) obj(n_ + i) = 0;
    run(n_ + m_);
    if (objval() != 0) return false;
    // Pivot any artificial still in the basis out (or drop a redundant row).
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      int piv = -1;
      for (int j = 0; j < n_; ++j)
        if (at(i, j) != 0) { piv = j; break; }
      if (piv >= 0) pivot(i, piv);
    }
    return true;
  }

  // Phase 2 with objective c (maximisation). Assumes phase1 succeeded.
  Rat phase2(const std::vector<Rat>& c) {
    for (int j = 0; j < width_; ++j) obj(j) = 0;
    for (int j = 0; j < n_; ++j) obj(j) = -c[j];
    // Restore reduced costs w.r.t. the current basis.
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] >= n_ || obj(basis_[i]) == 0) continue;
      Rat f = obj(basis_[i]);
      for (int j = 0; j < width_; ++j) obj(j) -= f * at(i, j);
    }
    run(n_);
    return objval();
  }

  std::vector<Rat> solution() const {
    std::vector<Rat> x(n_, Rat(0));
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) x[basis_[i]] = rhs(i);
    return x;
  }

 private:
  Rat& at(int i, int j) { return t_[size_t(i) * width_ + j]; }
  const Rat& at(int i, int j) const { return t_[size_t(i) * width_ + j]; }
  Rat& rhs(int i) { return t_[size_t(i) * width_ + width_ - 1]; }
  const Rat& rhs(int i) const { return t_[size_t(i) * width_ + width_ - 1]; }
  Rat& obj(int j) { return t_[size_t(m_) * width_ + j]; }
  Rat objval() const { return t_[size_t(m_) * width_ + width_ - 1]; }

  void pivot(int pr, int pc) {
    Rat p = at(pr, pc);
    for (int j = 0; j < width_; ++j) at(pr, j) /= p;
    for (int i = 0; i <= m_; ++i) {
      if (i == pr || at(i, pc) == 0) continue;
      Rat f = at(i, pc);
      for (int j = 0; j < width_; ++j) at(i, j) -= f * at(pr, j);
    }
    basis_[pr] = pc;
  }

  void run(int ncols) {
    for (;;) {
      int pc = -1;
      for (int j = 0; j < ncols; ++j)
        if (obj(j) < 0) { pc = j; break; }  // Bland: lowest index
      if (pc < 0) return;
      int pr = -1;
      for (int i = 0; i < m_; ++i) {
        if (at(i, pc) <= 0) continue;
        if (pr < 0) { pr = i; continue; }
        Rat cur = rhs(i) / at(i, pc), best = rhs(pr) / at(pr, pc);
        if (cur < best || (cur == best && basis_[i] < basis_[pr])) pr = i;
      }
      if (pr < 0) throw std::runtime_error("linear program unbounded");
      pivot(pr, pc);
    }
  }

  int m_, n_, width_;
  std::vector<Rat> t_;
  std::vector<int> basis_;
};

}  // namespace

std::optional<std::vector<Rat>> lp_feasible_point(const LinearProgram& lp) {
  if (lp.m == 0) return std::vector<Rat>(lp.n, Rat(0));
  Tableau t(lp);
  if (!t.phase1()) return std::nullopt;
  return t.solution();
}

std::optional<Rat> lp_maximize(const LinearProgram& lp, const std::vector<Rat>& c) {
  if (lp.m == 0) throw std::invalid_argument("unconstrained maximisation");
  Tableau t(lp);
  if (!t.phase1()) return std::nullopt;
  return t.phase2(c);
}

}  // namespace qdeg
