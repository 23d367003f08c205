#include "qdeg/int_matrix.hpp"

#include <algorithm>
#include <sstream>

namespace qdeg {

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVec>& rows) {
  if (rows.empty()) return IntMatrix(0, 0);
  IntMatrix m(int(rows.size()), int(rows[0].size()));
  for (int i = 0; i < m.rows(); ++i) {
    if (int(rows[i].size()) != m.cols()) throw std::invalid_argument("ragged row list");
    for (int j = 0; j < m.cols(); ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

IntVec IntMatrix::row(int i) const {
  IntVec r(cols_);
  for (int j = 0; j < cols_; ++j) r[j] = at(i, j);
  return r;
}

IntVec IntMatrix::col(int j) const {
  IntVec c(rows_);
  for (int i = 0; i < rows_; ++i) c[i] = at(i, j);
  return c;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

IntMatrix IntMatrix::operator*(const IntMatrix& other) const {
  if (cols_ != other.rows_) throw std::invalid_argument("matrix product dimension mismatch");
  IntMatrix p(rows_, other.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Int& a = at(i, k);
      if (a == 0) continue;
      for (int j = 0; j < other.cols_; ++j) p.at(i, j) += a * other.at(k, j);
    }
  return p;
}

IntVec IntMatrix::apply(const IntVec& v) const {
  if (int(v.size()) != cols_) throw std::invalid_argument("matrix-vector dimension mismatch");
  IntVec r(rows_, Int(0));
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r[i] += at(i, j) * v[j];
  return r;
}

bool IntMatrix::is_zero() const {
  return std::all_of(e_.begin(), e_.end(), [](const Int& x) { return x == 0; });
}

Int IntMatrix::det() const {
  if (rows_ != cols_) throw std::invalid_argument("determinant of non-square matrix");
  int n = rows_;
  if (n == 0) return 1;
  IntMatrix a = *this;
  Int prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a.at(k, k) == 0) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (a.at(i, k) != 0) { p = i; break; }
      if (p < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(p, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        Int num = a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j);
        mpz_divexact(a.at(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
    prev = a.at(k, k);
  }
  return sign * a.at(n - 1, n - 1);
}

int IntMatrix::rank() const { return smith_normal_form(*this).diag_rank(); }

std::string IntMatrix::to_string() const {
  std::ostringstream os;
  for (int i = 0; i < rows_; ++i) {
    os << (i == 0 ? "[" : " ");
    for (int j = 0; j < cols_; ++j) os << at(i, j) << (j + 1 < cols_ ? " " : "");
    os << (i + 1 < rows_ ? "\n" : "]");
  }
  return os.str();
}

int SmithDecomposition::diag_rank() const {
  int r = 0;
  int n = std::min(d.rows(), d.cols());
  for (int i = 0; i < n; ++i)
    if (d.at(i, i) != 0) ++r;
  return r;
}

SmithDecomposition smith_normal_form(const IntMatrix& m) {
  const int r = m.rows(), c = m.cols();
  IntMatrix a = m;
  IntMatrix u = IntMatrix::identity(r), u_inv = IntMatrix::identity(r);
  IntMatrix v = IntMatrix::identity(c), v_inv = IntMatrix::identity(c);

  // Row op a <- L a  =>  u <- u L^{-1}, u_inv <- L u_inv.
  auto row_swap = [&](int i, int j) {
    if (i == j) return;
    for (int k = 0; k < c; ++k) std::swap(a.at(i, k), a.at(j, k));
    for (int k = 0; k < r; ++k) std::swap(u.at(k, i), u.at(k, j));
    for (int k = 0; k < r; ++k) std::swap(u_inv.at(i, k), u_inv.at(j, k));
  };
  auto row_addmul = [&](int i, int j, const Int& q) {  // row i += q * row j
    for (int k = 0; k < c; ++k) a.at(i, k) += q * a.at(j, k);
    for (int k = 0; k < r; ++k) u.at(k, j) -= q * u.at(k, i);
    for (int k = 0; k < r; ++k) u_inv.at(i, k) += q * u_inv.at(j, k);
  };
  auto row_negate = [&](int i) {
    for (int k = 0; k < c; ++k) a.at(i, k) = -a.at(i, k);
    for (int k = 0; k < r; ++k) u.at(k, i) = -u.at(k, i);
    for (int k = 0; k < r; ++k) u_inv.at(i, k) = -u_inv.at(i, k);
  };
  // Col op a <- a R  =>  v <- R^{-1} v, v_inv <- v_inv R.
  auto col_swap = [&](int i, int j) {
    if (i == j) return;
    for (int k = 0; k < r; ++k) std::swap(a.at(k, i), a.at(k, j));
    for (int k = 0; k < c; ++k) std::swap(v.at(i, k), v.at(j, k));
    for (int k = 0; k < c; ++k) std::swap(v_inv.at(k, i), v_inv.at(k, j));
  };
  auto col_addmul = [&](int i, int j, const Int& q) {  // col i += q * col j
    for (int k = 0; k < r; ++k) a.at(k, i) += q * a.at(k, j);
    for (int k = 0; k < c; ++k) v.at(j, k) -= q * v.at(i, k);
    for (int k = 0; k < c; ++k) v_inv.at(k, i) += q * v_inv.at(k, j);
  };

  const int n = std::min(r, c);
  for (int t = 0; t < n; ++t) {
    for (;;) {
      // Pivot: smallest nonzero |entry| in the trailing block, ties by (row, col).
      int pi = -1, pj = -1;
      for (int i = t; i < r; ++i)
        for (int j = t; j < c; ++j) {
          if (a.at(i, j) == 0) continue;
          if (pi < 0 || mpz_cmpabs(a.at(i, j).get_mpz_t(), a.at(pi, pj).get_mpz_t()) < 0) {
            pi = i;
            pj = j;
          }
        }
      if (pi < 0) break;  // trailing block is zero
      row_swap(t, pi);
      col_swap(t, pj);

      bool dirty = false;
      for (int i = t + 1; i < r; ++i) {
        if (a.at(i, t) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), a.at(i, t).get_mpz_t(), a.at(t, t).get_mpz_t());
        row_addmul(i, t, -q);
        if (a.at(i, t) != 0) dirty = true;
      }
      for (int j = t + 1; j < c; ++j) {
        if (a.at(t, j) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), a.at(t, j).get_mpz_t(), a.at(t, t).get_mpz_t());
        col_addmul(j, t, -q);
        if (a.at(t, j) != 0) dirty = true;
      }
      if (dirty) continue;

      // Row and column are clear; enforce divisibility of the trailing block.
      bool fixed = true;
      for (int i = t + 1; i < r && fixed; ++i)
        for (int j = t + 1; j < c && fixed; ++j)
          if (a.at(i, j) % a.at(t, t) != 0) {
            row_addmul(t, i, Int(1));
            fixed = false;
          }
      if (fixed) break;
    }
    if (t < r && t < c && a.at(t, t) < 0) row_negate(t);
    if (t < r && t < c && a.at(t, t) == 0) break;
  }

  return SmithDecomposition{u, a, v, u_inv, v_inv};
}

Cokernel cokernel(const IntMatrix& m) {
  SmithDecomposition snf = smith_normal_form(m);
  const int rows = m.rows();
  const int rk = snf.diag_rank();

  Cokernel ck;
  ck.free_rank = rows - rk;
  for (int i = 0; i < rk; ++i)
    if (snf.d.at(i, i) > 1) ck.torsion.push_back(snf.d.at(i, i));

  // Free part of the cokernel: the rows of U^{-1} past the diagonal rank.
  ck.projection = IntMatrix(ck.free_rank, rows);
  for (int i = 0; i < ck.free_rank; ++i)
    for (int j = 0; j < rows; ++j) ck.projection.at(i, j) = snf.u_inv.at(rk + i, j);
  return ck;
}

std::optional<IntVec> solve_integer(const IntMatrix& m, const IntVec& target) {
  if (int(target.size()) != m.rows()) throw std::invalid_argument("dimension mismatch");
  SmithDecomposition snf = smith_normal_form(m);
  IntVec t = snf.u_inv.apply(target);
  const int rk = snf.diag_rank();
  IntVec y(m.cols(), Int(0));
  for (int i = 0; i < m.rows(); ++i) {
    if (i < rk) {
      if (t[i] % snf.d.at(i, i) != 0) return std::nullopt;
      if (i < m.cols()) y[i] = t[i] / snf.d.at(i, i);
    } else if (t[i] != 0) {
      return std::nullopt;
    }
  }
  return snf.v_inv.apply(y);
}

bool row_lattice_contained(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.cols()) return false;
  IntMatrix bt = b.transpose();
  for (int i = 0; i < a.rows(); ++i)
    if (!solve_integer(bt, a.row(i))) return false;
  return true;
}

bool row_lattice_equal(const IntMatrix& a, const IntMatrix& b) {
  return row_lattice_contained(a, b) && row_lattice_contained(b, a);
}

Int content(const IntVec& v) {
  Int g = 0;
  for (const Int& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  return g;
}

}  // namespace qdeg
