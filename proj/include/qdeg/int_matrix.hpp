#pragma once

#include <optional>

#include "qdeg/rational.hpp"

namespace qdeg {

// Dense integer matrix, row-major.
class IntMatrix {
 public:
  IntMatrix() : rows_(0), cols_(0) {}
  IntMatrix(int rows, int cols) : rows_(rows), cols_(cols), e_(size_t(rows) * cols, Int(0)) {}

  static IntMatrix identity(int n);
  static IntMatrix from_rows(const std::vector<IntVec>& rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Int& at(int i, int j) { return e_[size_t(i) * cols_ + j]; }
  const Int& at(int i, int j) const { return e_[size_t(i) * cols_ + j]; }

  IntVec row(int i) const;
  IntVec col(int j) const;

  IntMatrix transpose() const;
  IntMatrix operator*(const IntMatrix& other) const;
  IntVec apply(const IntVec& v) const;  // matrix * column vector

  bool operator==(const IntMatrix& other) const = default;
  bool is_zero() const;

  // Determinant by fraction-free (Bareiss) elimination; square only.
  Int det() const;
  int rank() const;

  std::string to_string() const;

 private:
  int rows_, cols_;
  std::vector<Int> e_;
};

// U * D * V = input, U and V unimodular, D diagonal with a divisibility
// chain d1 | d2 | ... of nonnegative entries. Uinv/Vinv are tracked during
// the elimination so cokernels and preimages come for free.
struct SmithDecomposition {
  IntMatrix u, d, v;
  IntMatrix u_inv, v_inv;

  int diag_rank() const;  // number of nonzero diagonal entries
};

// Pivot rule: smallest nonzero absolute value, ties broken by lowest
// (row, col). Deterministic by construction.
SmithDecomposition smith_normal_form(const IntMatrix& m);

// Cokernel of m : Z^cols -> Z^rows. projection has free_rank rows and
// satisfies projection * m = 0.
struct Cokernel {
  int free_rank = 0;
  std::vector<Int> torsion;  // invariant factors > 1
  IntMatrix projection;
};

Cokernel cokernel(const IntMatrix& m);

// Does m * x = target have an integer solution? Returns a witness if so.
std::optional<IntVec> solve_integer(const IntMatrix& m, const IntVec& target);

// Z-lattices spanned by the rows: a sublattice of b?
bool row_lattice_contained(const IntMatrix& a, const IntMatrix& b);
bool row_lattice_equal(const IntMatrix& a, const IntMatrix& b);

// gcd of a vector's entries (nonnegative; 0 for the zero vector).
Int content(const IntVec& v);

}  // namespace qdeg
