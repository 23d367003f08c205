#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <random>

#include "qdeg/int_matrix.hpp"

using namespace qdeg;

namespace {

IntMatrix mat(const std::vector<std::vector<long>>& rows) {
  std::vector<IntVec> r;
  for (const auto& row : rows) r.emplace_back(row.begin(), row.end());
  return IntMatrix::from_rows(r);
}

void check_smith(const IntMatrix& m) {
  SmithDecomposition s = smith_normal_form(m);
  CHECK(s.u * s.d * s.v == m);
  CHECK(s.u * s.u_inv == IntMatrix::identity(m.rows()));
  CHECK(s.v * s.v_inv == IntMatrix::identity(m.cols()));
  CHECK(abs(s.u.det()) == 1);
  CHECK(abs(s.v.det()) == 1);
  int n = std::min(m.rows(), m.cols());
  for (int i = 0; i < s.d.rows(); ++i)
    for (int j = 0; j < s.d.cols(); ++j)
      if (i != j) CHECK(s.d.at(i, j) == 0);
  for (int i = 0; i < n; ++i) CHECK(s.d.at(i, i) >= 0);
  for (int i = 0; i + 1 < n; ++i) {
    if (s.d.at(i + 1, i + 1) != 0) {
      CHECK(s.d.at(i, i) != 0);  // zeros only at the tail of the chain
      CHECK(s.d.at(i + 1, i + 1) % s.d.at(i, i) == 0);
    }
  }
  CHECK(s.diag_rank() == m.rank());
}

}  // namespace

TEST_CASE("smith normal form on pinned examples") {
  SmithDecomposition id = smith_normal_form(IntMatrix::identity(2));
  CHECK(id.d == IntMatrix::identity(2));
  CHECK(id.u == IntMatrix::identity(2));
  CHECK(id.v == IntMatrix::identity(2));

  SmithDecomposition s = smith_normal_form(mat({{2, 0}, {0, 3}}));
  CHECK(s.d.at(0, 0) == 1);
  CHECK(s.d.at(1, 1) == 6);
  check_smith(mat({{2, 0}, {0, 3}}));

  // ray matrix of the projective plane: rank 2, free cokernel Z
  IntMatrix p2 = mat({{1, 0}, {0, 1}, {-1, -1}});
  SmithDecomposition sp = smith_normal_form(p2);
  CHECK(sp.diag_rank() == 2);
  CHECK(sp.d.at(0, 0) == 1);
  CHECK(sp.d.at(1, 1) == 1);
  Cokernel ck = cokernel(p2);
  CHECK(ck.free_rank == 1);
  CHECK(ck.torsion.empty());
  CHECK((ck.projection * p2).is_zero());
}

TEST_CASE("cokernel basics") {
  Cokernel z = cokernel(IntMatrix(2, 2));
  CHECK(z.free_rank == 2);
  CHECK(z.torsion.empty());

  Cokernel t = cokernel(mat({{2, 0}, {0, 1}}));
  CHECK(t.free_rank == 0);
  REQUIRE(t.torsion.size() == 1);
  CHECK(t.torsion[0] == 2);
}

TEST_CASE("smith + cokernel property suite, 1000 random matrices") {
  auto start = std::chrono::steady_clock::now();
  std::mt19937 rng(20260824);
  std::uniform_int_distribution<int> dim(1, 5), entry(-5, 5);
  for (int trial = 0; trial < 1000; ++trial) {
    IntMatrix m(dim(rng), dim(rng));
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) m.at(i, j) = entry(rng);
    check_smith(m);
    Cokernel ck = cokernel(m);
    CHECK(ck.free_rank == m.rows() - m.rank());  // rank-nullity on the cokernel
    CHECK((ck.projection * m).is_zero());

    // solve_integer: m * x is always solvable with a correct witness
    IntVec x(m.cols());
    for (auto& c : x) c = entry(rng);
    IntVec target = m.apply(x);
    auto w = solve_integer(m, target);
    REQUIRE(w.has_value());
    CHECK(m.apply(*w) == target);
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - start)
                .count();
  CHECK(ms < 5000);
}

TEST_CASE("solve_integer detects unsolvable targets") {
  IntMatrix m = mat({{2, 0}, {0, 2}});
  CHECK(!solve_integer(m, {Int(1), Int(0)}).has_value());
  auto w = solve_integer(m, {Int(4), Int(-6)});
  REQUIRE(w.has_value());
  CHECK((*w)[0] == 2);
  CHECK((*w)[1] == -3);
}

TEST_CASE("row lattice comparisons") {
  IntMatrix a = mat({{1, 1, 0, 0}, {1, 0, 1, -1}});
  IntMatrix b = mat({{1, 0, 1, -1}, {0, 1, -1, 1}});
  CHECK(row_lattice_equal(a, b));
  CHECK(row_lattice_contained(mat({{2, 2, 0, 0}}), a));
  CHECK(!row_lattice_contained(a, mat({{2, 2, 0, 0}})));
}

TEST_CASE("content and lcm_list") {
  CHECK(content({Int(4), Int(-6), Int(10)}) == 2);
  CHECK(content({Int(0), Int(0)}) == 0);
  CHECK(lcm_list({Int(5)}) == 5);
  CHECK(lcm_list({Int(2), Int(3)}) == 6);
  CHECK(lcm_list({Int(4), Int(6)}) == 12);
  CHECK_THROWS_WITH(lcm_list({}), "empty weight list");
  CHECK_THROWS_WITH(lcm_list({Int(0)}), "weights must be positive");
}

TEST_CASE("rational field identities") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> num(-20, 20), den(1, 20);
  auto rnd = [&] { return make_rat(Int(num(rng)), Int(den(rng))); };
  for (int i = 0; i < 200; ++i) {
    Rat a = rnd(), b = rnd(), c = rnd();
    CHECK(a + b == b + a);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * (b + c) == a * b + a * c);
    if (b != 0) CHECK((a * b) / b == a);
    if (a != 0) CHECK(a / a == 1);
  }
  CHECK(to_string(make_rat(Int(-6), Int(4))) == "-3/2");
  CHECK(to_string(make_rat(Int(8), Int(4))) == "2");
  CHECK_THROWS(make_rat(Int(1), Int(0)));
}
