#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qdeg/degeneration.hpp"

using namespace qdeg;

namespace {

Fan p1_fan() {
  Fan f;
  f.lattice_rank = 1;
  f.rays = {{Int(1)}, {Int(-1)}};
  f.max_cones = {{0}, {1}};
  return f;
}

Fan p2_fan() {
  Fan f;
  f.lattice_rank = 2;
  f.rays = {{Int(1), Int(0)}, {Int(0), Int(1)}, {Int(-1), Int(-1)}};
  f.max_cones = {{0, 1}, {1, 2}, {2, 0}};
  return f;
}

Fan p1xp1_fan() {
  Fan f;
  f.lattice_rank = 2;
  f.rays = {{Int(1), Int(0)}, {Int(-1), Int(0)}, {Int(0), Int(1)}, {Int(0), Int(-1)}};
  f.max_cones = {{0, 2}, {2, 1}, {1, 3}, {3, 0}};
  return f;
}

IntVec vec(std::initializer_list<long> xs) { return IntVec(xs.begin(), xs.end()); }

}  // namespace

TEST_CASE("validation of the standard complete fans") {
  for (const Fan& f : {p1_fan(), p2_fan(), p1xp1_fan()}) {
    FanValidation v = validate_fan(f);
    CHECK(v.valid);
    CHECK(v.smooth);
    CHECK(v.complete);
    CHECK(v.summary() == "valid, smooth, complete");
  }
}

TEST_CASE("validation of the blown-up product fan") {
  // W(P^1, infinity): valid and smooth but not complete (it fibres over A^1)
  Fan w = build_normal_cone_deformation(1).total_fan;
  CHECK(w.ray_count() == 4);
  FanValidation v = validate_fan(w);
  CHECK(v.valid);
  CHECK(v.smooth);
  CHECK(!v.complete);
}

TEST_CASE("validation rejects broken input") {
  Fan f = p2_fan();
  f.rays[2] = vec({-2, -1});  // non-smooth cone
  FanValidation v = validate_fan(f);
  CHECK(v.valid);
  CHECK(!v.smooth);

  Fan g = p2_fan();
  g.max_cones.push_back({0, 7});
  CHECK(!validate_fan(g).valid);

  Fan h = p2_fan();
  h.rays[0] = vec({2, 0});  // not primitive
  CHECK(!validate_fan(h).valid);
}

TEST_CASE("fan json round trip") {
  Fan w = build_normal_cone_deformation(2).total_fan;
  Fan back = Fan::from_json(w.to_json());
  CHECK(back.lattice_rank == w.lattice_rank);
  CHECK(back.rays == w.rays);
  CHECK(back.max_cones == w.max_cones);
  CHECK(back.ray_labels == w.ray_labels);
  CHECK(back.to_json() == w.to_json());
}

TEST_CASE("cox weight matrices") {
  IntMatrix cp1 = cox_weight_matrix(p1_fan());
  REQUIRE(cp1.rows() == 1);
  CHECK(cp1.row(0) == vec({1, 1}));

  // W(P^N, H): weights (lambda, mu) with lambda on x0..xN, mu on x0, v1, -v2
  for (int n = 1; n <= 4; ++n) {
    Fan w = build_normal_cone_deformation(n).total_fan;
    IntMatrix cox = cox_weight_matrix(w);
    CHECK((cox * w.ray_matrix()).is_zero());
    IntVec lam(n + 3, Int(0)), mu(n + 3, Int(0));
    for (int i = 0; i <= n; ++i) lam[i] = 1;
    mu[0] = 1;
    mu[n + 1] = 1;
    mu[n + 2] = -1;
    CHECK(row_lattice_equal(cox, IntMatrix::from_rows({lam, mu})));
  }
}

TEST_CASE("picard presentation of the projective spaces") {
  PicardPresentation p = picard_presentation(p2_fan());
  CHECK(p.rank == 1);
  for (int r = 0; r < 3; ++r) CHECK(p.ray_class(r) == vec({1}));

  PicardPresentation q = picard_presentation(p1xp1_fan());
  CHECK(q.rank == 2);
  CHECK(q.ray_class(0) == q.ray_class(1));
  CHECK(q.ray_class(2) == q.ray_class(3));
  CHECK(q.ray_class(0) != q.ray_class(2));
}

TEST_CASE("picard presentation of the degeneration space") {
  for (int n = 1; n <= 5; ++n) {
    DoublePointDegeneration d = build_normal_cone_deformation(n);
    CHECK(d.pic.rank == 2);
    // basis {[H~_1], [P^N]}; all hyperplane strict transforms agree,
    // exceptional = -[P^N], pullback [H~] = [H~_1] + [P^N]
    for (int i = 2; i <= n; ++i) CHECK(d.pic.ray_class(i) == d.pic.ray_class(1));
    CHECK(d.pic.ray_class(1) == vec({1, 0}));
    CHECK(d.pic.ray_class(n + 1) == vec({0, 1}));
    CHECK(d.pic.ray_class(n + 2) == vec({0, -1}));
    CHECK(d.pic.ray_class(0) == vec({1, 1}));

    // cox row space = row space of the class map, transposed
    CHECK(row_lattice_equal(cox_weight_matrix(d.total_fan),
                            d.pic.divisor_class_of_ray.transpose()));

    // duality against the basis rays
    for (int i = 0; i < d.pic.rank; ++i)
      for (int j = 0; j < d.pic.rank; ++j) {
        IntVec e(d.pic.rank, Int(0));
        e[j] = 1;
        CHECK(intersection_number(d.pic.ray_class(d.pic.basis_rays[i]), e) == (i == j ? 1 : 0));
      }

    // character relations: sum_rho <m, rho> [D_rho] = 0
    const Fan& f = d.total_fan;
    for (int k = 0; k < f.lattice_rank; ++k) {
      IntVec acc(d.pic.rank, Int(0));
      for (int r = 0; r < f.ray_count(); ++r)
        for (int c = 0; c < d.pic.rank; ++c) acc[c] += f.rays[r][k] * d.pic.ray_class(r)[c];
      CHECK(acc == IntVec(d.pic.rank, Int(0)));
    }
  }
}

TEST_CASE("intersection numbers in the curve basis {l, f}") {
  CHECK(intersection_number(vec({1, 0}), vec({3, -2})) == 3);   // H~_1 . (d, -e) = d
  CHECK(intersection_number(vec({1, 1}), vec({3, -2})) == 1);   // H~ . (d, -e) = d - e
  CHECK(intersection_number(vec({1, 0}), vec({0, 5})) == 0);
  CHECK(intersection_number(vec({1, 1}), vec({0, 5})) == 5);
  CHECK(intersection_number(vec({0, -1}), vec({4, -1})) == 1);  // E . (d, -e) = e
  CHECK(intersection_number(vec({1, 1}), vec({0, 0})) == 0);
}

TEST_CASE("star fans") {
  Fan p2 = p2_fan();
  PicardPresentation pic = picard_presentation(p2);
  StarFan s = star_fan(p2, 0, pic);
  CHECK(s.star.lattice_rank == 1);
  CHECK(s.star.ray_count() == 2);
  FanValidation v = validate_fan(s.star);
  CHECK(v.valid);
  CHECK(v.complete);
  // phi: O(1) restricts to O(1) on the line
  CHECK(s.pic_restriction.rows() == 1);
  CHECK(s.pic_restriction.at(0, 0) == 1);

  for (int n : {2, 3}) {
    DoublePointDegeneration d = build_normal_cone_deformation(n);
    StarFan x1 = star_fan(d.total_fan, d.rho1, d.pic);
    CHECK(x1.star.ray_count() == n + 1);  // the P^N component
    CHECK(validate_fan(x1.star).complete);
    // phi([H~_1]) = [H_0], phi([P^N]) = -[H_0]
    CHECK(x1.pic_restriction.rows() == 1);
    CHECK(x1.pic_restriction.at(0, 0) == 1);
    CHECK(x1.pic_restriction.at(0, 1) == -1);
  }
}

TEST_CASE("wall curves and the effective cone") {
  Fan p2 = p2_fan();
  PicardPresentation pic = picard_presentation(p2);
  auto walls = wall_curves(p2, pic);
  REQUIRE(walls.size() == 3);
  for (const WallCurve& w : walls) CHECK(w.curve_class == vec({1}));
  CHECK(effective_cone_membership(p2, pic, vec({2})));
  CHECK(!effective_cone_membership(p2, pic, vec({-1})));

  for (int n = 1; n <= 4; ++n) {
    DoublePointDegeneration d = build_normal_cone_deformation(n);
    for (long a = -6; a <= 6; ++a)
      for (long b = -6; b <= 6; ++b) {
        bool expected = a >= 0 && a + b >= 0;  // (d, e) effective iff d >= 0 and d + e >= 0
        CHECK(effective_cone_membership(d.total_fan, d.pic, vec({a, b})) == expected);
      }
  }
  DoublePointDegeneration d2 = build_normal_cone_deformation(2);
  CHECK(!effective_cone_membership(d2.total_fan, d2.pic, vec({1, -2})));
  CHECK(effective_cone_membership(d2.total_fan, d2.pic, vec({0, 0})));
}
