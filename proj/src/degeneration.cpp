#include "qdeg/degeneration.hpp"

#include <json.hpp>

namespace qdeg {

DoublePointDegeneration recognize_double_point(const Fan& f, const IntMatrix& projection,
                                               const std::optional<std::vector<int>>& pic_basis) {
  FanValidation val = validate_fan(f);
  if (!val.valid) throw std::runtime_error("fan invalid: " + val.summary());
  if (!val.smooth) throw std::runtime_error("fan not smooth");
  if (projection.rows() != 1 || projection.cols() != f.lattice_rank)
    throw std::invalid_argument("projection must map the fan lattice onto a rank-1 lattice");

  std::vector<int> special;
  for (int i = 0; i < f.ray_count(); ++i) {
    Int v = dot(projection.row(0), f.rays[i]);
    if (v == 0) continue;
    if (v != 1) throw std::runtime_error("non-reduced or non-dominant fibre structure");
    special.push_back(i);
  }
  if (special.size() != 2)
    throw std::runtime_error("not a double point degeneration (" + std::to_string(special.size()) +
                             " special rays)");

  DoublePointDegeneration d;
  d.total_fan = f;
  d.projection = projection;
  d.rho1 = special[0];
  d.rho2 = special[1];
  d.pic = picard_presentation(f, pic_basis);
  return d;
}

DoublePointDegeneration build_normal_cone_deformation(int n) {
  if (n < 1) throw std::invalid_argument("dimension must be >= 1");
  const int rank = n + 1;

  Fan f;
  f.lattice_rank = rank;
  // P^N rays u_0 = -(e_1+...+e_N), u_i = e_i lifted to the hyperplane, then
  // v1 (the A^1 factor, i.e. the strict transform of P^N x {0}) and the
  // exceptional ray v2 = u_0 + v1.
  IntVec u0(rank, Int(0));
  for (int j = 0; j < n; ++j) u0[j] = -1;
  f.rays.push_back(u0);
  f.ray_labels.push_back("x0");
  for (int i = 1; i <= n; ++i) {
    IntVec ui(rank, Int(0));
    ui[i - 1] = 1;
    f.rays.push_back(ui);
    f.ray_labels.push_back("x" + std::to_string(i));
  }
  IntVec v1(rank, Int(0));
  v1[n] = 1;
  f.rays.push_back(v1);
  f.ray_labels.push_back("v1");
  IntVec v2 = u0;
  v2[n] = 1;
  f.rays.push_back(v2);
  f.ray_labels.push_back("v2");

  const int iv1 = n + 1, iv2 = n + 2;
  // Cone <x_j : j != 0> + v1 survives the star subdivision of <x0, v1>;
  // every cone containing both x0 and v1 is replaced by its two halves.
  {
    std::vector<int> cone;
    for (int j = 1; j <= n; ++j) cone.push_back(j);
    cone.push_back(iv1);
    f.max_cones.push_back(cone);
  }
  for (int i = 1; i <= n; ++i) {
    std::vector<int> half1;  // x0 replaced by v2
    for (int j = 0; j <= n; ++j)
      if (j != i && j != 0) half1.push_back(j);
    half1.push_back(iv1);
    half1.push_back(iv2);
    f.max_cones.push_back(half1);

    std::vector<int> half2;  // v1 replaced by v2
    for (int j = 0; j <= n; ++j)
      if (j != i) half2.push_back(j);
    half2.push_back(iv2);
    f.max_cones.push_back(half2);
  }

  IntMatrix proj(1, rank);
  proj.at(0, rank - 1) = 1;

  // Basis {[H~_1], [P^N]} = classes of the rays x1 and v1.
  return recognize_double_point(f, proj, std::vector<int>{1, iv1});
}

ComponentEmbedding component_embedding(const Fan& f, const PicardPresentation& pic, int ray) {
  ComponentEmbedding e;
  e.divisor_ray = ray;
  e.star = star_fan(f, ray, pic);
  e.pushforward = e.star.pic_restriction.transpose();
  return e;
}

ComponentEmbedding component_embedding(const DoublePointDegeneration& d, int component) {
  if (component != 1 && component != 2) throw std::invalid_argument("component must be 1 or 2");
  return component_embedding(d.total_fan, d.pic, component == 1 ? d.rho1 : d.rho2);
}

IntVec pushforward_curve_class(const ComponentEmbedding& e, const IntVec& curve) {
  return e.pushforward.apply(curve);
}

GhostVerdict is_ghost(const ComponentEmbedding& e, const IntVec& curve) {
  GhostVerdict v;
  auto pre = solve_integer(e.pushforward, curve);
  if (pre) {
    v.ghost = false;
    v.preimage = *pre;
  } else {
    v.ghost = true;
  }
  return v;
}

std::string degeneration_report_json(const DoublePointDegeneration& d) {
  nlohmann::json j;
  j["rho1"] = d.rho1;
  j["rho2"] = d.rho2;
  j["pic_rank"] = d.pic.rank;

  // When the first component's curve lattice has corank 1 inside H_2(W) we
  // can print the ghost criterion as a linear inequality.
  ComponentEmbedding e1 = component_embedding(d, 1);
  if (d.pic.rank == 2 && e1.pushforward.cols() == 1) {
    Int a = e1.pushforward.at(0, 0), b = e1.pushforward.at(1, 0);
    if (a == 1 && b == -1) {
      j["ghost_criterion"] = "(d,e) is ghost for X1 iff d != -e";
    } else {
      j["ghost_criterion"] = "(d,e) is ghost for X1 iff (d,e) is not a multiple of (" +
                             a.get_str() + "," + b.get_str() + ")";
    }
  }
  return j.dump();
}

}  // namespace qdeg
