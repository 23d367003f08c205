#pragma once

#include <optional>
#include <string>

#include "qdeg/int_matrix.hpp"

namespace qdeg {

// A fan is given by primitive ray generators and the ray-index sets of its
// maximal cones. Smoothness is required downstream; completeness is only
// reported (the degeneration total spaces are non-compact).
struct Fan {
  int lattice_rank = 0;
  std::vector<IntVec> rays;
  std::vector<std::vector<int>> max_cones;
  std::vector<std::string> ray_labels;  // optional, empty or one per ray

  int ray_count() const { return int(rays.size()); }
  IntMatrix ray_matrix() const;  // one row per ray

  std::string to_json() const;
  static Fan from_json(const std::string& text);
};

struct FanValidation {
  bool valid = false;
  bool smooth = false;
  bool complete = false;
  std::vector<std::string> errors;

  std::string summary() const;
};

FanValidation validate_fan(const Fan& f);

// Character weights of the Cox torus action: an s x (#rays) matrix P with
// P * ray_matrix = 0 and s = #rays - lattice_rank. Throws on torsion class
// group ("non-free class group unsupported").
IntMatrix cox_weight_matrix(const Fan& f);

// Divisor classes of all rays in a unimodular basis of Pic chosen from the
// rays themselves (basis rays get the standard basis vectors).
struct PicardPresentation {
  int rank = 0;
  std::vector<int> basis_rays;
  IntMatrix divisor_class_of_ray;  // one row per ray, length = rank

  IntVec ray_class(int ray) const { return divisor_class_of_ray.row(ray); }
};

PicardPresentation picard_presentation(const Fan& f,
                                       const std::optional<std::vector<int>>& basis_rays = {});

// DivisorClass coordinates live in the Pic basis; CurveClass coordinates in
// the dual basis. The pairing is the plain dot product.
Int intersection_number(const IntVec& divisor, const IntVec& curve);

// The fan of the invariant divisor D_ray together with the restriction map
// phi : Pic(fan) -> Pic(star), expressed in the two presentations' bases.
struct StarFan {
  Fan star;
  PicardPresentation star_pic;
  IntMatrix pic_restriction;        // phi, star rank x ambient rank
  std::vector<int> source_ray;      // star ray index -> ambient ray index
  IntMatrix quotient;               // (rank-1) x rank projection killing the ray
};

StarFan star_fan(const Fan& f, int ray, const PicardPresentation& pic);

// Classes of the invariant curves, one per interior wall, in the dual of the
// Pic basis. Walls on the boundary of the support carry no curve.
struct WallCurve {
  std::vector<int> wall_rays;
  IntVec curve_class;
};

std::vector<WallCurve> wall_curves(const Fan& f, const PicardPresentation& pic);

// Membership in the cone spanned by the invariant-curve classes. Throws
// "no invariant curves" when the fan has no interior walls.
bool effective_cone_membership(const Fan& f, const PicardPresentation& pic, const IntVec& curve);

}  // namespace qdeg
