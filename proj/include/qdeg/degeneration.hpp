#pragma once

#include "qdeg/fan.hpp"

namespace qdeg {

// A toric double point degeneration: two distinguished rays project to the
// generator of the A^1 fan, all other rays lie in the kernel hyperplane.
struct DoublePointDegeneration {
  Fan total_fan;
  IntMatrix projection;  // 1 x lattice_rank, lattice of W -> lattice of A^1
  int rho1 = -1, rho2 = -1;
  PicardPresentation pic;
};

DoublePointDegeneration recognize_double_point(const Fan& f, const IntMatrix& projection,
                                               const std::optional<std::vector<int>>& pic_basis = {});

// W(P^N, H): the blow-up of P^N x A^1 along H x {0}. Rays are ordered
// (x0, x1, ..., xN, v1, v2); the Pic basis is {[H~_1], [P^N]} with dual
// curve basis {l, f}.
DoublePointDegeneration build_normal_cone_deformation(int n);

// An irreducible component (or more generally an invariant divisor) with its
// induced map on curve classes.
struct ComponentEmbedding {
  int divisor_ray = -1;
  StarFan star;
  IntMatrix pushforward;  // H_2(divisor) -> H_2(ambient), transpose of phi
};

ComponentEmbedding component_embedding(const Fan& f, const PicardPresentation& pic, int ray);
ComponentEmbedding component_embedding(const DoublePointDegeneration& d, int component /* 1 or 2 */);

IntVec pushforward_curve_class(const ComponentEmbedding& e, const IntVec& curve);

struct GhostVerdict {
  bool ghost = false;
  IntVec preimage;  // valid when !ghost
};

// Lattice membership in the image of the pushforward (effectivity is the
// caller's concern).
GhostVerdict is_ghost(const ComponentEmbedding& e, const IntVec& curve);

// Human-readable report for the CLI.
std::string degeneration_report_json(const DoublePointDegeneration& d);

}  // namespace qdeg
