#pragma once

#include "qdeg/degeneration.hpp"

namespace qdeg {

// A degeneration together with everything the degeneration formula needs:
// the two component embeddings, the component divisor classes and the fibre
// class of the X2-bundle.
struct DegenerationGeometry {
  DoublePointDegeneration dpd;
  ComponentEmbedding emb1, emb2;
  IntVec x1_class, x2_class;  // divisor classes of the rays rho1, rho2
  IntVec fiber_class;

  bool is_effective(const IntVec& curve) const;
  const ComponentEmbedding& embedding(int side) const { return side == 1 ? emb1 : emb2; }
};

DegenerationGeometry make_geometry(const DoublePointDegeneration& d);

struct GraphVertex {
  int side = 1;  // 1 or 2
  int genus = 0;
  std::vector<int> markings;  // sorted labels from {1..n}
  IntVec degree;              // curve class of W

  auto operator<=>(const GraphVertex&) const = default;
};

struct GraphEdge {
  int a = 0, b = 0;  // vertex indices, a on side 1
  long weight = 1;

  auto operator<=>(const GraphEdge&) const = default;
};

struct DecoratedBipartiteGraph {
  std::vector<GraphVertex> vertices;
  std::vector<GraphEdge> edges;

  bool operator==(const DecoratedBipartiteGraph&) const = default;
};

// Structural invariants: connected, bipartite edges, marking partition,
// genus condition, degree sum, weight balancing, effectivity.
bool graph_valid(const DecoratedBipartiteGraph& g, const DegenerationGeometry& geom,
                 const IntVec& beta, int genus, int markings);

// Canonical key (isomorphism invariant); also the output order.
std::string canonical_key(const DecoratedBipartiteGraph& g);

std::string graph_to_json(const DecoratedBipartiteGraph& g);
DecoratedBipartiteGraph graph_from_json(const std::string& text);

struct EnumerationRequest {
  int genus = 0;
  int markings = 0;
  IntVec beta;
  std::optional<long> degree_box;  // per-coordinate |.| bound; derived when absent
  std::vector<int> marking_sides;  // per-marking forced side (0 = free); may be empty
};

// Complete list of decorated bipartite graphs, canonically sorted. The
// parallel driver splits over degree-splitting tasks; the serial one is the
// reference implementation used for testing.
std::vector<DecoratedBipartiteGraph> enumerate_graphs(const DegenerationGeometry& geom,
                                                      const EnumerationRequest& req);
std::vector<DecoratedBipartiteGraph> enumerate_graphs_serial(const DegenerationGeometry& geom,
                                                             const EnumerationRequest& req);

// Order of the decoration-preserving automorphism group (markings are
// labelled, so automorphisms fix them pointwise; parallel edges of equal
// weight may be permuted).
Int automorphism_order(const DecoratedBipartiteGraph& g);

// lcm of the edge weights (1 for edgeless graphs, by convention).
Int multiplicity(const DecoratedBipartiteGraph& g);

// prod w_E / lcm(w_E).
Rat etale_degree(const DecoratedBipartiteGraph& g);

enum class VanishReason {
  unstable_vertex,
  multi_edge_X1_vertex,
  non_fiber_X2_class,
  ghost_graph,
  no_X2_vertex,
  survivor,
};

std::string reason_name(VanishReason r);

struct GraphVerdict {
  bool contributes = false;
  VanishReason reason = VanishReason::survivor;
  Rat coefficient;  // m_Gamma / |Aut|, survivors only
};

struct FilterOptions {
  bool insertion_side_2 = true;
  // Individual filters can be switched off to demonstrate they are load-bearing.
  bool enable_unstable = true;
  bool enable_multi_edge = true;
  bool enable_non_fiber = true;
  bool enable_ghost = true;
};

GraphVerdict apply_filters(const DecoratedBipartiteGraph& g, const DegenerationGeometry& geom,
                           const FilterOptions& opts = {});

namespace detail {
// Test hook: generate every labelled assignment and rely on the canonical
// dedupe alone, to cross-check the symmetry-reduced generation.
extern bool disable_symmetry_pruning;
}  // namespace detail

}  // namespace qdeg
