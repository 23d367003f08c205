#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "qdeg/correspondence.hpp"

using namespace qdeg;

namespace {

IntVec vec(std::initializer_list<long> xs) { return IntVec(xs.begin(), xs.end()); }

EnumerationRequest degen_request(long d) {
  EnumerationRequest req;
  req.genus = 0;
  req.markings = 2;
  req.beta = {Int(d), Int(0)};
  req.marking_sides = {1, 2};
  return req;
}

std::multiset<std::string> key_set(const std::vector<DecoratedBipartiteGraph>& gs) {
  std::multiset<std::string> keys;
  for (const auto& g : gs) keys.insert(canonical_key(g));
  return keys;
}

GraphVertex vtx(int side, int genus, std::vector<int> marks, IntVec deg) {
  GraphVertex v;
  v.side = side;
  v.genus = genus;
  v.markings = std::move(marks);
  v.degree = std::move(deg);
  return v;
}

}  // namespace

TEST_CASE("enumeration counts for the degeneration requests") {
  DegenerationGeometry geom = pn_geometry(2);
  const size_t expected[] = {1, 5, 22, 94, 406};
  for (long d = 1; d <= 5; ++d) {
    auto gs = enumerate_graphs(geom, degen_request(d));
    CHECK(gs.size() == expected[d - 1]);
    for (const auto& g : gs) CHECK(graph_valid(g, geom, {Int(d), Int(0)}, 0, 2));
    // canonical keys separate the output: all distinct
    auto keys = key_set(gs);
    CHECK(std::set<std::string>(keys.begin(), keys.end()).size() == gs.size());
  }
}

TEST_CASE("parallel driver agrees with the serial reference") {
  DegenerationGeometry geom = pn_geometry(3);
  for (long d = 1; d <= 6; ++d) {
    auto par = enumerate_graphs(geom, degen_request(d));
    auto ser = enumerate_graphs_serial(geom, degen_request(d));
    CHECK(par == ser);
  }
  EnumerationRequest g1 = degen_request(3);
  g1.genus = 1;
  CHECK(enumerate_graphs(geom, g1) == enumerate_graphs_serial(geom, g1));
}

TEST_CASE("symmetry-reduced generation agrees with the naive one") {
  DegenerationGeometry geom = pn_geometry(2);
  std::vector<EnumerationRequest> reqs;
  for (long d = 2; d <= 5; ++d) reqs.push_back(degen_request(d));
  EnumerationRequest g1 = degen_request(3);
  g1.genus = 1;
  reqs.push_back(g1);
  EnumerationRequest free_marks = degen_request(4);
  free_marks.marking_sides.clear();
  reqs.push_back(free_marks);
  for (const auto& req : reqs) {
    auto fast = enumerate_graphs_serial(geom, req);
    detail::disable_symmetry_pruning = true;
    auto naive = enumerate_graphs_serial(geom, req);
    detail::disable_symmetry_pruning = false;
    CHECK(key_set(fast) == key_set(naive));
  }
}

TEST_CASE("graph_valid rejects mutations") {
  DegenerationGeometry geom = pn_geometry(2);
  auto gs = enumerate_graphs(geom, degen_request(3));
  for (auto g : gs) {
    REQUIRE(!g.edges.empty());
    g.edges[0].weight += 1;  // breaks the balancing condition
    CHECK(!graph_valid(g, geom, {Int(3), Int(0)}, 0, 2));
  }
  auto g = gs[0];
  g.vertices[0].genus += 1;  // breaks the genus condition
  CHECK(!graph_valid(g, geom, {Int(3), Int(0)}, 0, 2));
}

TEST_CASE("canonical key is relabelling invariant") {
  DegenerationGeometry geom = pn_geometry(2);
  for (const auto& g : enumerate_graphs(geom, degen_request(3))) {
    if (g.vertices.size() < 2) continue;
    DecoratedBipartiteGraph h = g;
    int n = int(h.vertices.size());
    std::rotate(h.vertices.begin(), h.vertices.begin() + 1, h.vertices.end());
    for (auto& e : h.edges) {
      e.a = (e.a + n - 1) % n;
      e.b = (e.b + n - 1) % n;
    }
    CHECK(canonical_key(h) == canonical_key(g));
  }
}

TEST_CASE("graph json round trip") {
  DegenerationGeometry geom = pn_geometry(2);
  for (const auto& g : enumerate_graphs(geom, degen_request(4)))
    CHECK(graph_from_json(graph_to_json(g)) == g);
}

TEST_CASE("automorphism orders") {
  // one vertex, no edges
  DecoratedBipartiteGraph single{{vtx(1, 0, {1, 2}, vec({1, 0}))}, {}};
  CHECK(automorphism_order(single) == 1);

  // two vertices with distinct decorations, one edge
  DecoratedBipartiteGraph distinct{
      {vtx(1, 0, {1}, vec({2, -1})), vtx(2, 0, {2}, vec({0, 1}))}, {{0, 1, 1}}};
  CHECK(automorphism_order(distinct) == 1);

  // two parallel edges of equal weight: the edge swap
  DecoratedBipartiteGraph parallel{
      {vtx(1, 0, {1}, vec({2, -2})), vtx(2, 0, {2}, vec({0, 2}))}, {{0, 1, 1}, {0, 1, 1}}};
  CHECK(automorphism_order(parallel) == 2);

  // equal-weight parallel edges but distinct weights elsewhere stay rigid
  DecoratedBipartiteGraph rigid{
      {vtx(1, 0, {1}, vec({2, -2})), vtx(2, 0, {2}, vec({0, 2}))}, {{0, 1, 2}}};
  CHECK(automorphism_order(rigid) == 1);

  // multiplicative over disjoint pieces (checked on synthetic disconnected input)
  DecoratedBipartiteGraph disconnected{
      {vtx(1, 0, {1}, vec({2, -2})), vtx(2, 0, {2}, vec({0, 2})),
       vtx(1, 0, {3}, vec({1, -1})), vtx(2, 1, {4}, vec({0, 1}))},
      {{0, 1, 1}, {0, 1, 1}, {2, 3, 1}}};
  CHECK(automorphism_order(disconnected) == 2);

  DegenerationGeometry geom = pn_geometry(2);
  for (const auto& g : enumerate_graphs(geom, degen_request(4))) {
    Int order = automorphism_order(g);
    Int bound = 1;
    for (size_t i = 1; i <= g.vertices.size(); ++i) bound *= Int(i);
    for (size_t i = 1; i <= g.edges.size(); ++i) bound *= Int(i);
    CHECK(bound % order == 0);
  }
}

TEST_CASE("multiplicity and etale degree") {
  auto weights = [](std::vector<long> ws) {
    DecoratedBipartiteGraph g;
    g.vertices = {vtx(1, 0, {1}, vec({9, -9})), vtx(2, 0, {2}, vec({0, 9}))};
    for (long w : ws) g.edges.push_back({0, 1, w});
    return g;
  };
  CHECK(multiplicity(weights({5})) == 5);
  CHECK(multiplicity(weights({2, 3})) == 6);
  CHECK(etale_degree(weights({2, 3})) == 1);
  CHECK(multiplicity(weights({4, 6})) == 12);
  CHECK(etale_degree(weights({4, 6})) == 2);
  CHECK(multiplicity(weights({2, 2})) == 2);
  CHECK(etale_degree(weights({2, 2})) == 2);
  CHECK(multiplicity({{vtx(1, 0, {1, 2}, vec({0, 0}))}, {}}) == 1);

  DegenerationGeometry geom = pn_geometry(2);
  for (const auto& g : enumerate_graphs(geom, degen_request(5))) {
    Rat prod(1);
    for (const auto& e : g.edges) prod *= Rat(e.weight);
    CHECK(etale_degree(g) * multiplicity(g) == prod);
  }
}

TEST_CASE("filter cascade on the degeneration graphs") {
  DegenerationGeometry geom = pn_geometry(2);
  for (long d = 1; d <= 5; ++d) {
    auto gs = enumerate_graphs(geom, degen_request(d));
    int survivors = 0;
    for (const auto& g : gs) {
      GraphVerdict v = apply_filters(g, geom);
      if (v.contributes) {
        ++survivors;
        CHECK(v.reason == VanishReason::survivor);
        CHECK(v.coefficient == Rat(d));  // m / |Aut| = d for the surviving chain
      }
    }
    CHECK(survivors == 1);
  }
}

TEST_CASE("individual filter verdicts") {
  DegenerationGeometry geom = pn_geometry(2);

  // X1 class (d, -e) with e < d is a ghost; X2 class (0, e) is a fibre multiple
  DecoratedBipartiteGraph ghost{
      {vtx(1, 0, {1}, vec({3, -1})), vtx(2, 0, {2}, vec({0, 1}))}, {{0, 1, 1}}};
  CHECK(apply_filters(ghost, geom).reason == VanishReason::ghost_graph);

  // X2 vertex carrying (1, 0), not a fibre multiple
  DecoratedBipartiteGraph nonfiber{
      {vtx(1, 0, {1}, vec({1, -1})), vtx(2, 0, {2}, vec({1, 0}))}, {{0, 1, 1}}};
  CHECK(apply_filters(nonfiber, geom).reason == VanishReason::non_fiber_X2_class);

  // an unmarked valence-1 genus-0 vertex is unstable
  DecoratedBipartiteGraph unstable{
      {vtx(1, 0, {1, 2}, vec({1, -1})), vtx(2, 0, {}, vec({0, 1}))}, {{0, 1, 1}}};
  CHECK(apply_filters(unstable, geom).reason == VanishReason::unstable_vertex);

  // all markings on side 1, no X2 vertex at all (class chosen non-ghost so
  // the verdict isn't claimed earlier in the cascade)
  DecoratedBipartiteGraph no_x2{{vtx(1, 0, {1, 2}, vec({1, -1}))}, {}};
  CHECK(apply_filters(no_x2, geom).reason == VanishReason::no_X2_vertex);

  // X1 vertex with two edges
  DecoratedBipartiteGraph multi{
      {vtx(1, 0, {1}, vec({2, -2})), vtx(2, 0, {2}, vec({0, 2}))}, {{0, 1, 1}, {0, 1, 1}}};
  CHECK(apply_filters(multi, geom).reason == VanishReason::multi_edge_X1_vertex);

  // filters are reported in cascade order: instability masks the ghost class
  DecoratedBipartiteGraph both{
      {vtx(1, 0, {}, vec({3, -1})), vtx(2, 0, {1, 2}, vec({0, 1}))}, {{0, 1, 1}}};
  CHECK(apply_filters(both, geom).reason == VanishReason::unstable_vertex);
  FilterOptions no_unstable;
  no_unstable.enable_unstable = false;
  CHECK(apply_filters(both, geom, no_unstable).reason == VanishReason::ghost_graph);
}

TEST_CASE("degenerate requests") {
  DegenerationGeometry geom = pn_geometry(2);

  EnumerationRequest zero = degen_request(0);
  CHECK(enumerate_graphs(geom, zero).empty());  // no stable splitting of beta = 0

  EnumerationRequest bad = degen_request(2);
  bad.beta = {Int(2)};
  CHECK_THROWS(enumerate_graphs(geom, bad));

  EnumerationRequest box = degen_request(3);
  box.degree_box = 3;
  CHECK(enumerate_graphs(geom, box) == enumerate_graphs(geom, degen_request(3)));
}
