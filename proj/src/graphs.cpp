#include "qdeg/graphs.hpp"

#include <algorithm>
#include <functional>
#include <json.hpp>
#include <map>
#include <numeric>
#include <unordered_map>
#include <unordered_set>
#include <sstream>

#include "qdeg/simplex.hpp"

namespace qdeg {

bool DegenerationGeometry::is_effective(const IntVec& curve) const {
  return effective_cone_membership(dpd.total_fan, dpd.pic, curve);
}

DegenerationGeometry make_geometry(const DoublePointDegeneration& d) {
  DegenerationGeometry g;
  g.dpd = d;
  g.emb1 = component_embedding(d, 1);
  g.emb2 = component_embedding(d, 2);
  g.x1_class = d.pic.ray_class(d.rho1);
  g.x2_class = d.pic.ray_class(d.rho2);

  // The fibre class of the X2-side bundle: the class of a wall curve inside
  // X2 meeting X1 transversally in one point.
  std::vector<IntVec> found;
  for (const WallCurve& w : wall_curves(d.total_fan, d.pic)) {
    bool has1 = std::count(w.wall_rays.begin(), w.wall_rays.end(), d.rho1) > 0;
    bool has2 = std::count(w.wall_rays.begin(), w.wall_rays.end(), d.rho2) > 0;
    if (!has2 || has1) continue;
    if (intersection_number(g.x1_class, w.curve_class) != 1) continue;
    found.push_back(w.curve_class);
  }
  if (found.empty()) throw std::runtime_error("no fibre class found");
  for (const IntVec& c : found)
    if (c != found.front()) throw std::runtime_error("fibre class not unique");
  g.fiber_class = found.front();
  return g;
}

namespace {

std::string decoration_key(const GraphVertex& v) {
  std::string s;
  s.reserve(16 + 4 * v.markings.size() + 8 * v.degree.size());
  s += 's';
  s += std::to_string(v.side);
  s += 'g';
  s += std::to_string(v.genus);
  s += 'm';
  for (int m : v.markings) {
    s += std::to_string(m);
    s += ',';
  }
  s += 'd';
  for (const Int& x : v.degree) {
    s += x.get_str();
    s += ',';
  }
  return s;
}

std::vector<std::string> decoration_keys(const std::vector<GraphVertex>& vs) {
  std::vector<std::string> out;
  out.reserve(vs.size());
  for (const GraphVertex& v : vs) out.push_back(decoration_key(v));
  return out;
}

using Adj = std::vector<std::vector<std::pair<int, long>>>;

// Centroids of a tree: minimizers of the largest remaining component.
std::vector<int> tree_centroids(const Adj& adj) {
  int nv = int(adj.size());
  thread_local std::vector<int> size, order, par, stack;
  thread_local std::vector<char> seen;
  size.assign(nv, 1);
  par.assign(nv, -1);
  order.clear();
  order.reserve(nv);
  stack.assign(1, 0);
  seen.assign(nv, 0);
  seen[0] = true;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (auto [u, w] : adj[v])
      if (!seen[u]) {
        seen[u] = true;
        par[u] = v;
        stack.push_back(u);
      }
  }
  for (int i = nv - 1; i > 0; --i) size[par[order[i]]] += size[order[i]];
  int best = nv + 1;
  std::vector<int> centroids;
  for (int v = 0; v < nv; ++v) {
    int worst = nv - size[v];
    for (auto [u, w] : adj[v])
      if (par[u] == v) worst = std::max(worst, size[u]);
    if (worst < best) {
      best = worst;
      centroids = {v};
    } else if (worst == best) {
      centroids.push_back(v);
    }
  }
  return centroids;
}

// 128-bit isomorphism-invariant fingerprint used as the dedupe / ordering key
// during enumeration. Two independent 64-bit mixing streams; a spurious merge
// would need a full 128-bit collision among < 2^24 graphs, which is far below
// any hardware error rate. The string canonical_key stays exact and is what
// the interchange layer exposes.
using Key128 = std::pair<uint64_t, uint64_t>;

uint64_t mix1(uint64_t h, uint64_t x) {
  x *= 0x9E3779B97F4A7C15ull;
  x ^= x >> 29;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 32;
  return (h ^ x) * 0xD6E8FEB86659FD93ull;
}

uint64_t mix2(uint64_t h, uint64_t x) {
  x *= 0xC2B2AE3D27D4EB4Full;
  x ^= x >> 31;
  x *= 0x165667B19E3779F9ull;
  x ^= x >> 28;
  return (h ^ x) * 0x2545F4914F6CDD1Dull;
}

Key128 key_fold(Key128 h, uint64_t x) { return {mix1(h.first, x), mix2(h.second, x)}; }

uint64_t int_hash(const Int& x) {
  const mpz_srcptr z = x.get_mpz_t();
  uint64_t h = mpz_sgn(z) < 0 ? 0x85EBCA77C2B2AE63ull : 0x27D4EB2F165667C5ull;
  for (size_t i = 0, n = mpz_size(z); i < n; ++i)
    h = (h ^ uint64_t(mpz_getlimbn(z, mp_size_t(i)))) * 0x100000001B3ull;
  return h;
}

// Side and degree only; genus and markings are folded in per assignment.
Key128 deco_hash_base(const GraphVertex& v) {
  Key128 h{0x243F6A8885A308D3ull, 0x13198A2E03707344ull};
  h = key_fold(h, uint64_t(v.side));
  for (const Int& x : v.degree) h = key_fold(h, int_hash(x));
  return h;
}

Key128 deco_hash_marks(Key128 h, const std::vector<int>& marks) {
  for (int m : marks) h = key_fold(h, 0xA5A5A5A5ull + uint64_t(m));
  return key_fold(h, 0xFEEDFACEull + uint64_t(marks.size()));
}

Key128 deco_hash_genus(Key128 h, int genus) {
  return key_fold(h, 0x9E3779B9ull + uint64_t(genus));
}

Key128 deco_hash(const GraphVertex& v) {
  return deco_hash_genus(deco_hash_marks(deco_hash_base(v), v.markings), v.genus);
}

// Child records are stacked in a shared scratch pool instead of per-call
// vectors; each level sorts and consumes its own slice.
Key128 ahu_hash(const std::vector<Key128>& deco, const Adj& adj, int v, int parent,
                std::vector<std::array<uint64_t, 3>>& pool) {
  size_t mark = pool.size();
  for (auto [u, w] : adj[v])
    if (u != parent) {
      Key128 k = ahu_hash(deco, adj, u, v, pool);
      pool.push_back({k.first, k.second, uint64_t(w)});
    }
  std::sort(pool.begin() + mark, pool.end());
  Key128 h = key_fold(deco[v], 0x0B5E55ED00000000ull + (pool.size() - mark));
  for (size_t i = mark; i < pool.size(); ++i) {
    h = key_fold(h, pool[i][2]);
    h = key_fold(h, pool[i][0]);
    h = key_fold(h, pool[i][1]);
  }
  pool.resize(mark);
  return h;
}

Key128 tree_hash(const std::vector<Key128>& deco, const Adj& adj,
                 const std::vector<int>& centroids) {
  thread_local std::vector<std::array<uint64_t, 3>> pool;
  Key128 best{~0ull, ~0ull};
  for (int c : centroids) best = std::min(best, ahu_hash(deco, adj, c, -1, pool));
  return best;
}

int uf_find(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

bool edges_connect(int nv, const std::vector<GraphEdge>& edges) {
  if (nv == 0) return false;
  std::vector<int> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  int components = nv;
  for (const GraphEdge& e : edges) {
    int a = uf_find(parent, e.a), b = uf_find(parent, e.b);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

bool is_connected(const DecoratedBipartiteGraph& g) {
  return edges_connect(int(g.vertices.size()), g.edges);
}

bool is_tree(const DecoratedBipartiteGraph& g) {
  return is_connected(g) && g.edges.size() + 1 == g.vertices.size();
}

// Rooted canonical encoding (AHU) for trees, with decorations as vertex
// labels and weights as edge labels.
std::string ahu_encode(const std::vector<std::string>& deco,
                       const std::vector<std::vector<std::pair<int, long>>>& adj, int v,
                       int parent) {
  std::vector<std::string> kids;
  for (auto [u, w] : adj[v])
    if (u != parent) kids.push_back(std::to_string(w) + ":" + ahu_encode(deco, adj, u, v));
  std::sort(kids.begin(), kids.end());
  std::string s;
  size_t len = 3 + deco[v].size();
  for (const std::string& k : kids) len += k.size() + 1;
  s.reserve(len);
  s += '(';
  s += deco[v];
  s += '|';
  for (const std::string& k : kids) {
    s += k;
    s += ';';
  }
  s += ')';
  return s;
}

std::string tree_key(const DecoratedBipartiteGraph& g) {
  int nv = int(g.vertices.size());
  std::vector<std::string> deco = decoration_keys(g.vertices);
  Adj adj(nv);
  for (const GraphEdge& e : g.edges) {
    adj[e.a].push_back({e.b, e.weight});
    adj[e.b].push_back({e.a, e.weight});
  }
  std::vector<int> centroids = tree_centroids(adj);
  std::string key;
  for (int c : centroids) {
    std::string k = ahu_encode(deco, adj, c, -1);
    if (key.empty() || k < key) key = k;
  }
  return "T" + key;
}

DecoratedBipartiteGraph sort_by_decoration(const DecoratedBipartiteGraph& g) {
  int nv = int(g.vertices.size());
  std::vector<std::string> keys = decoration_keys(g.vertices);
  std::vector<int> idx(nv);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return keys[a] < keys[b]; });
  std::vector<int> where(nv);
  for (int i = 0; i < nv; ++i) where[idx[i]] = i;
  DecoratedBipartiteGraph out;
  for (int i : idx) out.vertices.push_back(g.vertices[i]);
  for (const GraphEdge& e : g.edges) {
    int a = where[e.a], b = where[e.b];
    if (a > b) std::swap(a, b);
    out.edges.push_back({a, b, e.weight});
  }
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

std::vector<std::pair<int, int>> decoration_blocks(const DecoratedBipartiteGraph& sorted) {
  std::vector<std::pair<int, int>> blocks;
  int nv = int(sorted.vertices.size());
  for (int i = 0; i < nv;) {
    int j = i;
    while (j < nv && decoration_key(sorted.vertices[j]) == decoration_key(sorted.vertices[i])) ++j;
    blocks.push_back({i, j});
    i = j;
  }
  return blocks;
}

std::string edge_list_string(const std::vector<GraphEdge>& edges) {
  std::string s;
  for (const GraphEdge& e : edges)
    s += std::to_string(e.a) + "-" + std::to_string(e.b) + "x" + std::to_string(e.weight) + ";";
  return s;
}

// Enumerate all products of within-block permutations, calling fn with the
// vertex relabelling. Throws when the search space is unreasonably large.
void for_each_block_perm(const std::vector<std::pair<int, int>>& blocks, int nv,
                         const std::function<void(const std::vector<int>&)>& fn) {
  long total = 1;
  for (auto [lo, hi] : blocks) {
    for (int k = 2; k <= hi - lo; ++k) {
      total *= k;
      if (total > 5'000'000) throw std::runtime_error("graph too symmetric for brute-force canonical form");
    }
  }
  std::vector<int> perm(nv);
  std::iota(perm.begin(), perm.end(), 0);
  std::function<void(size_t)> rec = [&](size_t bi) {
    if (bi == blocks.size()) {
      fn(perm);
      return;
    }
    auto [lo, hi] = blocks[bi];
    std::vector<int> slot(perm.begin() + lo, perm.begin() + hi);
    std::sort(slot.begin(), slot.end());
    do {
      std::copy(slot.begin(), slot.end(), perm.begin() + lo);
      rec(bi + 1);
    } while (std::next_permutation(slot.begin(), slot.end()));
  };
  rec(0);
}

std::vector<GraphEdge> relabel_edges(const std::vector<GraphEdge>& edges,
                                     const std::vector<int>& perm) {
  std::vector<GraphEdge> out;
  out.reserve(edges.size());
  for (const GraphEdge& e : edges) {
    int a = perm[e.a], b = perm[e.b];
    if (a > b) std::swap(a, b);
    out.push_back({a, b, e.weight});
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::string canonical_key(const DecoratedBipartiteGraph& g) {
  if (is_tree(g)) return tree_key(g);
  DecoratedBipartiteGraph s = sort_by_decoration(g);
  std::string decos = "V";
  for (const GraphVertex& v : s.vertices) decos += decoration_key(v) + "#";
  std::vector<std::pair<int, int>> blocks = decoration_blocks(s);
  // perm[i] = new index of vertex i; minimise the relabelled edge list.
  std::vector<int> inv(s.vertices.size());
  std::string best;
  for_each_block_perm(blocks, int(s.vertices.size()), [&](const std::vector<int>& perm) {
    for (size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = int(i);
    std::string e = edge_list_string(relabel_edges(s.edges, inv));
    if (best.empty() || e < best) best = e;
  });
  return "G" + decos + "|E" + best;
}

namespace {

Key128 canonical_hash(const DecoratedBipartiteGraph& g) {
  if (is_tree(g)) {
    int nv = int(g.vertices.size());
    std::vector<Key128> deco(nv);
    for (int v = 0; v < nv; ++v) deco[v] = deco_hash(g.vertices[v]);
    Adj adj(nv);
    for (const GraphEdge& e : g.edges) {
      adj[e.a].push_back({e.b, e.weight});
      adj[e.b].push_back({e.a, e.weight});
    }
    return tree_hash(deco, adj, tree_centroids(adj));
  }
  // Non-tree graphs go through the exact string key; they only arise for
  // positive genus, where counts are small.
  std::string k = canonical_key(g);
  uint64_t a = 0xCBF29CE484222325ull, b = 0x6C62272E07BB0142ull;
  for (unsigned char ch : k) {
    a = (a ^ ch) * 0x100000001B3ull;
    b = (b ^ ch) * 0x3F4E9A7D1B873593ull;
  }
  return {a, b};
}

}  // namespace

bool graph_valid(const DecoratedBipartiteGraph& g, const DegenerationGeometry& geom,
                 const IntVec& beta, int genus, int markings) {
  int nv = int(g.vertices.size());
  if (nv == 0) return false;
  std::vector<bool> used(markings, false);
  int genus_sum = 0;
  IntVec total(beta.size(), Int(0));
  for (const GraphVertex& v : g.vertices) {
    if (v.side != 1 && v.side != 2) return false;
    if (v.genus < 0) return false;
    genus_sum += v.genus;
    if (v.degree.size() != beta.size()) return false;
    for (size_t k = 0; k < beta.size(); ++k) total[k] += v.degree[k];
    for (int m : v.markings) {
      if (m < 1 || m > markings || used[m - 1]) return false;
      used[m - 1] = true;
    }
    if (!std::is_sorted(v.markings.begin(), v.markings.end())) return false;
    if (!geom.is_effective(v.degree)) return false;
  }
  if (total != beta) return false;
  for (bool u : used)
    if (!u) return false;
  for (const GraphEdge& e : g.edges) {
    if (e.a < 0 || e.a >= nv || e.b < 0 || e.b >= nv) return false;
    if (g.vertices[e.a].side == g.vertices[e.b].side) return false;
    if (e.weight < 1) return false;
  }
  if (!is_connected(g)) return false;
  int b1 = int(g.edges.size()) - nv + 1;
  if (genus_sum + b1 != genus) return false;
  // Balancing: total contact order equals pairing with the opposite
  // component's divisor class.
  for (int i = 0; i < nv; ++i) {
    Int w = 0;
    for (const GraphEdge& e : g.edges)
      if (e.a == i || e.b == i) w += e.weight;
    const IntVec& opposite = g.vertices[i].side == 1 ? geom.x2_class : geom.x1_class;
    if (w != intersection_number(opposite, g.vertices[i].degree)) return false;
  }
  return true;
}

std::string graph_to_json(const DecoratedBipartiteGraph& g) {
  nlohmann::json j;
  j["vertices"] = nlohmann::json::array();
  for (const GraphVertex& v : g.vertices) {
    nlohmann::json jv;
    jv["side"] = v.side;
    jv["genus"] = v.genus;
    jv["markings"] = v.markings;
    std::vector<long> deg;
    for (const Int& x : v.degree) {
      if (!x.fits_slong_p()) throw std::runtime_error("degree entry too large for interchange format");
      deg.push_back(x.get_si());
    }
    jv["degree"] = deg;
    j["vertices"].push_back(jv);
  }
  j["edges"] = nlohmann::json::array();
  for (const GraphEdge& e : g.edges)
    j["edges"].push_back({{"ends", {e.a, e.b}}, {"weight", e.weight}});
  return j.dump();
}

DecoratedBipartiteGraph graph_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  DecoratedBipartiteGraph g;
  for (const auto& jv : j.at("vertices")) {
    GraphVertex v;
    v.side = jv.at("side").get<int>();
    v.genus = jv.at("genus").get<int>();
    v.markings = jv.at("markings").get<std::vector<int>>();
    for (const auto& x : jv.at("degree")) v.degree.push_back(Int(x.get<long>()));
    g.vertices.push_back(v);
  }
  for (const auto& je : j.at("edges")) {
    GraphEdge e;
    e.a = je.at("ends").at(0).get<int>();
    e.b = je.at("ends").at(1).get<int>();
    e.weight = je.at("weight").get<long>();
    g.edges.push_back(e);
  }
  return g;
}

namespace detail {
bool disable_symmetry_pruning = false;
}  // namespace detail

namespace {

// ---- enumeration -----------------------------------------------------------

constexpr int kVertexCap = 64;

struct Candidate {
  int side;
  IntVec degree;
  std::vector<long> ldeg;  // degree as machine integers (bounded by the box)
  long budget;             // pairing with the opposite component class = total edge weight
};

struct LongVecHash {
  size_t operator()(const std::vector<long>& v) const {
    size_t h = 1469598103934665603ull;
    for (long x : v) h ^= size_t(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }
};

struct EnumCtx {
  const DegenerationGeometry* geom;
  EnumerationRequest req;
  long box = 0;
  std::vector<Candidate> cands;  // side-1 block first, then side-2, each sorted
  std::unordered_map<std::vector<long>, bool, LongVecHash> eff_cache;

  // Rank-2 fast path: membership in the effective cone reduces to sign
  // checks against dual-cone normals harvested from the generators (each
  // generator and its two quarter turns; keeping redundant normals is
  // harmless). Falls back to the LP + cache otherwise.
  bool fast_cone = false, cone_is_plane = false, cone_zero_only = false;
  std::vector<std::array<long, 2>> cone_normals;

  void prepare_cone() {
    if (geom->dpd.pic.rank != 2) return;
    std::vector<std::array<long, 2>> gens;
    for (const WallCurve& w : wall_curves(geom->dpd.total_fan, geom->dpd.pic)) {
      const IntVec& c = w.curve_class;
      if (!c[0].fits_slong_p() || !c[1].fits_slong_p()) return;
      std::array<long, 2> g{c[0].get_si(), c[1].get_si()};
      if (std::abs(g[0]) >= (1L << 31) || std::abs(g[1]) >= (1L << 31)) return;
      if (g[0] != 0 || g[1] != 0) gens.push_back(g);
    }
    if (gens.empty()) {
      cone_zero_only = true;
      fast_cone = true;
      return;
    }
    for (auto [a, b] : gens)
      for (std::array<long, 2> n : {std::array<long, 2>{a, b}, {-b, a}, {b, -a}}) {
        bool ok = true;
        for (auto g : gens) ok = ok && n[0] * g[0] + n[1] * g[1] >= 0;
        if (ok) cone_normals.push_back(n);
      }
    cone_is_plane = cone_normals.empty();
    fast_cone = true;
  }

  bool effective(const IntVec& c) {
    std::vector<long> key;
    key.reserve(c.size());
    for (const Int& x : c) {
      if (!x.fits_slong_p()) return geom->is_effective(c);  // rare; skip the cache
      key.push_back(x.get_si());
    }
    return effective(key);
  }

  bool effective(const std::vector<long>& c) {
    if (fast_cone && std::abs(c[0]) < (1L << 31) && std::abs(c[1]) < (1L << 31)) {
      if (cone_zero_only) return c[0] == 0 && c[1] == 0;
      if (cone_is_plane) return true;
      for (auto n : cone_normals)
        if (n[0] * c[0] + n[1] * c[1] < 0) return false;
      return true;
    }
    auto it = eff_cache.find(c);
    if (it != eff_cache.end()) return it->second;
    IntVec v(c.begin(), c.end());
    bool e = geom->is_effective(v);
    eff_cache.emplace(c, e);
    return e;
  }
};

long to_budget(const Int& x) {
  if (!x.fits_slong_p()) throw std::runtime_error("edge weight budget too large");
  return x.get_si();
}

// Tight per-coordinate bound on degrees of effective summands of beta:
// maximise |x_k| over {x, beta - x both in the effective cone}.
long derive_box(const DegenerationGeometry& geom, const IntVec& beta, bool& beta_effective) {
  std::vector<WallCurve> walls = wall_curves(geom.dpd.total_fan, geom.dpd.pic);
  if (walls.empty()) throw std::runtime_error("no invariant curves");
  int rank = int(beta.size());
  int nw = int(walls.size());
  LinearProgram lp;
  lp.m = rank;
  lp.n = 2 * nw;
  lp.a.assign(size_t(lp.m) * lp.n, Rat(0));
  lp.b.assign(rank, Rat(0));
  for (int r = 0; r < rank; ++r) {
    lp.b[r] = Rat(beta[r]);
    for (int k = 0; k < nw; ++k) {
      lp.at(r, k) = Rat(walls[k].curve_class[r]);
      lp.at(r, nw + k) = Rat(walls[k].curve_class[r]);
    }
  }
  beta_effective = lp_feasible_point(lp).has_value();
  if (!beta_effective) return 0;
  long box = 1;
  for (int r = 0; r < rank; ++r) {
    for (int sign : {1, -1}) {
      std::vector<Rat> c(lp.n, Rat(0));
      for (int k = 0; k < nw; ++k) c[k] = Rat(sign * walls[k].curve_class[r]);
      std::optional<Rat> opt;
      try {
        opt = lp_maximize(lp, c);
      } catch (const std::runtime_error&) {
        throw std::runtime_error("degree box required");
      }
      if (!opt) continue;
      Rat v = *opt;
      mpz_class ceil_v;
      mpz_cdiv_q(ceil_v.get_mpz_t(), v.get_num().get_mpz_t(), v.get_den().get_mpz_t());
      if (ceil_v > 0 && ceil_v.fits_slong_p()) box = std::max(box, ceil_v.get_si());
      if (!ceil_v.fits_slong_p()) throw std::runtime_error("degree box required");
    }
  }
  return box;
}

void collect_candidates(EnumCtx& ctx) {
  int rank = int(ctx.req.beta.size());
  std::vector<IntVec> grid;
  IntVec cur(rank, Int(0));
  std::function<void(int)> rec = [&](int k) {
    if (k == rank) {
      grid.push_back(cur);
      return;
    }
    for (long v = -ctx.box; v <= ctx.box; ++v) {
      cur[k] = v;
      rec(k + 1);
    }
  };
  rec(0);
  for (int side : {1, 2}) {
    const IntVec& opposite = side == 1 ? ctx.geom->x2_class : ctx.geom->x1_class;
    for (const IntVec& c : grid) {
      Int s = intersection_number(opposite, c);
      if (s < 1) continue;  // a vertex in a multi-vertex graph carries >= 1 edge
      if (!ctx.effective(c)) continue;
      std::vector<long> ldeg;
      for (const Int& x : c) ldeg.push_back(x.get_si());
      ctx.cands.push_back({side, c, std::move(ldeg), to_budget(s)});
    }
  }
  std::sort(ctx.cands.begin(), ctx.cands.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.side, a.degree) < std::tie(b.side, b.degree);
  });
}

// A job is a multiset of (side, class) vertex decorations summing to beta
// with matching edge-weight budgets on the two sides.
struct Job {
  std::vector<int> cand_index;  // sorted indices into ctx.cands, with repeats
};

std::vector<Job> build_jobs(EnumCtx& ctx) {
  std::vector<Job> jobs;
  int rank = int(ctx.req.beta.size());
  std::vector<long> beta(rank);
  for (int k = 0; k < rank; ++k) {
    if (!ctx.req.beta[k].fits_slong_p()) throw std::runtime_error("degree box required");
    beta[k] = ctx.req.beta[k].get_si();
  }
  std::vector<long> partial(rank, 0), rest(rank, 0);
  std::vector<int> chosen;
  long e1 = 0, e2 = 0;
  auto rec = [&](auto&& self, int t) -> void {
    if (t == int(ctx.cands.size())) {
      if (partial == beta && e1 == e2 && chosen.size() >= 2) jobs.push_back({chosen});
      return;
    }
    self(self, t + 1);  // multiplicity 0 for candidate t
    const Candidate& c = ctx.cands[t];
    int added = 0;
    while (true) {
      bool ok = true;
      for (int k = 0; k < rank; ++k) {
        partial[k] += c.ldeg[k];
        rest[k] = beta[k] - partial[k];
      }
      ok = ctx.effective(rest);
      // Side-1 candidates come first, so e1 is final once side 2 starts;
      // edge-weight budgets must balance, and e2 only ever grows.
      if (ok && c.side == 2 && e2 + c.budget > e1) ok = false;
      if (!ok) {
        for (int k = 0; k < rank; ++k) partial[k] -= c.ldeg[k];
        break;
      }
      (c.side == 1 ? e1 : e2) += c.budget;
      chosen.push_back(t);
      ++added;
      if (int(chosen.size()) > kVertexCap)
        throw std::runtime_error("enumeration exceeded vertex cap; supply a tighter degree box");
      self(self, t + 1);
    }
    for (int i = 0; i < added; ++i) {
      chosen.pop_back();
      (c.side == 1 ? e1 : e2) -= c.budget;
      for (int k = 0; k < rank; ++k) partial[k] -= c.ldeg[k];
    }
  };
  rec(rec, 0);
  return jobs;
}

bool marking_allowed(const EnumCtx& ctx, int label, int side) {
  if (int(ctx.req.marking_sides.size()) < label) return true;
  int forced = ctx.req.marking_sides[label - 1];
  return forced == 0 || forced == side;
}

// Open-addressed hash set of canonical keys. The keys are already uniformly
// mixed, so linear probing on the low bits of the first word is enough; (0, 0)
// is reserved as the empty slot and real keys landing there are displaced to a
// fixed substitute.
struct FlatKeySet {
  std::vector<Key128> slot;
  size_t mask = 0, used = 0;

  FlatKeySet() { grow(64); }

  static bool is_empty(const Key128& k) { return k.first == 0 && k.second == 0; }

  void grow(size_t cap) {
    std::vector<Key128> old = std::move(slot);
    slot.assign(cap, {0, 0});
    mask = cap - 1;
    used = 0;
    for (const Key128& k : old)
      if (!is_empty(k)) insert_mixed(k);
  }

  bool insert_mixed(const Key128& k) {
    size_t i = size_t(k.first) & mask;
    while (!is_empty(slot[i])) {
      if (slot[i] == k) return false;
      i = (i + 1) & mask;
    }
    slot[i] = k;
    ++used;
    return true;
  }

  bool insert(Key128 k) {
    if (is_empty(k)) k = {0x5EED5EED5EED5EEDull, 1};
    if (used * 2 >= slot.size()) grow(slot.size() * 2);
    return insert_mixed(k);
  }

  void reserve(size_t n) {
    size_t cap = slot.size();
    while (cap < 2 * n) cap *= 2;
    if (cap != slot.size()) grow(cap);
  }
};

// Dedupe set plus insertion-order storage; the final listing is sorted by key.
struct GraphSink {
  FlatKeySet seen;
  std::vector<std::pair<Key128, DecoratedBipartiteGraph>> items;

  bool insert(const Key128& key, DecoratedBipartiteGraph g) {
    if (!seen.insert(key)) return false;  // first representative wins
    items.emplace_back(key, std::move(g));
    return true;
  }
};

void emit(const EnumCtx& ctx, GraphSink& out, DecoratedBipartiteGraph g) {
  Key128 key = canonical_hash(g);
  out.insert(key, std::move(g));
}

// Incidence entry and list: what a vertex sees of its edges, in generation
// order (nondecreasing, since edges are produced with increasing (i, j, w)).
using Incidence = std::vector<std::pair<int, long>>;

// Per-job edge-structure enumeration with symmetry pruning: within runs of
// equal-class side-1 vertices, incidence lists are forced into nondecreasing
// lexicographic order, so most relabellings of interchangeable vertices are
// never generated. (The analogous side-2 constraint would interact with this
// one and prune whole orbits; side-2 relabellings are instead caught by the
// canonical-key dedupe at emission time.)
struct EdgeEnumerator {
  const std::vector<GraphVertex>& base;
  const std::vector<int>& side1;
  const std::vector<int>& side2;
  const std::vector<long>& budget1;
  const std::vector<long>& budget2;
  const std::vector<bool>& same1;  // same1[i]: side-1 slot i has the class of slot i-1
  int need_edges;
  std::function<void(const std::vector<GraphEdge>&)> sink;

  std::vector<GraphEdge> edges;
  std::vector<Incidence> inc1;
  std::vector<long> t_rem;
  std::vector<long> suffix_budget;  // side-1 budget still to distribute from slot i on
  int active_j = 0;                 // side-2 slots with unmet budget

  void run() {
    inc1.assign(side1.size(), {});
    t_rem = budget2;
    active_j = int(side2.size());
    suffix_budget.assign(side1.size() + 1, 0);
    for (int i = int(side1.size()) - 1; i >= 0; --i)
      suffix_budget[i] = suffix_budget[i + 1] + budget1[i];
    vertex(0);
  }

  bool infeasible(size_t i1, long pending) const {
    // pending: budget of the current vertex not yet turned into edges.
    long rem_weight = suffix_budget[i1] + pending;
    long rem_edges = need_edges - long(edges.size());
    if (rem_edges > rem_weight) return true;  // every edge weighs >= 1
    long min_edges = std::max(long(side1.size() - i1) + (pending > 0 ? 1 : 0) - 1, long(active_j));
    if (pending == 0) min_edges = std::max(long(side1.size() - i1), long(active_j));
    return rem_edges < min_edges;
  }

  void vertex(size_t i1) {
    if (int(edges.size()) > need_edges) return;
    if (i1 < side1.size() && infeasible(i1, 0)) return;
    if (i1 == side1.size()) {
      if (int(edges.size()) != need_edges) return;
      for (long t : t_rem)
        if (t != 0) return;
      if (!edges_connect(int(base.size()), edges)) return;
      sink(edges);
      return;
    }
    distribute(i1, budget1[i1], 0, 1);
  }

  void distribute(size_t i1, long remaining, int min_j, long min_w) {
    if (remaining == 0) {
      // Equal-class side-1 runs must have nondecreasing incidence lists.
      if (!detail::disable_symmetry_pruning && same1[i1] && inc1[i1] < inc1[i1 - 1]) return;
      vertex(i1 + 1);
      return;
    }
    for (int j = min_j; j < int(side2.size()); ++j) {
      long lo = j == min_j ? min_w : 1;
      for (long w = lo; w <= std::min(remaining, t_rem[j]); ++w) {
        edges.push_back({side1[i1], side2[j], w});
        inc1[i1].push_back({j, w});
        t_rem[j] -= w;
        if (t_rem[j] == 0) --active_j;
        distribute(i1, remaining - w, j, w);  // equal (j, w) repeats: parallel edges
        if (t_rem[j] == 0) ++active_j;
        t_rem[j] += w;
        inc1[i1].pop_back();
        edges.pop_back();
      }
    }
  }
};

GraphSink process_job(const EnumCtx& ctx, const Job& job) {
  GraphSink out;
  std::vector<GraphVertex> base;
  std::vector<int> side1, side2;
  std::vector<long> budget1, budget2;
  for (int idx : job.cand_index) {
    const Candidate& c = ctx.cands[idx];
    GraphVertex v;
    v.side = c.side;
    v.degree = c.degree;
    if (c.side == 1) {
      side1.push_back(int(base.size()));
      budget1.push_back(c.budget);
    } else {
      side2.push_back(int(base.size()));
      budget2.push_back(c.budget);
    }
    base.push_back(v);
  }
  int nv = int(base.size());
  if (side1.empty() || side2.empty()) return out;  // an edge needs both sides

  std::vector<bool> same1(side1.size(), false);
  for (size_t i = 1; i < side1.size(); ++i)
    same1[i] = base[side1[i]].degree == base[side1[i - 1]].degree;

  long total_weight = 0;
  for (long b : budget1) total_weight += b;
  int n = ctx.req.markings;

  // For a fixed edge structure, "twins" (same side, class and incidence) are
  // interchangeable; markings and genera are distributed canonically over
  // each twin group so permuted assignments are not generated twice.
  std::vector<Key128> base_hash(nv);
  for (int v = 0; v < nv; ++v) base_hash[v] = deco_hash_base(base[v]);
  FlatKeySet struct_seen;

  // Scratch reused across edge structures; the marks vectors are restored to
  // empty by the push/pop discipline of the assignment recursion.
  std::vector<Incidence> inc(nv);
  std::vector<int> centroids, twin(nv);
  std::vector<std::vector<int>> marks(nv);
  std::vector<int> gv(nv, 0);
  std::vector<Key128> deco_m(nv), deco(nv);

  auto decorate = [&](const std::vector<GraphEdge>& edges, int b1) {
    for (Incidence& l : inc) l.clear();
    for (const GraphEdge& e : edges) {
      inc[e.a].push_back({e.b, e.weight});
      inc[e.b].push_back({e.a, e.weight});
    }
    // Connected with nv - 1 edges <=> tree; adjacency and centroids do not
    // depend on the decorations, so the per-assignment key is a cheap AHU
    // hash over precomputed structure.
    bool tree = b1 == 0;
    if (tree) centroids = tree_centroids(inc);
    // Isomorphic edge structures decorate to identical canonical sets, so
    // only the first representative of each structure is expanded.
    if (!detail::disable_symmetry_pruning) {
      Key128 skey;
      if (tree) {
        skey = tree_hash(base_hash, inc, centroids);
      } else {
        skey = canonical_hash(DecoratedBipartiteGraph{base, edges});
      }
      if (!struct_seen.insert(skey)) return;
    }
    // twin[v] = smallest vertex with identical role
    for (int v = 0; v < nv; ++v) {
      twin[v] = v;
      for (int u = 0; u < v; ++u)
        if (base[u].side == base[v].side && base[u].degree == base[v].degree && inc[u] == inc[v]) {
          twin[v] = u;
          break;
        }
    }

    // Within a twin group the sequence of marking sets must end up
    // nonincreasing. Sets only grow by appending ever-larger labels, so a
    // mismatch strictly inside the common prefix is permanent, while a
    // proper-prefix violation may still be fixed by later labels.
    auto marks_violated = [&](bool final_check) {
      if (detail::disable_symmetry_pruning) return false;
      for (int v = 1; v < nv; ++v)
        for (int u = 0; u < v; ++u) {
          if (twin[u] != twin[v]) continue;
          const std::vector<int>&a = marks[u], &b = marks[v];
          size_t common = std::min(a.size(), b.size());
          size_t k = 0;
          while (k < common && a[k] == b[k]) ++k;
          if (k < common) {
            if (a[k] < b[k]) return true;
          } else if (final_check && a.size() < b.size()) {
            return true;
          }
        }
      return false;
    };
    auto massign = [&](auto&& self, int label) -> void {
      if (label > n) {
        if (marks_violated(true)) return;
        // Genus distributions over refined twin groups (twin + equal marks),
        // nonincreasing inside each group. Vertices are only materialised
        // once an assignment survives the dedupe check.
        auto materialise = [&](const std::vector<int>& gv) {
          std::vector<GraphVertex> vg = base;
          for (int i = 0; i < nv; ++i) {
            vg[i].markings = marks[i];
            vg[i].genus = gv[i];
          }
          return vg;
        };
        int want = ctx.req.genus - b1;
        // deco_m: marks folded in; deco: genus on top
        if (tree)
          for (int v = 0; v < nv; ++v) deco_m[v] = deco_hash_marks(base_hash[v], marks[v]);
        auto grec = [&](auto&& rec, int v, int left) -> void {
          if (v == nv) {
            if (left != 0) return;
            if (tree) {
              for (int i = 0; i < nv; ++i) deco[i] = deco_hash_genus(deco_m[i], gv[i]);
              Key128 key = tree_hash(deco, inc, centroids);
              if (!out.seen.insert(key)) return;
              out.items.emplace_back(key, DecoratedBipartiteGraph{materialise(gv), edges});
              return;
            }
            emit(ctx, out, {materialise(gv), edges});
            return;
          }
          int hi = left;
          if (!detail::disable_symmetry_pruning)
            for (int u = 0; u < v; ++u)
              if (twin[v] == twin[u] && marks[v] == marks[u]) hi = std::min(hi, gv[u]);
          for (int g = 0; g <= hi; ++g) {
            gv[v] = g;
            rec(rec, v + 1, left - g);
          }
        };
        grec(grec, 0, want);
        return;
      }
      for (int v = 0; v < nv; ++v) {
        if (!marking_allowed(ctx, label, base[v].side)) continue;
        marks[v].push_back(label);
        if (!marks_violated(false)) self(self, label + 1);
        marks[v].pop_back();
      }
    };
    massign(massign, 1);
  };

  int b1_max = ctx.req.genus;
  for (int b1 = 0; b1 <= b1_max; ++b1) {
    int need_edges = nv - 1 + b1;
    if (need_edges < int(std::max(side1.size(), side2.size())) || need_edges > total_weight)
      continue;
    EdgeEnumerator en{base,    side1, side2, budget1, budget2, same1, need_edges,
                      [&](const std::vector<GraphEdge>& edges) { decorate(edges, b1); }};
    en.run();
  }
  return out;
}

void add_single_vertex_graphs(EnumCtx& ctx, GraphSink& all) {
  for (long k = 0; k < int(ctx.req.beta.size()); ++k)
    if (abs(ctx.req.beta[k]) > ctx.box) return;
  if (!ctx.effective(ctx.req.beta)) return;
  for (int side : {1, 2}) {
    const IntVec& opposite = side == 1 ? ctx.geom->x2_class : ctx.geom->x1_class;
    if (intersection_number(opposite, ctx.req.beta) != 0) continue;  // balancing with no edges
    bool ok = true;
    for (int label = 1; label <= ctx.req.markings; ++label)
      if (!marking_allowed(ctx, label, side)) ok = false;
    if (!ok) continue;
    GraphVertex v;
    v.side = side;
    v.genus = ctx.req.genus;
    for (int label = 1; label <= ctx.req.markings; ++label) v.markings.push_back(label);
    v.degree = ctx.req.beta;
    DecoratedBipartiteGraph g{{v}, {}};
    all.insert(canonical_hash(g), std::move(g));
  }
}

std::vector<DecoratedBipartiteGraph> run_enumeration(const DegenerationGeometry& geom,
                                                     const EnumerationRequest& req,
                                                     bool parallel) {
  if (int(req.beta.size()) != geom.dpd.pic.rank)
    throw std::invalid_argument("curve class has wrong rank");
  if (req.genus < 0 || req.markings < 0) throw std::invalid_argument("negative genus or markings");

  EnumCtx ctx;
  ctx.geom = &geom;
  ctx.req = req;
  ctx.prepare_cone();
  if (req.degree_box) {
    if (*req.degree_box < 0) throw std::invalid_argument("degree box must be nonnegative");
    ctx.box = *req.degree_box;
    if (!ctx.effective(req.beta)) return {};
  } else {
    bool beta_effective = false;
    ctx.box = derive_box(geom, req.beta, beta_effective);
    if (!beta_effective) return {};
  }
  collect_candidates(ctx);
  std::vector<Job> jobs = build_jobs(ctx);

  std::vector<GraphSink> results(jobs.size());
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < int(jobs.size()); ++i) results[i] = process_job(ctx, jobs[i]);
  } else {
    for (int i = 0; i < int(jobs.size()); ++i) results[i] = process_job(ctx, jobs[i]);
  }

  GraphSink all;
  size_t total = 0;
  for (const GraphSink& r : results) total += r.items.size();
  all.items.reserve(total);
  all.seen.reserve(total);
  for (GraphSink& r : results)
    for (auto& [k, g] : r.items) all.insert(k, std::move(g));
  add_single_vertex_graphs(ctx, all);

  std::sort(all.items.begin(), all.items.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<DecoratedBipartiteGraph> out;
  out.reserve(all.items.size());
  for (auto& [k, g] : all.items) out.push_back(std::move(g));
  return out;
}

}  // namespace

std::vector<DecoratedBipartiteGraph> enumerate_graphs(const DegenerationGeometry& geom,
                                                      const EnumerationRequest& req) {
  return run_enumeration(geom, req, true);
}

std::vector<DecoratedBipartiteGraph> enumerate_graphs_serial(const DegenerationGeometry& geom,
                                                             const EnumerationRequest& req) {
  return run_enumeration(geom, req, false);
}

Int automorphism_order(const DecoratedBipartiteGraph& g) {
  DecoratedBipartiteGraph s = sort_by_decoration(g);
  std::vector<std::pair<int, int>> blocks = decoration_blocks(s);
  std::vector<GraphEdge> reference = relabel_edges(s.edges, [&] {
    std::vector<int> id(s.vertices.size());
    std::iota(id.begin(), id.end(), 0);
    return id;
  }());

  Int vertex_perms = 0;
  std::vector<int> inv(s.vertices.size());
  for_each_block_perm(blocks, int(s.vertices.size()), [&](const std::vector<int>& perm) {
    for (size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = int(i);
    if (relabel_edges(s.edges, inv) == reference) vertex_perms += 1;
  });

  // Parallel edges of equal weight between a fixed pair can be permuted
  // freely; the factor is the same for every good vertex permutation.
  Int edge_factor = 1;
  for (size_t i = 0; i < reference.size();) {
    size_t j = i;
    while (j < reference.size() && reference[j] == reference[i]) ++j;
    for (size_t k = 2; k <= j - i; ++k) edge_factor *= long(k);
    i = j;
  }
  return vertex_perms * edge_factor;
}

Int multiplicity(const DecoratedBipartiteGraph& g) {
  Int m = 1;
  for (const GraphEdge& e : g.edges) m = lcm(m, Int(e.weight));
  return m;
}

Rat etale_degree(const DecoratedBipartiteGraph& g) {
  Int prod = 1;
  for (const GraphEdge& e : g.edges) prod *= e.weight;
  Rat r(prod);
  r /= Rat(multiplicity(g));
  r.canonicalize();
  return r;
}

std::string reason_name(VanishReason r) {
  switch (r) {
    case VanishReason::unstable_vertex: return "unstable_vertex";
    case VanishReason::multi_edge_X1_vertex: return "multi_edge_X1_vertex";
    case VanishReason::non_fiber_X2_class: return "non_fiber_X2_class";
    case VanishReason::ghost_graph: return "ghost_graph";
    case VanishReason::no_X2_vertex: return "no_X2_vertex";
    case VanishReason::survivor: return "survivor";
  }
  return "?";
}

GraphVerdict apply_filters(const DecoratedBipartiteGraph& g, const DegenerationGeometry& geom,
                           const FilterOptions& opts) {
  GraphVerdict v;
  int nv = int(g.vertices.size());
  std::vector<int> edge_count(nv, 0);
  for (const GraphEdge& e : g.edges) {
    ++edge_count[e.a];
    ++edge_count[e.b];
  }

  auto vanish = [&](VanishReason r) {
    v.contributes = false;
    v.reason = r;
    return v;
  };

  if (opts.enable_unstable) {
    for (int i = 0; i < nv; ++i) {
      const GraphVertex& vx = g.vertices[i];
      if (vx.genus != 0) continue;
      int special = int(vx.markings.size()) + edge_count[i];
      bool degree_zero = std::all_of(vx.degree.begin(), vx.degree.end(),
                                     [](const Int& x) { return x == 0; });
      if (special < 2 || (special == 2 && degree_zero)) return vanish(VanishReason::unstable_vertex);
    }
  }
  if (opts.enable_multi_edge) {
    for (int i = 0; i < nv; ++i)
      if (g.vertices[i].side == 1 && edge_count[i] >= 2)
        return vanish(VanishReason::multi_edge_X1_vertex);
  }
  if (opts.enable_non_fiber) {
    for (const GraphVertex& vx : g.vertices) {
      if (vx.side != 2) continue;
      // beta_V must be a nonnegative multiple of the fibre class.
      const IntVec& f = geom.fiber_class;
      size_t pivot = 0;
      while (pivot < f.size() && f[pivot] == 0) ++pivot;
      bool multiple = pivot < f.size() && vx.degree[pivot] % f[pivot] == 0;
      if (multiple) {
        Int k = vx.degree[pivot] / f[pivot];
        if (k < 0) multiple = false;
        for (size_t j = 0; multiple && j < f.size(); ++j)
          if (vx.degree[j] != k * f[j]) multiple = false;
      }
      if (!multiple) return vanish(VanishReason::non_fiber_X2_class);
    }
  }
  if (opts.enable_ghost) {
    for (const GraphVertex& vx : g.vertices)
      if (is_ghost(geom.embedding(vx.side), vx.degree).ghost)
        return vanish(VanishReason::ghost_graph);
  }
  if (opts.insertion_side_2) {
    bool has2 = std::any_of(g.vertices.begin(), g.vertices.end(),
                            [](const GraphVertex& vx) { return vx.side == 2; });
    if (!has2) return vanish(VanishReason::no_X2_vertex);
  }

  v.contributes = true;
  v.reason = VanishReason::survivor;
  v.coefficient = Rat(multiplicity(g)) / Rat(automorphism_order(g));
  v.coefficient.canonicalize();
  return v;
}

}  // namespace qdeg
