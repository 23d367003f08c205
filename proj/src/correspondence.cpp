#include "qdeg/correspondence.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "qdeg/hbar.hpp"

namespace qdeg {

Rat smooth_factor(long d) { return Rat((d + 1) % 2 == 0 ? 1 : -1); }

Rat snc_rank2_factor(long d1, long d2) { return Rat((d1 + d2) % 2 == 0 ? 1 : -1); }

Rat corner_factor(const std::vector<long>& ds) {
  Rat r(1);
  for (long d : ds) r *= smooth_factor(d);
  return r;
}

DegenerationGeometry pn_geometry(int n_proj) {
  return make_geometry(build_normal_cone_deformation(n_proj));
}

std::vector<GraphVerdict> degeneration_verdicts(const DegenerationGeometry& geom, long d,
                                                const AssemblyOptions& opts) {
  EnumerationRequest req;
  req.genus = 0;
  req.markings = 2;
  req.beta = {Int(d), Int(0)};
  req.marking_sides = {1, 2};  // one marking per side: ev_1 on X1, ev*H~ on X2
  auto graphs = opts.serial ? enumerate_graphs_serial(geom, req) : enumerate_graphs(geom, req);
  std::vector<GraphVerdict> out;
  out.reserve(graphs.size());
  for (const DecoratedBipartiteGraph& g : graphs) out.push_back(apply_filters(g, geom, opts.filters));
  return out;
}

namespace {

EnumerationRequest degeneration_request(long d) {
  EnumerationRequest req;
  req.genus = 0;
  req.markings = 2;
  req.beta = {Int(d), Int(0)};
  req.marking_sides = {1, 2};
  return req;
}

// Everything the enumerator reads from the geometry: the Picard rank, the
// effective-cone generators and the three distinguished classes. Cells with
// equal fingerprints get byte-identical graph lists, so the grid runner can
// share one enumeration between them.
std::string geometry_fingerprint(const DegenerationGeometry& geom) {
  std::string fp = std::to_string(geom.dpd.pic.rank);
  auto add = [&fp](const IntVec& v) {
    fp += '|';
    for (const Int& x : v) {
      fp += x.get_str();
      fp += ',';
    }
  };
  add(geom.x1_class);
  add(geom.x2_class);
  add(geom.fiber_class);
  std::vector<std::string> walls;
  for (const WallCurve& w : wall_curves(geom.dpd.total_fan, geom.dpd.pic)) {
    std::string ws;
    for (const Int& x : w.curve_class) {
      ws += x.get_str();
      ws += ',';
    }
    walls.push_back(ws);
  }
  std::sort(walls.begin(), walls.end());
  // Repeated wall classes generate the same cone; only the set matters.
  walls.erase(std::unique(walls.begin(), walls.end()), walls.end());
  for (const std::string& w : walls) {
    fp += ';';
    fp += w;
  }
  return fp;
}

CorrespondenceReport assemble_from_graphs(int n_proj, long d, const DegenerationGeometry& geom,
                                          const std::vector<DecoratedBipartiteGraph>& graphs,
                                          const AssemblyOptions& opts) {
  CorrespondenceReport rep;
  rep.n_proj = n_proj;
  rep.d = d;
  rep.graphs_before_filters = graphs.size();
  for (const DecoratedBipartiteGraph& g : graphs) {
    GraphVerdict v = apply_filters(g, geom, opts.filters);
    if (v.contributes) {
      rep.survivors.push_back(g);
      rep.survivor_verdicts.push_back(v);
    }
  }
  if (rep.survivors.size() != 1)
    throw std::runtime_error("filter cascade incomplete (" + std::to_string(rep.survivors.size()) +
                             " survivors)");

  rep.coefficient = rep.survivor_verdicts[0].coefficient;
  rep.contribution = graph_contribution(LocalizationGraph{d});
  rep.assembled_log_value = rep.coefficient * rep.contribution;
  rep.assembled_log_value.canonicalize();
  rep.predicted_sign = smooth_factor(d);
  rep.match = rep.assembled_log_value == rep.predicted_sign;
  if (!rep.match) throw std::runtime_error("correspondence violated");
  return rep;
}

}  // namespace

CorrespondenceReport assemble_degeneration(int n_proj, long d, const AssemblyOptions& opts) {
  if (n_proj < 2)
    throw std::invalid_argument(
        "N must be >= 2: the N = 1 central fibre has a more complicated presentation and is out "
        "of scope; the predicted correspondence value is still smooth_factor(d)");
  if (d < 1) throw std::invalid_argument("d must be >= 1");
  DegenerationGeometry geom = pn_geometry(n_proj);
  EnumerationRequest req = degeneration_request(d);
  auto graphs = opts.serial ? enumerate_graphs_serial(geom, req) : enumerate_graphs(geom, req);
  return assemble_from_graphs(n_proj, d, geom, graphs, opts);
}

long virtual_dimension(const ModuliSpec& s) {
  long n = s.markings;
  if (s.kind == ModuliKind::log_relative) {
    long alpha_total = 0;
    size_t r = s.divisor_degrees.size();
    std::vector<long> per_divisor(r, 0);
    for (const std::vector<long>& a : s.tangency) {
      if (a.size() != r) throw std::invalid_argument("tangency row has wrong length");
      for (size_t i = 0; i < r; ++i) per_divisor[i] += a[i];
    }
    if (long(s.tangency.size()) != n) throw std::invalid_argument("one tangency row per marking");
    for (size_t i = 0; i < r; ++i) {
      if (per_divisor[i] != s.divisor_degrees[i])
        throw std::invalid_argument("tangency must satisfy sum alpha_i = D.beta");
      alpha_total += per_divisor[i];
    }
    return s.target_dim + s.anticanonical_degree + n - 3 - alpha_total;
  }
  // Local total space of rank r, with r divisor insertions each cutting one
  // dimension; the bundle degree lowers the obstruction-free part.
  long r = long(s.divisor_degrees.size());
  long bundle_degree = 0;
  for (long d : s.divisor_degrees) bundle_degree += d;
  return s.target_dim + r + (s.anticanonical_degree - bundle_degree) + n - 3 - r;
}

SncReport snc_reduction_check(const std::vector<long>& ds) {
  if (ds.empty()) throw std::invalid_argument("need at least one divisor degree");
  SncReport rep;
  rep.ds = ds;
  rep.corner = corner_factor(ds);
  rep.smooth_product = Rat(1);
  for (long d : ds) rep.smooth_product *= smooth_factor(d);
  rep.consistent = rep.corner == rep.smooth_product;
  if (ds.size() == 2) {
    rep.rank2 = snc_rank2_factor(ds[0], ds[1]);
    // rank-2 sign differs from the corner sign by (-1)^2 bookkeeping
    rep.consistent = rep.consistent && *rep.rank2 == rep.corner;
  }
  return rep;
}

std::vector<GridCell> correspondence_grid(int n_max, long d_max) {
  if (n_max < 2 || d_max < 1) throw std::invalid_argument("grid needs N >= 2 and d >= 1");
  // The (P^N, H) geometries share one fingerprint for every N, so each degree
  // is enumerated once and only the filter/assembly stage runs per cell.
  // Degrees are the parallel unit; the N sweep inside a degree is serial.
  std::vector<DegenerationGeometry> geoms;
  std::vector<std::string> fps;
  for (int n = 2; n <= n_max; ++n) {
    geoms.push_back(pn_geometry(n));
    fps.push_back(geometry_fingerprint(geoms.back()));
  }
  std::vector<std::vector<GridCell>> by_degree(d_max);
  std::exception_ptr error;
  std::mutex error_mutex;
#pragma omp parallel for schedule(dynamic)
  for (long d = 1; d <= d_max; ++d) {
    try {
      AssemblyOptions opts;
      opts.serial = true;  // degrees are the parallel unit; keep inner loops serial
      std::vector<DecoratedBipartiteGraph> graphs;
      std::string graphs_fp;
      for (int n = 2; n <= n_max; ++n) {
        const DegenerationGeometry& geom = geoms[n - 2];
        if (graphs_fp != fps[n - 2]) {
          graphs = enumerate_graphs_serial(geom, degeneration_request(d));
          graphs_fp = fps[n - 2];
        }
        CorrespondenceReport r = assemble_from_graphs(n, d, geom, graphs, opts);
        by_degree[d - 1].push_back({r.n_proj, r.d, r.survivors.size(), r.coefficient,
                                    r.contribution, r.assembled_log_value, r.predicted_sign,
                                    r.match});
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  std::vector<GridCell> out;
  for (int n = 2; n <= n_max; ++n)
    for (long d = 1; d <= d_max; ++d) out.push_back(by_degree[d - 1][n - 2]);
  return out;
}

}  // namespace qdeg
