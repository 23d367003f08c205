#pragma once

#include "qdeg/graphs.hpp"

namespace qdeg {

// Sign factors of the local/logarithmic correspondence.
Rat smooth_factor(long d);                      // (-1)^{d+1}
Rat snc_rank2_factor(long d1, long d2);         // (-1)^{d1+d2}
Rat corner_factor(const std::vector<long>& ds); // prod (-1)^{d_i+1}

struct CorrespondenceReport {
  int n_proj = 0;  // X = P^N
  long d = 0;
  std::vector<DecoratedBipartiteGraph> survivors;
  std::vector<GraphVerdict> survivor_verdicts;
  size_t graphs_before_filters = 0;
  Rat coefficient;          // m / |Aut| of the unique survivor
  Rat contribution;         // localized vertex invariant (-1)^{d+1}/d
  Rat assembled_log_value;  // coefficient * contribution
  Rat predicted_sign;       // smooth_factor(d)
  bool match = false;
};

struct AssemblyOptions {
  FilterOptions filters;
  bool serial = false;  // use the reference enumerator
};

// The degeneration formula for (P^N, H), beta = (d, 0), two markings forced
// one per side: requires the filter cascade to leave exactly one graph and
// checks the assembled number against the predicted sign.
CorrespondenceReport assemble_degeneration(int n_proj, long d, const AssemblyOptions& opts = {});

// Survivor counts only, for filter-necessity experiments.
std::vector<GraphVerdict> degeneration_verdicts(const DegenerationGeometry& geom, long d,
                                                const AssemblyOptions& opts = {});
DegenerationGeometry pn_geometry(int n_proj);

enum class ModuliKind { log_relative, local_total_space };

struct ModuliSpec {
  ModuliKind kind = ModuliKind::log_relative;
  int target_dim = 0;
  long anticanonical_degree = 0;       // c1(T_X) . beta
  std::vector<long> divisor_degrees;   // d_i = D_i . beta
  int markings = 0;
  std::vector<std::vector<long>> tangency;  // alpha: per marking, per divisor
};

// Genus-zero expected dimensions; log_relative requires sum alpha_i = D.beta
// per divisor.
long virtual_dimension(const ModuliSpec& s);

struct SncReport {
  std::vector<long> ds;
  Rat corner;
  Rat smooth_product;
  std::optional<Rat> rank2;  // present when r = 2
  bool consistent = false;
};

SncReport snc_reduction_check(const std::vector<long>& ds);

struct GridCell {
  int n_proj;
  long d;
  size_t survivors;
  Rat coefficient, contribution, assembled, predicted;
  bool match;
};

// Batch run over 2 <= N <= n_max, 1 <= d <= d_max; cells computed in
// parallel, reported in (N, d) order.
std::vector<GridCell> correspondence_grid(int n_max, long d_max);

}  // namespace qdeg
