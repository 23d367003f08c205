// qdeg: exact computations for toric double point degenerations and the
// local/logarithmic correspondence. All numbers are printed as exact
// fractions; identical invocations produce byte-identical output.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdeg/correspondence.hpp"
#include "qdeg/degeneration.hpp"
#include "qdeg/hbar.hpp"

using nlohmann::json;
using namespace qdeg;

namespace {

// Exit 1: bad input (files, arguments, non-degenerations).
// Exit 2: a proved theorem failed numerically.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

IntVec to_intvec(const std::vector<long>& v) { return IntVec(v.begin(), v.end()); }

DoublePointDegeneration load_degeneration(const std::string& family, int n_proj,
                                          const std::string& fan_path,
                                          const std::vector<long>& projection) {
  if (!family.empty()) {
    if (family != "PN") throw InputError("unknown family '" + family + "' (supported: PN)");
    return build_normal_cone_deformation(n_proj);
  }
  if (fan_path.empty()) throw InputError("need either --family or --fan");
  Fan f = Fan::from_json(read_file(fan_path));
  if (int(projection.size()) != f.lattice_rank)
    throw InputError("--projection must have one entry per lattice coordinate");
  IntMatrix proj(1, f.lattice_rank);
  for (int j = 0; j < f.lattice_rank; ++j) proj.at(0, j) = Int(projection[j]);
  return recognize_double_point(f, proj);
}

int run_fan(const std::string& path, const std::string& format) {
  Fan f = Fan::from_json(read_file(path));
  FanValidation v = validate_fan(f);
  if (format == "json") {
    json j;
    j["valid"] = v.valid;
    j["smooth"] = v.smooth;
    j["complete"] = v.complete;
    j["errors"] = v.errors;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << v.summary() << "\n";
  }
  return v.valid ? 0 : 1;
}

int run_degen(const DoublePointDegeneration& d, const std::string& format) {
  std::string report = degeneration_report_json(d);
  if (format == "json") {
    std::cout << report << "\n";
    return 0;
  }
  json j = json::parse(report);
  std::cout << "rho1 = " << j["rho1"].get<int>() << "\n";
  std::cout << "rho2 = " << j["rho2"].get<int>() << "\n";
  std::cout << "pic_rank = " << j["pic_rank"].get<int>() << "\n";
  if (j.contains("ghost_criterion"))
    std::cout << "ghost_criterion: " << j["ghost_criterion"].get<std::string>() << "\n";
  return 0;
}

int run_ghosts(const DoublePointDegeneration& d, bool is_pn, int component,
               const std::vector<long>& cls, const std::string& format) {
  if (component != 1 && component != 2) throw InputError("--component must be 1 or 2");
  if (int(cls.size()) != d.pic.rank)
    throw InputError("--class must have " + std::to_string(d.pic.rank) + " entries");
  ComponentEmbedding e = component_embedding(d, component);
  GhostVerdict v = is_ghost(e, to_intvec(cls));
  if (format == "json") {
    json j;
    j["ghost"] = v.ghost;
    if (!v.ghost) {
      std::vector<std::string> pre;
      for (const Int& x : v.preimage) pre.push_back(x.get_str());
      j["preimage"] = pre;
    }
    std::cout << j.dump() << "\n";
    return 0;
  }
  if (v.ghost) {
    std::cout << "ghost\n";
    return 0;
  }
  std::cout << "not ghost; preimage ";
  if (is_pn && component == 1 && v.preimage.size() == 1) {
    // H_2(P^N) = Z. l, so name the generator.
    if (v.preimage[0] != 1) std::cout << v.preimage[0].get_str() << "*";
    std::cout << "ℓ\n";
  } else {
    std::cout << "(";
    for (size_t i = 0; i < v.preimage.size(); ++i)
      std::cout << (i ? "," : "") << v.preimage[i].get_str();
    std::cout << ")\n";
  }
  return 0;
}

int run_graphs(const DoublePointDegeneration& d, const std::vector<long>& beta, int genus,
               int markings, const std::vector<int>& sides, long box, bool serial,
               const std::string& format) {
  DegenerationGeometry geom = make_geometry(d);
  EnumerationRequest req;
  req.genus = genus;
  req.markings = markings;
  req.beta = to_intvec(beta);
  req.marking_sides = sides;
  if (box >= 0) req.degree_box = box;
  auto graphs = serial ? enumerate_graphs_serial(geom, req) : enumerate_graphs(geom, req);

  if (format == "json") {
    json out = json::array();
    for (const DecoratedBipartiteGraph& g : graphs) {
      GraphVerdict v = apply_filters(g, geom);
      json jg;
      jg["graph"] = json::parse(graph_to_json(g));
      jg["multiplicity"] = multiplicity(g).get_str();
      jg["aut_order"] = automorphism_order(g).get_str();
      jg["contributes"] = v.contributes;
      jg["reason"] = reason_name(v.reason);
      if (v.contributes) jg["coefficient"] = to_string(v.coefficient);
      out.push_back(jg);
    }
    std::cout << out.dump() << "\n";
    return 0;
  }
  std::cout << "graphs: " << graphs.size() << "\n";
  std::cout << "idx\tV\tE\tm\t|Aut|\tverdict\n";
  size_t i = 0;
  for (const DecoratedBipartiteGraph& g : graphs) {
    GraphVerdict v = apply_filters(g, geom);
    std::cout << i++ << "\t" << g.vertices.size() << "\t" << g.edges.size() << "\t"
              << multiplicity(g).get_str() << "\t" << automorphism_order(g).get_str() << "\t";
    if (v.contributes)
      std::cout << "coefficient " << to_string(v.coefficient) << "\n";
    else
      std::cout << reason_name(v.reason) << "\n";
  }
  return 0;
}

int run_localize(long dmax, const std::string& format) {
  if (dmax < 1) throw InputError("--dmax must be >= 1");
  json out = json::array();
  for (long d = 1; d <= dmax; ++d) {
    Rat c = graph_contribution(LocalizationGraph{d});
    if (c != smooth_factor(d) / Rat(d))
      throw ConsistencyError("localization value off at d = " + std::to_string(d));
    if (format == "json") {
      out.push_back({{"d", d}, {"contribution", to_string(c)}});
    } else {
      std::cout << d << "\t" << to_string(c) << "\n";
    }
  }
  if (format == "json") std::cout << out.dump() << "\n";
  return 0;
}

json cell_record(const GridCell& c) {
  json j;
  j["N"] = c.n_proj;
  j["d"] = c.d;
  j["survivors"] = c.survivors;
  j["coefficient"] = to_string(c.coefficient);
  j["contribution"] = to_string(c.contribution);
  j["assembled"] = to_string(c.assembled);
  j["predicted"] = to_string(c.predicted);
  j["match"] = c.match;
  return j;
}

void print_cell(const GridCell& c) {
  std::cout << "N=" << c.n_proj << " d=" << c.d << " survivors=" << c.survivors
            << " coefficient=" << to_string(c.coefficient)
            << " contribution=" << to_string(c.contribution)
            << " assembled=" << to_string(c.assembled) << " predicted=" << to_string(c.predicted)
            << " match=" << (c.match ? "yes" : "no") << "\n";
}

int run_correspond(int n_proj, long d, const std::vector<long>& corner,
                   const std::vector<long>& grid, const std::string& format) {
  if (!corner.empty()) {
    SncReport r = snc_reduction_check(corner);
    if (format == "json") {
      json j;
      j["degrees"] = r.ds;
      j["corner"] = to_string(r.corner);
      j["smooth_product"] = to_string(r.smooth_product);
      if (r.rank2) j["rank2"] = to_string(*r.rank2);
      j["consistent"] = r.consistent;
      std::cout << j.dump() << "\n";
    } else {
      std::cout << "corner = " << to_string(r.corner)
                << ", smooth product = " << to_string(r.smooth_product);
      if (r.rank2) std::cout << ", rank-2 factor = " << to_string(*r.rank2);
      std::cout << (r.consistent ? " (consistent)" : " (INCONSISTENT)") << "\n";
    }
    if (!r.consistent) throw ConsistencyError("corner sign reduction failed");
    return 0;
  }
  if (!grid.empty()) {
    if (grid.size() != 2) throw InputError("--grid wants Nmax,dmax");
    auto cells = correspondence_grid(int(grid[0]), grid[1]);
    bool all = true;
    json out = json::array();
    for (const GridCell& c : cells) {
      all = all && c.match;
      if (format == "json")
        out.push_back(cell_record(c));
      else
        print_cell(c);
    }
    if (format == "json") std::cout << out.dump() << "\n";
    if (!all) throw ConsistencyError("correspondence violated somewhere in the grid");
    return 0;
  }
  if (n_proj < 0 || d < 0) throw InputError("need --N and --d, or --corner, or --grid");
  CorrespondenceReport r = assemble_degeneration(n_proj, d);
  GridCell c{r.n_proj,       r.d,
             r.survivors.size(), r.coefficient,
             r.contribution, r.assembled_log_value,
             r.predicted_sign,   r.match};
  if (format == "json")
    std::cout << cell_record(c).dump() << "\n";
  else
    print_cell(c);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "qdeg: exact arithmetic for toric double point degenerations, ghost classes,\n"
      "degeneration-formula graphs and hbar-localization. Numbers print as exact\n"
      "fractions p/q. Parallel batch work honors OMP_NUM_THREADS."};
  app.require_subcommand(1);
  app.fallthrough();  // --format may follow the subcommand
  std::string format = "table";
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"table", "json"}));

  auto* fan_cmd = app.add_subcommand("fan", "validate a fan file");
  std::string fan_path;
  fan_cmd->add_option("--validate", fan_path, "fan file (json)")->required();

  // shared degeneration source flags
  std::string family, dg_fan;
  int n_proj = 2;
  std::vector<long> projection;
  auto add_source = [&](CLI::App* cmd) {
    cmd->add_option("--family", family, "built-in family (PN = deformation to the normal cone)");
    cmd->add_option("--N", n_proj, "projective space dimension for --family PN");
    cmd->add_option("--fan", dg_fan, "total space fan file (json)");
    cmd->add_option("--projection", projection, "projection to the A^1 factor")->delimiter(',');
  };

  auto* degen_cmd = app.add_subcommand("degen", "recognize a double point degeneration");
  add_source(degen_cmd);

  auto* ghosts_cmd = app.add_subcommand("ghosts", "ghost test for a curve class");
  add_source(ghosts_cmd);
  std::vector<long> cls;
  int component = 1;
  ghosts_cmd->add_option("--class", cls, "curve class on the total space")
      ->delimiter(',')
      ->required();
  ghosts_cmd->add_option("--component", component, "component (1 or 2)");

  auto* graphs_cmd = app.add_subcommand("graphs", "enumerate decorated bipartite graphs");
  add_source(graphs_cmd);
  std::vector<long> beta;
  int genus = 0, markings = 0;
  std::vector<int> sides;
  long box = -1;
  bool serial = false;
  graphs_cmd->add_option("--beta", beta, "total curve class")->delimiter(',')->required();
  graphs_cmd->add_option("--genus", genus, "total genus");
  graphs_cmd->add_option("--markings", markings, "number of markings");
  graphs_cmd->add_option("--sides", sides, "forced side per marking (0 = free)")->delimiter(',');
  graphs_cmd->add_option("--box", box, "per-coordinate degree bound (derived when absent)");
  graphs_cmd->add_flag("--serial", serial, "use the serial reference enumerator");

  auto* loc_cmd = app.add_subcommand("localize", "multiple-cover contributions");
  long dmax = 1;
  loc_cmd->add_option("--dmax", dmax, "compute d = 1..dmax")->required();

  auto* corr_cmd = app.add_subcommand("correspond", "local/log correspondence checks");
  int corr_n = -1;
  long corr_d = -1;
  std::vector<long> corner, grid;
  corr_cmd->add_option("--N", corr_n, "projective space dimension");
  corr_cmd->add_option("--d", corr_d, "curve degree");
  corr_cmd->add_option("--corner", corner, "s.n.c. divisor degrees d1,d2,...")->delimiter(',');
  corr_cmd->add_option("--grid", grid, "batch run: Nmax,dmax")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*fan_cmd) return run_fan(fan_path, format);
    if (*degen_cmd) return run_degen(load_degeneration(family, n_proj, dg_fan, projection), format);
    if (*ghosts_cmd)
      return run_ghosts(load_degeneration(family, n_proj, dg_fan, projection), family == "PN",
                        component, cls, format);
    if (*graphs_cmd)
      return run_graphs(load_degeneration(family, n_proj, dg_fan, projection), beta, genus,
                        markings, sides, box, serial, format);
    if (*loc_cmd) return run_localize(dmax, format);
    if (*corr_cmd) return run_correspond(corr_n, corr_d, corner, grid, format);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed input: " << e.what() << "\n";
    return 1;
  } catch (const ConsistencyError& e) {
    std::cerr << "CONSISTENCY FAILURE: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    // Internal identities ("correspondence violated", "filter cascade
    // incomplete", ...) are the strongest regression signal.
    std::cerr << "CONSISTENCY FAILURE: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
