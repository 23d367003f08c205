#include "qdeg/fan.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qdeg/simplex.hpp"

namespace qdeg {

IntMatrix Fan::ray_matrix() const {
  IntMatrix m(ray_count(), lattice_rank);
  for (int i = 0; i < ray_count(); ++i) {
    if (int(rays[i].size()) != lattice_rank) throw std::invalid_argument("ray of wrong dimension");
    for (int j = 0; j < lattice_rank; ++j) m.at(i, j) = rays[i][j];
  }
  return m;
}

std::string Fan::to_json() const {
  nlohmann::json j;
  j["lattice_rank"] = lattice_rank;
  j["rays"] = nlohmann::json::array();
  for (const auto& r : rays) {
    nlohmann::json row = nlohmann::json::array();
    for (const Int& x : r) row.push_back(x.get_si());
    j["rays"].push_back(row);
  }
  j["max_cones"] = max_cones;
  if (!ray_labels.empty()) j["labels"] = ray_labels;
  return j.dump();
}

Fan Fan::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Fan f;
  f.lattice_rank = j.at("lattice_rank").get<int>();
  for (const auto& row : j.at("rays")) {
    IntVec r;
    for (const auto& x : row) r.push_back(Int(x.get<long>()));
    f.rays.push_back(std::move(r));
  }
  f.max_cones = j.at("max_cones").get<std::vector<std::vector<int>>>();
  if (j.contains("labels")) f.ray_labels = j.at("labels").get<std::vector<std::string>>();
  return f;
}

std::string FanValidation::summary() const {
  if (!valid) {
    std::string s = "invalid";
    for (const auto& e : errors) s += "; " + e;
    return s;
  }
  std::string s = "valid";
  s += smooth ? ", smooth" : ", not smooth";
  s += complete ? ", complete" : ", not complete";
  return s;
}

namespace {

// Is there a functional vanishing on `zero`, >= 1 on `pos`, <= -1 on `neg`?
// Existence is equivalent to the two cones meeting exactly along their
// common face (proper separation of polyhedral cones).
bool separating_functional_exists(int n, const std::vector<IntVec>& zero,
                                  const std::vector<IntVec>& pos, const std::vector<IntVec>& neg) {
  // Variables: h = p - q (2n), one surplus per pos row, one slack per neg row.
  int npos = int(pos.size()), nneg = int(neg.size());
  LinearProgram lp;
  lp.m = int(zero.size()) + npos + nneg;
  lp.n = 2 * n + npos + nneg;
  lp.a.assign(size_t(lp.m) * lp.n, Rat(0));
  lp.b.assign(lp.m, Rat(0));
  int row = 0;
  auto set_h = [&](int r, const IntVec& v) {
    for (int j = 0; j < n; ++j) {
      lp.at(r, j) = Rat(v[j]);
      lp.at(r, n + j) = -Rat(v[j]);
    }
  };
  for (const auto& v : zero) { set_h(row, v); lp.b[row] = 0; ++row; }
  for (int k = 0; k < npos; ++k) {
    set_h(row, pos[k]);
    lp.at(row, 2 * n + k) = -1;
    lp.b[row] = 1;
    ++row;
  }
  for (int k = 0; k < nneg; ++k) {
    set_h(row, neg[k]);
    lp.at(row, 2 * n + npos + k) = 1;
    lp.b[row] = -1;
    ++row;
  }
  return lp_feasible_point(lp).has_value();
}

bool cone_smooth(const Fan& f, const std::vector<int>& cone) {
  IntMatrix m(int(cone.size()), f.lattice_rank);
  for (size_t i = 0; i < cone.size(); ++i)
    for (int j = 0; j < f.lattice_rank; ++j) m.at(int(i), j) = f.rays[cone[i]][j];
  SmithDecomposition snf = smith_normal_form(m);
  if (snf.diag_rank() != int(cone.size())) return false;  // dependent rays
  for (size_t i = 0; i < cone.size(); ++i)
    if (snf.d.at(int(i), int(i)) != 1) return false;
  return true;
}

}  // namespace

FanValidation validate_fan(const Fan& f) {
  FanValidation rep;
  rep.valid = true;
  rep.smooth = true;

  for (int i = 0; i < f.ray_count(); ++i) {
    if (int(f.rays[i].size()) != f.lattice_rank) {
      rep.valid = false;
      rep.errors.push_back("ray of wrong dimension (index " + std::to_string(i) + ")");
      return rep;
    }
    if (content(f.rays[i]) != 1) {
      rep.valid = false;
      rep.errors.push_back("ray not primitive (index " + std::to_string(i) + ")");
    }
  }
  for (int i = 0; i < f.ray_count(); ++i)
    for (int j = i + 1; j < f.ray_count(); ++j)
      if (f.rays[i] == f.rays[j]) {
        rep.valid = false;
        rep.errors.push_back("duplicate ray (indices " + std::to_string(i) + "," + std::to_string(j) + ")");
      }

  for (const auto& cone : f.max_cones) {
    for (int idx : cone)
      if (idx < 0 || idx >= f.ray_count()) {
        rep.valid = false;
        rep.errors.push_back("cone references missing ray");
        return rep;
      }
    IntMatrix m(int(cone.size()), f.lattice_rank);
    for (size_t i = 0; i < cone.size(); ++i)
      for (int j = 0; j < f.lattice_rank; ++j) m.at(int(i), j) = f.rays[cone[i]][j];
    if (smith_normal_form(m).diag_rank() != int(cone.size())) {
      rep.valid = false;
      rep.errors.push_back("cone rays linearly dependent");
    } else if (!cone_smooth(f, cone)) {
      rep.smooth = false;
    }
  }
  if (!rep.valid) return rep;

  // Pairwise face compatibility via proper separation.
  for (size_t ci = 0; ci < f.max_cones.size(); ++ci)
    for (size_t cj = ci + 1; cj < f.max_cones.size(); ++cj) {
      std::set<int> s1(f.max_cones[ci].begin(), f.max_cones[ci].end());
      std::set<int> s2(f.max_cones[cj].begin(), f.max_cones[cj].end());
      std::vector<IntVec> zero, pos, neg;
      for (int i : s1) (s2.count(i) ? zero : pos).push_back(f.rays[i]);
      for (int i : s2)
        if (!s1.count(i)) neg.push_back(f.rays[i]);
      if (pos.empty() && neg.empty()) continue;  // identical cones
      if (!separating_functional_exists(f.lattice_rank, zero, pos, neg)) {
        rep.valid = false;
        rep.errors.push_back("cones intersect off faces (cones " + std::to_string(ci) + "," +
                             std::to_string(cj) + ")");
      }
    }
  if (!rep.valid) return rep;

  // Completeness: all maximal cones full-dimensional and every facet interior
  // (shared by exactly two cones). For a fan that passed the face check this
  // means the support has no boundary, hence is everything.
  bool all_full = !f.max_cones.empty();
  for (const auto& cone : f.max_cones)
    if (int(cone.size()) != f.lattice_rank) all_full = false;
  if (all_full) {
    std::map<std::vector<int>, int> facet_count;
    for (const auto& cone : f.max_cones)
      for (size_t drop = 0; drop < cone.size(); ++drop) {
        std::vector<int> facet;
        for (size_t k = 0; k < cone.size(); ++k)
          if (k != drop) facet.push_back(cone[k]);
        std::sort(facet.begin(), facet.end());
        facet_count[facet]++;
      }
    rep.complete = true;
    for (const auto& [facet, count] : facet_count)
      if (count != 2) rep.complete = false;
  }
  return rep;
}

IntMatrix cox_weight_matrix(const Fan& f) {
  Cokernel ck = cokernel(f.ray_matrix());
  if (!ck.torsion.empty()) throw std::runtime_error("non-free class group unsupported");
  return ck.projection;
}

namespace {

// B^{-1} * p for unimodular s x s block B; exact and integral.
IntMatrix unimodular_solve(const IntMatrix& b, const IntMatrix& p) {
  SmithDecomposition snf = smith_normal_form(b);  // b = U D V, D = I
  for (int i = 0; i < b.rows(); ++i)
    if (snf.d.at(i, i) != 1) throw std::runtime_error("block not unimodular");
  // b^{-1} = V^{-1} U^{-1}  (since D = I)
  return snf.v_inv * (snf.u_inv * p);
}

}  // namespace

PicardPresentation picard_presentation(const Fan& f,
                                       const std::optional<std::vector<int>>& basis_rays) {
  IntMatrix p = cox_weight_matrix(f);  // s x #rays
  const int s = p.rows();

  std::vector<int> basis;
  if (basis_rays) {
    basis = *basis_rays;
    if (int(basis.size()) != s) throw std::runtime_error("chosen rays do not span Pic");
  } else {
    // First s-subset of ray columns with a unimodular block, in lex order
    // (ray counts here are tiny, exhaustive scan is fine).
    std::vector<int> comb(s);
    bool found = false;
    std::function<void(int, int)> scan = [&](int pos, int start) {
      if (found) return;
      if (pos == s) {
        IntMatrix b(s, s);
        for (int k = 0; k < s; ++k)
          for (int r = 0; r < s; ++r) b.at(r, k) = p.at(r, comb[k]);
        Int d = b.det();
        if (d == 1 || d == -1) {
          basis = comb;
          found = true;
        }
        return;
      }
      for (int j = start; j <= p.cols() - (s - pos); ++j) {
        comb[pos] = j;
        scan(pos + 1, j + 1);
        if (found) return;
      }
    };
    scan(0, 0);
    if (!found) throw std::runtime_error("chosen rays do not span Pic");
  }

  IntMatrix b(s, s);
  for (int k = 0; k < s; ++k)
    for (int r = 0; r < s; ++r) b.at(r, k) = p.at(r, basis[k]);
  Int d = b.det();
  if (d != 1 && d != -1) throw std::runtime_error("chosen rays do not span Pic");

  PicardPresentation pres;
  pres.rank = s;
  pres.basis_rays = basis;
  pres.divisor_class_of_ray = unimodular_solve(b, p).transpose();
  return pres;
}

Int intersection_number(const IntVec& divisor, const IntVec& curve) { return dot(divisor, curve); }

StarFan star_fan(const Fan& f, int ray, const PicardPresentation& pic) {
  if (ray < 0 || ray >= f.ray_count()) throw std::invalid_argument("ray not in fan");
  const int n = f.lattice_rank;

  // Projection killing the ray: rows 2..n of U^{-1} from the SNF of the
  // ray as a column vector (primitive, so D = e1).
  IntMatrix col(n, 1);
  for (int i = 0; i < n; ++i) col.at(i, 0) = f.rays[ray][i];
  SmithDecomposition snf = smith_normal_form(col);
  if (snf.d.at(0, 0) != 1) throw std::invalid_argument("ray not primitive");
  IntMatrix q(n - 1, n);
  for (int i = 0; i < n - 1; ++i)
    for (int j = 0; j < n; ++j) q.at(i, j) = snf.u_inv.at(i + 1, j);

  // Adjacent rays and images.
  std::set<int> adjacent;
  for (const auto& cone : f.max_cones)
    if (std::find(cone.begin(), cone.end(), ray) != cone.end())
      for (int r : cone)
        if (r != ray) adjacent.insert(r);

  StarFan out;
  out.quotient = q;
  out.star.lattice_rank = n - 1;
  std::map<int, int> star_index;
  for (int r : adjacent) {
    IntVec img = q.apply(f.rays[r]);
    if (content(img) != 1) throw std::runtime_error("star ray not primitive (fan not smooth?)");
    star_index[r] = out.star.ray_count();
    out.star.rays.push_back(img);
    out.source_ray.push_back(r);
    if (!f.ray_labels.empty()) out.star.ray_labels.push_back(f.ray_labels[r]);
  }
  std::set<std::vector<int>> seen;
  for (const auto& cone : f.max_cones) {
    if (std::find(cone.begin(), cone.end(), ray) == cone.end()) continue;
    std::vector<int> img;
    for (int r : cone)
      if (r != ray) img.push_back(star_index.at(r));
    std::sort(img.begin(), img.end());
    if (seen.insert(img).second) out.star.max_cones.push_back(img);
  }

  out.star_pic = picard_presentation(out.star);

  // phi: restrict each ambient basis class. A representative divisor with no
  // component along `ray` restricts coefficient-wise; non-adjacent rays
  // restrict to zero.
  IntMatrix ray_mat = f.ray_matrix();
  out.pic_restriction = IntMatrix(out.star_pic.rank, pic.rank);
  for (int k = 0; k < pic.rank; ++k) {
    int b = pic.basis_rays[k];
    IntVec coeff(f.ray_count(), Int(0));
    coeff[b] = 1;
    if (b == ray) {
      // Subtract div(chi^m) with <m, ray> = 1.
      IntMatrix rt(1, n);
      for (int j = 0; j < n; ++j) rt.at(0, j) = f.rays[ray][j];
      auto m = solve_integer(rt, IntVec{Int(1)});
      if (!m) throw std::runtime_error("no character pairing 1 with ray");
      IntVec pairings = ray_mat.apply(*m);
      for (int r = 0; r < f.ray_count(); ++r) coeff[r] -= pairings[r];
    }
    IntVec img(out.star_pic.rank, Int(0));
    for (const auto& [src, si] : star_index) {
      if (coeff[src] == 0) continue;
      IntVec cls = out.star_pic.ray_class(si);
      for (int t = 0; t < out.star_pic.rank; ++t) img[t] += coeff[src] * cls[t];
    }
    for (int t = 0; t < out.star_pic.rank; ++t) out.pic_restriction.at(t, k) = img[t];
  }
  return out;
}

std::vector<WallCurve> wall_curves(const Fan& f, const PicardPresentation& pic) {
  const int n = f.lattice_rank;
  std::map<std::vector<int>, std::vector<std::pair<int, int>>> facets;  // facet -> (cone, opposite ray)
  for (size_t c = 0; c < f.max_cones.size(); ++c) {
    const auto& cone = f.max_cones[c];
    if (int(cone.size()) != n) continue;
    for (size_t drop = 0; drop < cone.size(); ++drop) {
      std::vector<int> facet;
      for (size_t k = 0; k < cone.size(); ++k)
        if (k != drop) facet.push_back(cone[k]);
      std::sort(facet.begin(), facet.end());
      facets[facet].push_back({int(c), cone[drop]});
    }
  }

  std::vector<WallCurve> out;
  for (const auto& [facet, touching] : facets) {
    if (touching.size() != 2) continue;
    int u = touching[0].second, u2 = touching[1].second;
    // Wall relation: u + u2 + sum c_w w = 0 (smooth fan, coefficients integral).
    IntMatrix wmat(n, int(facet.size()));
    for (int i = 0; i < n; ++i)
      for (size_t k = 0; k < facet.size(); ++k) wmat.at(i, int(k)) = f.rays[facet[k]][i];
    IntVec rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = -(f.rays[u][i] + f.rays[u2][i]);
    auto cw = solve_integer(wmat, rhs);
    if (!cw) throw std::runtime_error("wall relation not integral (fan not smooth?)");

    // Intersection numbers with every ray divisor, then coordinates in the
    // dual of the Pic basis.
    IntVec nums(f.ray_count(), Int(0));
    nums[u] = 1;
    nums[u2] = 1;
    for (size_t k = 0; k < facet.size(); ++k) nums[facet[k]] = (*cw)[k];
    WallCurve wc;
    wc.wall_rays = facet;
    wc.curve_class.resize(pic.rank);
    for (int t = 0; t < pic.rank; ++t) wc.curve_class[t] = nums[pic.basis_rays[t]];
    out.push_back(std::move(wc));
  }
  return out;
}

bool effective_cone_membership(const Fan& f, const PicardPresentation& pic, const IntVec& curve) {
  std::vector<WallCurve> walls = wall_curves(f, pic);
  if (walls.empty()) throw std::runtime_error("no invariant curves");
  if (int(curve.size()) != pic.rank) throw std::invalid_argument("dimension mismatch");

  LinearProgram lp;
  lp.m = pic.rank;
  lp.n = int(walls.size());
  lp.a.assign(size_t(lp.m) * lp.n, Rat(0));
  lp.b.assign(lp.m, Rat(0));
  for (int i = 0; i < lp.m; ++i) {
    for (int k = 0; k < lp.n; ++k) lp.at(i, k) = Rat(walls[k].curve_class[i]);
    lp.b[i] = Rat(curve[i]);
  }
  return lp_feasible_point(lp).has_value();
}

}  // namespace qdeg
