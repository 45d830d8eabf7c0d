#include <map>
#include <string>

#include "sphcov/base_complex.hpp"
#include "sphcov/error.hpp"

namespace sphcov {

namespace {

struct Entry {
  int vertex;
  Refinement::SideSource src;
  bool inserted;
};

// Assembles a refinement from per-edge inserted vertices and per-face plans.
// An empty plan keeps the expanded boundary as a single face.
Refinement assemble(const BaseComplex& old, std::vector<Vec3> pts, const std::vector<int>& split_vertex,
                    const std::vector<std::vector<std::vector<int>>>& plans) {
  Refinement r;
  const int nf = old.num_faces();
  r.pieces.assign(old.num_darts(), 1);
  for (int d = 0; d < old.num_darts(); ++d)
    if (split_vertex[d >> 1] >= 0) r.pieces[d] = 2;

  std::vector<std::vector<int>> cycles;
  r.new_faces_of.assign(nf, {});
  std::vector<std::map<std::pair<int, int>, Refinement::SideSource>> ext(nf);
  for (int f = 0; f < nf; ++f) {
    std::vector<int> expanded;
    std::vector<Entry> entries;
    const auto& ds = old.face_darts(f);
    for (std::size_t k = 0; k < ds.size(); ++k) {
      const int d = ds[k];
      entries.push_back({old.origin(d), {static_cast<int>(k), 0}, false});
      const int m = split_vertex[d >> 1];
      if (m >= 0) entries.push_back({m, {static_cast<int>(k), 1}, true});
    }
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const int u = entries[i].vertex;
      const int v = entries[(i + 1) % entries.size()].vertex;
      ext[f][{u, v}] = entries[i].src;
      expanded.push_back(u);
    }
    const auto& plan = plans[f];
    const std::vector<std::vector<int>> subs = plan.empty() ? std::vector<std::vector<int>>{expanded} : plan;
    for (const auto& cyc : subs) {
      r.new_faces_of[f].push_back(static_cast<int>(cycles.size()));
      r.old_face_of.push_back(f);
      std::vector<Refinement::SideSource> src;
      for (std::size_t k = 0; k < cyc.size(); ++k) {
        auto it = ext[f].find({cyc[k], cyc[(k + 1) % cyc.size()]});
        src.push_back(it == ext[f].end() ? Refinement::SideSource{} : it->second);
      }
      r.source.push_back(std::move(src));
      cycles.push_back(cyc);
    }
  }
  std::vector<std::pair<int, int>> curve;
  for (int e = 0; e < old.num_edges(); ++e) {
    if (old.kind(e) != EdgeKind::Curve) continue;
    const int u = old.origin(2 * e), v = old.target(2 * e);
    const int m = split_vertex[e];
    if (m >= 0) {
      curve.push_back({u, m});
      curve.push_back({m, v});
    } else {
      curve.push_back({u, v});
    }
  }
  auto nb = std::make_shared<BaseComplex>(
      BaseComplex::from_cycles(std::move(pts), cycles, curve, old.special(), old.special_vertices()));
  r.piece_dart.assign(nf, {});
  for (int f = 0; f < nf; ++f) {
    const auto& ds = old.face_darts(f);
    r.piece_dart[f].assign(ds.size(), {});
    for (std::size_t k = 0; k < ds.size(); ++k) {
      const int d = ds[k];
      const int u = old.origin(d), v = old.target(d);
      const int m = split_vertex[d >> 1];
      if (m >= 0) {
        r.piece_dart[f][k] = {nb->dart_between(u, m), nb->dart_between(m, v)};
      } else {
        r.piece_dart[f][k] = {nb->dart_between(u, v)};
      }
    }
  }
  r.base = std::move(nb);
  return r;
}

// Triangulates a triangle whose edges may carry one inserted vertex each.
std::vector<std::vector<int>> split_triangle_plan(std::vector<int> cyc, const std::vector<bool>& inserted_flag) {
  std::vector<bool> ins = inserted_flag;
  std::vector<std::vector<int>> subs;
  bool cut = true;
  while (cut && cyc.size() > 3) {
    cut = false;
    const std::size_t n = cyc.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (ins[i]) continue;
      const std::size_t p = (i + n - 1) % n, q = (i + 1) % n;
      if (ins[p] && ins[q]) {
        subs.push_back({cyc[p], cyc[i], cyc[q]});
        cyc.erase(cyc.begin() + static_cast<long>(i));
        ins.erase(ins.begin() + static_cast<long>(i));
        cut = true;
        break;
      }
    }
  }
  if (cyc.size() > 3) {
    std::size_t m = 0;
    while (!ins[m]) ++m;
    const std::size_t n = cyc.size();
    for (std::size_t t = 1; t + 1 < n; ++t) subs.push_back({cyc[m], cyc[(m + t) % n], cyc[(m + t + 1) % n]});
  } else {
    subs.push_back(cyc);
  }
  return subs;
}

}  // namespace

Refinement identity_refinement(const BaseComplex& bc) {
  return assemble(bc, bc.positions(), std::vector<int>(bc.num_edges(), -1),
                  std::vector<std::vector<std::vector<int>>>(bc.num_faces()));
}

Refinement split_edges(const BaseComplex& bc, const std::vector<std::pair<int, Vec3>>& splits) {
  std::vector<Vec3> pts = bc.positions();
  std::vector<int> split_vertex(bc.num_edges(), -1);
  for (const auto& [e, p] : splits) {
    if (split_vertex[e] >= 0) throw Error(ErrorCode::PreconditionViolated, "edge split twice");
    const auto s = locate_on_segment(p, bc.segment(2 * e));
    const double len = bc.length(2 * e);
    if (!s || *s * len <= kEpsSep || (1 - *s) * len <= kEpsSep) {
      throw Error(ErrorCode::PreconditionViolated, "split point is not inside edge " + std::to_string(e));
    }
    split_vertex[e] = static_cast<int>(pts.size());
    pts.push_back(bc.segment(2 * e).at(*s));
  }
  std::vector<std::vector<std::vector<int>>> plans(bc.num_faces());
  for (int f = 0; f < bc.num_faces(); ++f) {
    if (bc.face_size(f) != 3) continue;
    std::vector<int> cyc;
    std::vector<bool> ins;
    bool any = false;
    for (int d : bc.face_darts(f)) {
      cyc.push_back(bc.origin(d));
      ins.push_back(false);
      if (split_vertex[d >> 1] >= 0) {
        cyc.push_back(split_vertex[d >> 1]);
        ins.push_back(true);
        any = true;
      }
    }
    if (any) plans[f] = split_triangle_plan(cyc, ins);
  }
  return assemble(bc, std::move(pts), split_vertex, plans);
}

Refinement insert_in_face(const BaseComplex& bc, int face, const Vec3& p) {
  const auto vs = bc.face_vertices(face);
  for (std::size_t k = 0; k < vs.size(); ++k) {
    if (orient(p, bc.position(vs[k]), bc.position(vs[(k + 1) % vs.size()])) <= 1e-15) {
      throw Error(ErrorCode::PreconditionViolated, "point is not strictly inside convex face " + std::to_string(face));
    }
  }
  std::vector<Vec3> pts = bc.positions();
  const int x = static_cast<int>(pts.size());
  pts.push_back(p.normalized());
  std::vector<std::vector<std::vector<int>>> plans(bc.num_faces());
  for (std::size_t k = 0; k < vs.size(); ++k) plans[face].push_back({x, vs[k], vs[(k + 1) % vs.size()]});
  return assemble(bc, std::move(pts), std::vector<int>(bc.num_edges(), -1), plans);
}

}  // namespace sphcov
