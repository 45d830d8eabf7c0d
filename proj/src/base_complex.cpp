#include "sphcov/base_complex.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "sphcov/error.hpp"

namespace sphcov {

void SpecialSet::validate() const {
  if (points.size() < 3) {
    throw Error(ErrorCode::PreconditionViolated, "special set needs q >= 3 points");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (same_point(points[i].vec(), points[j].vec())) {
        throw Error(ErrorCode::PreconditionViolated,
                    "special points " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      }
    }
  }
}

BaseComplex BaseComplex::from_cycles(std::vector<Vec3> vertices, const std::vector<std::vector<int>>& cycles,
                                     const std::vector<std::pair<int, int>>& curve_edges, SpecialSet special,
                                     std::vector<int> special_vertex) {
  BaseComplex bc;
  bc.pos_ = std::move(vertices);
  std::map<std::pair<int, int>, int> dart_of;
  auto dart_for = [&](int u, int v) -> int {
    if (dart_of.count({u, v})) {
      throw Error(ErrorCode::InvalidSurface,
                  "dart " + std::to_string(u) + "->" + std::to_string(v) + " used by two faces");
    }
    auto it = dart_of.find({v, u});
    int d;
    if (it != dart_of.end()) {
      d = it->second ^ 1;
    } else {
      const int e = static_cast<int>(bc.kind_.size());
      bc.kind_.push_back(EdgeKind::Scaffold);
      bc.origin_.push_back(u);
      bc.origin_.push_back(v);
      d = 2 * e;
    }
    dart_of[{u, v}] = d;
    return d;
  };

  std::vector<std::vector<int>> face_darts;
  face_darts.reserve(cycles.size());
  for (const auto& cyc : cycles) {
    if (cyc.size() < 2) throw Error(ErrorCode::InvalidSurface, "face cycle shorter than two");
    std::vector<int> ds;
    for (std::size_t k = 0; k < cyc.size(); ++k) ds.push_back(dart_for(cyc[k], cyc[(k + 1) % cyc.size()]));
    face_darts.push_back(std::move(ds));
  }
  const int nd = static_cast<int>(bc.origin_.size());
  bc.next_.assign(nd, -1);
  bc.prev_.assign(nd, -1);
  bc.face_.assign(nd, -1);
  for (std::size_t f = 0; f < face_darts.size(); ++f) {
    const auto& ds = face_darts[f];
    for (std::size_t k = 0; k < ds.size(); ++k) {
      const int d = ds[k];
      const int n = ds[(k + 1) % ds.size()];
      bc.next_[d] = n;
      bc.prev_[n] = d;
      bc.face_[d] = static_cast<int>(f);
    }
  }
  for (int d = 0; d < nd; ++d) {
    if (bc.face_[d] < 0) {
      throw Error(ErrorCode::InvalidSurface, "dart " + std::to_string(bc.origin_[d]) + "->" +
                                                 std::to_string(bc.origin_[d ^ 1]) + " has no face");
    }
  }
  bc.face_darts_ = std::move(face_darts);
  for (const auto& [u, v] : curve_edges) {
    auto it = dart_of.find({u, v});
    if (it == dart_of.end()) throw Error(ErrorCode::InvalidSurface, "curve edge is not an edge of the complex");
    bc.kind_[it->second >> 1] = EdgeKind::Curve;
  }
  bc.special_ = std::move(special);
  bc.special_vertex_ = std::move(special_vertex);
  bc.special_vertex_.resize(bc.special_.points.size(), -1);
  bc.finish();
  return bc;
}

BaseComplex BaseComplex::from_edges(std::vector<Vec3> vertices, const std::vector<std::pair<int, int>>& edges,
                                    const std::vector<EdgeKind>& kinds, SpecialSet special,
                                    std::vector<int> special_vertex) {
  const int nv = static_cast<int>(vertices.size());
  struct Out {
    int to;
    double az;
  };
  std::vector<std::vector<Out>> out(nv);
  for (const auto& [u, v] : edges) {
    if (u == v) throw Error(ErrorCode::DegenerateSegment, "loop edge");
    for (auto [a, b] : {std::pair{u, v}, std::pair{v, u}}) {
      out[a].push_back({b, 0.0});
    }
  }
  for (int v = 0; v < nv; ++v) {
    if (out[v].empty()) continue;
    const Vec3& p = vertices[v];
    const Vec3 e1 = tangent_toward(p, vertices[out[v].front().to]);
    const Vec3 e2 = p.cross(e1);
    for (auto& o : out[v]) {
      const Vec3 t = tangent_toward(p, vertices[o.to]);
      o.az = std::atan2(t.dot(e2), t.dot(e1));
    }
    std::stable_sort(out[v].begin(), out[v].end(), [](const Out& a, const Out& b) {
      if (a.az != b.az) return a.az < b.az;
      return a.to < b.to;
    });
  }
  auto index_of = [&](int v, int to) {
    for (std::size_t i = 0; i < out[v].size(); ++i)
      if (out[v][i].to == to) return static_cast<int>(i);
    return -1;
  };
  std::map<std::pair<int, int>, bool> used;
  std::vector<std::vector<int>> cycles;
  for (int u = 0; u < nv; ++u) {
    for (const auto& o : out[u]) {
      if (used[{u, o.to}]) continue;
      std::vector<int> cyc;
      int a = u, b = o.to;
      while (!used[{a, b}]) {
        used[{a, b}] = true;
        cyc.push_back(a);
        const int k = static_cast<int>(out[b].size());
        const int i = index_of(b, a);
        const int c = out[b][(i - 1 + k) % k].to;  // next clockwise from the twin
        a = b;
        b = c;
      }
      cycles.push_back(std::move(cyc));
    }
  }
  std::vector<std::pair<int, int>> curve;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (i < kinds.size() && kinds[i] == EdgeKind::Curve) curve.push_back(edges[i]);
  }
  return from_cycles(std::move(vertices), cycles, curve, std::move(special), std::move(special_vertex));
}

void BaseComplex::finish() {
  const int nd = num_darts();
  face_pos_.assign(nd, -1);
  area_.assign(face_darts_.size(), 0.0);
  for (int f = 0; f < num_faces(); ++f) {
    const auto& ds = face_darts_[f];
    std::vector<Vec3> walk;
    for (std::size_t k = 0; k < ds.size(); ++k) {
      face_pos_[ds[k]] = static_cast<int>(k);
      walk.push_back(pos_[origin_[ds[k]]]);
    }
    area_[f] = walk_area(walk);
  }
  out_.assign(pos_.size(), {});
  for (int d = 0; d < nd; ++d) out_[origin_[d]].push_back(d);
  for (int v = 0; v < num_vertices(); ++v) {
    auto& ds = out_[v];
    if (ds.empty()) continue;
    const Vec3& p = pos_[v];
    const Vec3 e1 = tangent_toward(p, pos_[target(ds.front())]);
    const Vec3 e2 = p.cross(e1);
    std::vector<std::pair<double, int>> keyed;
    for (int d : ds) {
      const Vec3 t = tangent_toward(p, pos_[target(d)]);
      keyed.push_back({std::atan2(t.dot(e2), t.dot(e1)), d});
    }
    std::sort(keyed.begin(), keyed.end());
    for (std::size_t i = 0; i < ds.size(); ++i) ds[i] = keyed[i].second;
  }
  special_of_vertex_.assign(pos_.size(), -1);
  loose_face_.assign(special_vertex_.size(), -1);
  for (std::size_t j = 0; j < special_vertex_.size(); ++j) {
    const int v = special_vertex_[j];
    if (v >= 0) {
      special_of_vertex_[v] = static_cast<int>(j);
      continue;
    }
    for (int f = 0; f < num_faces(); ++f) {
      std::vector<Vec3> walk;
      for (int d : face_darts_[f]) walk.push_back(pos_[origin_[d]]);
      if (walk_contains(walk, special_.points[j].vec())) {
        loose_face_[j] = f;
        break;
      }
    }
  }
}

std::vector<int> BaseComplex::face_vertices(int f) const {
  std::vector<int> vs;
  for (int d : face_darts_[f]) vs.push_back(origin_[d]);
  return vs;
}

int BaseComplex::dart_between(int u, int v) const {
  for (int d : out_[u])
    if (target(d) == v) return d;
  return -1;
}

std::vector<int> BaseComplex::loose_specials(int f) const {
  std::vector<int> js;
  for (std::size_t j = 0; j < loose_face_.size(); ++j)
    if (special_vertex_[j] < 0 && loose_face_[j] == f) js.push_back(static_cast<int>(j));
  return js;
}

double BaseComplex::total_area() const {
  double s = 0;
  for (double a : area_) s += a;
  return s;
}

bool BaseComplex::all_triangles() const {
  return std::all_of(face_darts_.begin(), face_darts_.end(), [](const auto& ds) { return ds.size() == 3; });
}

BaseComplex BaseComplex::with_curve_edges(const std::vector<int>& edges) const {
  BaseComplex bc = *this;
  for (int e : edges) bc.kind_[e] = EdgeKind::Curve;
  return bc;
}

BaseComplex BaseComplex::with_special_vertices(std::vector<int> where) const {
  BaseComplex bc = *this;
  bc.special_vertex_ = std::move(where);
  bc.finish();
  return bc;
}

BaseComplex BaseComplex::rotated(const Rotation& r, bool keep_special) const {
  BaseComplex bc = *this;
  for (auto& p : bc.pos_) p = r.apply(p).normalized();
  if (!keep_special) {
    for (auto& s : bc.special_.points) s = rotate(r, s);
  }
  bc.finish();
  return bc;
}

std::vector<std::pair<int, int>> BaseComplex::curve_edge_list() const {
  std::vector<std::pair<int, int>> out;
  for (int e = 0; e < num_edges(); ++e)
    if (kind_[e] == EdgeKind::Curve) out.push_back({origin_[2 * e], origin_[2 * e + 1]});
  return out;
}

BaseComplex rotate(const Rotation& r, const BaseComplex& bc) { return bc.rotated(r); }

bool walk_contains(const std::vector<Vec3>& walk, const Vec3& p) {
  const std::size_t k = walk.size();
  auto is_slit = [&](std::size_t i) {
    const Vec3& u = walk[i];
    const Vec3& v = walk[(i + 1) % k];
    for (std::size_t j = 0; j < k; ++j) {
      if (walk[j] == v && walk[(j + 1) % k] == u) return true;
    }
    return false;
  };
  for (std::size_t i = 0; i < k; ++i) {
    if (is_slit(i)) continue;
    const Vec3& u = walk[i];
    const Vec3& v = walk[(i + 1) % k];
    const double len = angle_between(u, v);
    if (len <= kEpsSep) continue;
    const Vec3 n = u.cross(v).normalized();
    for (double frac : {0.5, 0.37, 0.61}) {
      const GeodesicSegment edge{SpherePoint(u), SpherePoint(v)};
      const Vec3 mid = edge.at(frac);
      const double delta = std::min(1e-7, 0.01 * len);
      const Vec3 z = (mid - delta * n).normalized();
      if (angle_between(p, z) < 1e-9 || antipodal(p, z, 1e-6)) continue;
      const GeodesicSegment ray{SpherePoint(p), SpherePoint(z)};
      bool clean = true;
      int crossings = 0;
      for (std::size_t j = 0; j < k && clean; ++j) {
        const Vec3& a = walk[j];
        const Vec3& b = walk[(j + 1) % k];
        if (angle_between(a, b) <= kEpsSep) continue;
        if (distance_to_segment(a, ray) < 1e-10) {
          clean = false;
          break;
        }
        if (is_slit(j)) continue;
        const GeodesicSegment e{SpherePoint(a), SpherePoint(b)};
        const SegmentIntersection x = segment_intersection(ray, e);
        if (x.overlap) {
          clean = false;
          break;
        }
        for (const auto& q : x.points) {
          if (same_point(q.vec(), z, 1e-12) || same_point(q.vec(), p, 1e-12)) {
            clean = false;
            break;
          }
          ++crossings;
        }
      }
      if (clean) return crossings % 2 == 1;
    }
  }
  // Only slit edges: the walk encloses nothing but a tree.
  return false;
}

std::pair<int, int> left_right_faces(const BaseComplex& bc, int dart) {
  return {bc.face(dart), bc.face(BaseComplex::twin(dart))};
}

Incidence locate_point(const BaseComplex& bc, const Vec3& p) {
  int best_v = -1;
  double best_a = kEpsSep;
  for (int v = 0; v < bc.num_vertices(); ++v) {
    const double a = angle_between(bc.position(v), p);
    if (a <= best_a && (best_v < 0 || a < best_a)) {
      best_v = v;
      best_a = a;
    }
  }
  if (best_v >= 0) return {Incidence::Kind::Vertex, best_v, 0.0};
  for (int e = 0; e < bc.num_edges(); ++e) {
    if (auto s = locate_on_segment(p, bc.segment(2 * e))) {
      if (*s > 0 && *s < 1) return {Incidence::Kind::Edge, 2 * e, *s};
    }
  }
  for (int f = 0; f < bc.num_faces(); ++f) {
    std::vector<Vec3> walk;
    for (int v : bc.face_vertices(f)) walk.push_back(bc.position(v));
    if (walk_contains(walk, p)) return {Incidence::Kind::Face, f, 0.0};
  }
  throw Error(ErrorCode::AssertionFailed, "point lies in no face");
}

}  // namespace sphcov
