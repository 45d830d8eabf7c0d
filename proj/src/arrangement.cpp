#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <string>

#include "sphcov/base_complex.hpp"
#include "sphcov/error.hpp"

namespace sphcov {

namespace {

int cluster_point(std::vector<Vec3>& pts, const Vec3& p) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (same_point(pts[i], p)) return static_cast<int>(i);
  pts.push_back(p.normalized());
  return static_cast<int>(pts.size()) - 1;
}

// Whether the minor arc u->v meets the complex only at u and v (and, when
// `allow_at_v` lists a vertex, only at that endpoint).
bool arc_is_free(const BaseComplex& bc, const Vec3& from, int to_vertex, const std::vector<Vec3>& avoid) {
  const Vec3& to = bc.position(to_vertex);
  if (angle_between(from, to) <= kEpsSep || antipodal(from, to)) return false;
  const GeodesicSegment s{SpherePoint(from), SpherePoint(to)};
  for (int e = 0; e < bc.num_edges(); ++e) {
    const int d = 2 * e;
    const bool incident = bc.origin(d) == to_vertex || bc.target(d) == to_vertex;
    const SegmentIntersection x = segment_intersection(s, bc.segment(d));
    if (x.overlap) return false;
    for (const auto& p : x.points) {
      if (incident && same_point(p.vec(), to)) continue;
      return false;
    }
  }
  for (int v = 0; v < bc.num_vertices(); ++v) {
    if (v == to_vertex) continue;
    if (distance_to_segment(bc.position(v), s) <= kEpsSep) return false;
  }
  for (const auto& a : avoid) {
    if (same_point(a, from)) continue;
    if (distance_to_segment(a, s) <= kEpsSep) return false;
  }
  return true;
}

}  // namespace

BaseComplex build_arrangement(const CurveInput& curve, const SpecialSet& special) {
  special.validate();
  const int n = static_cast<int>(curve.points.size());
  if (n > curve.max_segments) {
    throw Error(ErrorCode::TooManySegments,
                std::to_string(n) + " segments exceed the limit of " + std::to_string(curve.max_segments));
  }
  if (n < 2) throw Error(ErrorCode::NotClosed, "a closed curve needs at least two vertices");
  std::vector<GeodesicSegment> segs;
  for (int i = 0; i < n; ++i) {
    GeodesicSegment s{curve.points[i], curve.points[(i + 1) % n]};
    require_valid(s);
    segs.push_back(s);
  }

  std::vector<Vec3> pts;
  std::set<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    std::vector<double> params{0.0, 1.0};
    const double len = geodesic_length(segs[i]);
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const SegmentIntersection x = segment_intersection(segs[i], segs[j]);
      for (const auto& p : x.points) {
        if (auto s = locate_on_segment(p.vec(), segs[i])) params.push_back(*s);
      }
      if (x.overlap) {
        for (const Vec3& p : {x.overlap->a.vec(), x.overlap->b.vec()}) {
          if (auto s = locate_on_segment(p, segs[i])) params.push_back(*s);
        }
      }
    }
    for (const auto& a : special.points) {
      if (auto s = locate_on_segment(a.vec(), segs[i])) params.push_back(*s);
    }
    std::sort(params.begin(), params.end());
    std::vector<int> ids;
    for (double s : params) {
      Vec3 p = segs[i].at(s);
      if (s == 0.0) p = segs[i].a.vec();
      if (s == 1.0) p = segs[i].b.vec();
      // Snap to a special point when the split came from one.
      for (const auto& a : special.points)
        if (same_point(a.vec(), p)) p = a.vec();
      const int id = cluster_point(pts, p);
      if (ids.empty() || ids.back() != id) ids.push_back(id);
    }
    for (std::size_t k = 0; k + 1 < ids.size(); ++k) {
      const int u = ids[k], v = ids[k + 1];
      if (u == v) continue;
      if (angle_between(pts[u], pts[v]) > len + 1e-9) {
        throw Error(ErrorCode::OverlappingInput, "split produced an arc longer than its segment");
      }
      edges.insert({std::min(u, v), std::max(u, v)});
    }
  }
  std::vector<int> special_vertex(special.points.size(), -1);
  for (std::size_t j = 0; j < special.points.size(); ++j) {
    for (std::size_t v = 0; v < pts.size(); ++v)
      if (same_point(pts[v], special.points[j].vec())) special_vertex[j] = static_cast<int>(v);
  }
  std::vector<std::pair<int, int>> edge_list(edges.begin(), edges.end());
  std::vector<EdgeKind> kinds(edge_list.size(), EdgeKind::Curve);
  BaseComplex bc = BaseComplex::from_edges(pts, edge_list, kinds, special, special_vertex);
  if (bc.euler_characteristic() != 2) {
    throw Error(ErrorCode::OverlappingInput, "arrangement fails the Euler formula");
  }
  return bc;
}

BaseComplex attach_scaffold(const BaseComplex& input) {
  BaseComplex bc = input;
  for (int j = 0; j < bc.q(); ++j) {
    if (bc.special_vertex(j) >= 0) continue;
    const Vec3 s = bc.special().points[j].vec();
    int face = -1;
    for (int f = 0; f < bc.num_faces() && face < 0; ++f) {
      for (int k : bc.loose_specials(f))
        if (k == j) face = f;
    }
    if (face < 0) throw Error(ErrorCode::ScaffoldBlocked, "special point " + std::to_string(j) + " has no face");
    std::vector<int> cand = bc.face_vertices(face);
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    std::stable_sort(cand.begin(), cand.end(), [&](int a, int b) {
      return angle_between(s, bc.position(a)) < angle_between(s, bc.position(b));
    });
    std::vector<Vec3> others;
    for (int k = 0; k < bc.q(); ++k)
      if (k != j && bc.special_vertex(k) < 0) others.push_back(bc.special().points[k].vec());
    int chosen = -1;
    for (int v : cand) {
      if (arc_is_free(bc, s, v, others)) {
        chosen = v;
        break;
      }
    }
    if (chosen < 0) {
      throw Error(ErrorCode::ScaffoldBlocked, "no crossing-free arc from special point " + std::to_string(j));
    }
    std::vector<Vec3> pts = bc.positions();
    pts.push_back(s);
    const int sv = static_cast<int>(pts.size()) - 1;
    std::vector<std::pair<int, int>> edges;
    std::vector<EdgeKind> kinds;
    for (int e = 0; e < bc.num_edges(); ++e) {
      edges.push_back({bc.origin(2 * e), bc.target(2 * e)});
      kinds.push_back(bc.kind(e));
    }
    edges.push_back({sv, chosen});
    kinds.push_back(EdgeKind::Scaffold);
    std::vector<int> where = bc.special_vertices();
    where[j] = sv;
    bc = BaseComplex::from_edges(pts, edges, kinds, bc.special(), where);
  }
  return bc;
}

namespace {

struct Triangulator {
  std::vector<Vec3>& pts;
  std::vector<std::vector<int>>& out;

  const Vec3& P(int v) const { return pts[v]; }

  bool proper_triangle(int a, int b, int c) const {
    if (a == b || b == c || a == c) return false;
    for (auto [x, y] : {std::pair{a, b}, std::pair{b, c}, std::pair{c, a}}) {
      const double ang = angle_between(P(x), P(y));
      if (ang <= kEpsSep || ang >= std::numbers::pi - 1e-6) return false;
    }
    return orient(P(a), P(b), P(c)) > 1e-12;
  }

  // Direction from position i toward `to` lies strictly inside the interior
  // wedge of the walk at i.
  bool in_wedge(const std::vector<int>& w, int i, const Vec3& to) const {
    const int n = static_cast<int>(w.size());
    const Vec3& v = P(w[i]);
    const Vec3 out_t = tangent_toward(v, P(w[(i + 1) % n]));
    const Vec3 back_t = tangent_toward(v, P(w[(i - 1 + n) % n]));
    double wedge = ccw_angle(v, out_t, back_t);
    if (wedge < 1e-14) wedge = 2 * std::numbers::pi;
    const double dir = ccw_angle(v, out_t, tangent_toward(v, to));
    return dir > 1e-9 && dir < wedge - 1e-9;
  }

  bool valid_diagonal(const std::vector<int>& w, int i, int j) const {
    const int n = static_cast<int>(w.size());
    const int a = w[i], b = w[j];
    if (a == b) return false;
    if ((i + 1) % n == j || (j + 1) % n == i) return false;
    const double ang = angle_between(P(a), P(b));
    if (ang <= kEpsSep || ang >= std::numbers::pi - 1e-6) return false;
    if (!in_wedge(w, i, P(b)) || !in_wedge(w, j, P(a))) return false;
    const GeodesicSegment s{SpherePoint(P(a)), SpherePoint(P(b))};
    for (int k = 0; k < n; ++k) {
      const int u = w[k], v = w[(k + 1) % n];
      if (u == v) continue;
      const SegmentIntersection x = segment_intersection(s, {SpherePoint(P(u)), SpherePoint(P(v))});
      if (x.overlap) return false;
      for (const auto& p : x.points) {
        const bool at_a = same_point(p.vec(), P(a)) && (u == a || v == a);
        const bool at_b = same_point(p.vec(), P(b)) && (u == b || v == b);
        if (!at_a && !at_b) return false;
      }
    }
    for (int k = 0; k < n; ++k) {
      const int u = w[k];
      if (u == a || u == b) continue;
      if (distance_to_segment(P(u), s) <= kEpsSep) return false;
    }
    return true;
  }

  bool try_fan(const std::vector<int>& w, const Vec3& c) {
    const int n = static_cast<int>(w.size());
    std::vector<Vec3> walk;
    for (int v : w) walk.push_back(P(v));
    if (!walk_contains(walk, c)) return false;
    for (int v : w)
      if (angle_between(P(v), c) <= 1e-7 || antipodal(P(v), c, 1e-6)) return false;
    double sum = 0;
    for (int k = 0; k < n; ++k) {
      const Vec3& a = P(w[k]);
      const Vec3& b = P(w[(k + 1) % n]);
      if (orient(c, a, b) <= 1e-12) return false;
      sum += walk_area({c, a, b});
    }
    if (std::abs(sum - walk_area(walk)) > 1e-9) return false;
    pts.push_back(c);
    const int cv = static_cast<int>(pts.size()) - 1;
    for (int k = 0; k < n; ++k) out.push_back({cv, w[k], w[(k + 1) % n]});
    return true;
  }

  void run(const std::vector<int>& w) {
    const int n = static_cast<int>(w.size());
    if (n == 3 && proper_triangle(w[0], w[1], w[2])) {
      out.push_back(w);
      return;
    }
    if (n >= 4) {
      for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            if (pass == 0 && j != (i + 2) % n) continue;
            if (!valid_diagonal(w, i, j)) continue;
            std::vector<int> w1, w2;
            for (int k = i;; k = (k + 1) % n) {
              w1.push_back(w[k]);
              if (k == j) break;
            }
            for (int k = j;; k = (k + 1) % n) {
              w2.push_back(w[k]);
              if (k == i) break;
            }
            run(w1);
            run(w2);
            return;
          }
        }
      }
    }
    // No diagonal: fan from an interior point.
    std::vector<Vec3> cands;
    Vec3 normal_sum = Vec3::Zero();
    Vec3 mean = Vec3::Zero();
    for (int k = 0; k < n; ++k) {
      normal_sum += P(w[k]).cross(P(w[(k + 1) % n]));
      mean += P(w[k]);
    }
    if (normal_sum.norm() > 1e-12) cands.push_back(normal_sum.normalized());
    if (mean.norm() > 1e-12) cands.push_back(mean.normalized());
    for (int k = 0; k < n; ++k) {
      const Vec3 s = P(w[k]) + P(w[(k + 1) % n]) + P(w[(k + 2) % n]);
      if (s.norm() > 1e-12) cands.push_back(s.normalized());
    }
    for (const auto& c : cands)
      if (try_fan(w, c)) return;
    throw Error(ErrorCode::TriangulationFailed, "face with " + std::to_string(n) + " sides has no valid split");
  }
};

}  // namespace

BaseComplex triangulate(const BaseComplex& bc) {
  std::vector<Vec3> pts = bc.positions();
  std::vector<std::vector<int>> tris;
  Triangulator t{pts, tris};
  for (int f = 0; f < bc.num_faces(); ++f) t.run(bc.face_vertices(f));
  return BaseComplex::from_cycles(pts, tris, bc.curve_edge_list(), bc.special(), bc.special_vertices());
}

}  // namespace sphcov
