#include "sphcov/normalize.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sphcov/error.hpp"

namespace sphcov {

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

StepRecord make_record(std::string op, std::string label, const SurfaceComplex& before, const SurfaceComplex& after,
                       bool split = false) {
  StepRecord r;
  r.op = std::move(op);
  r.label = std::move(label);
  r.pre = functionals(before);
  r.post = functionals(after);
  r.split = split;
  r.after = after;
  return r;
}

std::vector<bool> free_edge_mask(const SurfaceComplex& s) {
  std::vector<bool> m(s.base().num_edges(), false);
  for (int sd = 0; sd < s.num_sides(); ++sd)
    if (s.is_free(sd)) m[s.side_dart(sd) >> 1] = true;
  return m;
}

std::vector<bool> boundary_vertex_mask(const SurfaceComplex& s) {
  const BaseComplex& b = s.base();
  std::vector<bool> m(b.num_vertices(), false);
  const auto fe = free_edge_mask(s);
  for (int e = 0; e < b.num_edges(); ++e) {
    if (!fe[e]) continue;
    m[b.origin(2 * e)] = true;
    m[b.target(2 * e)] = true;
  }
  return m;
}

std::vector<bool> critical_value_mask(const SurfaceComplex& s, const SurfaceAnalysis& a) {
  std::vector<bool> m(s.base().num_vertices(), false);
  for (const auto& vs : a.sheets)
    if (vs.is_branch()) m[vs.base_vertex] = true;
  return m;
}

std::vector<bool> special_vertex_mask(const BaseComplex& b) {
  std::vector<bool> m(b.num_vertices(), false);
  for (int v : b.special_vertices())
    if (v >= 0) m[v] = true;
  return m;
}

std::vector<bool> operator|(std::vector<bool> x, const std::vector<bool>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = x[i] || y[i];
  return x;
}

// Retains one disk from the components of a re-paired surface: higher H,
// then smaller sum, then smaller L. Closed components are dropped.
SurfaceComplex choose_disk(const SurfaceComplex& repaired, bool* split) {
  auto parts = split_components(repaired);
  *split = parts.size() > 1;
  int best = -1;
  FunctionalReport best_r;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const Diagnostics dg = validate(parts[i]);
    if (!dg.ok) fail(ErrorCode::AssertionFailed, "re-pairing produced an invalid surface: " + dg.message);
    if (dg.kind == TopologyKind::Closed) continue;
    if (dg.kind != TopologyKind::Disk) fail(ErrorCode::AssertionFailed, "re-pairing produced a non-disk component");
    const FunctionalReport r = functionals(parts[i]);
    bool better = best < 0;
    if (!better) {
      if (*r.H > *best_r.H + 1e-12) better = true;
      else if (*r.H >= *best_r.H - 1e-12) {
        if (r.sum < best_r.sum) better = true;
        else if (r.sum == best_r.sum && r.L < best_r.L - 1e-12) better = true;
      }
    }
    if (better) {
      best = static_cast<int>(i);
      best_r = r;
    }
  }
  if (best < 0) fail(ErrorCode::AssertionFailed, "re-pairing left no disk component");
  return parts[best];
}

struct Refined {
  SurfaceComplex surface;
  std::vector<std::vector<int>> side_map;
};

Refined refine_surface(const SurfaceComplex& s, bool all_edges) {
  std::vector<int> edges;
  for (int e = 0; e < s.base().num_edges(); ++e)
    if (all_edges || s.base().kind(e) != EdgeKind::Curve) edges.push_back(e);
  const Refinement ref = midpoint_refinement(s.base(), edges);
  LiftedRefinement lr = lift_refinement(s, ref);
  return {std::move(lr.surface), std::move(lr.side_map)};
}

Vec3 nearest_point_on_segment(const Vec3& p, const GeodesicSegment& seg) {
  const Vec3 n = seg.normal();
  Vec3 proj = p - p.dot(n) * n;
  if (proj.norm() > 1e-15) {
    proj.normalize();
    if (auto t = locate_on_segment(proj, seg, 1e-12)) return seg.at(*t);
  }
  const Vec3 a = seg.a.vec(), b = seg.b.vec();
  return angle_between(p, a) <= angle_between(p, b) ? a : b;
}

}  // namespace

OpResult remove_nonspecial_folds(const SurfaceComplex& s) {
  OpResult out{s, {}, false};
  for (;;) {
    const SurfaceAnalysis a = analyze(out.surface);
    int fold = -1;
    for (std::size_t i = 0; i < a.sheets.size(); ++i) {
      const auto& vs = a.sheets[i];
      if (!vs.interior && vs.folded && !vs.is_special()) {
        fold = static_cast<int>(i);
        break;
      }
    }
    if (fold < 0) break;
    const VertexSheet& vs = a.sheets[fold];
    const BoundaryWalk& w = a.walks[a.walk_of_side[vs.out_side]];
    const int n = w.size();
    if (n <= 2) fail(ErrorCode::AssertionFailed, "fold closes the whole boundary under H >= 0");
    const int pin = a.position_in_walk[vs.in_side];
    const int pout = a.position_in_walk[vs.out_side];
    std::vector<int> alpha{vs.in_side}, beta{vs.out_side};
    const SurfaceComplex& cur = out.surface;
    while (2 * (static_cast<int>(alpha.size()) + 1) < n) {
      const int m = static_cast<int>(alpha.size());
      const int na = w.sides[((pin - m) % n + n) % n];
      const int nb = w.sides[(pout + m) % n];
      if (cur.side_dart(na) != BaseComplex::twin(cur.side_dart(nb))) break;
      if (a.sheets[a.sheet_of_corner[nb]].is_special()) break;
      alpha.insert(alpha.begin(), na);
      beta.push_back(nb);
    }
    SurfaceComplex next = sew(cur, alpha, beta);
    out.steps.push_back(make_record("fold", "no-folded sew", cur, next));
    out.surface = std::move(next);
  }
  return out;
}

OpResult push_interior_branch(const SurfaceComplex& s, int sheet, const NormalizeOptions& opt) {
  OpResult out{s, {}, false};
  SurfaceAnalysis a = analyze(s);
  {
    const VertexSheet& vs = a.sheets.at(sheet);
    if (!vs.interior || !vs.is_branch() || vs.is_special())
      fail(ErrorCode::PreconditionViolated, "push needs an interior non-special branch point");
  }
  std::optional<std::vector<int>> path;
  for (int attempt = 0;; ++attempt) {
    const SurfaceComplex& cur = out.surface;
    const int v = a.sheets[sheet].base_vertex;
    const auto forbidden = critical_value_mask(cur, a) | special_vertex_mask(cur.base());
    path = route_path(cur.base(), v, special_vertex_mask(cur.base()), forbidden);
    if (path) break;
    if (attempt >= opt.max_refinements) fail(ErrorCode::NoSuchPath, "no admissible path to a special point");
    const int corner = a.sheets[sheet].corners.front();
    Refined r = refine_surface(cur, attempt > 0);
    out.steps.push_back(make_record("refine", "midpoint refinement", cur, r.surface));
    out.surface = std::move(r.surface);
    a = analyze(out.surface);
    sheet = a.sheet_of_corner[r.side_map[corner].front()];
  }
  const SurfaceComplex cur = out.surface;
  const LiftResult lr = lift_path(cur, a, *path, sheet, LiftMode::FromInterior);
  const int d = lr.degree();
  const auto& e = lr.end_sheets;
  auto on_bd = [&](int i) { return !a.sheets[e[i]].interior; };
  int ci = -1, cj = -1, label = 0;
  auto find_pair = [&](bool boundary) {
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        if (e[i] == e[j] && on_bd(i) == boundary && on_bd(j) == boundary) {
          ci = i;
          cj = j;
          return true;
        }
    return false;
  };
  if (find_pair(true)) {
    label = 1;
  } else if (find_pair(false)) {
    label = 2;
  } else {
    std::vector<int> bd;
    for (int i = 0; i < d; ++i)
      if (on_bd(i)) bd.push_back(i);
    if (bd.size() >= 2) {
      label = 5;
      ci = bd[0];
      cj = bd[1];
    } else {
      label = bd.size() == 1 ? 3 : 4;
    }
  }
  const SurfaceComplex repaired =
      (label == 3 || label == 4) ? repair_cyclic(cur, lr) : repair_transposition(cur, lr, ci, cj);
  bool split = false;
  SurfaceComplex kept = choose_disk(repaired, &split);
  out.steps.push_back(make_record("push", "in-bd case " + std::to_string(label), cur, kept, split));
  out.surface = std::move(kept);
  out.split = split;
  return out;
}

OpResult clear_interior_branches(const SurfaceComplex& s, const NormalizeOptions& opt) {
  OpResult out{s, {}, false};
  for (;;) {
    const SurfaceAnalysis a = analyze(out.surface);
    int target = -1;
    for (std::size_t i = 0; i < a.sheets.size(); ++i) {
      const auto& vs = a.sheets[i];
      if (vs.interior && vs.is_branch() && !vs.is_special()) {
        target = static_cast<int>(i);
        break;
      }
    }
    if (target < 0) return out;
    OpResult r = push_interior_branch(out.surface, target, opt);
    out.steps.insert(out.steps.end(), r.steps.begin(), r.steps.end());
    out.surface = std::move(r.surface);
    if (r.split) {
      out.split = true;
      return out;
    }
  }
}

OpResult slide_boundary_branch(const SurfaceComplex& s, int sheet, int anchor_side) {
  const SurfaceAnalysis a = analyze(s);
  const VertexSheet& vs = a.sheets.at(sheet);
  if (vs.interior || !vs.is_branch() || vs.is_special() || vs.folded)
    fail(ErrorCode::PreconditionViolated, "slide needs an unfolded non-special boundary branch point");
  const BoundaryWalk& w = a.walks[a.walk_of_side[vs.out_side]];
  const int n = w.size();
  const int pos = a.position_in_walk[vs.out_side];
  const int anchor_sheet = anchor_side >= 0 ? a.sheet_of_corner[anchor_side] : -1;
  std::vector<int> darts;
  std::vector<bool> seen(s.base().num_vertices(), false);
  seen[vs.base_vertex] = true;
  for (int i = 0; i < n; ++i) {
    const int sd = w.sides[(pos + i) % n];
    const int tv = s.side_target(sd);
    if (seen[tv]) break;
    seen[tv] = true;
    darts.push_back(s.side_dart(sd));
    const int ts = a.sheet_of_corner[s.next_in_copy(sd)];
    const VertexSheet& t = a.sheets[ts];
    if (ts == anchor_sheet || t.is_branch() || t.is_special() || t.folded) break;
  }
  if (darts.empty()) fail(ErrorCode::AssertionFailed, "no boundary arc to slide along");
  const LiftResult lr = lift_path(s, a, darts, sheet, LiftMode::AlongBoundary);
  const int d = lr.degree();
  const int bl = d - 1;
  const auto& e = lr.end_sheets;
  int label = 0;
  SurfaceComplex repaired;
  int j1 = -1, j3 = -1;
  for (int j = 0; j < bl; ++j) {
    if (a.sheets[e[j]].interior) continue;
    if (e[j] == e[bl] && j1 < 0) j1 = j;
    if (j3 < 0) j3 = j;
  }
  if (j1 >= 0) {
    label = 1;
    repaired = repair_boundary_transposition(s, lr, j1);
  } else if (j3 >= 0) {
    label = 3;
    repaired = repair_boundary_transposition(s, lr, j3);
  } else {
    int ci = -1, cj = -1;
    for (int i = 0; i < bl && ci < 0; ++i)
      for (int j = i + 1; j < bl; ++j)
        if (e[i] == e[j]) {
          ci = i;
          cj = j;
          break;
        }
    if (ci >= 0) {
      label = 2;
      repaired = repair_transposition(s, lr, ci, cj);
    } else {
      label = 4;
      repaired = repair_boundary_shift(s, lr);
    }
  }
  bool split = false;
  SurfaceComplex kept = choose_disk(repaired, &split);
  OpResult out{kept, {}, split};
  out.steps.push_back(make_record("slide", "bd-bd case " + std::to_string(label), s, kept, split));
  if (!split) out.tracked_side = a.sheets[e[bl]].out_side;
  return out;
}

OpResult sweep_boundary_branches(const SurfaceComplex& s, int anchor_side, bool one_branch) {
  OpResult out{s, {}, false};
  if (anchor_side >= 0 && !s.is_free(anchor_side)) fail(ErrorCode::PreconditionViolated, "anchor must be a free side");
  for (;;) {
    SurfaceAnalysis a = analyze(out.surface);
    const int anchor_sheet = anchor_side >= 0 ? a.sheet_of_corner[anchor_side] : -1;
    int sheet = -1;
    for (std::size_t i = 0; i < a.sheets.size(); ++i) {
      const auto& vs = a.sheets[i];
      if (!vs.interior && vs.is_branch() && !vs.is_special() && static_cast<int>(i) != anchor_sheet) {
        if (vs.folded) fail(ErrorCode::PreconditionViolated, "sweep needs no non-special folded points");
        sheet = static_cast<int>(i);
        break;
      }
    }
    if (sheet < 0) return out;
    const std::size_t limit = 4 * out.surface.num_sides() + 4;
    for (std::size_t guard = 0;; ++guard) {
      if (guard > limit) fail(ErrorCode::AssertionFailed, "boundary sweep does not terminate");
      OpResult r = slide_boundary_branch(out.surface, sheet, anchor_side);
      out.steps.insert(out.steps.end(), r.steps.begin(), r.steps.end());
      out.surface = std::move(r.surface);
      if (r.split) {
        out.split = true;
        return out;
      }
      a = analyze(out.surface);
      sheet = a.sheet_of_corner[r.tracked_side];
      const VertexSheet& vs = a.sheets[sheet];
      const int anchor_now = anchor_side >= 0 ? a.sheet_of_corner[anchor_side] : -1;
      if (vs.is_special() || sheet == anchor_now || !vs.is_branch()) break;
    }
    if (one_branch) return out;
  }
}

int find_sink_arc(const SurfaceComplex& s) {
  const BaseComplex& b = s.base();
  int ncomp = 0;
  const auto label = complement_components(s, &ncomp);
  const auto on_bd = boundary_vertex_mask(s);
  std::vector<bool> has_special(ncomp, false);
  for (int v : b.special_vertices()) {
    if (v < 0 || on_bd[v]) continue;
    has_special[label[b.face(b.out_darts(v).front())]] = true;
  }
  // Prefer an arc leaving a boundary branch point so that parking is short.
  const SurfaceAnalysis a = analyze(s);
  int any = -1;
  for (int sd = 0; sd < s.num_sides(); ++sd) {
    if (!s.is_free(sd) || !has_special[label[b.face(s.side_dart(sd))]]) continue;
    const VertexSheet& vs = a.sheets[a.sheet_of_corner[sd]];
    if (vs.is_branch() && !vs.is_special()) return sd;
    if (any < 0) any = sd;
  }
  return any;
}

OpResult sink_branch_to_special(const SurfaceComplex& s, int arc_side, const NormalizeOptions& opt) {
  {
    const SurfaceAnalysis a = analyze(s);
    for (const auto& vs : a.sheets) {
      if (!vs.interior && vs.is_special()) fail(ErrorCode::PreconditionViolated, "boundary meets a special point");
      if (vs.folded) fail(ErrorCode::PreconditionViolated, "sink needs a surface without folded points");
      if (vs.interior && vs.is_branch() && !vs.is_special())
        fail(ErrorCode::PreconditionViolated, "interior non-special branch points must be cleared first");
    }
    if (!s.is_free(arc_side)) fail(ErrorCode::PreconditionViolated, "arc side is not on the boundary");
  }
  OpResult out{s, {}, false};
  // Split the arc so that its midpoint is a fresh boundary vertex.
  const int e = s.side_dart(arc_side) >> 1;
  LiftedRefinement lifted = lift_refinement(s, midpoint_refinement(s.base(), {e}));
  out.steps.push_back(make_record("refine", "arc midpoint", s, lifted.surface));
  out.surface = std::move(lifted.surface);
  int anchor = lifted.side_map[arc_side].back();

  OpResult park = sweep_boundary_branches(out.surface, anchor);
  out.steps.insert(out.steps.end(), park.steps.begin(), park.steps.end());
  out.surface = std::move(park.surface);
  if (park.split) {
    out.split = true;
    return out;
  }
  std::vector<int> path;
  for (int attempt = 0;; ++attempt) {
    const SurfaceComplex& cur = out.surface;
    const SurfaceAnalysis a = analyze(cur);
    if (a.sheets[a.sheet_of_corner[anchor]].multiplicity == 1) return out;
    const BaseComplex& b = cur.base();
    const int m = cur.side_origin(anchor);
    int c_left = -1;
    for (int v : b.face_vertices(b.face(cur.side_dart(anchor))))
      if (v != m && v != cur.side_target(anchor)) c_left = v;
    const auto on_bd = boundary_vertex_mask(cur);
    const auto forbidden = on_bd | critical_value_mask(cur, a) | special_vertex_mask(b);
    path = {b.dart_between(m, c_left)};
    if (b.special_at(c_left) >= 0) break;
    if (!forbidden[c_left]) {
      if (auto rest = route_path(b, c_left, special_vertex_mask(b), forbidden, free_edge_mask(cur))) {
        path.insert(path.end(), rest->begin(), rest->end());
        break;
      }
    }
    if (attempt >= opt.max_refinements) fail(ErrorCode::NoSuchPath, "no admissible path into the left component");
    Refined r = refine_surface(cur, false);
    out.steps.push_back(make_record("refine", "midpoint refinement", cur, r.surface));
    out.surface = std::move(r.surface);
    anchor = r.side_map[anchor].back();
  }
  const SurfaceComplex cur = out.surface;
  const SurfaceAnalysis a = analyze(cur);
  const LiftResult lr = lift_path(cur, a, path, a.sheet_of_corner[anchor], LiftMode::FromBoundaryLeft);
  if (lr.stop == StopReason::HitBoundary) fail(ErrorCode::AssertionFailed, "sink lift reached the boundary");
  int ci = -1, cj = -1;
  for (int i = 0; i < lr.degree() && ci < 0; ++i)
    for (int j = i + 1; j < lr.degree(); ++j)
      if (lr.end_sheets[i] == lr.end_sheets[j]) {
        ci = i;
        cj = j;
        break;
      }
  const int label = ci >= 0 ? 1 : 2;
  const SurfaceComplex repaired = ci >= 0 ? repair_transposition(cur, lr, ci, cj) : repair_cyclic(cur, lr);
  bool split = false;
  SurfaceComplex kept = choose_disk(repaired, &split);
  out.steps.push_back(make_record("sink", "bd-in case " + std::to_string(label), cur, kept, split));
  out.surface = std::move(kept);
  out.split = split;
  return out;
}

OpResult rotate_to_touch_special(const SurfaceComplex& s, const NormalizeOptions& opt) {
  const BaseComplex& b0 = s.base();
  {
    const SurfaceAnalysis a = analyze(s);
    for (const auto& vs : a.sheets)
      if (!vs.interior && vs.is_special()) fail(ErrorCode::PreconditionViolated, "boundary already meets a special point");
  }
  if (find_sink_arc(s) >= 0) fail(ErrorCode::PreconditionViolated, "a special point lies left of a boundary arc");
  const auto fe = free_edge_mask(s);
  std::vector<int> edges;
  std::vector<GeodesicSegment> segs;
  for (int e = 0; e < b0.num_edges(); ++e) {
    if (!fe[e]) continue;
    edges.push_back(e);
    segs.push_back(b0.segment(2 * e));
  }
  const int q = b0.q();
  std::vector<Vec3> targets;
  for (int j = 0; j < q; ++j) targets.push_back(b0.special().points[j].vec());
  int a1 = 0;
  double best = 1e9;
  Vec3 nearest;
  for (int j = 0; j < q; ++j) {
    for (const auto& sg : segs) {
      const Vec3 c = nearest_point_on_segment(targets[j], sg);
      const double dd = angle_between(targets[j], c);
      if (dd < best) {
        best = dd;
        a1 = j;
        nearest = c;
      }
    }
  }
  ContactOptions co;
  co.seed = opt.seed;
  co.jitter = opt.jitter;
  const MultiContactResult mc = first_contact_rotation(segs, targets, targets[a1].cross(nearest).normalized(), co);
  const Rotation phi = mc.contact.rotation;
  const Rotation back = phi.inverse();
  const int k = mc.target_index;
  const int e1 = edges[mc.contact.segment];

  // Orientation of the touched arc: its right side is the component of a_k.
  int ncomp = 0;
  const auto label = complement_components(s, &ncomp);
  const int uk = label[b0.face(b0.out_darts(b0.special_vertex(k)).front())];
  int g = 2 * e1;
  if (label[b0.face(g)] == uk) g ^= 1;
  if (label[b0.face(g)] == uk) fail(ErrorCode::AssertionFailed, "touched arc has the same component on both sides");
  int m_plus = 0, m_minus = 0;
  for (int sd = 0; sd < s.num_sides(); ++sd) {
    if (!s.is_free(sd)) continue;
    if (s.side_dart(sd) == g) ++m_plus;
    if (s.side_dart(sd) == (g ^ 1)) ++m_minus;
  }
  if (m_minus != 0) fail(ErrorCode::AssertionFailed, "touched arc carries boundary in both directions");

  // Work in the frame of the boundary: the special points move to back(a_j).
  std::vector<Vec3> moved(q);
  for (int j = 0; j < q; ++j) moved[j] = back.apply(targets[j]).normalized();
  SurfaceComplex cur = s;
  std::vector<int> where(q, -1);
  {
    LiftedRefinement lr = lift_refinement(cur, split_edges(cur.base(), {{e1, moved[k]}}));
    cur = std::move(lr.surface);
    where[k] = cur.base().num_vertices() - 1;
  }
  for (int j = 0; j < q; ++j) {
    if (j == k) continue;
    const BaseComplex& b = cur.base();
    const Incidence inc = locate_point(b, moved[j]);
    if (inc.kind == Incidence::Kind::Vertex) {
      const auto a = analyze(cur);
      const bool bad = boundary_vertex_mask(cur)[inc.id] || special_vertex_mask(b)[inc.id] ||
                       critical_value_mask(cur, a)[inc.id] || std::count(where.begin(), where.end(), inc.id) > 0;
      if (bad) fail(ErrorCode::AssertionFailed, "moved special point lands on a reserved vertex");
      where[j] = inc.id;
      continue;
    }
    Refinement ref = inc.kind == Incidence::Kind::Edge ? split_edges(b, {{inc.id >> 1, moved[j]}})
                                                       : insert_in_face(b, inc.id, moved[j]);
    if (inc.kind == Incidence::Kind::Edge && free_edge_mask(cur)[inc.id >> 1])
      fail(ErrorCode::AssertionFailed, "moved special point lands on the boundary");
    cur = lift_refinement(cur, ref).surface;
    where[j] = cur.base().num_vertices() - 1;
  }

  // Carry the branching over each old special vertex to its new position.
  for (int j = 0; j < q; ++j) {
    for (int attempt = 0;;) {
      const SurfaceAnalysis a = analyze(cur);
      const BaseComplex& b = cur.base();
      const int v = b.special_vertex(j);
      int sheet = -1;
      for (std::size_t i = 0; i < a.sheets.size(); ++i)
        if (a.sheets[i].base_vertex == v && a.sheets[i].is_branch()) sheet = static_cast<int>(i);
      if (sheet < 0) break;
      std::vector<bool> target(b.num_vertices(), false);
      target[where[j]] = true;
      auto forbidden = boundary_vertex_mask(cur) | critical_value_mask(cur, a) | special_vertex_mask(b);
      for (int w : where) forbidden[w] = true;
      const auto path = route_path(b, v, target, forbidden, free_edge_mask(cur));
      if (!path) {
        if (++attempt > opt.max_refinements) fail(ErrorCode::NoSuchPath, "no path to the moved special point");
        cur = refine_surface(cur, false).surface;
        continue;
      }
      const LiftResult lr = lift_path(cur, a, *path, sheet, LiftMode::FromInterior);
      for (int i = 0; i < lr.degree(); ++i) {
        if (!a.sheets[lr.end_sheets[i]].interior) fail(ErrorCode::AssertionFailed, "carried branch reaches the boundary");
        for (int i2 = i + 1; i2 < lr.degree(); ++i2)
          if (lr.end_sheets[i] == lr.end_sheets[i2]) fail(ErrorCode::AssertionFailed, "carried branch lifts coincide");
      }
      cur = repair_cyclic(cur, lr);
    }
  }
  auto nb = std::make_shared<BaseComplex>(cur.base().with_special_vertices(where).rotated(phi, true));
  SurfaceComplex rotated = cur.with_base(nb);
  require_valid(rotated, TopologyKind::Disk);

  const FunctionalReport r0 = functionals(s), r1 = functionals(rotated);
  if (r0.nbar != r1.nbar || r0.sum != r1.sum || std::abs(r0.A - r1.A) > 1e-9 || std::abs(r0.L - r1.L) > 1e-9)
    fail(ErrorCode::AssertionFailed, "rotation changed the functionals");
  OpResult out{rotated, {}, false};
  StepRecord rec = make_record("rotate", "rotation", s, rotated);
  rec.rotation = phi;
  rec.pockets = m_plus;
  out.steps.push_back(std::move(rec));
  return out;
}

int iteration_bound(const SurfaceComplex& s) {
  const FunctionalReport r = functionals(s);
  const SurfaceAnalysis a = analyze(s);
  int critical = 0;
  for (const auto& vs : a.sheets)
    if (vs.is_branch() || vs.folded) ++critical;
  return std::max(1, r.sum) * (critical + s.num_free() + 2);
}

bool is_normalized(const SurfaceComplex& s) {
  for (const auto& vs : analyze(s).sheets)
    if (!vs.is_special() && (vs.is_branch() || vs.folded)) return false;
  return true;
}

NormalizeResult normalize(const SurfaceComplex& s, const NormalizeOptions& opt, PipelineTrace* partial) {
  require_valid(s, TopologyKind::Disk);
  const FunctionalReport r0 = functionals(s);
  if (!r0.H || *r0.H < 0) fail(ErrorCode::NegativeH, "normalize needs H >= 0");
  NormalizeResult res{s, {}};
  PipelineTrace& tr = res.trace;
  tr.iteration_bound = iteration_bound(s);
  try {
    for (;;) {
      const SurfaceAnalysis a = analyze(res.surface);
      bool fold = false, inner = false, outer = false, meets = false;
      int inner_sheet = -1;
      for (std::size_t i = 0; i < a.sheets.size(); ++i) {
        const auto& vs = a.sheets[i];
        if (!vs.interior && vs.is_special()) meets = true;
        if (vs.is_special()) continue;
        if (vs.folded) fold = true;
        if (vs.is_branch() && vs.interior && inner_sheet < 0) {
          inner = true;
          inner_sheet = static_cast<int>(i);
        }
        if (vs.is_branch() && !vs.interior) outer = true;
      }
      if (!fold && !inner && !outer) break;
      if (++tr.iterations > tr.iteration_bound) fail(ErrorCode::AssertionFailed, "iteration bound exceeded");
      OpResult op;
      if (fold) {
        op = remove_nonspecial_folds(res.surface);
      } else if (inner) {
        op = push_interior_branch(res.surface, inner_sheet, opt);
      } else if (meets) {
        op = sweep_boundary_branches(res.surface, -1, true);
      } else if (const int arc = find_sink_arc(res.surface); arc >= 0) {
        op = sink_branch_to_special(res.surface, arc, opt);
      } else {
        op = rotate_to_touch_special(res.surface, opt);
      }
      for (auto& rec : op.steps) {
        TraceStep ts;
        if (rec.op == "rotate") tr.rotation = tr.rotation.then(rec.rotation);
        ts.rotation_so_far = tr.rotation;
        ts.certificate = is_better_than(rec.after, s, tr.rotation);
        ts.record = std::move(rec);
        tr.steps.push_back(std::move(ts));
        if (!tr.steps.back().certificate.ok())
          fail(ErrorCode::AssertionFailed, "certificate failed: " + tr.steps.back().certificate.detail);
      }
      res.surface = std::move(op.surface);
    }
  } catch (...) {
    if (partial) *partial = tr;
    throw;
  }
  if (partial) *partial = tr;
  return res;
}

PolygonalMembership polygonal_membership(const SurfaceComplex& s, const PolygonalBounds& bnd) {
  const FunctionalReport r = functionals(s);
  PolygonalMembership m;
  m.L = r.L;
  m.segments = r.boundary_segments;
  for (int n : r.nbar) m.max_nbar = std::max(m.max_nbar, n);
  m.ok = r.kind == TopologyKind::Disk && m.L <= bnd.L + 1e-9 && m.max_nbar <= bnd.M && m.segments <= bnd.N;
  return m;
}

}  // namespace sphcov
