#include "sphcov/surgery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <limits>
#include <queue>
#include <set>
#include <string>

#include "sphcov/error.hpp"

namespace sphcov {

namespace {

[[noreturn]] void fail(ErrorCode code, const std::string& msg) { throw Error(code, msg); }

int end_sheet_of(const SurfaceComplex& s, const SurfaceAnalysis& a, int side) {
  return a.sheet_of_corner[s.next_in_copy(side)];
}

// The unique corner of `sheet` whose side lies over `dart`.
int corner_with_dart(const SurfaceComplex& s, const VertexSheet& vs, int dart) {
  int found = -1;
  for (int c : vs.corners) {
    if (s.side_dart(c) != dart) continue;
    if (found >= 0) fail(ErrorCode::PreconditionViolated, "lift is not unique at a branch value");
    found = c;
  }
  if (found < 0) fail(ErrorCode::PreconditionViolated, "base path leaves the surface");
  return found;
}

void check_deltas(const FunctionalReport& before, const FunctionalReport& after, const SurgeryDelta& d,
                  const char* what) {
  const bool ok_l = std::abs(after.L - before.L - d.dL) <= 1e-9 * std::max(1.0, before.L);
  const bool ok_a = std::abs(after.A - before.A - d.dA) <= 1e-9 * std::max(1.0, before.A);
  bool ok_n = true;
  for (std::size_t j = 0; j < d.dnbar.size(); ++j) ok_n = ok_n && after.nbar[j] - before.nbar[j] == d.dnbar[j];
  if (!ok_l || !ok_a || !ok_n) {
    fail(ErrorCode::AssertionFailed, std::string(what) + ": functional deltas disagree with the prediction");
  }
}

struct PathCheck {
  std::vector<int> sheets;
  std::vector<int> vertices;
};

PathCheck check_simple_path(const SurfaceComplex& s, const SurfaceAnalysis& a, const SurfacePath& path) {
  if (path.empty()) fail(ErrorCode::PreconditionViolated, "empty path");
  for (std::size_t i = 0; i + 1 < path.sides.size(); ++i) {
    if (s.side_target(path.sides[i]) != s.side_origin(path.sides[i + 1]) ||
        end_sheet_of(s, a, path.sides[i]) != a.sheet_of_corner[path.sides[i + 1]]) {
      fail(ErrorCode::NotAdjacent, "consecutive path sides do not share a vertex");
    }
  }
  for (int sd : path.sides)
    if (s.is_free(sd)) fail(ErrorCode::PreconditionViolated, "path runs along the boundary");
  PathCheck pc;
  pc.sheets = path.sheets(s, a);
  pc.vertices = path.base_vertices(s);
  std::set<int> seen(pc.vertices.begin(), pc.vertices.end());
  if (seen.size() != pc.vertices.size()) fail(ErrorCode::NotSimple, "path image is not simple");
  return pc;
}

}  // namespace

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::Full: return "FULL";
    case StopReason::HitBoundary: return "HIT_BOUNDARY";
    case StopReason::HitSpecial: return "HIT_SPECIAL";
  }
  return "FULL";
}

std::vector<int> SurfacePath::sheets(const SurfaceComplex& s, const SurfaceAnalysis& a) const {
  std::vector<int> out;
  for (int sd : sides) out.push_back(a.sheet_of_corner[sd]);
  if (!sides.empty()) out.push_back(end_sheet_of(s, a, sides.back()));
  return out;
}

std::vector<int> SurfacePath::base_darts(const SurfaceComplex& s) const {
  std::vector<int> out;
  for (int sd : sides) out.push_back(s.side_dart(sd));
  return out;
}

std::vector<int> SurfacePath::base_vertices(const SurfaceComplex& s) const {
  std::vector<int> out;
  for (int sd : sides) out.push_back(s.side_origin(sd));
  if (!sides.empty()) out.push_back(s.side_target(sides.back()));
  return out;
}

double SurfacePath::length(const SurfaceComplex& s) const {
  double l = 0;
  for (int sd : sides) l += s.base().length(s.side_dart(sd));
  return l;
}

LiftResult lift_path(const SurfaceComplex& s, const SurfaceAnalysis& a, const std::vector<int>& base_path,
                     int start_sheet, LiftMode mode) {
  if (base_path.empty()) fail(ErrorCode::PreconditionViolated, "empty base path");
  const BaseComplex& base = s.base();
  for (std::size_t i = 0; i + 1 < base_path.size(); ++i)
    if (base.target(base_path[i]) != base.origin(base_path[i + 1]))
      fail(ErrorCode::NotAdjacent, "base path is not connected");
  const VertexSheet& p0 = a.sheets[start_sheet];
  if (p0.base_vertex != base.origin(base_path.front()))
    fail(ErrorCode::PreconditionViolated, "base path does not start under the sheet");

  LiftResult r;
  r.start_sheet = start_sheet;
  r.mode = mode;
  const int d1 = base_path.front();
  std::vector<int> starts;
  for (int c : p0.corners)
    if (s.side_dart(c) == d1) starts.push_back(c);
  switch (mode) {
    case LiftMode::FromInterior:
      if (!p0.interior) fail(ErrorCode::PreconditionViolated, "start sheet is on the boundary");
      if (!starts.empty()) {
        // Rotate so the first lift is the first one met in orbit order.
        const auto it = std::find(p0.corners.begin(), p0.corners.end(), starts.front());
        std::vector<int> rot(it, p0.corners.end());
        rot.insert(rot.end(), p0.corners.begin(), it);
        starts.clear();
        for (int c : rot)
          if (s.side_dart(c) == d1) starts.push_back(c);
      }
      break;
    case LiftMode::FromBoundaryLeft:
      if (p0.interior || p0.folded) fail(ErrorCode::PreconditionViolated, "start sheet must be an unfolded boundary point");
      if (s.side_dart(p0.out_side) == d1) fail(ErrorCode::PreconditionViolated, "path runs along the boundary");
      break;
    case LiftMode::AlongBoundary:
      if (p0.interior || p0.folded) fail(ErrorCode::PreconditionViolated, "start sheet must be an unfolded boundary point");
      if (s.side_dart(p0.out_side) != d1) fail(ErrorCode::PreconditionViolated, "path does not follow the boundary");
      break;
  }
  if (static_cast<int>(starts.size()) != p0.multiplicity) {
    fail(ErrorCode::PreconditionViolated, "number of lifts differs from the local multiplicity");
  }
  const int d = static_cast<int>(starts.size());
  const int boundary_lift = mode == LiftMode::AlongBoundary ? d - 1 : -1;
  r.lifts.assign(d, {});
  std::vector<int> cur = starts;
  const int k = static_cast<int>(base_path.size());
  for (int t = 0; t < k; ++t) {
    for (int i = 0; i < d; ++i) {
      if (i != boundary_lift && s.is_free(cur[i])) fail(ErrorCode::PreconditionViolated, "lift runs into the boundary");
      r.lifts[i].sides.push_back(cur[i]);
    }
    r.steps = t + 1;
    r.end_sheets.assign(d, -1);
    bool hit = false;
    for (int i = 0; i < d; ++i) {
      r.end_sheets[i] = end_sheet_of(s, a, cur[i]);
      if (i != boundary_lift && !a.sheets[r.end_sheets[i]].interior) hit = true;
    }
    if (t + 1 == k) break;
    if (hit) {
      r.stop = StopReason::HitBoundary;
      return r;
    }
    for (int i = 0; i < d; ++i) {
      const VertexSheet& vs = a.sheets[r.end_sheets[i]];
      if (vs.is_branch() || vs.folded) fail(ErrorCode::TouchesBranch, "base path passes over a branch value");
      if (i == boundary_lift) {
        if (s.side_dart(vs.out_side) != base_path[t + 1])
          fail(ErrorCode::PreconditionViolated, "path does not follow the boundary");
        cur[i] = vs.out_side;
      } else {
        cur[i] = corner_with_dart(s, vs, base_path[t + 1]);
      }
    }
  }
  bool hit = false;
  for (int i = 0; i < d; ++i)
    if (i != boundary_lift && !a.sheets[r.end_sheets[i]].interior) hit = true;
  if (hit) {
    r.stop = StopReason::HitBoundary;
  } else if (base.special_at(base.target(base_path.back())) >= 0) {
    r.stop = StopReason::HitSpecial;
  } else {
    r.stop = StopReason::Full;
  }
  return r;
}

namespace {

std::vector<std::vector<int>> partner_table(const SurfaceComplex& s, const LiftResult& lr) {
  std::vector<std::vector<int>> R(lr.degree(), std::vector<int>(lr.steps, -1));
  for (int i = 0; i < lr.degree(); ++i)
    for (int t = 0; t < lr.steps; ++t) R[i][t] = s.partner(lr.lifts[i].sides[t]);
  return R;
}

void unpair_lifts(SurfaceComplex& out, const LiftResult& lr) {
  for (const auto& l : lr.lifts)
    for (int t = 0; t < lr.steps; ++t) out.unpair_side(l.sides[t]);
}

void require_partner(int side) {
  if (side < 0) fail(ErrorCode::PreconditionViolated, "lift side is unexpectedly free");
}

}  // namespace

SurfaceComplex repair_cyclic(const SurfaceComplex& s, const LiftResult& lr) {
  const int d = lr.degree();
  const auto R = partner_table(s, lr);
  SurfaceComplex out = s;
  unpair_lifts(out, lr);
  for (int t = 0; t < lr.steps; ++t) {
    for (int i = 0; i < d; ++i) {
      require_partner(R[i][t]);
      out.pair_sides(lr.lifts[(i + 1) % d].sides[t], R[i][t]);
    }
  }
  return out;
}

SurfaceComplex repair_boundary_shift(const SurfaceComplex& s, const LiftResult& lr) {
  const int d = lr.degree();
  const auto R = partner_table(s, lr);
  SurfaceComplex out = s;
  unpair_lifts(out, lr);
  for (int t = 0; t < lr.steps; ++t) {
    if (R[d - 1][t] >= 0) fail(ErrorCode::PreconditionViolated, "boundary lift is not free");
    for (int i = 0; i + 1 < d; ++i) {
      require_partner(R[i][t]);
      out.pair_sides(lr.lifts[i + 1].sides[t], R[i][t]);
    }
  }
  return out;
}

SurfaceComplex repair_transposition(const SurfaceComplex& s, const LiftResult& lr, int i, int j) {
  if (i == j || i < 0 || j < 0 || i >= lr.degree() || j >= lr.degree())
    fail(ErrorCode::PreconditionViolated, "bad transposition indices");
  const auto R = partner_table(s, lr);
  SurfaceComplex out = s;
  for (int t = 0; t < lr.steps; ++t) {
    require_partner(R[i][t]);
    require_partner(R[j][t]);
    out.unpair_side(lr.lifts[i].sides[t]);
    out.unpair_side(lr.lifts[j].sides[t]);
    out.pair_sides(lr.lifts[i].sides[t], R[j][t]);
    out.pair_sides(lr.lifts[j].sides[t], R[i][t]);
  }
  return out;
}

SurfaceComplex repair_boundary_transposition(const SurfaceComplex& s, const LiftResult& lr, int j) {
  const int d = lr.degree();
  if (j < 0 || j >= d - 1) fail(ErrorCode::PreconditionViolated, "bad boundary transposition index");
  const auto R = partner_table(s, lr);
  SurfaceComplex out = s;
  for (int t = 0; t < lr.steps; ++t) {
    if (R[d - 1][t] >= 0) fail(ErrorCode::PreconditionViolated, "boundary lift is not free");
    require_partner(R[j][t]);
    out.unpair_side(lr.lifts[j].sides[t]);
    out.pair_sides(lr.lifts[d - 1].sides[t], R[j][t]);
  }
  return out;
}

std::vector<SurfaceComplex> split_components(const SurfaceComplex& s) {
  const int nc = s.num_copies();
  std::vector<int> comp(nc, -1);
  int count = 0;
  for (int c0 = 0; c0 < nc; ++c0) {
    if (comp[c0] >= 0) continue;
    std::queue<int> todo;
    todo.push(c0);
    comp[c0] = count;
    while (!todo.empty()) {
      const int c = todo.front();
      todo.pop();
      for (int k = 0; k < s.copy_size(c); ++k) {
        const int p = s.partner(s.side_id(c, k));
        if (p < 0) continue;
        const int x = s.side_copy(p);
        if (comp[x] < 0) {
          comp[x] = count;
          todo.push(x);
        }
      }
    }
    ++count;
  }
  std::vector<SurfaceComplex> out;
  for (int id = 0; id < count; ++id) {
    std::vector<FaceCopy> copies;
    std::vector<int> new_index(nc, -1);
    for (int c = 0; c < nc; ++c) {
      if (comp[c] != id) continue;
      new_index[c] = static_cast<int>(copies.size());
      copies.push_back(s.copy(c));
    }
    SurfaceComplex part = SurfaceComplex::unpaired(s.base_ptr(), copies);
    for (int c = 0; c < nc; ++c) {
      if (comp[c] != id) continue;
      for (int k = 0; k < s.copy_size(c); ++k) {
        const int sd = s.side_id(c, k);
        const int p = s.partner(sd);
        if (p < 0 || p < sd) continue;
        part.pair_sides(part.side_id(new_index[c], k), part.side_id(new_index[s.side_copy(p)], s.side_index(p)));
      }
    }
    out.push_back(std::move(part));
  }
  return out;
}

LiftedRefinement lift_refinement(const SurfaceComplex& s, const Refinement& ref) {
  const BaseComplex& old = s.base();
  const BaseComplex& nb = *ref.base;
  std::vector<int> local(nb.num_faces(), -1);
  for (int f = 0; f < old.num_faces(); ++f)
    for (std::size_t i = 0; i < ref.new_faces_of[f].size(); ++i) local[ref.new_faces_of[f][i]] = static_cast<int>(i);

  std::vector<FaceCopy> copies;
  std::vector<int> group(s.num_copies());
  for (int c = 0; c < s.num_copies(); ++c) {
    group[c] = static_cast<int>(copies.size());
    for (int g : ref.new_faces_of[s.copy(c).base_face]) copies.push_back({g, s.copy(c).sheet});
  }
  LiftedRefinement out{SurfaceComplex::unpaired(ref.base, copies), {}};
  SurfaceComplex& ns = out.surface;
  auto new_side = [&](int old_copy, int new_dart) {
    const int g = nb.face(new_dart);
    return ns.side_id(group[old_copy] + local[g], nb.face_position(new_dart));
  };
  for (int c = 0; c < s.num_copies(); ++c) {
    const int f = s.copy(c).base_face;
    for (int g : ref.new_faces_of[f]) {
      const auto& darts = nb.face_darts(g);
      for (std::size_t k = 0; k < darts.size(); ++k) {
        const int me = ns.side_id(group[c] + local[g], static_cast<int>(k));
        if (ns.partner(me) >= 0) continue;
        const auto src = ref.source[g][k];
        int other = -1;
        if (src.old_side < 0) {
          other = new_side(c, BaseComplex::twin(darts[k]));
        } else {
          const int p = s.partner(s.side_id(c, src.old_side));
          if (p < 0) continue;
          const int pc = s.side_copy(p);
          const int pk = s.side_index(p);
          const int pieces = ref.pieces[old.face_darts(f)[src.old_side]];
          other = new_side(pc, ref.piece_dart[s.copy(pc).base_face][pk][pieces - 1 - src.piece]);
        }
        ns.pair_sides(me, other);
      }
    }
  }
  out.side_map.assign(s.num_sides(), {});
  for (int sd = 0; sd < s.num_sides(); ++sd) {
    const int c = s.side_copy(sd);
    for (int nd : ref.piece_dart[s.copy(c).base_face][s.side_index(sd)]) out.side_map[sd].push_back(new_side(c, nd));
  }
  return out;
}

SurfaceComplex cut_to_boundary(const SurfaceComplex& s, const SurfacePath& path, SurgeryDelta* delta) {
  const SurfaceAnalysis a = analyze(s);
  if (a.kind != TopologyKind::Disk) fail(ErrorCode::PreconditionViolated, "cut_to_boundary needs a disk");
  const PathCheck pc = check_simple_path(s, a, path);
  if (a.sheets[pc.sheets.front()].interior) fail(ErrorCode::PreconditionViolated, "path must start on the boundary");
  const int k = path.size();
  for (int i = 1; i <= k; ++i) {
    const VertexSheet& vs = a.sheets[pc.sheets[i]];
    if (!vs.interior) fail(ErrorCode::PreconditionViolated, "path meets the boundary after its start");
    if (i < k && vs.is_special()) fail(ErrorCode::ImageMeetsSpecial, "path passes over a special point");
    if (i < k && vs.is_branch()) fail(ErrorCode::TouchesBranch, "path passes through a branch point");
  }
  SurgeryDelta pred;
  pred.dL = 2 * path.length(s);
  pred.dnbar.assign(s.base().q(), 0);
  if (a.sheets[pc.sheets.back()].is_special()) --pred.dnbar[a.sheets[pc.sheets.back()].special];

  const FunctionalReport before = functionals(s);
  SurfaceComplex out = s;
  for (int sd : path.sides) out.unpair_side(sd);
  out = retag_boundary(out);
  require_valid(out, TopologyKind::Disk);
  check_deltas(before, functionals(out), pred, "cut_to_boundary");
  if (delta) *delta = pred;
  return out;
}

SurfaceComplex cut_interior(const SurfaceComplex& s, const SurfacePath& path, SurgeryDelta* delta) {
  const SurfaceAnalysis a = analyze(s);
  if (a.kind != TopologyKind::Disk) fail(ErrorCode::PreconditionViolated, "cut_interior needs a disk");
  const PathCheck pc = check_simple_path(s, a, path);
  const int k = path.size();
  SurgeryDelta pred;
  pred.dL = 2 * path.length(s);
  pred.dnbar.assign(s.base().q(), 0);
  for (int i = 0; i <= k; ++i) {
    const VertexSheet& vs = a.sheets[pc.sheets[i]];
    if (!vs.interior) fail(ErrorCode::PreconditionViolated, "interior cut meets the boundary");
    if (i > 0 && i < k && vs.is_branch()) fail(ErrorCode::TouchesBranch, "path passes through a branch point");
    if (vs.is_special()) --pred.dnbar[vs.special];
  }
  const FunctionalReport before = functionals(s);
  SurfaceComplex out = s;
  for (int sd : path.sides) out.unpair_side(sd);
  out = retag_boundary(out);
  require_valid(out, TopologyKind::Annulus);
  check_deltas(before, functionals(out), pred, "cut_interior");
  if (delta) *delta = pred;
  return out;
}

namespace {

// Checks that `run` is a run of consecutive free sides of walk `w` and
// returns its start position.
int run_position(const SurfaceAnalysis& a, const std::vector<int>& run, int* walk) {
  if (run.empty()) fail(ErrorCode::PreconditionViolated, "empty boundary run");
  for (int sd : run)
    if (a.walk_of_side[sd] < 0) fail(ErrorCode::PreconditionViolated, "run side is not on the boundary");
  const int w = a.walk_of_side[run.front()];
  const int n = a.walks[w].size();
  const int p0 = a.position_in_walk[run.front()];
  for (std::size_t i = 0; i < run.size(); ++i) {
    if (a.walk_of_side[run[i]] != w || a.position_in_walk[run[i]] != (p0 + static_cast<int>(i)) % n)
      fail(ErrorCode::NotAdjacent, "run is not consecutive along the boundary");
  }
  *walk = w;
  return p0;
}

void check_reversed(const SurfaceComplex& s, const std::vector<int>& x, const std::vector<int>& y) {
  if (x.size() != y.size()) fail(ErrorCode::ImagesMismatch, "runs have different lengths");
  const std::size_t m = x.size();
  for (std::size_t j = 0; j < m; ++j)
    if (s.side_dart(x[m - 1 - j]) != BaseComplex::twin(s.side_dart(y[j])))
      fail(ErrorCode::ImagesMismatch, "run images are not reverses of each other");
}

}  // namespace

SurfaceComplex sew(const SurfaceComplex& s, const std::vector<int>& alpha, const std::vector<int>& beta,
                   SurgeryDelta* delta) {
  const SurfaceAnalysis a = analyze(s);
  if (a.kind != TopologyKind::Disk) fail(ErrorCode::PreconditionViolated, "sew needs a disk");
  check_reversed(s, alpha, beta);
  int wa = -1, wb = -1;
  const int pa = run_position(a, alpha, &wa);
  const int pb = run_position(a, beta, &wb);
  const int m = static_cast<int>(alpha.size());
  const int n = a.walks[wa].size();
  if (wa != wb || pb != (pa + m) % n) fail(ErrorCode::NotAdjacent, "beta must follow alpha along the boundary");
  if (2 * m > n) fail(ErrorCode::PreconditionViolated, "runs overlap");
  const bool closed = 2 * m == n;

  SurgeryDelta pred;
  pred.dL = 0;
  for (int sd : alpha) pred.dL -= 2 * s.base().length(s.side_dart(sd));
  pred.dnbar.assign(s.base().q(), 0);
  auto bump = [&](int sheet) {
    if (a.sheets[sheet].is_special()) ++pred.dnbar[a.sheets[sheet].special];
  };
  if (closed) {
    for (int sd : alpha) bump(a.sheet_of_corner[sd]);
    bump(a.sheet_of_corner[beta.front()]);
  } else {
    for (int sd : beta) bump(a.sheet_of_corner[sd]);
  }

  const FunctionalReport before = functionals(s);
  SurfaceComplex out = s;
  for (int j = 0; j < m; ++j) out.pair_sides(alpha[m - 1 - j], beta[j]);
  require_valid(out, closed ? TopologyKind::Closed : TopologyKind::Disk);
  check_deltas(before, functionals(out), pred, "sew");
  if (delta) *delta = pred;
  return out;
}

SurfaceComplex sew_annulus(const SurfaceComplex& s, const std::vector<int>& alpha1, const std::vector<int>& alpha2,
                           SurgeryDelta* delta) {
  const SurfaceAnalysis a = analyze(s);
  if (a.kind != TopologyKind::Annulus) fail(ErrorCode::PreconditionViolated, "sew_annulus needs an annulus");
  check_reversed(s, alpha1, alpha2);
  int w1 = -1, w2 = -1;
  const int p1 = run_position(a, alpha1, &w1);
  const int p2 = run_position(a, alpha2, &w2);
  const int m = static_cast<int>(alpha1.size());
  if (w1 != w2 || a.walks[w1].size() != 2 * m || p2 != (p1 + m) % (2 * m))
    fail(ErrorCode::PreconditionViolated, "alpha1 + alpha2 must be a whole boundary component");

  SurgeryDelta pred;
  for (int sd : alpha1) pred.dL -= 2 * s.base().length(s.side_dart(sd));
  pred.dnbar.assign(s.base().q(), 0);
  auto bump = [&](int sheet) {
    if (a.sheets[sheet].is_special()) ++pred.dnbar[a.sheets[sheet].special];
  };
  for (int sd : alpha1) bump(a.sheet_of_corner[sd]);
  bump(a.sheet_of_corner[alpha2.front()]);

  const FunctionalReport before = functionals(s);
  SurfaceComplex out = s;
  for (int j = 0; j < m; ++j) out.pair_sides(alpha1[j], alpha2[m - 1 - j]);
  require_valid(out, TopologyKind::Disk);
  check_deltas(before, functionals(out), pred, "sew_annulus");
  if (delta) *delta = pred;
  return out;
}

std::optional<std::vector<int>> route_path(const BaseComplex& base, int from, const std::vector<bool>& targets,
                                           const std::vector<bool>& forbidden,
                                           const std::vector<bool>& forbidden_edges) {
  const int nv = base.num_vertices();
  std::vector<double> dist(nv, std::numeric_limits<double>::infinity());
  std::vector<int> via(nv, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[from] = 0;
  pq.push({0, from});
  while (!pq.empty()) {
    const auto [dv, v] = pq.top();
    pq.pop();
    if (dv > dist[v]) continue;
    if (v != from && targets[v]) {
      std::vector<int> path;
      for (int x = v; x != from; x = base.origin(via[x])) path.push_back(via[x]);
      std::reverse(path.begin(), path.end());
      return path;
    }
    if (v != from && forbidden[v]) continue;
    for (int dt : base.out_darts(v)) {
      if (!forbidden_edges.empty() && forbidden_edges[dt >> 1]) continue;
      const int w = base.target(dt);
      const double nd = dv + base.length(dt);
      if (nd < dist[w] - 1e-15 || (std::abs(nd - dist[w]) <= 1e-15 && via[w] >= 0 && base.origin(via[w]) > v)) {
        dist[w] = nd;
        via[w] = dt;
        pq.push({nd, w});
      }
    }
  }
  return std::nullopt;
}

Refinement midpoint_refinement(const BaseComplex& base, const std::vector<int>& edges) {
  std::vector<std::pair<int, Vec3>> splits;
  for (int e : edges) {
    const Vec3 m = (base.position(base.origin(2 * e)) + base.position(base.target(2 * e))).normalized();
    splits.push_back({e, m});
  }
  return split_edges(base, splits);
}

}  // namespace sphcov
