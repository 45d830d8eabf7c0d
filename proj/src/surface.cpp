#include "sphcov/surface.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <queue>
#include <string>

#include "sphcov/error.hpp"

namespace sphcov {

namespace {

constexpr double kPi = std::numbers::pi;

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

const char* to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::Disk: return "DISK";
    case TopologyKind::Annulus: return "ANNULUS";
    case TopologyKind::Closed: return "CLOSED";
    case TopologyKind::Invalid: return "INVALID";
  }
  return "INVALID";
}

SurfaceComplex::SurfaceComplex(std::shared_ptr<const BaseComplex> base, std::vector<FaceCopy> copies,
                               std::vector<int> partner)
    : base_(std::move(base)), copies_(std::move(copies)), partner_(std::move(partner)) {
  layout();
  if (static_cast<int>(partner_.size()) != offset_.back()) {
    throw Error(ErrorCode::InvalidSurface, "pairing table size does not match the face copies");
  }
}

SurfaceComplex SurfaceComplex::unpaired(std::shared_ptr<const BaseComplex> base, std::vector<FaceCopy> copies) {
  int total = 0;
  for (const auto& c : copies) total += base->face_size(c.base_face);
  return SurfaceComplex(std::move(base), std::move(copies), std::vector<int>(total, -1));
}

void SurfaceComplex::layout() {
  offset_.assign(copies_.size() + 1, 0);
  for (std::size_t c = 0; c < copies_.size(); ++c) {
    const int f = copies_[c].base_face;
    if (f < 0 || f >= base_->num_faces()) throw Error(ErrorCode::InvalidSurface, "face copy over unknown face");
    offset_[c + 1] = offset_[c] + base_->face_size(f);
  }
  side_copy_.assign(offset_.back(), 0);
  for (std::size_t c = 0; c < copies_.size(); ++c)
    for (int s = offset_[c]; s < offset_[c + 1]; ++s) side_copy_[s] = static_cast<int>(c);
}

int SurfaceComplex::next_in_copy(int s) const {
  const int c = side_copy_[s];
  return s + 1 < offset_[c + 1] ? s + 1 : offset_[c];
}

int SurfaceComplex::prev_in_copy(int s) const {
  const int c = side_copy_[s];
  return s > offset_[c] ? s - 1 : offset_[c + 1] - 1;
}

std::vector<int> SurfaceComplex::free_sides() const {
  std::vector<int> out;
  for (int s = 0; s < num_sides(); ++s)
    if (partner_[s] < 0) out.push_back(s);
  return out;
}

int SurfaceComplex::num_free() const {
  return static_cast<int>(std::count(partner_.begin(), partner_.end(), -1));
}

int SurfaceComplex::corner_forward(int corner) const {
  const int p = partner_[corner];
  return p < 0 ? -1 : next_in_copy(p);
}

int SurfaceComplex::corner_backward(int corner) const { return partner_[prev_in_copy(corner)]; }

void SurfaceComplex::pair_sides(int a, int b) {
  if (a == b) throw Error(ErrorCode::InvalidSurface, "side paired with itself");
  if (side_dart(a) != BaseComplex::twin(side_dart(b))) {
    throw Error(ErrorCode::ImagesMismatch, "paired sides must lie over opposite darts");
  }
  partner_[a] = b;
  partner_[b] = a;
}

void SurfaceComplex::unpair_side(int s) {
  const int p = partner_[s];
  partner_[s] = -1;
  if (p >= 0) partner_[p] = -1;
}

SurfaceComplex SurfaceComplex::with_base(std::shared_ptr<const BaseComplex> base) const {
  SurfaceComplex out = *this;
  out.base_ = std::move(base);
  return out;
}

double BoundaryWalk::length(const BaseComplex& base) const {
  double l = 0;
  for (int d : darts) l += base.length(d);
  return l;
}

SurfaceAnalysis analyze(const SurfaceComplex& s) {
  SurfaceAnalysis a;
  const BaseComplex& base = s.base();
  const int ns = s.num_sides();
  a.sheet_of_corner.assign(ns, -1);
  for (int k = 0; k < ns; ++k) {
    if (a.sheet_of_corner[k] >= 0) continue;
    int start = k;
    int cur = k;
    for (int guard = 0; guard <= ns; ++guard) {
      const int b = s.corner_backward(cur);
      if (b < 0) {
        start = cur;
        break;
      }
      if (b == k) {
        start = k;
        break;
      }
      cur = b;
    }
    VertexSheet vs;
    vs.base_vertex = s.side_origin(start);
    vs.special = base.special_at(vs.base_vertex);
    cur = start;
    bool chain = false;
    for (int guard = 0; guard <= ns; ++guard) {
      vs.corners.push_back(cur);
      const int f = s.corner_forward(cur);
      if (f < 0) {
        chain = true;
        break;
      }
      if (f == start) break;
      cur = f;
    }
    const int id = static_cast<int>(a.sheets.size());
    for (int c : vs.corners) a.sheet_of_corner[c] = id;
    const int deg = static_cast<int>(base.out_darts(vs.base_vertex).size());
    const int c = static_cast<int>(vs.corners.size());
    if (chain) {
      vs.interior = false;
      vs.in_side = s.prev_in_copy(vs.corners.front());
      vs.out_side = vs.corners.back();
      vs.folded = (c % deg == 0);
      vs.multiplicity = (c + deg - 1) / deg;
      vs.local_degree = vs.folded ? 2 * vs.multiplicity : 2 * vs.multiplicity - 1;
    } else {
      vs.interior = true;
      vs.multiplicity = c / deg;
      vs.local_degree = vs.multiplicity;
    }
    vs.branch_index = vs.multiplicity - 1;
    a.sheets.push_back(std::move(vs));
  }

  a.walk_of_side.assign(ns, -1);
  a.position_in_walk.assign(ns, -1);
  for (int sd = 0; sd < ns; ++sd) {
    if (!s.is_free(sd) || a.walk_of_side[sd] >= 0) continue;
    BoundaryWalk w;
    const int wid = static_cast<int>(a.walks.size());
    int cur = sd;
    while (a.walk_of_side[cur] < 0) {
      a.walk_of_side[cur] = wid;
      a.position_in_walk[cur] = w.size();
      w.sides.push_back(cur);
      w.darts.push_back(s.side_dart(cur));
      w.points.push_back(base.position(s.side_origin(cur)));
      cur = a.sheets[a.sheet_of_corner[s.next_in_copy(cur)]].out_side;
      if (cur < 0) break;
    }
    a.walks.push_back(std::move(w));
  }

  UnionFind uf(s.num_copies());
  int paired = 0;
  for (int sd = 0; sd < ns; ++sd) {
    if (s.partner(sd) >= 0) {
      ++paired;
      uf.unite(s.side_copy(sd), s.side_copy(s.partner(sd)));
    }
  }
  for (int c = 0; c < s.num_copies(); ++c)
    if (uf.find(c) == c) ++a.components;
  a.V = static_cast<int>(a.sheets.size());
  a.E = paired / 2 + (ns - paired);
  a.F = s.num_copies();
  const int chi = a.chi();
  const int nw = static_cast<int>(a.walks.size());
  if (a.components != 1) {
    a.kind = TopologyKind::Invalid;
  } else if (nw == 0 && chi == 2) {
    a.kind = TopologyKind::Closed;
  } else if (nw == 1 && chi == 1) {
    a.kind = TopologyKind::Disk;
  } else if (nw == 2 && chi == 0) {
    a.kind = TopologyKind::Annulus;
  } else {
    a.kind = TopologyKind::Invalid;
  }
  return a;
}

std::vector<VertexSheet> classify_vertices(const SurfaceComplex& s) { return analyze(s).sheets; }

std::vector<BoundaryWalk> boundary_walks(const SurfaceComplex& s) { return analyze(s).walks; }

Diagnostics validate(const SurfaceComplex& s) {
  Diagnostics d;
  auto fail = [&](std::string msg, std::vector<int> witness) {
    d.ok = false;
    d.message = std::move(msg);
    d.witness = std::move(witness);
    return d;
  };
  const BaseComplex& base = s.base();
  for (int j = 0; j < base.q(); ++j) {
    if (base.special_vertex(j) < 0) return fail("special point is not a vertex", {j});
  }
  if (s.num_copies() == 0) return fail("no face copies", {});
  const int ns = s.num_sides();
  for (int sd = 0; sd < ns; ++sd) {
    const int p = s.partner(sd);
    if (p < 0) {
      if (base.kind(s.side_dart(sd) >> 1) != EdgeKind::Curve) return fail("scaffold side free", {sd});
      continue;
    }
    if (p >= ns || p == sd || s.partner(p) != sd) return fail("pairing is not an involution", {sd});
    if (s.side_dart(p) != BaseComplex::twin(s.side_dart(sd))) {
      return fail("paired sides do not lie over opposite darts", {sd, p});
    }
  }
  const SurfaceAnalysis a = analyze(s);
  for (std::size_t i = 0; i < a.sheets.size(); ++i) {
    const auto& vs = a.sheets[i];
    const int deg = static_cast<int>(base.out_darts(vs.base_vertex).size());
    if (vs.interior && static_cast<int>(vs.corners.size()) % deg != 0) {
      return fail("interior corner orbit is not a whole number of turns", vs.corners);
    }
    if (vs.is_special() && vs.folded) {
      d.notes.push_back("special point " + std::to_string(vs.special) + " has a folded boundary preimage");
    }
  }
  if (a.components != 1) return fail("surface is not connected", {a.components});
  if (a.kind == TopologyKind::Invalid) {
    return fail("Euler characteristic " + std::to_string(a.chi()) + " with " + std::to_string(a.walks.size()) +
                    " boundary walks is not a disk, annulus or sphere",
                {a.chi(), static_cast<int>(a.walks.size())});
  }
  d.kind = a.kind;
  return d;
}

void require_valid(const SurfaceComplex& s, TopologyKind expected) {
  const Diagnostics d = validate(s);
  if (!d.ok) throw Error(ErrorCode::InvalidSurface, d.message);
  if (expected != TopologyKind::Invalid && d.kind != expected) {
    throw Error(ErrorCode::InvalidSurface,
                std::string("expected ") + to_string(expected) + " but got " + to_string(d.kind));
  }
}

std::vector<int> complement_components(const SurfaceComplex& s, int* count) {
  const BaseComplex& base = s.base();
  std::vector<int> free_over(base.num_darts(), 0);
  for (int sd = 0; sd < s.num_sides(); ++sd)
    if (s.is_free(sd)) ++free_over[s.side_dart(sd)];
  UnionFind uf(base.num_faces());
  for (int e = 0; e < base.num_edges(); ++e) {
    if (free_over[2 * e] == 0 && free_over[2 * e + 1] == 0) uf.unite(base.face(2 * e), base.face(2 * e + 1));
  }
  std::vector<int> label(base.num_faces(), -1);
  std::vector<int> root_label(base.num_faces(), -1);
  int n = 0;
  for (int f = 0; f < base.num_faces(); ++f) {
    const int r = uf.find(f);
    if (root_label[r] < 0) root_label[r] = n++;
    label[f] = root_label[r];
  }
  if (count) *count = n;
  return label;
}

int count_segments(const std::vector<Vec3>& walk) {
  const std::size_t k = walk.size();
  if (k == 0) return 0;
  std::vector<bool> straight(k, false);
  for (std::size_t i = 0; i < k; ++i) {
    const Vec3& p = walk[i];
    const Vec3 back = tangent_toward(p, walk[(i + k - 1) % k]);
    const Vec3 out = tangent_toward(p, walk[(i + 1) % k]);
    straight[i] = back.dot(out) < -1.0 + 1e-12;
  }
  auto pieces = [](double len) { return static_cast<int>(std::floor(len / kPi - 1e-12)) + 1; };
  std::size_t first = k;
  for (std::size_t i = 0; i < k; ++i)
    if (!straight[i]) {
      first = i;
      break;
    }
  if (first == k) {
    double len = 0;
    for (std::size_t i = 0; i < k; ++i) len += angle_between(walk[i], walk[(i + 1) % k]);
    return std::max(3, pieces(len));
  }
  int total = 0;
  double run = 0;
  for (std::size_t t = 0; t < k; ++t) {
    const std::size_t i = (first + t) % k;
    run += angle_between(walk[i], walk[(i + 1) % k]);
    const std::size_t j = (i + 1) % k;
    if (!straight[j]) {
      total += pieces(run);
      run = 0;
    }
  }
  return total;
}

FunctionalReport functionals(const SurfaceComplex& s) {
  const BaseComplex& base = s.base();
  const SurfaceAnalysis a = analyze(s);
  FunctionalReport r;
  r.kind = a.kind;
  r.q = base.q();
  r.n_face.assign(base.num_faces(), 0);
  for (const auto& c : s.copies()) {
    ++r.n_face[c.base_face];
    r.A += base.face_area(c.base_face);
  }
  for (int sd = 0; sd < s.num_sides(); ++sd)
    if (s.is_free(sd)) r.L += base.length(s.side_dart(sd));
  r.nbar.assign(r.q, 0);
  r.n_special.assign(r.q, 0);
  for (const auto& vs : a.sheets) {
    if (vs.is_special()) {
      if (vs.interior) ++r.nbar[vs.special];
      r.n_special[vs.special] += vs.multiplicity - (vs.interior ? 0 : 1);
    } else {
      r.B_nonspecial += vs.branch_index;
    }
    if (vs.is_branch()) {
      r.branches.push_back({vs.base_vertex, vs.interior, vs.folded, vs.multiplicity, vs.special});
    }
    if (vs.folded) r.folds.push_back({vs.base_vertex, vs.interior, vs.folded, vs.multiplicity, vs.special});
  }
  for (int j = 0; j < r.q; ++j) {
    r.nbar_total += r.nbar[j];
    r.B_special += r.n_special[j] - r.nbar[j];
  }
  r.R = (r.q - 2) * r.A - 4 * kPi * r.nbar_total;
  if (a.kind == TopologyKind::Disk && r.L > 0) r.H = r.R / r.L;

  int ncomp = 0;
  const auto label = complement_components(s, &ncomp);
  r.components = ncomp;
  std::vector<int> n_of(ncomp, -1);
  for (int f = 0; f < base.num_faces(); ++f) {
    int& n = n_of[label[f]];
    if (n < 0) {
      n = r.n_face[f];
    } else if (n != r.n_face[f]) {
      throw Error(ErrorCode::AssertionFailed, "covering number varies inside a complement component");
    }
  }
  for (int n : n_of) r.sum += n;
  if (a.kind == TopologyKind::Closed) r.degree = r.n_face.empty() ? 0 : r.n_face.front();
  if (a.walks.size() == 1) r.boundary_segments = count_segments(a.walks.front().points);
  return r;
}

std::vector<ArcMultiplicity> boundary_multiplicities(const SurfaceComplex& s) {
  const BaseComplex& base = s.base();
  std::vector<int> free_over(base.num_darts(), 0);
  for (int sd = 0; sd < s.num_sides(); ++sd)
    if (s.is_free(sd)) ++free_over[s.side_dart(sd)];
  std::vector<ArcMultiplicity> out;
  for (int e = 0; e < base.num_edges(); ++e) {
    if (base.kind(e) != EdgeKind::Curve && free_over[2 * e] == 0 && free_over[2 * e + 1] == 0) continue;
    out.push_back({2 * e, free_over[2 * e], free_over[2 * e + 1]});
  }
  return out;
}

RiemannHurwitz riemann_hurwitz_check(const SurfaceComplex& s) {
  const FunctionalReport r = functionals(s);
  if (r.kind != TopologyKind::Closed) {
    throw Error(ErrorCode::PreconditionViolated, "Riemann-Hurwitz check needs a closed surface");
  }
  RiemannHurwitz rh;
  rh.degree = *r.degree;
  rh.B_total = r.B_special + r.B_nonspecial;
  rh.residual = rh.B_total - (2 * rh.degree - 2);
  return rh;
}

namespace {

// Inserts into each segment of `walk` the points of `extra` lying strictly
// inside it, ordered along the segment.
std::vector<Vec3> refine_walk(const std::vector<Vec3>& walk, const std::vector<Vec3>& extra) {
  std::vector<Vec3> out;
  const std::size_t k = walk.size();
  for (std::size_t i = 0; i < k; ++i) {
    const Vec3& a = walk[i];
    const Vec3& b = walk[(i + 1) % k];
    out.push_back(a);
    if (angle_between(a, b) <= kEpsSep || antipodal(a, b)) continue;
    const GeodesicSegment seg{SpherePoint(a), SpherePoint(b)};
    std::vector<std::pair<double, Vec3>> inside;
    for (const auto& p : extra) {
      if (same_point(p, a) || same_point(p, b)) continue;
      if (auto s = locate_on_segment(p, seg)) {
        if (*s > 0 && *s < 1) inside.push_back({*s, p});
      }
    }
    std::sort(inside.begin(), inside.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& [s, p] : inside) {
      if (!same_point(out.back(), p)) out.push_back(p);
    }
  }
  return out;
}

}  // namespace

SubarcMatch is_closed_subarc(const std::vector<Vec3>& w2_in, const std::vector<Vec3>& w1_in) {
  SubarcMatch m;
  if (w2_in.empty() || w1_in.empty()) return m;
  const std::vector<Vec3> w1 = refine_walk(w1_in, w2_in);
  const std::vector<Vec3> w2 = refine_walk(w2_in, w1_in);
  std::vector<Vec3> reps;
  auto id_of = [&](const Vec3& p) {
    for (std::size_t i = 0; i < reps.size(); ++i)
      if (same_point(reps[i], p)) return static_cast<int>(i);
    reps.push_back(p);
    return static_cast<int>(reps.size()) - 1;
  };
  std::vector<int> a, b;
  for (const auto& p : w1) a.push_back(id_of(p));
  for (const auto& p : w2) b.push_back(id_of(p));
  const int n = static_cast<int>(a.size());
  const int k = static_cast<int>(b.size());
  if (k > n) return m;
  std::vector<std::vector<int>> occurrences(reps.size());
  for (int i = 0; i < n; ++i) occurrences[a[i]].push_back(i);

  for (int start = 0; start < n; ++start) {
    if (a[start] != b[0] || a[(start + 1) % n] != b[1 % k]) continue;
    // reach[x][y]: consumed x outer edges and y inner edges.
    std::vector<int> from((n + 1) * (k + 1), -2);
    auto idx = [&](int x, int y) { return x * (k + 1) + y; };
    std::queue<std::pair<int, int>> todo;
    from[idx(0, 0)] = -1;
    todo.push({0, 0});
    while (!todo.empty()) {
      auto [x, y] = todo.front();
      todo.pop();
      if (x == n && y == k) break;
      if (x >= n) continue;
      const int pa = (start + x) % n;
      if (y < k && a[pa] == b[y] && a[(pa + 1) % n] == b[(y + 1) % k]) {
        const int nx = x + 1, ny = y + 1;
        if (from[idx(nx, ny)] == -2) {
          from[idx(nx, ny)] = idx(x, y);
          todo.push({nx, ny});
        }
      }
      for (int occ : occurrences[a[pa]]) {
        int off = (occ - start + n) % n;
        if (off == 0) off = n;
        if (off <= x) continue;
        if (from[idx(off, y)] == -2) {
          from[idx(off, y)] = idx(x, y);
          todo.push({off, y});
        }
      }
    }
    if (from[idx(n, k)] == -2) continue;
    m.ok = true;
    m.offset = start;
    m.kept.assign(n, false);
    int cur = idx(n, k);
    while (from[cur] >= 0) {
      const int prev = from[cur];
      const int cx = cur / (k + 1), cy = cur % (k + 1);
      const int px = prev / (k + 1), py = prev % (k + 1);
      if (cy == py + 1 && cx == px + 1) m.kept[px] = true;
      cur = prev;
    }
    return m;
  }
  return m;
}

SubarcMatch is_closed_subarc(const BoundaryWalk& w2, const BoundaryWalk& w1) {
  return is_closed_subarc(w2.points, w1.points);
}

BetterReport is_better_than(const SurfaceComplex& s2, const SurfaceComplex& s1, const Rotation& rot) {
  BetterReport out;
  const FunctionalReport r2 = functionals(s2);
  const FunctionalReport r1 = functionals(s1);
  if (!r2.H || !r1.H) {
    out.detail = "both surfaces must be disks with boundary";
    return out;
  }
  out.h_ok = *r2.H >= *r1.H - 1e-9;
  out.sum_ok = r2.sum <= r1.sum;
  out.nbar_ok = r2.q == r1.q;
  for (int j = 0; out.nbar_ok && j < r1.q; ++j) out.nbar_ok = r2.nbar[j] <= r1.nbar[j];
  const auto w2 = boundary_walks(s2);
  const auto w1 = boundary_walks(s1);
  std::vector<Vec3> rotated;
  for (const auto& p : w1.front().points) rotated.push_back(rot.apply(p));
  out.subarc_ok = is_closed_subarc(w2.front().points, rotated).ok;
  if (!out.h_ok) out.detail += "H decreased; ";
  if (!out.sum_ok) out.detail += "sum increased; ";
  if (!out.nbar_ok) out.detail += "some nbar increased; ";
  if (!out.subarc_ok) out.detail += "boundary is not a closed subarc; ";
  return out;
}

namespace {

bool same_base(const BaseComplex& x, const BaseComplex& y) {
  if (x.num_faces() != y.num_faces() || x.num_vertices() != y.num_vertices()) return false;
  for (int v = 0; v < x.num_vertices(); ++v)
    if ((x.position(v) - y.position(v)).norm() > 1e-12) return false;
  for (int f = 0; f < x.num_faces(); ++f)
    if (x.face_vertices(f) != y.face_vertices(f)) return false;
  return x.special_vertices() == y.special_vertices();
}

}  // namespace

bool isomorphic(const SurfaceComplex& a, const SurfaceComplex& b) {
  if (a.num_copies() != b.num_copies() || a.num_sides() != b.num_sides()) return false;
  if (a.base_ptr() != b.base_ptr() && !same_base(a.base(), b.base())) return false;
  if (a.num_copies() == 0) return true;
  for (int c0 = 0; c0 < b.num_copies(); ++c0) {
    if (b.copy(c0).base_face != a.copy(0).base_face) continue;
    std::vector<int> map(a.num_copies(), -1), inv(b.num_copies(), -1);
    map[0] = c0;
    inv[c0] = 0;
    std::queue<int> todo;
    todo.push(0);
    bool ok = true;
    while (!todo.empty() && ok) {
      const int ca = todo.front();
      todo.pop();
      const int cb = map[ca];
      for (int k = 0; k < a.copy_size(ca) && ok; ++k) {
        const int pa = a.partner(a.side_id(ca, k));
        const int pb = b.partner(b.side_id(cb, k));
        if ((pa < 0) != (pb < 0)) {
          ok = false;
          break;
        }
        if (pa < 0) continue;
        const int xa = a.side_copy(pa), xb = b.side_copy(pb);
        if (a.side_index(pa) != b.side_index(pb) || a.copy(xa).base_face != b.copy(xb).base_face) {
          ok = false;
          break;
        }
        if (map[xa] < 0 && inv[xb] < 0) {
          map[xa] = xb;
          inv[xb] = xa;
          todo.push(xa);
        } else if (map[xa] != xb) {
          ok = false;
        }
      }
    }
    if (ok && std::find(map.begin(), map.end(), -1) == map.end()) return true;
  }
  return false;
}

SurfaceComplex retag_boundary(const SurfaceComplex& s) {
  std::vector<int> edges;
  for (int sd = 0; sd < s.num_sides(); ++sd) {
    if (!s.is_free(sd)) continue;
    const int e = s.side_dart(sd) >> 1;
    if (s.base().kind(e) != EdgeKind::Curve) edges.push_back(e);
  }
  if (edges.empty()) return s;
  return s.with_base(std::make_shared<BaseComplex>(s.base().with_curve_edges(edges)));
}

}  // namespace sphcov
