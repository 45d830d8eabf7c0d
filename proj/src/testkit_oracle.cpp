#include <cmath>
#include <numbers>
#include <numeric>
#include <queue>
#include <string>

#include "sphcov/error.hpp"
#include "sphcov/testkit.hpp"

namespace sphcov {

namespace {

constexpr double kPi = std::numbers::pi;

int find_root(std::vector<int>& p, int x) {
  while (p[x] != x) x = p[x] = p[p[x]];
  return x;
}

}  // namespace

OracleReport oracle_verify(const SurfaceComplex& s, double tol) {
  OracleReport rep;
  const BaseComplex& b = s.base();
  const int nc = s.num_copies();
  const int ns = s.num_sides();
  auto mismatch = [&](const std::string& m) {
    rep.ok = false;
    rep.mismatches.push_back(m);
  };
  auto matched = [&](int sd) {
    const int p = s.partner(sd);
    return p >= 0 && p < ns && s.partner(p) == sd && s.side_dart(p) == (s.side_dart(sd) ^ 1);
  };

  // Face counts by breadth-first traversal over the gluing graph.
  rep.n_face.assign(b.num_faces(), 0);
  std::vector<bool> seen(nc, false);
  int reached = 0;
  if (nc > 0) {
    std::queue<int> todo;
    todo.push(0);
    seen[0] = true;
    while (!todo.empty()) {
      const int c = todo.front();
      todo.pop();
      ++reached;
      ++rep.n_face[s.copy(c).base_face];
      for (int k = 0; k < s.copy_size(c); ++k) {
        const int sd = s.side_id(c, k);
        if (!matched(sd)) continue;
        const int x = s.side_copy(s.partner(sd));
        if (!seen[x]) {
          seen[x] = true;
          todo.push(x);
        }
      }
    }
  }
  if (reached != nc) mismatch("gluing graph is disconnected");

  // Vertex sheets by union-find over corners: corner k is glued to the corner
  // following its partner side.
  std::vector<int> parent(ns);
  std::iota(parent.begin(), parent.end(), 0);
  int paired = 0, free = 0;
  for (int sd = 0; sd < ns; ++sd) {
    if (s.partner(sd) < 0) {
      ++free;
      continue;
    }
    if (!matched(sd)) continue;
    ++paired;
    parent[find_root(parent, sd)] = find_root(parent, s.next_in_copy(s.partner(sd)));
  }
  std::vector<int> corners(ns, 0);
  std::vector<bool> touches_bd(ns, false);
  for (int k = 0; k < ns; ++k) {
    const int r = find_root(parent, k);
    ++corners[r];
    if (s.partner(k) < 0 || s.partner(s.prev_in_copy(k)) < 0) touches_bd[r] = true;
  }
  rep.nbar.assign(b.q(), 0);
  int V = 0;
  for (int k = 0; k < ns; ++k) {
    if (find_root(parent, k) != k) continue;
    ++V;
    const int v = s.side_origin(k);
    const int j = b.special_at(v);
    const int deg = static_cast<int>(b.out_darts(v).size());
    if (!touches_bd[k]) {
      if (j >= 0) ++rep.nbar[j];
      if (b.special_at(v) < 0) rep.B_nonspecial += corners[k] / deg - 1;
    }
  }
  rep.chi = V - (paired / 2 + free) + nc;
  rep.closed = free == 0;

  // Area by copies, then by complement components.
  for (int c = 0; c < nc; ++c) {
    std::vector<Vec3> walk;
    for (int v : b.face_vertices(s.copy(c).base_face)) walk.push_back(b.position(v));
    rep.A += walk_area(walk);
  }
  std::vector<int> free_plus(b.num_darts(), 0);
  for (int sd = 0; sd < ns; ++sd) {
    if (s.partner(sd) >= 0) continue;
    const int d = s.side_dart(sd);
    ++free_plus[d];
    rep.L += angle_between(b.position(b.origin(d)), b.position(b.target(d)));
  }
  std::vector<int> label(b.num_faces(), -1);
  int ncomp = 0;
  for (int f0 = 0; f0 < b.num_faces(); ++f0) {
    if (label[f0] >= 0) continue;
    std::queue<int> todo;
    todo.push(f0);
    label[f0] = ncomp;
    while (!todo.empty()) {
      const int f = todo.front();
      todo.pop();
      for (int d : b.face_darts(f)) {
        if (free_plus[d] + free_plus[d ^ 1] > 0) continue;
        const int g = b.face(d ^ 1);
        if (label[g] < 0) {
          label[g] = ncomp;
          todo.push(g);
        }
      }
    }
    ++ncomp;
  }
  std::vector<int> n_of(ncomp, -1);
  std::vector<double> area_of(ncomp, 0.0);
  for (int f = 0; f < b.num_faces(); ++f) {
    area_of[label[f]] += b.face_area(f);
    if (n_of[label[f]] < 0) n_of[label[f]] = rep.n_face[f];
    else if (n_of[label[f]] != rep.n_face[f]) mismatch("covering number varies in complement component");
  }
  for (int u = 0; u < ncomp; ++u) rep.A_components += std::max(0, n_of[u]) * area_of[u];
  for (int e = 0; e < b.num_edges(); ++e) {
    const int d = 2 * e;
    rep.L_arcs += (free_plus[d] + free_plus[d ^ 1]) * b.length(d);
  }

  // Edge relation n(U+) - m+ = n(U-) - m-, counting properly matched sides.
  std::vector<int> glued(b.num_darts(), 0);
  for (int sd = 0; sd < ns; ++sd)
    if (matched(sd)) ++glued[s.side_dart(sd)];
  for (int e = 0; e < b.num_edges(); ++e) {
    const int d = 2 * e;
    const int lhs = rep.n_face[b.face(d)] - free_plus[d];
    const int rhs = rep.n_face[b.face(d ^ 1)] - free_plus[d ^ 1];
    if (lhs != rhs || lhs != glued[d] || rhs != glued[d ^ 1]) {
      rep.witness_edges.push_back(e);
      mismatch("edge relation fails on arc " + std::to_string(b.origin(d)) + "->" + std::to_string(b.target(d)) +
               ": n(U+)-m+ = " + std::to_string(lhs) + ", n(U-)-m- = " + std::to_string(rhs) +
               ", glued = " + std::to_string(glued[d]) + "/" + std::to_string(glued[d ^ 1]));
    }
  }

  if (std::abs(rep.A - rep.A_components) > tol * std::max(1.0, rep.A)) mismatch("area by components disagrees");
  if (std::abs(rep.L - rep.L_arcs) > tol * std::max(1.0, rep.L)) mismatch("length by arcs disagrees");

  if (!rep.ok) return rep;
  try {
    const FunctionalReport f = functionals(s);
    const SurfaceAnalysis a = analyze(s);
    if (f.n_face != rep.n_face) mismatch("n(face) disagrees with functionals");
    if (f.nbar != rep.nbar) mismatch("nbar disagrees with functionals");
    if (std::abs(f.A - rep.A) > tol * std::max(1.0, rep.A)) mismatch("area disagrees with functionals");
    if (std::abs(f.L - rep.L) > tol * std::max(1.0, rep.L)) mismatch("length disagrees with functionals");
    if (a.chi() != rep.chi) mismatch("Euler characteristic disagrees with analysis");
    if (rep.closed) {
      if (f.B_nonspecial != rep.B_nonspecial) mismatch("B(E_q^c) disagrees with functionals");
      const double expect = -8 * kPi - 4 * kPi * rep.B_nonspecial;
      rep.closed_identity_ok = std::abs(f.R - expect) <= tol;
      if (!rep.closed_identity_ok) mismatch("closed surface violates R = -8pi - 4pi B(E_q^c)");
    }
  } catch (const Error& e) {
    mismatch(std::string("functionals failed: ") + e.what());
  }
  return rep;
}

}  // namespace sphcov
