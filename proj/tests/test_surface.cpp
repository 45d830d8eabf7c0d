#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "sphcov/error.hpp"
#include "sphcov/surface.hpp"
#include "sphcov/testkit.hpp"

using namespace sphcov;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kSouthPole = 3;  // vertex id in hemisphere_base()

const VertexSheet* sheet_over(const SurfaceAnalysis& a, int v) {
  for (const auto& vs : a.sheets)
    if (vs.base_vertex == v) return &vs;
  return nullptr;
}

// Pairs every free side with a free twin side of the same sheet.
void pair_within_sheets(SurfaceComplex& s) {
  for (int sd = 0; sd < s.num_sides(); ++sd) {
    if (!s.is_free(sd)) continue;
    for (int t = 0; t < s.num_sides(); ++t)
      if (t != sd && s.is_free(t) && s.side_dart(t) == (s.side_dart(sd) ^ 1) &&
          s.copy(s.side_copy(t)).sheet == s.copy(s.side_copy(sd)).sheet) {
        s.pair_sides(sd, t);
        break;
      }
  }
}

Vec3 ll(double lat, double lon) { return SpherePoint::from_lat_lon(lat, lon).vec(); }

}  // namespace

TEST_CASE("validate fixtures") {
  const SurfaceComplex f1 = fixture("F1");
  Diagnostics dg = validate(f1);
  CHECK(dg.ok);
  CHECK(dg.kind == TopologyKind::Disk);
  CHECK(analyze(f1).chi() == 1);

  SurfaceComplex broken = f1;
  for (int sd = 0; sd < broken.num_sides(); ++sd)
    if (!broken.is_free(sd) && !broken.base().is_curve_dart(broken.side_dart(sd))) {
      broken.unpair_side(sd);
      break;
    }
  dg = validate(broken);
  CHECK_FALSE(dg.ok);
  CHECK(dg.message == "scaffold side free");
  CHECK_FALSE(dg.witness.empty());
  CHECK_THROWS_AS(require_valid(broken), Error);

  const SurfaceComplex f3 = fixture("F3");
  dg = validate(f3);
  CHECK(dg.ok);
  CHECK(dg.kind == TopologyKind::Closed);
  CHECK(analyze(f3).chi() == 2);
}

TEST_CASE("vertex classification") {
  SUBCASE("interior branch point of the double cover") {
    const SurfaceAnalysis a = analyze(fixture("F4"));
    const VertexSheet* vs = sheet_over(a, kSouthPole);
    REQUIRE(vs);
    CHECK(vs->interior);
    CHECK(vs->local_degree == 2);
    CHECK(vs->multiplicity == 2);
    CHECK(vs->branch_index == 1);
    CHECK(vs->corners.size() == 6);
  }
  SUBCASE("regular boundary vertex") {
    const SurfaceAnalysis a = analyze(fixture("F1"));
    const VertexSheet* vs = sheet_over(a, 0);
    REQUIRE(vs);
    CHECK_FALSE(vs->interior);
    CHECK(vs->local_degree == 1);
    CHECK_FALSE(vs->folded);
    CHECK(vs->multiplicity == 1);
    CHECK(vs->branch_index == 0);
  }
  SUBCASE("tip of a slit is folded") {
    const SurfaceAnalysis a = analyze(fixture("F2"));
    const VertexSheet* vs = sheet_over(a, kSouthPole);
    REQUIRE(vs);
    CHECK_FALSE(vs->interior);
    CHECK(vs->folded);
    CHECK(vs->local_degree == 2);
    CHECK(vs->multiplicity == 1);
  }
}

TEST_CASE("functionals on the fixtures") {
  SUBCASE("identity over the southern hemisphere") {
    const FunctionalReport r = functionals(fixture("F1"));
    CHECK(std::abs(r.A - 2 * kPi) <= 1e-9);
    CHECK(std::abs(r.L - 2 * kPi) <= 1e-9);
    CHECK(r.nbar_total == 0);
    CHECK(std::abs(r.R - 2 * kPi) <= 1e-9);
    REQUIRE(r.H);
    CHECK(std::abs(*r.H - 1) <= 1e-9);
    CHECK(r.sum == 1);
  }
  SUBCASE("branched double cover of the southern hemisphere") {
    const FunctionalReport r = functionals(fixture("F4"));
    CHECK(std::abs(r.A - 4 * kPi) <= 1e-9);
    CHECK(std::abs(r.L - 4 * kPi) <= 1e-9);
    CHECK(r.nbar_total == 0);
    CHECK(std::abs(r.R - 4 * kPi) <= 1e-9);
    CHECK(std::abs(*r.H - 1) <= 1e-9);
    CHECK(r.sum == 2);
    CHECK(r.B_nonspecial == 1);
  }
  SUBCASE("closed double cover branched over two special points") {
    const FunctionalReport r = functionals(fixture("F3"));
    CHECK(std::abs(r.A - 8 * kPi) <= 1e-9);
    CHECK(r.nbar_total == 4);
    CHECK(std::abs(r.R + 8 * kPi) <= 1e-9);
    CHECK_FALSE(r.H);
    REQUIRE(r.degree);
    CHECK(*r.degree == 2);
    CHECK(r.B_nonspecial == 0);
  }
}

TEST_CASE("boundary multiplicities and the edge relation") {
  auto check = [](const SurfaceComplex& s, int plus, int minus) {
    const FunctionalReport r = functionals(s);
    double L = 0;
    for (const auto& m : boundary_multiplicities(s)) {
      const int d = m.dart;
      L += (m.m_plus + m.m_minus) * s.base().length(d);
      CHECK(r.n_face[s.base().face(d)] - m.m_plus == r.n_face[s.base().face(d ^ 1)] - m.m_minus);
      if (s.base().is_curve_dart(d) && m.m_plus + m.m_minus > 0) {
        CHECK(m.m_plus + m.m_minus == plus + minus);
        CHECK(std::max(m.m_plus, m.m_minus) == std::max(plus, minus));
        CHECK(std::min(m.m_plus, m.m_minus) == std::min(plus, minus));
      }
    }
    CHECK(std::abs(L - r.L) <= 1e-9);
  };
  check(fixture("F1"), 1, 0);
  check(fixture("F4"), 2, 0);

  // The slit arc is traversed once in each direction.
  const SurfaceComplex f2 = fixture("F2");
  bool found = false;
  for (const auto& m : boundary_multiplicities(f2)) {
    const int u = f2.base().origin(m.dart), v = f2.base().target(m.dart);
    if (u == kSouthPole || v == kSouthPole) {
      CHECK(m.m_plus == 1);
      CHECK(m.m_minus == 1);
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("Riemann-Hurwitz on cyclic covers") {
  auto base = hemisphere_base();
  const int a0 = base->special_vertex(0), a1 = base->special_vertex(1);
  const int expect[4][3] = {{0, 0, 0}, {1, 0, 0}, {2, 2, 0}, {3, 4, 0}};
  for (int d = 1; d <= 3; ++d) {
    const RiemannHurwitz rh = riemann_hurwitz_check(generate_closed_cyclic_cover(base, d, a0, a1));
    CHECK(rh.degree == expect[d][0]);
    CHECK(rh.B_total == expect[d][1]);
    CHECK(rh.residual == expect[d][2]);
  }
  CHECK_THROWS_AS(riemann_hurwitz_check(fixture("F1")), Error);
}

TEST_CASE("closed subarcs") {
  const Vec3 P = ll(0, 0);
  const std::vector<Vec3> gamma{ll(0.3, 0.2), ll(0.1, 0.5)};   // P -> A -> B -> P
  const std::vector<Vec3> g1{ll(-0.3, 0.2), ll(-0.2, 0.6)};    // P -> C -> D -> P
  const std::vector<Vec3> g2{ll(-0.3, -0.3), ll(0.1, -0.5)};   // P -> E -> F -> P
  const std::vector<Vec3> g3{ll(0.4, -0.2), ll(0.5, -0.6)};    // P -> G -> H -> P
  auto join = [&](std::initializer_list<const std::vector<Vec3>*> loops) {
    std::vector<Vec3> w;
    for (const auto* l : loops) {
      w.push_back(P);
      w.insert(w.end(), l->begin(), l->end());
    }
    return w;
  };
  const auto w1 = join({&gamma, &g1, &gamma, &g2});
  const auto w2 = join({&g1, &g2});
  CHECK(is_closed_subarc(w1, w1).ok);
  // Shifting the start point is a reparametrization.
  std::vector<Vec3> shifted(w1.begin() + 2, w1.end());
  shifted.insert(shifted.end(), w1.begin(), w1.begin() + 2);
  CHECK(is_closed_subarc(shifted, w1).ok);
  CHECK(is_closed_subarc(w2, w1).ok);
  CHECK_FALSE(is_closed_subarc(join({&g1, &g3}), w1).ok);
  CHECK_FALSE(is_closed_subarc(w1, w2).ok);

  // Transitivity along a chain.
  const auto c1 = join({&gamma, &g1, &gamma, &g2, &gamma, &g3});
  const auto c2 = join({&g1, &gamma, &g2, &gamma, &g3});
  const auto c3 = join({&g1, &g2, &g3});
  CHECK(is_closed_subarc(c2, c1).ok);
  CHECK(is_closed_subarc(c3, c2).ok);
  CHECK(is_closed_subarc(c3, c1).ok);
}

TEST_CASE("better-than relation") {
  const SurfaceComplex f1 = fixture("F1");
  CHECK(is_better_than(f1, f1, Rotation()).ok());

  // Add the star of the first special point to F1: its nbar rises to one.
  auto base = hemisphere_base();
  const int a0 = base->special_vertex(0);
  std::vector<FaceCopy> copies = f1.copies();
  for (int f = 0; f < base->num_faces(); ++f)
    for (int v : base->face_vertices(f))
      if (v == a0) copies.push_back({f, 0});
  SurfaceComplex s2 = SurfaceComplex::unpaired(base, copies);
  pair_within_sheets(s2);
  s2 = retag_boundary(s2);
  require_valid(s2, TopologyKind::Disk);
  CHECK(functionals(s2).nbar[0] == 1);
  const BetterReport b = is_better_than(s2, f1, Rotation());
  CHECK_FALSE(b.ok());
  CHECK_FALSE(b.nbar_ok);
}

TEST_CASE("isomorphism ignores copy order") {
  const SurfaceComplex f4 = fixture("F4");
  std::vector<FaceCopy> copies(f4.copies().rbegin(), f4.copies().rend());
  const int n = f4.num_copies();
  std::vector<int> new_of(n);
  for (int c = 0; c < n; ++c) new_of[c] = n - 1 - c;
  SurfaceComplex r = SurfaceComplex::unpaired(f4.base_ptr(), copies);
  for (int sd = 0; sd < f4.num_sides(); ++sd) {
    const int p = f4.partner(sd);
    if (p < sd) continue;
    r.pair_sides(r.side_id(new_of[f4.side_copy(sd)], f4.side_index(sd)),
                 r.side_id(new_of[f4.side_copy(p)], f4.side_index(p)));
  }
  CHECK(isomorphic(f4, r));
  CHECK_FALSE(isomorphic(f4, fixture("F2").with_base(f4.base_ptr())));
}

TEST_CASE("property: generated disks satisfy the surface invariants") {
  DiskParams p;
  p.max_faces = 30;
  p.branch_budget = 3;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const SurfaceComplex s = generate_disk_covering(seed, p).surface;
    const Diagnostics dg = validate(s);
    REQUIRE(dg.ok);
    const SurfaceAnalysis a = analyze(s);
    CHECK(a.chi() == 1);
    CHECK(a.walks.size() == 1);
    const FunctionalReport r = functionals(s);
    int b = 0;
    for (const auto& vs : a.sheets) {
      b += vs.branch_index;
      if (vs.interior) CHECK(vs.multiplicity == vs.local_degree);
      else CHECK(vs.multiplicity == (vs.folded ? vs.local_degree / 2 : (vs.local_degree + 1) / 2));
      CHECK(vs.branch_index == vs.multiplicity - 1);
    }
    CHECK(r.B_special + r.B_nonspecial == b);
    CHECK(std::abs(r.R - ((r.q - 2) * r.A - 4 * kPi * r.nbar_total)) <= 1e-9);
    double L = 0;
    for (const auto& m : boundary_multiplicities(s)) {
      L += (m.m_plus + m.m_minus) * s.base().length(m.dart);
      CHECK(r.n_face[s.base().face(m.dart)] - m.m_plus == r.n_face[s.base().face(m.dart ^ 1)] - m.m_minus);
    }
    CHECK(std::abs(L - r.L) <= 1e-9);
    CHECK(std::abs(a.walks.front().length(s.base()) - r.L) <= 1e-9);
  }
}
