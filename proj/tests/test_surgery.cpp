#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "doctest.h"
#include "sphcov/error.hpp"
#include "sphcov/surgery.hpp"
#include "sphcov/testkit.hpp"

using namespace sphcov;

namespace {

constexpr double kPi = std::numbers::pi;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::AssertionFailed;
}

int dart_between(const BaseComplex& b, int u, int v) {
  for (int d : b.out_darts(u))
    if (b.target(d) == v) return d;
  FAIL("no base edge " << u << "->" << v);
  return -1;
}

// Sheets over base vertex v.
std::vector<int> sheets_over(const SurfaceAnalysis& a, int v) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(a.sheets.size()); ++i)
    if (a.sheets[i].base_vertex == v) out.push_back(i);
  return out;
}

int corner_over(const SurfaceComplex& s, const SurfaceAnalysis& a, int sheet, int dart) {
  for (int c : a.sheets[sheet].corners)
    if (s.side_dart(c) == dart) return c;
  FAIL("sheet has no corner over the dart");
  return -1;
}

int end_sheet(const SurfaceComplex& s, const SurfaceAnalysis& a, int side) {
  return a.sheet_of_corner[s.next_in_copy(side)];
}

// The two free sides created by cutting a single side, ordered so that the
// first one ends where the second starts.
std::pair<int, int> fold_pair(const SurfaceComplex& s, int side, int other) {
  const SurfaceAnalysis a = analyze(s);
  const int w = a.walk_of_side[side];
  const int n = a.walks[w].size();
  if (a.position_in_walk[other] == (a.position_in_walk[side] + 1) % n) return {side, other};
  return {other, side};
}

// Random simple surface path from an unfolded boundary sheet into the
// interior, avoiding branch and special sheets except at its end.
std::optional<SurfacePath> random_cut_path(const SurfaceComplex& s, std::mt19937_64& rng) {
  const SurfaceAnalysis a = analyze(s);
  std::vector<int> starts;
  for (int i = 0; i < static_cast<int>(a.sheets.size()); ++i)
    if (!a.sheets[i].interior) starts.push_back(i);
  std::shuffle(starts.begin(), starts.end(), rng);
  for (int start : starts) {
    int cur = start;
    std::set<int> seen{a.sheets[cur].base_vertex};
    SurfacePath p;
    const int want = 1 + static_cast<int>(rng() % 4);
    while (p.size() < want) {
      std::vector<int> opts;
      for (int c : a.sheets[cur].corners) {
        if (s.is_free(c)) continue;
        const VertexSheet& to = a.sheets[end_sheet(s, a, c)];
        if (!to.interior || seen.count(to.base_vertex)) continue;
        opts.push_back(c);
      }
      if (opts.empty()) break;
      const int c = opts[rng() % opts.size()];
      p.sides.push_back(c);
      cur = end_sheet(s, a, c);
      seen.insert(a.sheets[cur].base_vertex);
      if (a.sheets[cur].is_special() || a.sheets[cur].is_branch()) break;
    }
    if (!p.empty()) return p;
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("lift_path") {
  auto base = hemisphere_base();
  const BaseComplex& b = *base;
  const int S = 3, E0 = 0, E1 = 1;

  SUBCASE("two lifts out of an interior branch point") {
    const SurfaceComplex f4 = fixture("F4");
    const SurfaceAnalysis a = analyze(f4);
    const auto sh = sheets_over(a, S);
    REQUIRE(sh.size() == 1);
    const LiftResult r = lift_path(f4, a, {dart_between(b, S, E1)}, sh[0], LiftMode::FromInterior);
    CHECK(r.degree() == 2);
    CHECK(r.steps == 1);
    CHECK(r.stop == StopReason::HitBoundary);
    CHECK(r.end_sheets[0] != r.end_sheets[1]);
    CHECK(r.lifts[0].sides[0] != r.lifts[1].sides[0]);
  }
  SUBCASE("single lift on the identity") {
    const SurfaceComplex f1 = fixture("F1");
    const SurfaceAnalysis a = analyze(f1);
    const LiftResult r = lift_path(f1, a, {dart_between(b, S, E0)}, sheets_over(a, S)[0], LiftMode::FromInterior);
    CHECK(r.degree() == 1);
    CHECK(r.stop == StopReason::HitBoundary);
    CHECK(r.lifts[0].length(f1) == doctest::Approx(kPi / 2).epsilon(1e-12));
  }
  SUBCASE("path ending at a special point") {
    const SurfaceComplex f3 = fixture("F3");
    const SurfaceAnalysis a = analyze(f3);
    std::vector<bool> target(b.num_vertices(), false);
    target[b.special_vertex(2)] = true;
    const auto path = route_path(b, S, target, std::vector<bool>(b.num_vertices(), false));
    REQUIRE(path);
    const auto sh = sheets_over(a, S);
    REQUIRE(sh.size() == 2);
    const LiftResult r = lift_path(f3, a, *path, sh[0], LiftMode::FromInterior);
    CHECK(r.degree() == 1);
    CHECK(r.steps == static_cast<int>(path->size()));
    CHECK(r.stop == StopReason::HitSpecial);
    CHECK(r.lifts[0].base_darts(f3) == *path);
  }
  SUBCASE("passing over a branch value is refused") {
    const SurfaceComplex f4 = fixture("F4");
    const SurfaceAnalysis a = analyze(f4);
    const int start = sheets_over(a, E1)[0];
    const std::vector<int> path{dart_between(b, E1, S), dart_between(b, S, E0)};
    CHECK(code_of([&] { lift_path(f4, a, path, start, LiftMode::FromBoundaryLeft); }) == ErrorCode::TouchesBranch);
  }
  SUBCASE("disconnected base path") {
    const SurfaceComplex f1 = fixture("F1");
    const SurfaceAnalysis a = analyze(f1);
    const std::vector<int> path{dart_between(b, S, E0), dart_between(b, S, E1)};
    CHECK(code_of([&] { lift_path(f1, a, path, sheets_over(a, S)[0], LiftMode::FromInterior); }) ==
          ErrorCode::NotAdjacent);
  }
}

TEST_CASE("cut to the boundary and sew back") {
  auto base = hemisphere_base();
  const int S = 3, E1 = 1;
  const SurfaceComplex f4 = fixture("F4");
  const SurfaceAnalysis a = analyze(f4);
  const FunctionalReport before = functionals(f4);
  const int sheet = sheets_over(a, E1)[0];
  const SurfacePath path{{corner_over(f4, a, sheet, dart_between(*base, E1, S))}};
  SurgeryDelta delta;
  const SurfaceComplex cut = cut_to_boundary(f4, path, &delta);

  CHECK(delta.dL == doctest::Approx(kPi).epsilon(1e-12));
  const FunctionalReport after = functionals(cut);
  CHECK(std::abs(after.L - before.L - kPi) <= 1e-9);
  CHECK(std::abs(after.A - before.A) <= 1e-9);
  CHECK(after.nbar == before.nbar);
  const SurfaceAnalysis ca = analyze(cut);
  const auto sh = sheets_over(ca, S);
  REQUIRE(sh.size() == 1);
  CHECK_FALSE(ca.sheets[sh[0]].interior);
  CHECK(ca.sheets[sh[0]].folded);
  CHECK(ca.sheets[sh[0]].multiplicity == 2);
  CHECK(oracle_verify(cut).ok);

  const int side = path.sides[0];
  const int other = f4.partner(side);
  const auto [alpha, beta] = fold_pair(cut, side, other);
  SurgeryDelta back;
  const SurfaceComplex sewn = sew(cut, {alpha}, {beta}, &back);
  CHECK(back.dL == doctest::Approx(-kPi).epsilon(1e-12));
  CHECK(isomorphic(sewn, f4));
  CHECK(std::abs(functionals(sewn).L - before.L) <= 1e-9);
}

TEST_CASE("cutting to a special point lowers nbar") {
  auto base = cap_base();
  const int E2 = 2, N = 4;
  const SurfaceComplex f5 = fixture("F5");
  const SurfaceAnalysis a = analyze(f5);
  const int j = base->special_at(N);
  const FunctionalReport before = functionals(f5);
  REQUIRE(before.nbar[j] == 2);
  const int sheet = sheets_over(a, E2)[0];
  const SurfacePath path{{corner_over(f5, a, sheet, dart_between(*base, E2, N))}};
  SurgeryDelta delta;
  const SurfaceComplex cut = cut_to_boundary(f5, path, &delta);
  CHECK(delta.dnbar[j] == -1);
  CHECK(functionals(cut).nbar[j] == 1);
  CHECK(oracle_verify(cut).ok);
}

TEST_CASE("cut preconditions") {
  auto base = hemisphere_base();
  const int S = 3, E1 = 1;
  const SurfaceComplex f1 = fixture("F1");
  const SurfaceAnalysis a = analyze(f1);
  const int in = corner_over(f1, a, sheets_over(a, E1)[0], dart_between(*base, E1, S));
  const int out = corner_over(f1, a, end_sheet(f1, a, in), dart_between(*base, S, E1));
  CHECK(code_of([&] { cut_to_boundary(f1, SurfacePath{{in, out}}); }) == ErrorCode::NotSimple);
  CHECK(code_of([&] { cut_to_boundary(f1, SurfacePath{}); }) == ErrorCode::PreconditionViolated);
  CHECK(code_of([&] { cut_to_boundary(f1, SurfacePath{{out}}); }) == ErrorCode::PreconditionViolated);
  const int bd = f1.free_sides().front();
  CHECK(code_of([&] { cut_to_boundary(f1, SurfacePath{{bd}}); }) == ErrorCode::PreconditionViolated);
}

TEST_CASE("interior cut gives an annulus and sews back") {
  auto base = cap_base();
  const int P = 3, N = 4;
  const SurfaceComplex f5 = fixture("F5");
  const SurfaceAnalysis a = analyze(f5);
  const int j = base->special_at(N);
  const auto sp = sheets_over(a, P);
  REQUIRE(sp.size() == 1);
  const SurfacePath path{{corner_over(f5, a, sp[0], dart_between(*base, P, N))}};
  SurgeryDelta delta;
  const SurfaceComplex ann = cut_interior(f5, path, &delta);
  const SurfaceAnalysis aa = analyze(ann);
  CHECK(aa.kind == TopologyKind::Annulus);
  CHECK(aa.chi() == 0);
  CHECK(aa.walks.size() == 2);
  CHECK(delta.dnbar[j] == -1);
  CHECK(oracle_verify(ann).ok);

  const int side = path.sides[0];
  const int other = f5.partner(side);
  const auto [a1, a2] = fold_pair(ann, side, other);
  SurgeryDelta back;
  const SurfaceComplex sewn = sew_annulus(ann, {a1}, {a2}, &back);
  CHECK(back.dnbar[j] == 1);
  CHECK(isomorphic(sewn, f5));
}

TEST_CASE("sewing the slit removes the fold") {
  const SurfaceComplex f2 = fixture("F2");
  const FunctionalReport before = functionals(f2);
  const SurfaceAnalysis a = analyze(f2);
  int tip = -1;
  for (int i = 0; i < static_cast<int>(a.sheets.size()); ++i)
    if (a.sheets[i].folded) tip = i;
  REQUIRE(tip >= 0);
  const VertexSheet& vs = a.sheets[tip];
  const double ell = f2.base().length(f2.side_dart(vs.out_side));
  SurgeryDelta delta;
  const SurfaceComplex sewn = sew(f2, {vs.in_side}, {vs.out_side}, &delta);
  CHECK(std::abs(functionals(sewn).L - (before.L - 2 * ell)) <= 1e-9);
  CHECK(isomorphic(sewn, fixture("F1")));
  CHECK(functionals(sewn).folds.empty());
}

TEST_CASE("sew rejects mismatched runs") {
  const SurfaceComplex f1 = fixture("F1");
  const SurfaceAnalysis a = analyze(f1);
  const auto& w = a.walks.front().sides;
  CHECK(code_of([&] { sew(f1, {w[0]}, {w[1]}); }) == ErrorCode::ImagesMismatch);
  CHECK(code_of([&] { sew(f1, {w[0]}, {w[1], w[2]}); }) == ErrorCode::ImagesMismatch);
}

TEST_CASE("property: cut deltas and cut/sew round trips on generated disks") {
  DiskParams p;
  p.max_faces = 80;
  p.branch_budget = 3;
  std::mt19937_64 rng(77);
  int trips = 0;
  for (std::uint64_t seed = 1; seed <= 600 && trips < 200; ++seed) {
    const SurfaceComplex s = generate_disk_covering(seed, p).surface;
    const auto path = random_cut_path(s, rng);
    if (!path) continue;
    const FunctionalReport before = functionals(s);
    const SurfaceAnalysis a = analyze(s);
    SurgeryDelta d;
    const SurfaceComplex cut = cut_to_boundary(s, *path, &d);
    const FunctionalReport after = functionals(cut);
    double len = 0;
    for (int sd : path->sides) len += s.base().length(s.side_dart(sd));
    CHECK(std::abs(after.L - before.L - 2 * len) <= 1e-9);
    CHECK(std::abs(after.A - before.A) <= 1e-9);
    const VertexSheet& last = a.sheets[end_sheet(s, a, path->sides.back())];
    for (int j = 0; j < s.base().q(); ++j)
      CHECK(after.nbar[j] - before.nbar[j] == (last.special == j ? -1 : 0));
    CHECK(oracle_verify(cut).ok);

    // The cut opens a fold at the end of the path; sew it shut again.
    const SurfaceAnalysis ca = analyze(cut);
    const std::vector<int> alpha = path->sides;
    std::vector<int> beta;
    for (auto it = path->sides.rbegin(); it != path->sides.rend(); ++it) beta.push_back(s.partner(*it));
    const int w = ca.walk_of_side[alpha.front()];
    CHECK(ca.position_in_walk[beta.front()] == (ca.position_in_walk[alpha.front()] + path->size()) % ca.walks[w].size());
    const SurfaceComplex sewn = sew(cut, alpha, beta);
    CHECK(isomorphic(sewn, s));
    ++trips;
  }
  CHECK(trips >= 200);
}
