#include <cmath>
#include <numbers>

#include "sphcov/error.hpp"
#include "sphcov/testkit.hpp"

namespace sphcov {

namespace {

constexpr double kPi = std::numbers::pi;

Vec3 latlon(double lat_deg, double lon_deg) {
  const double la = lat_deg * kPi / 180, lo = lon_deg * kPi / 180;
  return Vec3(std::cos(la) * std::cos(lo), std::cos(la) * std::sin(lo), std::sin(la));
}

// Vertex ids in hemisphere_base().
constexpr int kE0 = 0, kS = 3, kA0 = 4, kN = 7;

// Copies of the three southern faces, in face order, one sheet each.
std::vector<FaceCopy> southern_copies(const BaseComplex& b, int sheets) {
  std::vector<FaceCopy> out;
  for (int f = 0; f < b.num_faces(); ++f) {
    bool south = false;
    for (int v : b.face_vertices(f)) south |= v == kS;
    if (!south) continue;
    for (int i = 0; i < sheets; ++i) out.push_back({f, i});
  }
  return out;
}

bool on_meridian(const BaseComplex& b, int dart) {
  const int u = b.origin(dart), v = b.target(dart);
  return (u == kS && v == kE0) || (u == kE0 && v == kS);
}

// Pairs interior sides of the southern copies; sides over the S-E0 meridian
// are swapped between sheets when swap is set, or left free when slit is set.
SurfaceComplex southern_cover(int sheets, bool swap, bool slit) {
  auto base = hemisphere_base();
  SurfaceComplex s = SurfaceComplex::unpaired(base, southern_copies(*base, sheets));
  for (int sd = 0; sd < s.num_sides(); ++sd) {
    if (s.partner(sd) >= 0) continue;
    const int d = s.side_dart(sd);
    if (base->is_curve_dart(d)) continue;
    if (slit && on_meridian(*base, d)) continue;
    const int sheet = s.copy(s.side_copy(sd)).sheet;
    const int want = swap && on_meridian(*base, d) ? (sheet + 1) % sheets : sheet;
    for (int t = 0; t < s.num_sides(); ++t)
      if (t != sd && s.partner(t) < 0 && s.side_dart(t) == (d ^ 1) && s.copy(s.side_copy(t)).sheet == want) {
        s.pair_sides(sd, t);
        break;
      }
  }
  return s;
}

// Vertex ids in cap_base().
constexpr int kCapE0 = 0, kCapE1 = 1, kCapP = 3, kCapN = 4;

std::shared_ptr<const BaseComplex> from_triangles(std::vector<Vec3> v, std::vector<std::vector<int>> tri,
                                                  const std::vector<int>& specials) {
  for (auto& t : tri)
    if (orient(v[t[0]], v[t[1]], v[t[2]]) < 0) std::swap(t[1], t[2]);
  SpecialSet special;
  for (int w : specials) special.points.emplace_back(v[w]);
  return std::make_shared<BaseComplex>(
      BaseComplex::from_cycles(std::move(v), tri, {{0, 1}, {1, 2}, {2, 0}}, std::move(special), specials));
}

// Covers of the northern cap of cap_base(). Sheet i holds the northern faces
// listed in sheets[i]; crossing the E0-P edge swaps the sheets and a side whose
// partner copy is missing stays free.
SurfaceComplex northern_cover(const std::vector<std::vector<bool>>& sheets) {
  auto base = cap_base();
  std::vector<FaceCopy> copies;
  std::vector<int> north;
  for (int f = 0; f < base->num_faces(); ++f)
    for (int v : base->face_vertices(f))
      if (v == kCapP || v == kCapN) {
        north.push_back(f);
        break;
      }
  for (std::size_t i = 0; i < sheets.size(); ++i)
    for (std::size_t k = 0; k < north.size(); ++k)
      if (sheets[i][k]) copies.push_back({north[k], static_cast<int>(i)});
  SurfaceComplex s = SurfaceComplex::unpaired(base, copies);
  const int n = static_cast<int>(sheets.size());
  for (int sd = 0; sd < s.num_sides(); ++sd) {
    if (s.partner(sd) >= 0) continue;
    const int d = s.side_dart(sd);
    if (base->is_curve_dart(d)) continue;
    const int u = base->origin(d), w = base->target(d);
    const bool swap = (u == kCapE0 && w == kCapP) || (u == kCapP && w == kCapE0);
    const int sheet = s.copy(s.side_copy(sd)).sheet;
    const int want = swap ? (sheet + 1) % n : sheet;
    for (int t = 0; t < s.num_sides(); ++t)
      if (t != sd && s.partner(t) < 0 && s.side_dart(t) == (d ^ 1) && s.copy(s.side_copy(t)).sheet == want) {
        s.pair_sides(sd, t);
        break;
      }
  }
  return retag_boundary(s);
}

}  // namespace

std::shared_ptr<const BaseComplex> cap_base() {
  std::vector<Vec3> v;
  for (int k = 0; k < 3; ++k) v.push_back(latlon(0, 120.0 * k));
  v.push_back(latlon(45, 0));
  v.push_back(Vec3(0, 0, 1));
  v.push_back(Vec3(0, 0, -1));
  for (int k = 0; k < 3; ++k) v.push_back(latlon(-45, 60 + 120.0 * k));
  const int e0 = 0, e1 = 1, e2 = 2, p = kCapP, n = kCapN, s = 5;
  // The first face is E0-E1-P; F6 leaves it out of sheet 1.
  std::vector<std::vector<int>> tri{{e0, e1, p}, {p, e1, n}, {n, e2, p}, {e2, e0, p}, {e1, e2, n}};
  for (int k = 0; k < 3; ++k) {
    const int e = k, f = (k + 1) % 3, q = 6 + k, q1 = 6 + (k + 1) % 3;
    tri.push_back({e, f, q});
    tri.push_back({q, f, q1});
    tri.push_back({q, q1, s});
  }
  return from_triangles(std::move(v), std::move(tri), {n, s, 6, 7, 8});
}

std::shared_ptr<const BaseComplex> hemisphere_base() {
  std::vector<Vec3> v;
  for (int k = 0; k < 3; ++k) v.push_back(latlon(0, 120.0 * k));
  v.push_back(Vec3(0, 0, -1));
  for (int k = 0; k < 3; ++k) v.push_back(latlon(40, 60 + 120.0 * k));
  v.push_back(Vec3(0, 0, 1));
  std::vector<std::vector<int>> tri;
  for (int k = 0; k < 3; ++k) {
    const int e = k, e1 = (k + 1) % 3, a = kA0 + k, a1 = kA0 + (k + 1) % 3;
    tri.push_back({e1, e, kS});
    tri.push_back({e, e1, a});
    tri.push_back({a, e1, a1});
    tri.push_back({a, a1, kN});
  }
  for (auto& t : tri)
    if (orient(v[t[0]], v[t[1]], v[t[2]]) < 0) std::swap(t[1], t[2]);
  SpecialSet special;
  std::vector<int> where;
  for (int k = 0; k < 3; ++k) {
    special.points.emplace_back(v[kA0 + k]);
    where.push_back(kA0 + k);
  }
  return std::make_shared<BaseComplex>(
      BaseComplex::from_cycles(v, tri, {{0, 1}, {1, 2}, {2, 0}}, std::move(special), std::move(where)));
}

SurfaceComplex fixture(const std::string& name) {
  if (name == "F1") return southern_cover(1, false, false);
  if (name == "F2") return retag_boundary(southern_cover(1, false, true));
  if (name == "F3") return generate_closed_cyclic_cover(hemisphere_base(), 2, kA0, kA0 + 1);
  if (name == "F4") return southern_cover(2, true, false);
  if (name == "F5") return northern_cover({{true, true, true, true, true}, {true, true, true, true, true}});
  if (name == "F6") return northern_cover({{true, true, true, true, true}, {false, true, true, true, true}});
  throw Error(ErrorCode::PreconditionViolated, "unknown fixture '" + name + "'");
}

}  // namespace sphcov
