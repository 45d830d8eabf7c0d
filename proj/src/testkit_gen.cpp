#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <random>

#include "sphcov/error.hpp"
#include "sphcov/testkit.hpp"

namespace sphcov {

namespace {

struct Mesh {
  std::vector<Vec3> v;
  std::vector<std::array<int, 3>> f;
};

Mesh icosahedron() {
  const double t = (1 + std::sqrt(5.0)) / 2;
  Mesh m;
  for (double a : {-1.0, 1.0})
    for (double b : {-t, t}) {
      m.v.push_back(Vec3(0, a, b).normalized());
      m.v.push_back(Vec3(a, b, 0).normalized());
      m.v.push_back(Vec3(b, 0, a).normalized());
    }
  double shortest = 10;
  for (std::size_t i = 0; i < m.v.size(); ++i)
    for (std::size_t j = i + 1; j < m.v.size(); ++j) shortest = std::min(shortest, (m.v[i] - m.v[j]).norm());
  auto adj = [&](int i, int j) { return (m.v[i] - m.v[j]).norm() < shortest * 1.01; };
  const int n = static_cast<int>(m.v.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        if (!adj(i, j) || !adj(j, k) || !adj(i, k)) continue;
        if (orient(m.v[i], m.v[j], m.v[k]) > 0) m.f.push_back({i, j, k});
        else m.f.push_back({i, k, j});
      }
  return m;
}

Mesh subdivide(const Mesh& in) {
  Mesh out{in.v, {}};
  std::map<std::pair<int, int>, int> mid;
  auto midpoint = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = mid.find(key);
    if (it != mid.end()) return it->second;
    const int id = static_cast<int>(out.v.size());
    out.v.push_back((in.v[a] + in.v[b]).normalized());
    mid[key] = id;
    return id;
  };
  for (const auto& t : in.f) {
    const int ab = midpoint(t[0], t[1]), bc = midpoint(t[1], t[2]), ca = midpoint(t[2], t[0]);
    out.f.push_back({t[0], ab, ca});
    out.f.push_back({t[1], bc, ab});
    out.f.push_back({t[2], ca, bc});
    out.f.push_back({ab, bc, ca});
  }
  return out;
}

int total_branch_index(const SurfaceAnalysis& a) {
  int b = 0;
  for (const auto& vs : a.sheets) b += vs.branch_index;
  return b;
}

}  // namespace

std::shared_ptr<const BaseComplex> make_icosphere_base(std::uint64_t seed, int q, double jitter) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::normal_distribution<double> gauss;
  Mesh m = subdivide(icosahedron());
  const Eigen::Quaterniond quat(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
  const Mat3 rot = quat.normalized().toRotationMatrix();
  for (auto& p : m.v) p = rot * (p + jitter * Vec3(unit(rng), unit(rng), unit(rng))).normalized();
  std::vector<int> order(m.v.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::shuffle(order.begin(), order.end(), rng);
  SpecialSet special;
  std::vector<int> where;
  for (int j = 0; j < q; ++j) {
    where.push_back(order[j]);
    special.points.emplace_back(m.v[order[j]]);
  }
  std::vector<std::vector<int>> cycles;
  for (const auto& t : m.f) cycles.push_back({t[0], t[1], t[2]});
  return std::make_shared<BaseComplex>(BaseComplex::from_cycles(m.v, cycles, {}, special, where));
}

GeneratedDisk generate_disk_covering(std::uint64_t seed, const DiskParams& params) {
  if (params.max_sheets < 1 || params.max_sheets > 8 || params.max_faces < 1 || params.q < 3)
    throw Error(ErrorCode::PreconditionViolated, "disk parameters outside desk-scale bounds");
  std::mt19937_64 rng(seed);
  auto base = make_icosphere_base(rng(), params.q);
  const int nf = base->num_faces();
  std::vector<FaceCopy> copies{{static_cast<int>(rng() % nf), 0}};
  SurfaceComplex s = SurfaceComplex::unpaired(base, copies);
  std::vector<int> n_face(nf, 0);
  n_face[copies[0].base_face] = 1;
  const int target = 1 + static_cast<int>(rng() % params.max_faces);
  int pair_moves = 0;
  int rejected = 0;
  auto acceptable = [&](const SurfaceComplex& cand) {
    const SurfaceComplex tagged = retag_boundary(cand);
    const Diagnostics dg = validate(tagged);
    if (!dg.ok || dg.kind != TopologyKind::Disk) return false;
    return total_branch_index(analyze(tagged)) <= params.branch_budget;
  };
  while (s.num_copies() < target || pair_moves < 3 + target / 2) {
    if (rejected > 400) {
      if (s.num_copies() < target) throw Error(ErrorCode::GenerationStuck, "accretion made no progress");
      break;
    }
    const auto free = s.free_sides();
    const int sd = free[rng() % free.size()];
    const int dart = s.side_dart(sd);
    const bool glue = s.num_copies() < target && (rng() % 4 != 0);
    if (glue) {
      const int h = base->face(BaseComplex::twin(dart));
      if (n_face[h] >= params.max_sheets) {
        ++rejected;
        continue;
      }
      std::vector<FaceCopy> nc = s.copies();
      nc.push_back({h, n_face[h]});
      std::vector<int> partner = s.partners();
      partner.resize(partner.size() + base->face_size(h), -1);
      SurfaceComplex cand(base, nc, partner);
      cand.pair_sides(sd, cand.side_id(cand.num_copies() - 1, base->face_position(BaseComplex::twin(dart))));
      if (!acceptable(cand)) {
        ++rejected;
        continue;
      }
      ++n_face[h];
      s = std::move(cand);
    } else {
      std::vector<int> options;
      for (int t : free)
        if (s.side_dart(t) == BaseComplex::twin(dart)) options.push_back(t);
      ++pair_moves;
      if (options.empty()) {
        ++rejected;
        continue;
      }
      SurfaceComplex cand = s;
      cand.pair_sides(sd, options[rng() % options.size()]);
      if (!acceptable(cand)) {
        ++rejected;
        continue;
      }
      s = std::move(cand);
    }
    rejected = 0;
  }
  GeneratedDisk out;
  out.surface = retag_boundary(s);
  out.seed = seed;
  require_valid(out.surface, TopologyKind::Disk);
  out.fp = polygonal_membership(out.surface, params.bounds);
  return out;
}

SurfaceComplex generate_closed_cyclic_cover(std::shared_ptr<const BaseComplex> base, int d, int v1, int v2) {
  if (d < 1) throw Error(ErrorCode::PreconditionViolated, "degree must be positive");
  if (v1 == v2) throw Error(ErrorCode::PreconditionViolated, "branch vertices must differ");
  std::vector<bool> target(base->num_vertices(), false);
  target[v2] = true;
  const auto path = route_path(*base, v1, target, std::vector<bool>(base->num_vertices(), false));
  if (!path) throw Error(ErrorCode::NoSuchPath, "branch vertices are not connected");
  std::vector<int> shift(base->num_darts(), 0);
  for (int g : *path) {
    shift[g] = 1;
    shift[g ^ 1] = -1;
  }
  const int nf = base->num_faces();
  std::vector<FaceCopy> copies;
  for (int f = 0; f < nf; ++f)
    for (int i = 0; i < d; ++i) copies.push_back({f, i});
  SurfaceComplex s = SurfaceComplex::unpaired(base, copies);
  for (int f = 0; f < nf; ++f) {
    const auto& ds = base->face_darts(f);
    for (int i = 0; i < d; ++i) {
      for (std::size_t k = 0; k < ds.size(); ++k) {
        const int me = s.side_id(f * d + i, static_cast<int>(k));
        if (s.partner(me) >= 0) continue;
        const int g = ds[k];
        const int h = base->face(g ^ 1);
        const int j = ((i + shift[g]) % d + d) % d;
        s.pair_sides(me, s.side_id(h * d + j, base->face_position(g ^ 1)));
      }
    }
  }
  return s;
}

}  // namespace sphcov
