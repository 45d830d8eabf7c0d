#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "sphcov/normalize.hpp"

namespace sphcov {

// ---- SurfaceFile ---------------------------------------------------------

inline constexpr int kSurfaceFileVersion = 1;

struct SurfaceFile {
  SurfaceComplex surface;
  std::vector<Vec3> curve;  // optional input curve polygon
  nlohmann::json metadata = nlohmann::json::object();
};

nlohmann::json to_json(const SurfaceFile& f);
// Throws Error(ParseError) on malformed documents and InvalidSurface when the
// tables do not describe a covering.
SurfaceFile surface_from_json(const nlohmann::json& j);
std::string serialize(const SurfaceFile& f);
SurfaceFile parse_surface(const std::string& text);
SurfaceFile read_surface_file(const std::string& path);
void write_surface_file(const std::string& path, const SurfaceFile& f);

nlohmann::json to_json(const FunctionalReport& r);
nlohmann::json to_json(const Rotation& r);
Rotation rotation_from_json(const nlohmann::json& j);
nlohmann::json to_json(const BetterReport& b);
// JSON array of step records.
nlohmann::json trace_to_json(const PipelineTrace& t);

// ---- generators -----------------------------------------------------------

// Once-subdivided icosahedron (42 vertices, 80 triangles) with jittered
// vertices and a random rotation; q special points on random vertices.
std::shared_ptr<const BaseComplex> make_icosphere_base(std::uint64_t seed, int q, double jitter = 0.02);

struct DiskParams {
  int max_sheets = 4;     // copies per base face
  int max_faces = 12;     // face copies in total
  int q = 3;
  int branch_budget = 2;  // total branch index allowed
  PolygonalBounds bounds{1e9, 1 << 20, 1 << 20};
};

struct GeneratedDisk {
  SurfaceComplex surface;
  std::uint64_t seed = 0;
  PolygonalMembership fp;
};

// Seeded accretion: glue fresh face copies along free sides or pair two free
// sides over opposite darts, rejecting moves that break the disk or exceed the
// branch budget. Throws GenerationStuck when no move is accepted.
GeneratedDisk generate_disk_covering(std::uint64_t seed, const DiskParams& params);

// d-sheet cyclic cover of the whole sphere branched over v1 and v2.
SurfaceComplex generate_closed_cyclic_cover(std::shared_ptr<const BaseComplex> base, int d, int v1, int v2);

// ---- fixtures -------------------------------------------------------------

// Base with the equator as curve (three arcs), the south pole as an interior
// vertex and three special points at latitude 40 degrees north.
std::shared_ptr<const BaseComplex> hemisphere_base();
// Equator as curve; a non-special point P at latitude 45 in the north, five
// special points: both poles and three at latitude -45.
std::shared_ptr<const BaseComplex> cap_base();
// F1 identity over the southern hemisphere, F2 the same slit open along the
// meridian arc from the south pole, F3 closed double cover branched over two
// special points, F4 double cover of the southern hemisphere branched at the
// south pole. F5 and F6 live on cap_base(): F5 is the double cover of the
// northern cap branched at P, F6 drops the E0-E1-P face from one sheet of F5
// so that P is an unfolded boundary branch point.
SurfaceComplex fixture(const std::string& name);

// ---- oracle ---------------------------------------------------------------

struct OracleReport {
  bool ok = true;
  std::vector<std::string> mismatches;
  std::vector<int> witness_edges;  // base edges violating the edge relation
  std::vector<int> n_face;
  std::vector<int> nbar;
  double A = 0;
  double A_components = 0;  // sum over complement components of n(U) A(U)
  double L = 0;
  double L_arcs = 0;        // sum over arcs of (m+ + m-) L(arc)
  int chi = 0;
  bool closed = false;
  int B_nonspecial = 0;
  bool closed_identity_ok = true;  // R = -8 pi - 4 pi B(E_q^c) on closed surfaces
};

// Recomputes the functionals without the surface module's analysis and
// compares them with functionals().
OracleReport oracle_verify(const SurfaceComplex& s, double tol = 1e-9);

}  // namespace sphcov
