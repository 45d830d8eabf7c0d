#pragma once

#include <optional>
#include <vector>

#include "sphcov/surface.hpp"

namespace sphcov {

// Simple edge path on a covering surface. Each entry is the side traversed
// from its origin to its target, so side_dart() gives the base dart walked.
struct SurfacePath {
  std::vector<int> sides;

  int size() const { return static_cast<int>(sides.size()); }
  bool empty() const { return sides.empty(); }
  // Vertex sheets visited, size() + 1 entries.
  std::vector<int> sheets(const SurfaceComplex& s, const SurfaceAnalysis& a) const;
  std::vector<int> base_darts(const SurfaceComplex& s) const;
  std::vector<int> base_vertices(const SurfaceComplex& s) const;
  double length(const SurfaceComplex& s) const;
};

enum class LiftMode { FromInterior, FromBoundaryLeft, AlongBoundary };
enum class StopReason { Full, HitBoundary, HitSpecial };
const char* to_string(StopReason r);

struct LiftResult {
  // Lifts in clockwise order at the start sheet. In AlongBoundary mode the
  // lift following the boundary is the last one.
  std::vector<SurfacePath> lifts;
  std::vector<int> end_sheets;  // sheet ids in the analysis passed to lift_path
  StopReason stop = StopReason::Full;
  int steps = 0;                // number of base edges actually lifted
  int start_sheet = -1;
  LiftMode mode = LiftMode::FromInterior;

  int degree() const { return static_cast<int>(lifts.size()); }
};

// Lifts a directed base edge path (darts) from a vertex sheet. All lifts are
// advanced together and truncated at the first step where one of them reaches
// the boundary (the boundary-following lift excepted).
LiftResult lift_path(const SurfaceComplex& s, const SurfaceAnalysis& a, const std::vector<int>& base_path,
                     int start_sheet, LiftMode mode);

// Re-pairings along a set of lifts. L_k is the lift side, R_k its partner in
// the input surface; indices follow LiftResult::lifts.
// L_{k+1} <-> R_k for all k (cyclically).
SurfaceComplex repair_cyclic(const SurfaceComplex& s, const LiftResult& lifts);
// Boundary start with the last lift on the boundary: L_{k+1} <-> R_k for
// k < d-1, and the first lift becomes free.
SurfaceComplex repair_boundary_shift(const SurfaceComplex& s, const LiftResult& lifts);
// L_i <-> R_j and L_j <-> R_i.
SurfaceComplex repair_transposition(const SurfaceComplex& s, const LiftResult& lifts, int i, int j);
// The free boundary lift L_{d-1} is paired with R_j and L_j becomes free.
SurfaceComplex repair_boundary_transposition(const SurfaceComplex& s, const LiftResult& lifts, int j);

// Connected components as separate surfaces over the same base.
std::vector<SurfaceComplex> split_components(const SurfaceComplex& s);

// Lifts a covering to a refined base. `side_map[s]` lists the new sides that
// make up old side s, in order along it.
struct LiftedRefinement {
  SurfaceComplex surface;
  std::vector<std::vector<int>> side_map;
};
LiftedRefinement lift_refinement(const SurfaceComplex& s, const Refinement& ref);

// Deltas predicted for a cut or sew, computed from the path before
// the operation is applied.
struct SurgeryDelta {
  double dL = 0;
  double dA = 0;
  std::vector<int> dnbar;  // per special point
};

// Cuts a disk along a path from a boundary sheet into the interior. Edges
// that become boundary are retagged as curve edges.
SurfaceComplex cut_to_boundary(const SurfaceComplex& s, const SurfacePath& path, SurgeryDelta* delta = nullptr);
// Cuts a disk along a path with both ends interior; the result is an annulus.
SurfaceComplex cut_interior(const SurfaceComplex& s, const SurfacePath& path, SurgeryDelta* delta = nullptr);
// Sews the boundary run alpha (ending at p) to the run beta (starting at p).
// Both are lists of free sides in boundary order, of equal length.
SurfaceComplex sew(const SurfaceComplex& s, const std::vector<int>& alpha, const std::vector<int>& beta,
                   SurgeryDelta* delta = nullptr);
// Sews the inner boundary alpha1 + alpha2 of an annulus; alpha2 must retrace
// alpha1 backwards.
SurfaceComplex sew_annulus(const SurfaceComplex& s, const std::vector<int>& alpha1, const std::vector<int>& alpha2,
                           SurgeryDelta* delta = nullptr);

// Shortest edge path (by length) from `from` to any vertex in `targets` whose
// interior avoids `forbidden` vertices and `forbidden_edges`. Ties break by
// vertex id. Returns darts.
std::optional<std::vector<int>> route_path(const BaseComplex& base, int from, const std::vector<bool>& targets,
                                           const std::vector<bool>& forbidden,
                                           const std::vector<bool>& forbidden_edges = {});

// Splits every listed edge at its midpoint.
Refinement midpoint_refinement(const BaseComplex& base, const std::vector<int>& edges);

}  // namespace sphcov
