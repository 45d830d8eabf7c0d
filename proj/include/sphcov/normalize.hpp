#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sphcov/surgery.hpp"

namespace sphcov {

// One surgery step as it appears in a pipeline trace.
struct StepRecord {
  std::string op;     // fold, push, slide, sink, rotate, refine
  std::string label;  // case label, e.g. "in-bd case 3"
  FunctionalReport pre;
  FunctionalReport post;
  Rotation rotation;  // rotation applied by this step (identity unless op == rotate)
  int pockets = 0;    // rotate only: m+ of the touched arc
  bool split = false;
  SurfaceComplex after;
};

// Result of one pipeline operation. `surface` is the retained disk.
struct OpResult {
  SurfaceComplex surface;
  std::vector<StepRecord> steps;
  bool split = false;
  int tracked_side = -1;  // slides: free side following the moved branch point
};

struct NormalizeOptions {
  std::uint64_t seed = 0x5eed;
  double jitter = 1e-6;
  int max_refinements = 4;
};

// Sews every maximal matched pair of boundary runs meeting at a non-special
// folded point.
OpResult remove_nonspecial_folds(const SurfaceComplex& s);

// Moves the interior non-special branch point `sheet` towards the nearest
// special point. The base is refined when no admissible path exists; in that
// case the result carries a single "refine" step and the caller retries.
OpResult push_interior_branch(const SurfaceComplex& s, int sheet, const NormalizeOptions& opt = {});
OpResult clear_interior_branches(const SurfaceComplex& s, const NormalizeOptions& opt = {});

// Slides the boundary branch point `sheet` forward along its boundary walk to
// the next stop (branch point, special point, anchor side, or the end of the
// longest simple run).
OpResult slide_boundary_branch(const SurfaceComplex& s, int sheet, int anchor_side = -1);

// With anchor_side < 0 every non-special boundary branch point is slid into a
// special boundary point. Otherwise they are parked at the origin of
// anchor_side, which must be a free side.
// With `one_branch` only the first branch point found is swept.
OpResult sweep_boundary_branches(const SurfaceComplex& s, int anchor_side = -1, bool one_branch = false);

// Boundary disjoint from the special set: parks all branching at the midpoint
// of `arc_side` and pushes it into a special point on the left of that arc.
OpResult sink_branch_to_special(const SurfaceComplex& s, int arc_side, const NormalizeOptions& opt = {});
// Free side whose left component holds a special point, preferring one that
// leaves a non-special boundary branch point, or -1.
int find_sink_arc(const SurfaceComplex& s);

// Rotation fallback. The result lives on a rotated base with one special
// point on the boundary; steps.back().rotation holds the rotation.
OpResult rotate_to_touch_special(const SurfaceComplex& s, const NormalizeOptions& opt = {});

struct TraceStep {
  StepRecord record;
  Rotation rotation_so_far;
  BetterReport certificate;  // against the pipeline input
};

struct PipelineTrace {
  std::vector<TraceStep> steps;
  Rotation rotation;
  int iterations = 0;
  int iteration_bound = 0;
};

struct NormalizeResult {
  SurfaceComplex surface;
  PipelineTrace trace;
};

// Iteration bound sum * (#critical points + #boundary arcs + 2).
int iteration_bound(const SurfaceComplex& s);

// Full pipeline. Throws NegativeH when H(s) < 0. Internal errors are rethrown
// as Error with the partial trace available through `partial` when given.
NormalizeResult normalize(const SurfaceComplex& s, const NormalizeOptions& opt = {},
                          PipelineTrace* partial = nullptr);

// Whether every non-special vertex sheet is regular and unfolded.
bool is_normalized(const SurfaceComplex& s);

struct PolygonalBounds {
  double L = 0;
  int M = 0;
  int N = 0;
};
struct PolygonalMembership {
  bool ok = false;
  double L = 0;
  int max_nbar = 0;
  int segments = 0;
};
PolygonalMembership polygonal_membership(const SurfaceComplex& s, const PolygonalBounds& b);

}  // namespace sphcov
