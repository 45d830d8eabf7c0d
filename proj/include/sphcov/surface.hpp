#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sphcov/base_complex.hpp"

namespace sphcov {

enum class TopologyKind { Disk, Annulus, Closed, Invalid };
const char* to_string(TopologyKind kind);

struct FaceCopy {
  int base_face = -1;
  int sheet = 0;  // free-form tag, kept for provenance and diagrams

  bool operator==(const FaceCopy&) const = default;
};

// Covering surface as face copies over a base complex glued by a pairing of
// sides. Side (c, k) is the k-th boundary dart of copy c; it has a flat id
// offset(c) + k. A corner is identified with the side leaving it, so corner
// ids and side ids coincide.
class SurfaceComplex {
 public:
  SurfaceComplex() = default;
  SurfaceComplex(std::shared_ptr<const BaseComplex> base, std::vector<FaceCopy> copies, std::vector<int> partner);

  // Builds with every side free; pairs are then added with pair_sides.
  static SurfaceComplex unpaired(std::shared_ptr<const BaseComplex> base, std::vector<FaceCopy> copies);

  const BaseComplex& base() const { return *base_; }
  const std::shared_ptr<const BaseComplex>& base_ptr() const { return base_; }

  int num_copies() const { return static_cast<int>(copies_.size()); }
  int num_sides() const { return static_cast<int>(partner_.size()); }
  const FaceCopy& copy(int c) const { return copies_[c]; }
  const std::vector<FaceCopy>& copies() const { return copies_; }
  const std::vector<int>& partners() const { return partner_; }

  int side_id(int c, int k) const { return offset_[c] + k; }
  int side_copy(int s) const { return side_copy_[s]; }
  int side_index(int s) const { return s - offset_[side_copy_[s]]; }
  int copy_size(int c) const { return offset_[c + 1] - offset_[c]; }
  int side_dart(int s) const { return base_->face_darts(copies_[side_copy_[s]].base_face)[side_index(s)]; }
  int side_origin(int s) const { return base_->origin(side_dart(s)); }
  int side_target(int s) const { return base_->target(side_dart(s)); }
  int partner(int s) const { return partner_[s]; }
  bool is_free(int s) const { return partner_[s] < 0; }
  int next_in_copy(int s) const;
  int prev_in_copy(int s) const;
  std::vector<int> free_sides() const;
  int num_free() const;

  // Corner orbit steps around the base vertex (clockwise). -1 at a free side.
  int corner_forward(int corner) const;
  int corner_backward(int corner) const;

  // Editing (used by surgery; results are fresh values).
  void pair_sides(int a, int b);
  void unpair_side(int s);

  // Copy with a different base; the base must have identical face cycles.
  SurfaceComplex with_base(std::shared_ptr<const BaseComplex> base) const;

 private:
  void layout();

  std::shared_ptr<const BaseComplex> base_;
  std::vector<FaceCopy> copies_;
  std::vector<int> partner_;
  std::vector<int> offset_;
  std::vector<int> side_copy_;
};

struct VertexSheet {
  int base_vertex = -1;
  std::vector<int> corners;  // clockwise orbit (chain order for boundary sheets)
  bool interior = true;
  bool folded = false;
  int local_degree = 1;
  int multiplicity = 1;  // v_f
  int branch_index = 0;  // v_f - 1
  int special = -1;      // special point index, or -1
  int in_side = -1;      // boundary sheets: free side arriving here
  int out_side = -1;     // boundary sheets: free side leaving here

  bool is_special() const { return special >= 0; }
  bool is_branch() const { return multiplicity >= 2; }
};

struct BoundaryWalk {
  std::vector<int> sides;   // free sides in walk order
  std::vector<int> darts;   // their base images
  std::vector<Vec3> points; // origin of each side

  int size() const { return static_cast<int>(sides.size()); }
  double length(const BaseComplex& base) const;
};

struct SurfaceAnalysis {
  std::vector<VertexSheet> sheets;
  std::vector<int> sheet_of_corner;
  std::vector<BoundaryWalk> walks;
  std::vector<int> walk_of_side;      // per side, -1 for paired sides
  std::vector<int> position_in_walk;  // per side
  int V = 0, E = 0, F = 0;
  int components = 0;
  TopologyKind kind = TopologyKind::Invalid;
  int chi() const { return V - E + F; }
};

SurfaceAnalysis analyze(const SurfaceComplex& s);
std::vector<VertexSheet> classify_vertices(const SurfaceComplex& s);
std::vector<BoundaryWalk> boundary_walks(const SurfaceComplex& s);

struct Diagnostics {
  bool ok = true;
  TopologyKind kind = TopologyKind::Invalid;
  std::string message;        // first violated invariant
  std::vector<int> witness;   // offending cells (side ids, copies or vertices)
  std::vector<std::string> notes;  // non-fatal flags
};

Diagnostics validate(const SurfaceComplex& s);
// Throws InvalidSurface with the diagnostic message when validation fails or
// the kind differs from `expected` (Invalid accepts any valid kind).
void require_valid(const SurfaceComplex& s, TopologyKind expected = TopologyKind::Invalid);

struct BranchInfo {
  int base_vertex;
  bool interior;
  bool folded;
  int multiplicity;
  int special;
};

struct FunctionalReport {
  TopologyKind kind = TopologyKind::Invalid;
  int q = 0;
  double A = 0;
  double L = 0;
  std::vector<int> nbar;        // per special point, interior sheets only
  std::vector<int> n_special;   // n(f, a) per special point
  std::vector<int> n_face;      // copies per base face
  int nbar_total = 0;           // nbar(E_q)
  int B_special = 0;            // B(E_q)
  int B_nonspecial = 0;         // B(E_q^c)
  double R = 0;
  std::optional<double> H;
  int sum = 0;
  int components = 0;           // number of complement components U_j
  std::optional<int> degree;    // closed surfaces only
  std::vector<BranchInfo> branches;
  std::vector<BranchInfo> folds;
  int boundary_segments = 0;    // maximal geodesic runs of the boundary
};

FunctionalReport functionals(const SurfaceComplex& s);

// Components of the sphere minus the boundary image, as base face labels.
std::vector<int> complement_components(const SurfaceComplex& s, int* count = nullptr);

struct ArcMultiplicity {
  int dart;     // Gamma, the dart 2e
  int m_plus;   // free sides over Gamma
  int m_minus;  // free sides over -Gamma
};
std::vector<ArcMultiplicity> boundary_multiplicities(const SurfaceComplex& s);

struct RiemannHurwitz {
  int degree = 0;
  int B_total = 0;
  int residual = 0;
};
RiemannHurwitz riemann_hurwitz_check(const SurfaceComplex& s);

struct SubarcMatch {
  bool ok = false;
  int offset = -1;            // start position in the refined outer walk
  std::vector<bool> kept;     // per refined outer edge (from offset): kept or deleted
};
// Whether closed polyline w2 is a closed subarc of w1. Both are cyclic vertex
// sequences; shared points are inserted into either walk where they fall on
// the other's segments before the word comparison.
SubarcMatch is_closed_subarc(const std::vector<Vec3>& w2, const std::vector<Vec3>& w1);
SubarcMatch is_closed_subarc(const BoundaryWalk& w2, const BoundaryWalk& w1);

// Number of maximal geodesic runs of a closed polyline.
int count_segments(const std::vector<Vec3>& walk);

struct BetterReport {
  bool h_ok = false;
  bool sum_ok = false;
  bool nbar_ok = false;
  bool subarc_ok = false;
  std::string detail;
  bool ok() const { return h_ok && sum_ok && nbar_ok && subarc_ok; }
};
BetterReport is_better_than(const SurfaceComplex& s2, const SurfaceComplex& s1, const Rotation& rot);

// Combinatorial isomorphism over the same base (face cycles and positions
// must agree; edge tags are ignored).
bool isomorphic(const SurfaceComplex& a, const SurfaceComplex& b);

// Marks every base edge carrying a free side as CURVE.
SurfaceComplex retag_boundary(const SurfaceComplex& s);

}  // namespace sphcov
