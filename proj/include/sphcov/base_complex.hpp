#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "sphcov/geometry.hpp"

namespace sphcov {

enum class EdgeKind { Curve, Scaffold };

struct SpecialSet {
  std::vector<SpherePoint> points;

  int size() const { return static_cast<int>(points.size()); }
  // Throws PreconditionViolated unless q >= 3 and the points are pairwise distinct.
  void validate() const;
};

struct Incidence {
  enum class Kind { Vertex, Edge, Face };
  Kind kind = Kind::Face;
  int id = -1;        // vertex id, dart id (Edge) or face id
  double param = 0;   // arc fraction along the dart for Edge
};

// Spherical planar graph with geodesic edges and disk faces, stored as
// half-edges ("darts"). Dart d belongs to undirected edge d/2 and its twin is
// d^1. Faces lie to the left of their darts; each face keeps its dart cycle in
// a fixed order, and position k in that cycle is what surface sides refer to.
class BaseComplex {
 public:
  BaseComplex() = default;

  // Builds from face cycles given as vertex-id lists (face on the left).
  static BaseComplex from_cycles(std::vector<Vec3> vertices, const std::vector<std::vector<int>>& cycles,
                                 const std::vector<std::pair<int, int>>& curve_edges, SpecialSet special,
                                 std::vector<int> special_vertex);

  // Builds from an undirected edge list by tracing faces with the rotation
  // system of tangent azimuths. The graph must be connected.
  static BaseComplex from_edges(std::vector<Vec3> vertices, const std::vector<std::pair<int, int>>& edges,
                                const std::vector<EdgeKind>& kinds, SpecialSet special,
                                std::vector<int> special_vertex);

  int num_vertices() const { return static_cast<int>(pos_.size()); }
  int num_darts() const { return static_cast<int>(origin_.size()); }
  int num_edges() const { return num_darts() / 2; }
  int num_faces() const { return static_cast<int>(face_darts_.size()); }

  const Vec3& position(int v) const { return pos_[v]; }
  const std::vector<Vec3>& positions() const { return pos_; }
  int origin(int d) const { return origin_[d]; }
  int target(int d) const { return origin_[d ^ 1]; }
  static int twin(int d) { return d ^ 1; }
  static int edge_of(int d) { return d >> 1; }
  int next(int d) const { return next_[d]; }
  int prev(int d) const { return prev_[d]; }
  int face(int d) const { return face_[d]; }
  int face_position(int d) const { return face_pos_[d]; }
  EdgeKind kind(int edge) const { return kind_[edge]; }
  bool is_curve_dart(int d) const { return kind_[d >> 1] == EdgeKind::Curve; }

  const std::vector<int>& face_darts(int f) const { return face_darts_[f]; }
  int face_size(int f) const { return static_cast<int>(face_darts_[f].size()); }
  double face_area(int f) const { return area_[f]; }
  std::vector<int> face_vertices(int f) const;

  // Outgoing darts at v in counter-clockwise order.
  const std::vector<int>& out_darts(int v) const { return out_[v]; }
  int dart_between(int u, int v) const;
  GeodesicSegment segment(int d) const { return {SpherePoint(pos_[origin(d)]), SpherePoint(pos_[target(d)])}; }
  double length(int d) const { return angle_between(pos_[origin(d)], pos_[target(d)]); }

  const SpecialSet& special() const { return special_; }
  int q() const { return special_.size(); }
  int special_vertex(int j) const { return special_vertex_[j]; }
  const std::vector<int>& special_vertices() const { return special_vertex_; }
  // Index of the special point sitting at vertex v, or -1.
  int special_at(int v) const { return special_of_vertex_[v]; }
  // Special points strictly inside face f (only before scaffolding).
  std::vector<int> loose_specials(int f) const;

  double total_area() const;
  bool all_triangles() const;
  int euler_characteristic() const { return num_vertices() - num_edges() + num_faces(); }

  // Same complex with the given edges (undirected ids) retagged as CURVE.
  BaseComplex with_curve_edges(const std::vector<int>& edges) const;
  // Same complex with special labels moved: special j now sits at vertex `where[j]`.
  BaseComplex with_special_vertices(std::vector<int> where) const;
  // Rigid rotation of all vertex positions; special points are mapped as well
  // unless `keep_special` is set (used when vertices were pre-placed so that
  // the rotated positions land on the unchanged special set).
  BaseComplex rotated(const Rotation& r, bool keep_special = false) const;

  std::vector<std::pair<int, int>> curve_edge_list() const;

 private:
  void finish();

  std::vector<Vec3> pos_;
  std::vector<int> origin_, next_, prev_, face_, face_pos_;
  std::vector<EdgeKind> kind_;
  std::vector<std::vector<int>> face_darts_;
  std::vector<double> area_;
  std::vector<std::vector<int>> out_;
  SpecialSet special_;
  std::vector<int> special_vertex_;
  std::vector<int> special_of_vertex_;
  std::vector<int> loose_face_;  // per special: containing face when not a vertex
};

BaseComplex rotate(const Rotation& r, const BaseComplex& bc);

struct CurveInput {
  std::vector<SpherePoint> points;  // cyclic polygon
  int max_segments = 64;
};

BaseComplex build_arrangement(const CurveInput& curve, const SpecialSet& special);
BaseComplex attach_scaffold(const BaseComplex& bc);
// Splits every face into proper geodesic triangles with SCAFFOLD diagonals,
// adding an interior vertex where a face has no usable diagonal.
BaseComplex triangulate(const BaseComplex& bc);

Incidence locate_point(const BaseComplex& bc, const Vec3& p);
// (left face, right face) of a directed arc given by dart id.
std::pair<int, int> left_right_faces(const BaseComplex& bc, int dart);

// Whether p lies in the region left of a closed vertex walk (slit edges that
// are traversed in both directions are ignored).
bool walk_contains(const std::vector<Vec3>& walk, const Vec3& p);

// A base refinement together with the bookkeeping needed to lift covering
// surfaces to it. Each new face lies in exactly one old face; each of its
// sides is either interior to that old face or a piece of an old side.
struct Refinement {
  struct SideSource {
    int old_side = -1;  // position in the old face cycle, -1 when interior
    int piece = 0;
  };
  std::shared_ptr<const BaseComplex> base;
  std::vector<std::vector<int>> new_faces_of;     // per old face
  std::vector<int> old_face_of;                   // per new face
  std::vector<std::vector<SideSource>> source;    // per new face, per side
  std::vector<int> pieces;                        // per old dart
  // (old face, old side, piece) -> new dart
  std::vector<std::vector<std::vector<int>>> piece_dart;
};

// Inserts one vertex on each listed edge (undirected id, point strictly inside)
// and re-triangulates adjacent triangles. Non-triangular faces only gain the
// new vertex on their boundary.
Refinement split_edges(const BaseComplex& bc, const std::vector<std::pair<int, Vec3>>& splits);
// Fan-subdivides a triangle from a new interior point.
Refinement insert_in_face(const BaseComplex& bc, int face, const Vec3& p);
// Composition helper: the identity refinement.
Refinement identity_refinement(const BaseComplex& bc);

}  // namespace sphcov
