#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace sphcov {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kEpsUnit = 1e-12;  // algebraic tolerance
inline constexpr double kEpsSep = 1e-9;    // incidence tolerance (radians)

// A point of the unit sphere. Constructing from an arbitrary non-zero vector
// normalizes it.
class SpherePoint {
 public:
  SpherePoint() : v_(0.0, 0.0, 1.0) {}
  explicit SpherePoint(const Vec3& v);
  SpherePoint(double x, double y, double z) : SpherePoint(Vec3(x, y, z)) {}

  const Vec3& vec() const { return v_; }
  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }

  static SpherePoint from_lat_lon(double lat, double lon);

 private:
  Vec3 v_;
};

// Angle between two unit vectors, accurate near 0 and pi.
double angle_between(const Vec3& a, const Vec3& b);
bool same_point(const Vec3& a, const Vec3& b, double tol = kEpsSep);
bool antipodal(const Vec3& a, const Vec3& b, double tol = kEpsSep);

// Unit tangent at `from` pointing along the minor arc toward `to`.
Vec3 tangent_toward(const Vec3& from, const Vec3& to);

// Counter-clockwise angle (seen from outside the sphere) at point p from
// tangent t1 to tangent t2, in [0, 2pi).
double ccw_angle(const Vec3& p, const Vec3& t1, const Vec3& t2);

// Sign of det[a, b, c]: positive when c lies left of the directed arc a->b.
double orient(const Vec3& a, const Vec3& b, const Vec3& c);

struct GeodesicSegment {
  SpherePoint a;
  SpherePoint b;

  bool valid() const;
  // Unit normal of the carrying great circle; the left side is where n.x > 0.
  Vec3 normal() const;
  // Point at fraction s of the arc length.
  Vec3 at(double s) const;
  GeodesicSegment reversed() const { return {b, a}; }
};

// Throws DegenerateSegment when the endpoints coincide or are antipodal.
void require_valid(const GeodesicSegment& seg);

double geodesic_length(const GeodesicSegment& seg);

// Distance from p to the closed segment.
double distance_to_segment(const Vec3& p, const GeodesicSegment& seg);

// Arc parameter in [0,1] of p projected onto the segment if p lies on it
// within `tol`; nullopt otherwise.
std::optional<double> locate_on_segment(const Vec3& p, const GeodesicSegment& seg,
                                        double tol = kEpsSep);

struct SegmentIntersection {
  std::vector<SpherePoint> points;
  std::optional<GeodesicSegment> overlap;  // oriented along the first segment
  bool empty() const { return points.empty() && !overlap; }
};

SegmentIntersection segment_intersection(const GeodesicSegment& s1, const GeodesicSegment& s2);

// Region-on-the-left area of a closed simple geodesic polygon.
double spherical_polygon_area(const std::vector<GeodesicSegment>& boundary);

// Area enclosed on the left of a closed vertex walk. No simplicity check, so it
// also handles face walks that run along a slit in both directions.
double walk_area(const std::vector<Vec3>& walk);

class Rotation {
 public:
  Rotation() : m_(Mat3::Identity()) {}
  explicit Rotation(const Mat3& m);

  static Rotation identity() { return Rotation(); }
  static Rotation about_axis(const Vec3& axis, double angle);

  const Mat3& matrix() const { return m_; }
  Vec3 apply(const Vec3& v) const { return m_ * v; }
  Rotation inverse() const { return Rotation(m_.transpose(), true); }
  Rotation then(const Rotation& next) const { return Rotation(next.m_ * m_, true); }
  bool is_identity(double tol = kEpsUnit) const;

 private:
  Rotation(const Mat3& m, bool) : m_(m) {}
  Mat3 m_;
};

SpherePoint rotate(const Rotation& r, const SpherePoint& p);
GeodesicSegment rotate(const Rotation& r, const GeodesicSegment& s);

// Stereographic projection from `pole` onto the plane tangent at -pole.
std::complex<double> stereographic(const Vec3& p, const Vec3& pole);

struct ContactResult {
  Rotation rotation;      // phi with phi(contact point) = target
  int segment = -1;       // index of the touched segment
  double parameter = 0;   // arc fraction of the contact point on that segment
  double angle = 0;       // t*
  Vec3 axis;              // axis actually used (after any jitter)
  Vec3 contact;           // preimage of the target on the curve
  int jitters = 0;
};

struct ContactOptions {
  std::uint64_t seed = 0x5eed;
  double jitter = 1e-6;         // axis perturbation per retry (radians)
  int max_jitters = 64;
  double vertex_margin = 1e-8;  // contact must stay this far from segment ends
};

// Angle t > 0 at which Rot(axis, t)(x) first meets the segment, if any.
std::optional<double> contact_angle(const GeodesicSegment& seg, const Vec3& x, const Vec3& axis);

// Smallest t* > 0 with Rot(axis, t*)(target) on the curve; the returned
// rotation is Rot(axis, -t*). The axis is jittered until the contact lies in
// the interior of exactly one segment.
ContactResult first_contact_rotation(const std::vector<GeodesicSegment>& curve,
                                     const SpherePoint& target, const Vec3& axis,
                                     const ContactOptions& options = {});

// Same for several targets moving rigidly together; `target_index` reports
// which one touches first. Ties between targets also trigger jitter.
struct MultiContactResult {
  ContactResult contact;
  int target_index = -1;
};
MultiContactResult first_contact_rotation(const std::vector<GeodesicSegment>& curve,
                                          const std::vector<Vec3>& targets, const Vec3& axis,
                                          const ContactOptions& options = {});

}  // namespace sphcov
