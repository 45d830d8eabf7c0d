#include "sphcov/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "sphcov/error.hpp"

namespace sphcov {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Orthonormal frame (e1, e2) of the great circle through a with normal n.
double circle_param(const Vec3& p, const Vec3& e1, const Vec3& e2) {
  return std::atan2(p.dot(e2), p.dot(e1));
}

}  // namespace

SpherePoint::SpherePoint(const Vec3& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw Error(ErrorCode::DegenerateSegment, "cannot normalize a zero or non-finite vector");
  }
  // Vectors already unit to rounding are kept bit-exact so that files round trip.
  v_ = std::abs(n - 1.0) <= 4 * std::numeric_limits<double>::epsilon() ? v : Vec3(v / n);
}

SpherePoint SpherePoint::from_lat_lon(double lat, double lon) {
  return SpherePoint(std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat));
}

double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

bool same_point(const Vec3& a, const Vec3& b, double tol) { return angle_between(a, b) <= tol; }

bool antipodal(const Vec3& a, const Vec3& b, double tol) { return angle_between(a, b) >= kPi - tol; }

Vec3 tangent_toward(const Vec3& from, const Vec3& to) {
  Vec3 t = to - from.dot(to) * from;
  const double n = t.norm();
  if (n < 1e-300) return Vec3::Zero();
  return t / n;
}

double ccw_angle(const Vec3& p, const Vec3& t1, const Vec3& t2) {
  double a = std::atan2(p.dot(t1.cross(t2)), t1.dot(t2));
  if (a < 0) a += kTwoPi;
  if (a >= kTwoPi) a -= kTwoPi;
  return a;
}

double orient(const Vec3& a, const Vec3& b, const Vec3& c) { return a.cross(b).dot(c); }

bool GeodesicSegment::valid() const {
  const double ang = angle_between(a.vec(), b.vec());
  return ang > kEpsSep && ang < kPi - kEpsSep;
}

Vec3 GeodesicSegment::normal() const { return a.vec().cross(b.vec()).normalized(); }

Vec3 GeodesicSegment::at(double s) const {
  const double len = angle_between(a.vec(), b.vec());
  const Vec3 e2 = normal().cross(a.vec());
  return (std::cos(s * len) * a.vec() + std::sin(s * len) * e2).normalized();
}

void require_valid(const GeodesicSegment& seg) {
  const double ang = angle_between(seg.a.vec(), seg.b.vec());
  if (ang <= kEpsSep) throw Error(ErrorCode::DegenerateSegment, "segment endpoints coincide");
  if (ang >= kPi - kEpsSep) throw Error(ErrorCode::DegenerateSegment, "segment endpoints are antipodal");
}

double geodesic_length(const GeodesicSegment& seg) {
  require_valid(seg);
  return angle_between(seg.a.vec(), seg.b.vec());
}

std::optional<double> locate_on_segment(const Vec3& p, const GeodesicSegment& seg, double tol) {
  const Vec3 n = seg.normal();
  if (std::abs(n.dot(p)) > std::sin(tol)) return std::nullopt;
  const Vec3& e1 = seg.a.vec();
  const Vec3 e2 = n.cross(e1);
  const double len = angle_between(seg.a.vec(), seg.b.vec());
  const double th = circle_param(p, e1, e2);
  if (th < -tol || th > len + tol) return std::nullopt;
  return std::clamp(th / len, 0.0, 1.0);
}

double distance_to_segment(const Vec3& p, const GeodesicSegment& seg) {
  const Vec3 n = seg.normal();
  const Vec3 q = p - n.dot(p) * n;
  if (q.norm() > 1e-15) {
    const Vec3 qn = q.normalized();
    const Vec3& e1 = seg.a.vec();
    const double th = circle_param(qn, e1, n.cross(e1));
    if (th >= 0 && th <= angle_between(seg.a.vec(), seg.b.vec())) return angle_between(p, qn);
  }
  return std::min(angle_between(p, seg.a.vec()), angle_between(p, seg.b.vec()));
}

SegmentIntersection segment_intersection(const GeodesicSegment& s1, const GeodesicSegment& s2) {
  require_valid(s1);
  require_valid(s2);
  SegmentIntersection out;
  const Vec3 n1 = s1.normal();
  const Vec3 n2 = s2.normal();
  const Vec3 c = n1.cross(n2);

  if (c.norm() < kEpsSep) {
    const Vec3& e1 = s1.a.vec();
    const Vec3 e2 = n1.cross(e1);
    const double len1 = angle_between(s1.a.vec(), s1.b.vec());
    const double len2 = angle_between(s2.a.vec(), s2.b.vec());
    const double ta = circle_param(s2.a.vec(), e1, e2);
    const bool forward = n1.dot(n2) > 0;
    const double lo0 = forward ? ta : ta - len2;
    const double hi0 = forward ? ta + len2 : ta;
    for (double shift : {-kTwoPi, 0.0, kTwoPi}) {
      const double lo = std::max(lo0 + shift, 0.0);
      const double hi = std::min(hi0 + shift, len1);
      if (hi < lo - kEpsSep) continue;
      if (hi - lo > kEpsSep) {
        out.overlap = GeodesicSegment{SpherePoint(s1.at(lo / len1)), SpherePoint(s1.at(hi / len1))};
      } else {
        out.points.emplace_back(s1.at(std::clamp(0.5 * (lo + hi), 0.0, len1) / len1));
      }
      break;
    }
    return out;
  }

  const Vec3 d = c.normalized();
  for (const Vec3& p : {d, Vec3(-d)}) {
    if (locate_on_segment(p, s1) && locate_on_segment(p, s2)) out.points.emplace_back(p);
  }
  return out;
}

double walk_area(const std::vector<Vec3>& walk) {
  const std::size_t k = walk.size();
  double interior = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const Vec3& v = walk[i];
    const Vec3& prev = walk[(i + k - 1) % k];
    const Vec3& next = walk[(i + 1) % k];
    double a = ccw_angle(v, tangent_toward(v, next), tangent_toward(v, prev));
    if (a < 1e-14) a = kTwoPi;  // tip of a slit
    interior += a;
  }
  return interior - (static_cast<double>(k) - 2.0) * kPi;
}

double spherical_polygon_area(const std::vector<GeodesicSegment>& boundary) {
  const std::size_t k = boundary.size();
  if (k < 3) throw Error(ErrorCode::NotClosed, "polygon needs at least three minor arcs");
  for (std::size_t i = 0; i < k; ++i) {
    require_valid(boundary[i]);
    if (!same_point(boundary[i].b.vec(), boundary[(i + 1) % k].a.vec())) {
      throw Error(ErrorCode::NotClosed, "segment " + std::to_string(i) + " does not end where the next begins");
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const SegmentIntersection x = segment_intersection(boundary[i], boundary[j]);
      if (x.empty()) continue;
      const bool adjacent = (j == i + 1) || (i == 0 && j == k - 1);
      if (!adjacent || x.overlap || x.points.size() > 1) {
        throw Error(ErrorCode::SelfIntersecting,
                    "segments " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
      }
      const Vec3 shared = (j == i + 1) ? boundary[i].b.vec() : boundary[i].a.vec();
      if (!same_point(x.points.front().vec(), shared)) {
        throw Error(ErrorCode::SelfIntersecting,
                    "segments " + std::to_string(i) + " and " + std::to_string(j) + " cross");
      }
    }
  }
  std::vector<Vec3> walk;
  walk.reserve(k);
  for (const auto& s : boundary) walk.push_back(s.a.vec());
  return walk_area(walk);
}

Rotation::Rotation(const Mat3& m) : m_(m) {
  if ((m * m.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-9 || m.determinant() < 0) {
    throw Error(ErrorCode::PreconditionViolated, "matrix is not a proper rotation");
  }
}

Rotation Rotation::about_axis(const Vec3& axis, double angle) {
  return Rotation(Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix(), true);
}

bool Rotation::is_identity(double tol) const {
  return (m_ - Mat3::Identity()).cwiseAbs().maxCoeff() <= tol;
}

SpherePoint rotate(const Rotation& r, const SpherePoint& p) { return SpherePoint(r.apply(p.vec())); }

GeodesicSegment rotate(const Rotation& r, const GeodesicSegment& s) {
  return {rotate(r, s.a), rotate(r, s.b)};
}

std::complex<double> stereographic(const Vec3& p, const Vec3& pole) {
  const Vec3 n = pole.normalized();
  Vec3 helper = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 e1 = n.cross(helper).normalized();
  const Vec3 e2 = n.cross(e1);
  const double den = 1.0 - p.dot(n);
  return {p.dot(e1) / den, p.dot(e2) / den};
}

std::optional<double> contact_angle(const GeodesicSegment& seg, const Vec3& x, const Vec3& axis) {
  const Vec3 n = axis.normalized();
  const Vec3 m = seg.normal();
  const double nx = n.dot(x);
  const double mn = m.dot(n);
  const double A = m.dot(x) - nx * mn;
  const double B = m.dot(n.cross(x));
  const double C = nx * mn;
  const double r = std::hypot(A, B);
  if (r < 1e-15) return std::nullopt;
  const double c = -C / r;
  if (std::abs(c) > 1.0 + 1e-12) return std::nullopt;
  const double phi = std::atan2(B, A);
  const double delta = std::acos(std::clamp(c, -1.0, 1.0));
  std::optional<double> best;
  for (double t : {phi + delta, phi - delta}) {
    t = std::fmod(t, kTwoPi);
    if (t < 0) t += kTwoPi;
    if (t < 1e-12) t += kTwoPi;
    const Vec3 p = Rotation::about_axis(n, t).apply(x);
    if (!locate_on_segment(p, seg, 1e-11)) continue;
    if (!best || t < *best) best = t;
  }
  return best;
}

namespace {

struct RawContact {
  double t = 0;
  int segment = -1;
  int target = -1;
  bool degenerate = false;
};

RawContact scan_contacts(const std::vector<GeodesicSegment>& curve, const std::vector<Vec3>& targets,
                         const Vec3& axis, double margin) {
  RawContact best;
  std::vector<RawContact> all;
  for (std::size_t k = 0; k < targets.size(); ++k) {
    for (std::size_t i = 0; i < curve.size(); ++i) {
      if (auto t = contact_angle(curve[i], targets[k], axis)) {
        all.push_back({*t, static_cast<int>(i), static_cast<int>(k), false});
      }
    }
  }
  if (all.empty()) return best;
  std::sort(all.begin(), all.end(), [](const RawContact& a, const RawContact& b) { return a.t < b.t; });
  best = all.front();
  if (all.size() > 1 && all[1].t - best.t < 1e-9) best.degenerate = true;
  const GeodesicSegment& seg = curve[best.segment];
  const Vec3 p = Rotation::about_axis(axis, best.t).apply(targets[best.target]);
  const double len = angle_between(seg.a.vec(), seg.b.vec());
  const double s = locate_on_segment(p, seg, 1e-10).value_or(0.0);
  if (s * len < margin || (1 - s) * len < margin) best.degenerate = true;
  return best;
}

}  // namespace

MultiContactResult first_contact_rotation(const std::vector<GeodesicSegment>& curve,
                                          const std::vector<Vec3>& targets, const Vec3& axis,
                                          const ContactOptions& options) {
  for (const auto& s : curve) require_valid(s);
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss;
  Vec3 ax = axis.normalized();
  for (int attempt = 0; attempt <= options.max_jitters; ++attempt) {
    const RawContact c = scan_contacts(curve, targets, ax, options.vertex_margin);
    if (c.segment < 0) {
      throw Error(ErrorCode::NoContact, "rotation family never meets the curve");
    }
    if (!c.degenerate) {
      MultiContactResult out;
      out.target_index = c.target;
      ContactResult& r = out.contact;
      r.angle = c.t;
      r.segment = c.segment;
      r.axis = ax;
      r.jitters = attempt;
      r.contact = Rotation::about_axis(ax, c.t).apply(targets[c.target]);
      r.parameter = locate_on_segment(r.contact, curve[c.segment], 1e-10).value_or(0.5);
      r.rotation = Rotation::about_axis(ax, -c.t);
      return out;
    }
    Vec3 u(gauss(rng), gauss(rng), gauss(rng));
    u -= u.dot(ax) * ax;
    if (u.norm() < 1e-12) continue;
    ax = Rotation::about_axis(u, options.jitter).apply(ax).normalized();
  }
  throw Error(ErrorCode::NoContact, "contact stayed degenerate after axis jitter");
}

ContactResult first_contact_rotation(const std::vector<GeodesicSegment>& curve, const SpherePoint& target,
                                     const Vec3& axis, const ContactOptions& options) {
  return first_contact_rotation(curve, std::vector<Vec3>{target.vec()}, axis, options).contact;
}

}  // namespace sphcov
