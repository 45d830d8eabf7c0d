#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sphcov/error.hpp"
#include "sphcov/testkit.hpp"

namespace sphcov {

using nlohmann::json;

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) throw Error(ErrorCode::ParseError, "coordinate must be a decimal string");
  const std::string s = j.get<std::string>();
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw Error(ErrorCode::ParseError, "bad coordinate '" + s + "'");
  return x;
}

json point(const Vec3& p) { return json::array({fmt(p.x()), fmt(p.y()), fmt(p.z())}); }

Vec3 parse_point(const json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::ParseError, "point must have three coordinates");
  return Vec3(parse_double(j[0]), parse_double(j[1]), parse_double(j[2]));
}

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw Error(ErrorCode::ParseError, std::string("missing field '") + name + "'");
  return j.at(name);
}

}  // namespace

json to_json(const SurfaceFile& f) {
  const SurfaceComplex& s = f.surface;
  const BaseComplex& b = s.base();
  json j;
  j["format"] = "sphcov.surface";
  j["version"] = kSurfaceFileVersion;
  json special = json::array();
  for (const auto& p : b.special().points) special.push_back(point(p.vec()));
  j["special"] = special;
  json curve = json::array();
  for (const auto& p : f.curve) curve.push_back(point(p));
  j["curve"] = curve;
  json verts = json::array();
  for (const auto& p : b.positions()) verts.push_back(point(p));
  json faces = json::array();
  for (int fc = 0; fc < b.num_faces(); ++fc) faces.push_back(b.face_vertices(fc));
  json cedges = json::array();
  for (const auto& [u, v] : b.curve_edge_list()) cedges.push_back(json::array({u, v}));
  j["base"] = {{"vertices", verts}, {"faces", faces}, {"curve_edges", cedges}, {"special_vertex", b.special_vertices()}};
  json copies = json::array();
  for (const auto& c : s.copies()) copies.push_back(json::array({c.base_face, c.sheet}));
  j["copies"] = copies;
  j["pairing"] = s.partners();
  j["metadata"] = f.metadata;
  return j;
}

SurfaceFile surface_from_json(const json& j) {
  try {
    if (field(j, "format") != "sphcov.surface") throw Error(ErrorCode::ParseError, "unknown format tag");
    if (field(j, "version").get<int>() != kSurfaceFileVersion)
      throw Error(ErrorCode::ParseError, "unsupported SurfaceFile version");
    SpecialSet special;
    for (const auto& p : field(j, "special")) special.points.emplace_back(parse_point(p));
    const json& jb = field(j, "base");
    std::vector<Vec3> verts;
    for (const auto& p : field(jb, "vertices")) verts.push_back(parse_point(p));
    const auto cycles = field(jb, "faces").get<std::vector<std::vector<int>>>();
    for (const auto& cyc : cycles)
      for (int v : cyc)
        if (v < 0 || v >= static_cast<int>(verts.size())) throw Error(ErrorCode::ParseError, "face vertex out of range");
    std::vector<std::pair<int, int>> cedges;
    for (const auto& e : field(jb, "curve_edges")) cedges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
    auto sv = field(jb, "special_vertex").get<std::vector<int>>();
    if (sv.size() != special.points.size()) throw Error(ErrorCode::ParseError, "special_vertex size mismatch");
    auto base = std::make_shared<BaseComplex>(
        BaseComplex::from_cycles(std::move(verts), cycles, cedges, std::move(special), std::move(sv)));
    std::vector<FaceCopy> copies;
    for (const auto& c : field(j, "copies")) copies.push_back({c.at(0).get<int>(), c.at(1).get<int>()});
    auto pairing = field(j, "pairing").get<std::vector<int>>();
    SurfaceFile f{SurfaceComplex(base, std::move(copies), pairing), {}, json::object()};
    const SurfaceComplex& s = f.surface;
    for (int sd = 0; sd < s.num_sides(); ++sd) {
      const int p = pairing[sd];
      if (p < -1 || p >= s.num_sides() || (p >= 0 && pairing[p] != sd))
        throw Error(ErrorCode::InvalidSurface, "pairing is not an involution at side " + std::to_string(sd));
    }
    if (j.contains("curve"))
      for (const auto& p : j.at("curve")) f.curve.push_back(parse_point(p));
    if (j.contains("metadata")) f.metadata = j.at("metadata");
    return f;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

std::string serialize(const SurfaceFile& f) { return to_json(f).dump(1) + "\n"; }

SurfaceFile parse_surface(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  return surface_from_json(j);
}

SurfaceFile read_surface_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_surface(ss.str());
}

void write_surface_file(const std::string& path, const SurfaceFile& f) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  out << serialize(f);
}

json to_json(const FunctionalReport& r) {
  json j;
  j["kind"] = to_string(r.kind);
  j["q"] = r.q;
  j["A"] = r.A;
  j["L"] = r.L;
  j["nbar"] = r.nbar;
  j["nbar_total"] = r.nbar_total;
  j["B_special"] = r.B_special;
  j["B_nonspecial"] = r.B_nonspecial;
  j["R"] = r.R;
  j["H"] = r.H ? json(*r.H) : json(nullptr);
  j["sum"] = r.sum;
  j["components"] = r.components;
  j["degree"] = r.degree ? json(*r.degree) : json(nullptr);
  j["branch_points"] = r.branches.size();
  j["folded_points"] = r.folds.size();
  j["boundary_segments"] = r.boundary_segments;
  return j;
}

json to_json(const Rotation& r) {
  json rows = json::array();
  for (int i = 0; i < 3; ++i)
    rows.push_back(json::array({fmt(r.matrix()(i, 0)), fmt(r.matrix()(i, 1)), fmt(r.matrix()(i, 2))}));
  return rows;
}

Rotation rotation_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::ParseError, "rotation must be a 3x3 matrix");
  Mat3 m;
  for (int i = 0; i < 3; ++i) {
    const Vec3 row = parse_point(j[i]);
    m.row(i) = row.transpose();
  }
  return Rotation(m);
}

json to_json(const BetterReport& b) {
  return {{"ok", b.ok()}, {"h_ok", b.h_ok},           {"sum_ok", b.sum_ok},
          {"nbar_ok", b.nbar_ok}, {"subarc_ok", b.subarc_ok}, {"detail", b.detail}};
}

json trace_to_json(const PipelineTrace& t) {
  json arr = json::array();
  for (const auto& st : t.steps) {
    json j;
    j["op"] = st.record.op;
    j["case"] = st.record.label;
    j["split"] = st.record.split;
    if (st.record.op == "rotate") {
      j["rotation"] = to_json(st.record.rotation);
      j["pockets"] = st.record.pockets;
    }
    j["pre"] = to_json(st.record.pre);
    j["post"] = to_json(st.record.post);
    j["rotation_so_far"] = to_json(st.rotation_so_far);
    j["certificate"] = to_json(st.certificate);
    arr.push_back(std::move(j));
  }
  return arr;
}

}  // namespace sphcov
