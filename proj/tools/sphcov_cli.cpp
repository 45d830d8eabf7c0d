// sphcov: command line front end for covering surfaces over the sphere.
//
// Exit status: 0 when every check passes, 1 on validation or parse failure,
// 2 on usage errors.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sphcov/error.hpp"
#include "sphcov/normalize.hpp"
#include "sphcov/surgery.hpp"
#include "sphcov/testkit.hpp"

using namespace sphcov;
using nlohmann::json;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  double tol = 1e-9;
  std::string trace_out;
  std::string format = "text";
};

bool as_json(const Globals& g) { return g.format == "json"; }

void print_report(const FunctionalReport& r, const Diagnostics& dg, bool json_out) {
  if (json_out) {
    json j = to_json(r);
    j["valid"] = dg.ok;
    j["diagnostic"] = dg.message;
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::cout << "kind        " << to_string(r.kind) << "\n"
            << "valid       " << (dg.ok ? "yes" : "no: " + dg.message) << "\n"
            << "q           " << r.q << "\n"
            << "A           " << r.A << "\n"
            << "L           " << r.L << "\n"
            << "R           " << r.R << "\n"
            << "H           " << (r.H ? std::to_string(*r.H) : std::string("undefined")) << "\n"
            << "nbar        ";
  for (int n : r.nbar) std::cout << n << " ";
  std::cout << "\n"
            << "sum         " << r.sum << "\n"
            << "B(E_q)      " << r.B_special << "\n"
            << "B(E_q^c)    " << r.B_nonspecial << "\n"
            << "branches    " << r.branches.size() << "\n"
            << "folds       " << r.folds.size() << "\n"
            << "segments    " << r.boundary_segments << "\n";
  if (r.degree) std::cout << "degree      " << *r.degree << "\n";
}

int cmd_gen(const Globals& g, const std::string& kind, const std::string& name, const DiskParams& dp, int degree,
            const std::string& out) {
  SurfaceFile f;
  f.metadata["seed"] = g.seed;
  f.metadata["tol"] = g.tol;
  f.metadata["kind"] = kind;
  if (kind == "disk") {
    const GeneratedDisk d = generate_disk_covering(g.seed, dp);
    f.surface = d.surface;
    f.metadata["jitter"] = 0.02;
    f.metadata["params"] = {{"max_sheets", dp.max_sheets},
                            {"max_faces", dp.max_faces},
                            {"q", dp.q},
                            {"branch_budget", dp.branch_budget}};
  } else if (kind == "closed") {
    auto base = make_icosphere_base(g.seed, dp.q);
    f.surface = generate_closed_cyclic_cover(base, degree, base->special_vertex(0), base->special_vertex(1));
    f.metadata["jitter"] = 0.02;
    f.metadata["degree"] = degree;
  } else {
    f.surface = fixture(name);
    f.metadata["fixture"] = name;
  }
  write_surface_file(out, f);
  return 0;
}

int cmd_inspect(const Globals& g, const std::string& in) {
  const SurfaceFile f = read_surface_file(in);
  const Diagnostics dg = validate(f.surface);
  if (!dg.ok) {
    std::cerr << "invalid surface: " << dg.message << "\n";
    return 1;
  }
  print_report(functionals(f.surface), dg, as_json(g));
  return 0;
}

int cmd_surgery(const Globals& g, const std::string& in, const std::string& op, const std::vector<int>& path,
                const std::vector<int>& alpha, const std::vector<int>& beta, const std::string& out) {
  SurfaceFile f = read_surface_file(in);
  SurgeryDelta delta;
  if (op == "cut_to_boundary") f.surface = cut_to_boundary(f.surface, SurfacePath{path}, &delta);
  else if (op == "cut_interior") f.surface = cut_interior(f.surface, SurfacePath{path}, &delta);
  else if (op == "sew") f.surface = sew(f.surface, alpha, beta, &delta);
  else f.surface = sew_annulus(f.surface, alpha, beta, &delta);
  f.metadata["last_surgery"] = op;
  write_surface_file(out, f);
  if (as_json(g)) {
    std::cout << json{{"op", op}, {"dL", delta.dL}, {"dA", delta.dA}, {"dnbar", delta.dnbar}}.dump(2) << "\n";
  } else {
    std::cout << op << ": dL = " << delta.dL << ", dA = " << delta.dA << ", dnbar =";
    for (int x : delta.dnbar) std::cout << " " << x;
    std::cout << "\n";
  }
  return 0;
}

void write_trace(const std::string& path, const PipelineTrace& t) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  out << trace_to_json(t).dump(1) << "\n";
}

int cmd_normalize(const Globals& g, const std::string& in, const std::string& out) {
  const SurfaceFile f = read_surface_file(in);
  PipelineTrace partial;
  NormalizeResult res;
  NormalizeOptions opt;
  opt.seed = g.seed;
  try {
    res = normalize(f.surface, opt, &partial);
  } catch (const Error&) {
    write_trace(g.trace_out, partial);
    throw;
  }
  SurfaceFile o{res.surface, {}, f.metadata};
  o.metadata["normalized_from"] = in;
  o.metadata["rotation"] = to_json(res.trace.rotation);
  o.metadata["rotation_jitter"] = opt.jitter;
  o.metadata["rotation_seed"] = opt.seed;
  write_surface_file(out, o);
  write_trace(g.trace_out, res.trace);
  bool ok = is_normalized(res.surface);
  for (const auto& st : res.trace.steps) ok = ok && st.certificate.ok();
  if (as_json(g)) {
    json j;
    j["ok"] = ok;
    j["iterations"] = res.trace.iterations;
    j["iteration_bound"] = res.trace.iteration_bound;
    json labels = json::array();
    for (const auto& st : res.trace.steps) labels.push_back(st.record.label);
    j["cases"] = labels;
    j["output"] = to_json(functionals(res.surface));
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "steps " << res.trace.steps.size() << " (bound " << res.trace.iteration_bound << ")\n";
    for (const auto& st : res.trace.steps) std::cout << "  " << st.record.op << ": " << st.record.label << "\n";
    std::cout << (ok ? "normalized, certificate ok" : "certificate FAILED") << "\n";
  }
  return ok ? 0 : 1;
}

int cmd_verify(const Globals& g, const std::string& in, const std::string& other, const std::string& rotation_from) {
  const SurfaceFile f = read_surface_file(in);
  json j;
  bool ok = true;
  const Diagnostics dg = validate(f.surface);
  if (!dg.ok) {
    std::cerr << "invalid surface: " << dg.message << "\n";
    return 1;
  }
  auto oracle = [&](const SurfaceFile& s, const char* key) {
    const OracleReport r = oracle_verify(s.surface, g.tol);
    ok = ok && r.ok;
    j[key] = {{"ok", r.ok}, {"mismatches", r.mismatches}, {"witness_edges", r.witness_edges}};
    if (!as_json(g)) {
      std::cout << key << ": oracle " << (r.ok ? "ok" : "MISMATCH") << "\n";
      for (const auto& m : r.mismatches) std::cout << "  " << m << "\n";
    }
  };
  oracle(f, "input");
  if (!other.empty()) {
    const SurfaceFile o = read_surface_file(other);
    oracle(o, "output");
    Rotation rot;
    if (!rotation_from.empty()) {
      std::ifstream tin(rotation_from);
      if (!tin) throw Error(ErrorCode::ParseError, "cannot open " + rotation_from);
      json t;
      try {
        t = json::parse(tin);
      } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
      }
      if (t.is_array() && !t.empty()) rot = rotation_from_json(t.back().at("rotation_so_far"));
      else if (t.is_object() && t.contains("metadata") && t["metadata"].contains("rotation"))
        rot = rotation_from_json(t["metadata"]["rotation"]);
    } else if (o.metadata.contains("rotation")) {
      rot = rotation_from_json(o.metadata["rotation"]);
    }
    const BetterReport b = is_better_than(o.surface, f.surface, rot);
    ok = ok && b.ok();
    j["certificate"] = to_json(b);
    if (!as_json(g))
      std::cout << "certificate: " << (b.ok() ? "ok" : "FAILED") << " (H " << b.h_ok << ", sum " << b.sum_ok
                << ", nbar " << b.nbar_ok << ", subarc " << b.subarc_ok << ")" << (b.detail.empty() ? "" : " ")
                << b.detail << "\n";
  }
  j["ok"] = ok;
  if (as_json(g)) std::cout << j.dump(2) << "\n";
  return ok ? 0 : 1;
}

int cmd_net(const std::string& in, const std::string& out) {
  const SurfaceFile f = read_surface_file(in);
  const SurfaceComplex& s = f.surface;
  std::ostringstream dot;
  dot << "graph gluing {\n  node [shape=box, fontsize=10];\n";
  for (int c = 0; c < s.num_copies(); ++c) {
    const bool bd = [&] {
      for (int k = 0; k < s.copy_size(c); ++k)
        if (s.partner(s.side_id(c, k)) < 0) return true;
      return false;
    }();
    dot << "  c" << c << " [label=\"f" << s.copy(c).base_face << "/" << s.copy(c).sheet << "\""
        << (bd ? ", style=filled, fillcolor=lightgrey" : "") << "];\n";
  }
  for (int sd = 0; sd < s.num_sides(); ++sd) {
    const int p = s.partner(sd);
    if (p < sd) continue;
    dot << "  c" << s.side_copy(sd) << " -- c" << s.side_copy(p) << " [label=\"e" << (s.side_dart(sd) >> 1)
        << "\"];\n";
  }
  dot << "}\n";
  if (out.empty() || out == "-") {
    std::cout << dot.str();
  } else {
    std::ofstream o(out);
    if (!o) throw Error(ErrorCode::ParseError, "cannot write " + out);
    o << dot.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Branched covering surfaces over the sphere"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--tol", g.tol, "Tolerance for area and length comparisons");
  app.add_option("--trace-out", g.trace_out, "Write the normalization trace here");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "json"}));

  std::string in, out, other, rotation_from, kind = "disk", name = "F4", op;
  DiskParams dp;
  int degree = 2;
  std::vector<int> path, alpha, beta;

  auto* gen = app.add_subcommand("gen", "Write a generated or built-in surface file");
  gen->add_option("--kind", kind)->check(CLI::IsMember({"disk", "closed", "fixture"}));
  gen->add_option("--name", name, "Fixture name F1..F6")->check(CLI::IsMember({"F1", "F2", "F3", "F4", "F5", "F6"}));
  gen->add_option("--max-sheets", dp.max_sheets)->check(CLI::Range(1, 8));
  gen->add_option("--max-faces", dp.max_faces)->check(CLI::PositiveNumber);
  gen->add_option("--q", dp.q)->check(CLI::Range(3, 42));
  gen->add_option("--branch-budget", dp.branch_budget)->check(CLI::NonNegativeNumber);
  gen->add_option("--degree", degree, "Closed cover degree")->check(CLI::Range(1, 8));
  gen->add_option("-o,--out", out)->required();

  auto* inspect = app.add_subcommand("inspect", "Print the functional report");
  inspect->add_option("file", in)->required();

  auto* surgery = app.add_subcommand("surgery", "Apply one cut or sew operation");
  surgery->add_option("file", in)->required();
  surgery->add_option("--op", op)
      ->required()
      ->check(CLI::IsMember({"cut_to_boundary", "cut_interior", "sew", "sew_annulus"}));
  surgery->add_option("--path", path, "Side ids of the cut path")->delimiter(',');
  surgery->add_option("--alpha", alpha, "Free sides of the first arc")->delimiter(',');
  surgery->add_option("--beta", beta, "Free sides of the second arc")->delimiter(',');
  surgery->add_option("-o,--out", out)->required();

  auto* norm = app.add_subcommand("normalize", "Run the normalization pipeline");
  norm->add_option("file", in)->required();
  norm->add_option("-o,--out", out)->required();

  auto* verify = app.add_subcommand("verify", "Oracle check, and a certificate against a second file");
  verify->add_option("file", in)->required();
  verify->add_option("other", other, "Normalized output to certify against the input");
  verify->add_option("--rotation-from", rotation_from, "Trace or surface file holding the rotation");

  auto* net = app.add_subcommand("net", "Emit the face-copy gluing graph as DOT");
  net->add_option("file", in)->required();
  net->add_option("-o,--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*gen) return cmd_gen(g, kind, name, dp, degree, out);
    if (*inspect) return cmd_inspect(g, in);
    if (*surgery) {
      if (op.rfind("cut", 0) == 0 && path.empty()) {
        std::cerr << "--path is required for " << op << "\n";
        return 2;
      }
      if (op.rfind("sew", 0) == 0 && (alpha.empty() || beta.empty())) {
        std::cerr << "--alpha and --beta are required for " << op << "\n";
        return 2;
      }
      return cmd_surgery(g, in, op, path, alpha, beta, out);
    }
    if (*norm) return cmd_normalize(g, in, out);
    if (*verify) return cmd_verify(g, in, other, rotation_from);
    if (*net) return cmd_net(in, out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
