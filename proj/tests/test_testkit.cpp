#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include "doctest.h"
#include "sphcov/error.hpp"
#include "sphcov/testkit.hpp"

using namespace sphcov;
namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(SPHCOV_CLI) + " " + args + " >/dev/null 2>&1";
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / "sphcov_testkit";
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("SurfaceFile round trip") {
  DiskParams p;
  p.max_faces = 40;
  p.branch_budget = 3;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    SurfaceFile f{generate_disk_covering(seed, p).surface, {}, {}};
    f.metadata["seed"] = seed;
    const std::string text = serialize(f);
    const SurfaceFile g = parse_surface(text);
    REQUIRE(g.surface.num_copies() == f.surface.num_copies());
    CHECK(g.surface.copies() == f.surface.copies());
    CHECK(g.surface.partners() == f.surface.partners());
    CHECK(g.surface.base().positions() == f.surface.base().positions());
    CHECK(g.surface.base().curve_edge_list() == f.surface.base().curve_edge_list());
    CHECK(g.metadata == f.metadata);
    CHECK(serialize(g) == text);
  }
  for (const char* name : {"F1", "F2", "F3", "F4", "F5", "F6"}) {
    const SurfaceFile f{fixture(name), {}, {}};
    CHECK(isomorphic(parse_surface(serialize(f)).surface, f.surface));
  }
}

TEST_CASE("malformed files") {
  const std::string good = serialize({fixture("F1"), {}, {}});
  CHECK_THROWS_AS(parse_surface("{"), Error);
  CHECK_THROWS_AS(parse_surface("{}"), Error);
  nlohmann::json j = nlohmann::json::parse(good);
  j["version"] = 99;
  CHECK_THROWS_AS(surface_from_json(j), Error);
  j = nlohmann::json::parse(good);
  j["base"]["vertices"][0][1] = "0.5x";
  CHECK_THROWS_AS(surface_from_json(j), Error);
  j = nlohmann::json::parse(good);
  j["pairing"][0] = j["pairing"][1];
  try {
    surface_from_json(j);
    FAIL("broken involution accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidSurface);
  }
}

TEST_CASE("generator determinism and budgets") {
  DiskParams p;
  p.max_faces = 40;
  p.branch_budget = 3;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const SurfaceComplex a = generate_disk_covering(seed, p).surface;
    const SurfaceComplex b = generate_disk_covering(seed, p).surface;
    CHECK(serialize({a, {}, {}}) == serialize({b, {}, {}}));
  }
  p.branch_budget = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const FunctionalReport r = functionals(generate_disk_covering(seed, p).surface);
    CHECK(r.branches.empty());
  }
  DiskParams bad;
  bad.max_sheets = 9;
  CHECK_THROWS_AS(generate_disk_covering(1, bad), Error);
}

TEST_CASE("generated disks validate") {
  DiskParams p;
  p.max_faces = 80;
  p.branch_budget = 3;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    const GeneratedDisk g = generate_disk_covering(seed, p);
    const Diagnostics dg = validate(g.surface);
    CAPTURE(seed);
    CHECK(dg.ok);
    CHECK(dg.kind == TopologyKind::Disk);
    const OracleReport o = oracle_verify(g.surface);
    CHECK(o.ok);
    CHECK(o.chi == 1);
  }
}

TEST_CASE("oracle flags a corrupted pairing on the right arc") {
  const SurfaceComplex f4 = fixture("F4");
  CHECK(oracle_verify(f4).ok);
  // Re-pair two interior sides over different darts, bypassing pair_sides.
  std::vector<int> partner = f4.partners();
  int a = -1, b = -1;
  for (int sd = 0; sd < f4.num_sides() && b < 0; ++sd) {
    if (f4.is_free(sd)) continue;
    if (a < 0) a = sd;
    else if (f4.side_dart(sd) >> 1 != f4.side_dart(a) >> 1 && sd != f4.partner(a)) b = sd;
  }
  REQUIRE(b >= 0);
  const int pa = partner[a], pb = partner[b];
  partner[a] = pb;
  partner[pb] = a;
  partner[b] = pa;
  partner[pa] = b;
  const SurfaceComplex bad(f4.base_ptr(), f4.copies(), partner);
  const OracleReport o = oracle_verify(bad);
  CHECK_FALSE(o.ok);
  const int ea = f4.side_dart(a) >> 1, eb = f4.side_dart(b) >> 1;
  bool named = false;
  for (int e : o.witness_edges) named = named || e == ea || e == eb;
  CHECK(named);
  bool message = false;
  for (const auto& m : o.mismatches) message = message || m.rfind("edge relation fails on arc", 0) == 0;
  CHECK(message);
}

TEST_CASE("closed cyclic covers") {
  auto base = hemisphere_base();
  for (int d = 1; d <= 4; ++d) {
    const SurfaceComplex s = generate_closed_cyclic_cover(base, d, base->special_vertex(0), base->special_vertex(1));
    const OracleReport o = oracle_verify(s);
    CAPTURE(d);
    CHECK(o.ok);
    CHECK(o.closed);
    CHECK(o.chi == 2);
    CHECK(o.closed_identity_ok);
    CHECK(std::abs(o.A - 4 * std::numbers::pi * d) <= 1e-9);
  }
  CHECK_THROWS_AS(generate_closed_cyclic_cover(base, 0, 4, 5), Error);
  CHECK_THROWS_AS(generate_closed_cyclic_cover(base, 2, 4, 4), Error);
}

TEST_CASE("command line exit codes") {
  const fs::path dir = scratch_dir();
  const std::string f4 = (dir / "f4.json").string();
  const std::string out = (dir / "f4.out.json").string();
  const std::string trace = (dir / "f4.trace.json").string();
  const std::string junk = (dir / "junk.json").string();
  std::ofstream(junk) << "{\"format\": \"sphcov.surface\"";

  CHECK(run("gen --kind fixture --name F4 -o " + f4) == 0);
  CHECK(run("inspect " + f4) == 0);
  CHECK(run("--trace-out " + trace + " normalize " + f4 + " -o " + out) == 0);
  CHECK(run("verify " + f4 + " " + out + " --rotation-from " + trace) == 0);
  CHECK(run("--format json verify " + out) == 0);
  CHECK(run("net " + f4) == 0);
  CHECK(run("inspect " + junk) == 1);
  CHECK(run("normalize " + junk + " -o " + out) == 1);
  CHECK(run("gen --kind fixture --name F3 -o " + (dir / "f3.json").string()) == 0);
  CHECK(run("normalize " + (dir / "f3.json").string() + " -o " + out) == 1);
  CHECK(run("") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("surgery " + f4 + " --op cut_to_boundary -o " + out) == 2);
}
