#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "qmg/errors.hpp"
#include "qmg/io.hpp"

using namespace qmg;
using io::json;
namespace fs = std::filesystem;

namespace {

fs::path fixture(const std::string& name) { return fs::path(QMG_FIXTURE_DIR) / name; }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "qmg_io_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("triple fixtures round-trip") {
  for (const char* name : {"two_point_0p5.json", "two_point_1.json", "two_point_2.json", "path4.json", "m2_spin.json"}) {
    const json raw = io::read_json(fixture(name));
    const auto doc = io::triple_from_json(raw);
    CHECK(io::triple_to_json(doc) == raw);
    const fs::path out = scratch(name);
    io::save_triple(doc, out);
    CHECK(io::read_json(out) == raw);
    CHECK(doc.build().dim() == doc.dim);
  }
}

TEST_CASE("torus fixtures round-trip") {
  for (const char* name : {"torus_m3.json", "torus_m5.json"}) {
    const json raw = io::read_json(fixture(name));
    const auto doc = io::torus_from_json(raw);
    CHECK(io::torus_to_json(doc) == raw);
    CHECK(doc.elements.size() == 3);
    CHECK(doc.spec.perturbation_l1() < 0.25);
  }
}

TEST_CASE("malformed inputs name the offending field") {
  json raw = io::read_json(fixture("two_point_1.json"));
  json ragged = raw;
  ragged["dirac"][1] = json::array({json::array({1.0, 0.0})});
  try {
    io::triple_from_json(ragged);
    FAIL("ragged matrix accepted");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("/dirac/1") != std::string::npos);
    CHECK(std::string(e.what()).find("ragged") != std::string::npos);
  }

  json old = raw;
  old["schema"] = "qmg.triple/0";
  try {
    io::triple_from_json(old);
    FAIL("old schema accepted");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("migration") != std::string::npos);
  }

  json missing = raw;
  missing.erase("dirac");
  CHECK_THROWS_AS(io::triple_from_json(missing), SchemaError);
  json bad_entry = raw;
  bad_entry["dirac"][0][1] = "x";
  CHECK_THROWS_AS(io::triple_from_json(bad_entry), SchemaError);
  CHECK_THROWS_AS(io::read_json(scratch("does_not_exist.json")), SchemaError);

  json torus = io::read_json(fixture("torus_m3.json"));
  torus["theta"] = json::array({json::array({0.0, 0.1}), json::array({-0.1, 0.0})});
  CHECK_THROWS_AS(io::torus_from_json(torus), SchemaError);
}

TEST_CASE("csv header and width contract") {
  io::CsvTable t({"a", "b", "c"});
  t.row().add(1).add(0.5).add("x,y");
  CHECK(t.str() == "a,b,c\n1,0.5,\"x,y\"\n");
  t.row().add(2);
  CHECK_THROWS_AS(t.str(), DomainError);
  CHECK(io::format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("manifest records inputs, seeds and timings") {
  io::Manifest m("unit");
  m.input(fixture("two_point_1.json"));
  m.seed("s", 7);
  m.option("k", 3);
  { auto timer = m.time("work"); }
  const json& d = m.doc();
  CHECK(d["schema"] == io::kManifestSchema);
  CHECK(d["inputs"][0]["fnv1a"] == io::hex64(io::fnv1a_file(fixture("two_point_1.json"))));
  CHECK(d["seeds"]["s"] == 7);
  CHECK(d["timings"].contains("work"));
  CHECK(io::fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(io::fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}
