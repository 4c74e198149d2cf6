#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "oua/algebra.hpp"
#include "oua/rng.hpp"
#include "oua/serialization.hpp"

TEST_CASE("catalog tag parsing") {
  int n = 0;
  oua::DivisionTag tag{};
  REQUIRE(oua::parse_catalog_tag("H3(C)", &n, &tag));
  REQUIRE(n == 3);
  REQUIRE(tag == oua::DivisionTag::C);
  REQUIRE(oua::parse_catalog_tag("H12(R)", &n, &tag));
  REQUIRE(n == 12);
  REQUIRE(oua::parse_catalog_tag("H2(O)", &n, &tag));
  REQUIRE(tag == oua::DivisionTag::O);

  REQUIRE_FALSE(oua::parse_catalog_tag("X3(C)", &n, &tag));
  REQUIRE_FALSE(oua::parse_catalog_tag("H3(Q)", &n, &tag));
  REQUIRE_FALSE(oua::parse_catalog_tag("H(C)", &n, &tag));
  REQUIRE_FALSE(oua::parse_catalog_tag("H3C", &n, &tag));
  REQUIRE_FALSE(oua::parse_catalog_tag("H3(CC)", &n, &tag));
  REQUIRE_FALSE(oua::parse_catalog_tag("", &n, &tag));
}

TEST_CASE("algebra JSON round trip preserves the product") {
  oua::AlgebraSpec spec = oua::build_hermitian_algebra(2, oua::DivisionTag::H);
  oua::Json j = oua::algebra_to_json(spec);
  REQUIRE(j["dim"] == spec.dim());
  REQUIRE(j["catalog_tag"] == "H2(H)");
  REQUIRE_FALSE(j.contains("trace_form"));  // identity is the default

  oua::AlgebraSpec back = oua::algebra_from_json(j);
  REQUIRE(back.dim() == spec.dim());
  REQUIRE(back.unit() == spec.unit());
  REQUIRE(back.labels() == spec.labels());
  REQUIRE(back.extreme_rays().size() == spec.extreme_rays().size());

  oua::Rng rng(3);
  for (int t = 0; t < 10; ++t) {
    Eigen::VectorXd a(spec.dim()), b(spec.dim());
    for (int k = 0; k < spec.dim(); ++k) {
      a(k) = rng.normal();
      b(k) = rng.normal();
    }
    REQUIRE((spec.multiply_coords(a, b) - back.multiply_coords(a, b)).norm() <
            1e-14);
  }
}

TEST_CASE("non-identity trace forms survive the round trip") {
  // Two orthogonal idempotents, rescaled trace weights.
  std::vector<oua::StructureEntry> entries = {{0, 0, 0, 1.0}, {1, 1, 1, 1.0}};
  Eigen::VectorXd unit(2);
  unit << 1.0, 1.0;
  Eigen::MatrixXd form = Eigen::Vector2d(2.0, 1.0).asDiagonal();
  oua::AlgebraSpec spec = oua::build_custom(2, entries, unit, form);
  oua::Json j = oua::algebra_to_json(spec);
  REQUIRE(j.contains("trace_form"));
  oua::AlgebraSpec back = oua::algebra_from_json(j);
  REQUIRE(back.trace_form() == spec.trace_form());
}

TEST_CASE("load_algebra accepts tags and files, rejects garbage") {
  oua::AlgebraSpec tagged = oua::load_algebra("H3(R)");
  REQUIRE(tagged.dim() == 6);

  std::string path = "/tmp/oua_test_spec.json";
  {
    std::ofstream f(path);
    f << oua::algebra_to_json(tagged).dump();
  }
  oua::AlgebraSpec from_file = oua::load_algebra(path);
  REQUIRE(from_file.dim() == 6);
  std::remove(path.c_str());

  REQUIRE_THROWS_AS(oua::load_algebra("/nonexistent/path.json"),
                    oua::ValidationError);
  std::string bad = "/tmp/oua_test_bad.json";
  {
    std::ofstream f(bad);
    f << "{\"dim\": 2}";
  }
  REQUIRE_THROWS_AS(oua::load_algebra(bad), oua::ValidationError);
  std::remove(bad.c_str());
}

TEST_CASE("malformed payloads raise validation errors") {
  oua::Json missing = {{"dim", 1}, {"unit", {1.0}}};
  REQUIRE_THROWS_AS(oua::algebra_from_json(missing), oua::ValidationError);

  oua::Json bad_entry = {{"dim", 1},
                         {"unit", {1.0}},
                         {"structure", {{0, 0, 0}}}};  // triple, not quad
  REQUIRE_THROWS_AS(oua::algebra_from_json(bad_entry), oua::ValidationError);

  oua::Json wrong_unit = {{"dim", 2},
                          {"unit", {1.0}},
                          {"structure", {{0, 0, 0, 1.0}}}};
  REQUIRE_THROWS_AS(oua::algebra_from_json(wrong_unit), oua::ValidationError);
}

TEST_CASE("element payloads") {
  oua::Json arr = {1.0, 2.0, 3.0};
  Eigen::VectorXd v = oua::element_from_json(arr, 3);
  REQUIRE(v(1) == 2.0);
  oua::Json obj;
  obj["coords"] = {4.0, 5.0};
  REQUIRE(oua::element_from_json(obj, 2)(0) == 4.0);
  REQUIRE_THROWS_AS(oua::element_from_json(arr, 2), oua::ValidationError);
  oua::Json bare;
  bare["values"] = {1.0};
  REQUIRE_THROWS_AS(oua::element_from_json(bare, 1), oua::ValidationError);
}

TEST_CASE("report serialization carries the wire fields") {
  oua::CheckReport rep;
  rep.check = "lemma1";
  rep.algebra = "H3(C)";
  rep.samples = 100;
  rep.seed = 7;
  rep.tolerance = 1e-9;
  rep.max_violation = 3e-12;
  rep.passed = true;
  oua::Json j = oua::report_to_json(rep);
  for (const char* key :
       {"check", "samples", "max_violation", "passed", "seed", "tolerance"})
    REQUIRE(j.contains(key));
  REQUIRE(j["passed"] == true);
  REQUIRE(j["check"] == "lemma1");
}
