#include "doctest.h"

#include <string>

#include "dcx/constructions.hpp"
#include "dcx/error.hpp"
#include "dcx/fuzz.hpp"
#include "dcx/homology.hpp"
#include "dcx/serialize.hpp"

using namespace dcx;

namespace {

const Ring Z = Ring::integers();
const Bimodule S1 = Bimodule::free(Z, 1);

std::string parse_error_of(const std::function<void()>& run) {
  try {
    run();
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& text, const std::string& part) { return text.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("scalars are strings") {
  CHECK(scalar_to_json(Scalar(-3)) == Json("-3"));
  CHECK(scalar_to_json(Scalar(1, 2)) == Json("1/2"));
  CHECK(scalar_from_json(Json("-6/4"), "$") == Scalar(-3, 2));
  CHECK(scalar_from_json(Json(7), "$") == 7);
  CHECK_THROWS_AS(scalar_from_json(Json("x"), "$"), ParseError);
  CHECK_THROWS_AS(scalar_from_json(Json("1/0"), "$"), ParseError);
  CHECK_THROWS_AS(scalar_from_json(Json(0.5), "$"), ParseError);
}

TEST_CASE("complex round trip") {
  Rng rng(181);
  for (int t = 0; t < 20; ++t) {
    ChainComplex c = random_complex(Z, rng, ComplexShape{-1, 2, 3, t % 2 == 0, 5, true});
    Json j = complex_to_json(c);
    CHECK(j["ring"] == "Z");
    ChainComplex back = complex_from_json(Json::parse(j.dump()));
    CHECK(back == c);
    CHECK(complex_to_json(back).dump() == j.dump());
  }
  Json q = Json::parse(R"({"ring": "Q", "ranks": {"0": 1, "1": 1}, "differentials": {"1": [["1/2"]]}})");
  ChainComplex cq = complex_from_json(q);
  CHECK(cq.ring() == Ring::rationals());
  CHECK(cq.d(1)(0, 0) == Scalar(1, 2));
}

TEST_CASE("ring override") {
  Json j = Json::parse(R"({"ring": "Z", "ranks": {"0": 1, "1": 1}, "differentials": {"1": [["7"]]}})");
  ChainComplex c = complex_from_json(j, Ring::integers_mod(5));
  CHECK(c.ring() == Ring::integers_mod(5));
  CHECK(c.d(1)(0, 0) == 2);
  CHECK(format_group(homology(c).at(0), c.ring()) == "0");
  ChainComplex no_ring = complex_from_json(Json::parse(R"({"ranks": {"0": 2}})"));
  CHECK(no_ring.ring() == Z);
  CHECK(no_ring.rank(0) == 2);
}

TEST_CASE("parse errors name the path") {
  std::string e = parse_error_of([] {
    complex_from_json(Json::parse(R"({"ranks": {"0": 1, "1": 1}, "differentials": {"1": [["a"]]}})"));
  });
  CHECK(contains(e, "differentials"));
  CHECK(contains(e, "[0][0]"));

  e = parse_error_of([] { complex_from_json(Json::parse(R"({"ranks": {"0": 1, "1": 2}, "differentials": {"1": [["1"]]}})")); });
  CHECK(contains(e, "differentials"));

  e = parse_error_of([] { complex_from_json(Json::parse(R"({"ring": "R", "ranks": {}})")); });
  CHECK(contains(e, "$.ring"));

  e = parse_error_of([] { complex_from_json(Json::parse(R"({"ring": "Z"})")); });
  CHECK(contains(e, "ranks"));

  e = parse_error_of([] { complex_from_json(Json::parse(R"({"ranks": {"x": 1}})")); });
  CHECK(contains(e, "\"x\""));

  CHECK_THROWS_AS(read_json_file("/nonexistent/file.json"), ParseError);
}

TEST_CASE("graded map and bimodule round trip") {
  Rng rng(191);
  for (int t = 0; t < 10; ++t) {
    ComplexShape sh{0, 2, 2, false, 3, true};
    ComplexPtr a = share(random_complex(Z, rng, sh));
    ComplexPtr b = share(random_complex(Z, rng, sh));
    for (int deg = -1; deg <= 1; ++deg) {
      GradedMap f = random_graded_map(a, b, deg, rng, 3);
      Json j = Json::parse(graded_map_to_json(f).dump());
      CHECK(j["degree"] == deg);
      CHECK(graded_map_from_json(j, a, b, "$") == f);
    }
  }
  Bimodule tw = Bimodule::twisted(Ring::integers_mod(6), {Scalar(1), Scalar(3)});
  Bimodule back = bimodule_from_json(Json::parse(bimodule_to_json(tw).dump()), Ring::integers_mod(6), "$");
  CHECK(back == tw);
  CHECK(bimodule_from_json(Json::parse(R"({"rank": 2})"), Z, "$") == Bimodule::free(Z, 2));
  CHECK_THROWS_AS(bimodule_from_json(Json::parse(R"({"rank": "two"})"), Z, "$"), ParseError);
}

TEST_CASE("D-complex round trip") {
  Rng rng(193);
  for (int t = 0; t < 5; ++t) {
    DComplex x = random_nilpotent_loop(Z, 3, static_cast<std::size_t>(uniform(rng, 1, 3)), rng);
    Json j = Json::parse(dcomplex_to_json(x).dump());
    CHECK(j["kind"] == "dcomplex");
    DComplex back = dcomplex_from_json(j);
    REQUIRE(back.vertex.size() == x.vertex.size());
    CHECK(*back.vertex[0] == *x.vertex[0]);
    CHECK(back.edge_map[0].at(0) == x.edge_map[0].at(0));
    CHECK(dcomplex_to_json(back).dump() == j.dump());
  }
  D0Complex d = random_reduced_d0(Z, S1, rng, D0Shape{});
  DComplex dx = d.to_dcomplex();
  DComplex back = dcomplex_from_json(Json::parse(dcomplex_to_json(dx).dump()));
  CHECK(back.valid());
  CHECK(dcomplex_to_json(back).dump() == dcomplex_to_json(dx).dump());
}

TEST_CASE("D0 complex and morphism round trip") {
  Rng rng(197);
  for (int t = 0; t < 6; ++t) {
    D0Shape sh;
    sh.levels = 2 + static_cast<std::size_t>(t % 2);
    D0Complex x = random_reduced_d0(Z, S1, rng, sh);
    Json j = Json::parse(d0_to_json(x).dump());
    CHECK(j["kind"] == "d0");
    D0Complex back = d0_from_json(j);
    CHECK(back.valid());
    REQUIRE(back.top() == x.top());
    CHECK(back.stabilization == x.stabilization);
    for (std::size_t k = 0; k <= x.top(); ++k) CHECK(*back.level[k] == *x.level[k]);
    for (std::size_t k = 1; k <= x.top(); ++k) CHECK(back.alpha[k] == x.alpha[k].retarget(back.level[k], back.shifted[k - 1]));
    CHECK(d0_to_json(back).dump() == j.dump());

    HomComplex h = hom_complex(x, x);
    const std::size_t dim = h.dimension(0);
    if (dim == 0) continue;
    D0Morphism f = h.element(0, random_matrix(Z, dim, 1, rng, -2, 2));
    D0Morphism g = d0_morphism_from_json(Json::parse(d0_morphism_to_json(f).dump()), back, back, "$");
    CHECK(g.degree == f.degree);
    REQUIRE(g.level.size() == f.level.size());
    for (std::size_t k = 0; k < f.level.size(); ++k)
      CHECK(g.level[k] == f.level[k].retarget(back.level[k], back.level[k]));
  }
}

TEST_CASE("homology report") {
  ChainComplex m(Z, 0, {1, 1});
  m.set_d(1, Matrix::from_rows(Z, {{2}}));
  Json j = homology_to_json(homology(m), Z);
  CHECK(j["0"]["betti"] == 0);
  CHECK(j["0"]["torsion"] == Json::array({"2"}));
  CHECK(j["0"]["text"] == "Z/2");
  CHECK(j["1"]["text"] == "0");
}
