#include "doctest.h"

#include "dcx/constructions.hpp"
#include "dcx/d0.hpp"
#include "dcx/diagram.hpp"
#include "dcx/error.hpp"
#include "dcx/fuzz.hpp"
#include "oracles.hpp"

using namespace dcx;

namespace {

const Ring Z = Ring::integers();
const Bimodule S1 = Bimodule::free(Z, 1);

DComplex loop_on(ComplexPtr c, const GradedMap& f) {
  DComplex x = DComplex::zero(preset_diagram(PresetKind::D1, Z, {S1}), {c});
  x.edge_map[0] = f.retarget(c, x.edge_target(0));
  return x;
}

DComplex matrix_loop(const Matrix& m) {
  ComplexPtr c = share(ChainComplex(Z, 0, {m.rows()}));
  GradedMap f(c, c, 0);
  f.set(0, m);
  return loop_on(c, f);
}

// Largest-first comparison with "none" as infinity.
std::optional<std::size_t> max_degree(std::optional<std::size_t> a, std::optional<std::size_t> b) {
  if (!a || !b) return std::nullopt;
  return std::max(*a, *b);
}

}  // namespace

TEST_CASE("presets") {
  DiagramOfBimodules d1 = preset_diagram(PresetKind::D1, Z, {S1});
  CHECK(d1.vertices.size() == 1);
  REQUIRE(d1.edges.size() == 1);
  CHECK(d1.edges[0].from == 0);
  CHECK(d1.edges[0].to == 0);

  DiagramOfBimodules d2 = preset_diagram(PresetKind::D2, Z, {S1, Bimodule::free(Z, 2)});
  CHECK(d2.vertices.size() == 2);
  REQUIRE(d2.edges.size() == 2);
  CHECK(d2.edges[0].name == "S");
  CHECK(d2.edges[1].name == "T");
  CHECK(d2.edges[1].bimodule.rank == 2);

  DiagramOfBimodules d3 = preset_diagram(PresetKind::D3, Z, {});
  CHECK(d3.edges.size() == 4);

  DiagramOfBimodules d0 = preset_diagram(PresetKind::D0Truncated, Z, {S1}, 3);
  CHECK(d0.vertices.size() == 4);
  CHECK(d0.edges.size() == 6);
  CHECK(d0.relations.size() == 2);
  for (const Edge& e : d0.edges) {
    if (e.name.rfind("lambda", 0) == 0) CHECK(e.to == e.from + 1);
    else CHECK(e.to + 1 == e.from);
  }
  CHECK_THROWS_AS(preset_diagram(PresetKind::D0Truncated, Z, {S1}, 0), PreconditionError);
  CHECK_THROWS_AS(preset_diagram(PresetKind::D1, Z, {Bimodule::free(Ring::rationals(), 1)}), PreconditionError);
  CHECK(parse_preset("D2") == PresetKind::D2);
  CHECK_FALSE(parse_preset("D9").has_value());
}

TEST_CASE("path composites") {
  DComplex x = matrix_loop(Matrix::from_rows(Z, {{0, 1}, {0, 0}}));
  PathComposite none = path_composite(x, {}, 0);
  CHECK(none.map == GradedMap::identity(x.vertex[0]));
  PathComposite twice = path_composite(x, {0, 0}, 0);
  CHECK(twice.map.at(0) == Matrix(Z, 2, 2));

  SUBCASE("tensor bookkeeping with a rank-2 loop") {
    Bimodule s2 = Bimodule::free(Z, 2);
    ComplexPtr c = share(ChainComplex(Z, 0, {1}));
    DComplex y = DComplex::zero(preset_diagram(PresetKind::D1, Z, {s2}), {c});
    y.edge_map[0].set(0, Matrix::from_rows(Z, {{2}, {3}}));
    PathComposite p = path_composite(y, {0, 0}, 0);
    CHECK(p.bimodule.rank == 4);
    // each later edge map acts on every accumulated factor: (f ⊗ S)·f
    CHECK(p.map.at(0) == Matrix::from_rows(Z, {{4}, {6}, {6}, {9}}));
  }

  SUBCASE("round trip in D2 matches the collapse") {
    ComplexPtr c = share(ChainComplex(Z, 0, {1}));
    DComplex y = DComplex::zero(preset_diagram(PresetKind::D2, Z, {S1, S1}), {c, c});
    y.edge_map[0].set(0, Matrix::from_rows(Z, {{2}}));
    y.edge_map[1].set(0, Matrix::from_rows(Z, {{3}}));
    DComplex one = collapse_d2_to_d1(y);
    CHECK(one.edge_map[0].at(0) == Matrix::from_rows(Z, {{6}}));
    CHECK(path_composite(y, {0, 1}, 0).map.at(0) == one.edge_map[0].at(0));
    CHECK_FALSE(nilpotency_degree(one, 4).degree.has_value());
  }
  CHECK_THROWS(path_composite(x, {0}, 1));
}

TEST_CASE("nilpotency degree examples") {
  CHECK(nilpotency_degree(matrix_loop(Matrix(Z, 2, 2)), 3).degree == 0u);
  CHECK(nilpotency_degree(matrix_loop(Matrix::from_rows(Z, {{0, 1}, {0, 0}})), 3).degree == 1u);
  for (std::size_t n : {0u, 2u, 5u})
    CHECK_FALSE(nilpotency_degree(matrix_loop(Matrix::identity(Z, 2)), n).degree.has_value());

  // 2·id on 0 → Z →(×2) Z → 0 is null-homotopic without being zero
  ChainComplex m(Z, 0, {1, 1});
  m.set_d(1, Matrix::from_rows(Z, {{2}}));
  ComplexPtr c = share(m);
  CHECK(nilpotency_degree(loop_on(c, GradedMap::identity(c).scaled(2)), 3).degree == 0u);
  CHECK_FALSE(nilpotency_degree(loop_on(c, GradedMap::identity(c)), 3).degree.has_value());
}

TEST_CASE("nilpotency degree is the matrix index minus one") {
  Rng rng(71);
  for (int t = 0; t < 30; ++t) {
    const auto k = static_cast<std::size_t>(uniform(rng, 1, 5));
    const auto index = static_cast<std::size_t>(uniform(rng, 1, static_cast<long>(k)));
    DComplex x = random_nilpotent_loop(Z, k, index, rng);
    REQUIRE(x.valid());
    auto expected = oracle::nilpotency_index(x.edge_map[0].at(0));
    REQUIRE(expected);
    CHECK(*expected == index);
    CHECK(nilpotency_degree(x, k + 1).degree == *expected - 1);
  }
}

TEST_CASE("nilpotency degree of a direct sum is the maximum") {
  Rng rng(73);
  for (int t = 0; t < 25; ++t) {
    DComplex x, y;
    if (t % 2 == 0) {
      x = random_nilpotent_loop(Z, 3, static_cast<std::size_t>(uniform(rng, 1, 3)), rng);
      y = random_nilpotent_loop(Z, 4, static_cast<std::size_t>(uniform(rng, 1, 4)), rng);
    } else {
      ComplexShape sh{0, 1, 2, false, 3, true};
      ComplexPtr a = share(random_complex(Z, rng, sh));
      ComplexPtr b = share(random_complex(Z, rng, sh));
      x = loop_on(a, random_chain_map(a, a, 0, rng));
      y = loop_on(b, GradedMap(b, b, 0));
    }
    const std::size_t cap = 4;
    auto dx = nilpotency_degree(x, cap).degree;
    auto dy = nilpotency_degree(y, cap).degree;
    CHECK(nilpotency_degree(direct_sum(x, y), cap).degree == max_degree(dx, dy));
  }
}

TEST_CASE("collapse never raises the degree") {
  Rng rng(79);
  for (int t = 0; t < 20; ++t) {
    ComplexShape sh{0, 1, 2, false, 3, true};
    ComplexPtr a = share(random_complex(Z, rng, sh));
    ComplexPtr b = share(random_complex(Z, rng, sh));
    DComplex x = DComplex::zero(preset_diagram(PresetKind::D2, Z, {S1, S1}), {a, b});
    x.edge_map[0] = random_chain_map(a, b, 0, rng);
    // strictly nilpotent round trip half of the time
    x.edge_map[1] = t % 2 ? GradedMap(b, a, 0) : random_chain_map(b, a, 0, rng);
    REQUIRE(x.valid());
    auto d2 = nilpotency_degree(x, 4).degree;
    DComplex one = collapse_d2_to_d1(x);
    REQUIRE(one.valid());
    auto d1 = nilpotency_degree(one, 4).degree;
    if (d2) {
      REQUIRE(d1);
      CHECK(*d1 <= *d2);
    }
    DComplex zero = DComplex::zero(x.diagram, {a, b});
    CHECK(collapse_d2_to_d1(zero).edge_map[0].is_zero());
  }
}

TEST_CASE("collapse of a strictly nilpotent round trip") {
  ComplexPtr c2 = share(ChainComplex(Z, 0, {2}));
  ComplexPtr c1 = share(ChainComplex(Z, 0, {1}));
  DComplex x = DComplex::zero(preset_diagram(PresetKind::D2, Z, {S1, S1}), {c2, c1});
  x.edge_map[0].set(0, Matrix::from_rows(Z, {{0, 1}}));
  x.edge_map[1].set(0, Matrix::from_rows(Z, {{1}, {0}}));
  DComplex one = collapse_d2_to_d1(x);
  auto expected = oracle::nilpotency_index(one.edge_map[0].at(0));
  REQUIRE(expected);
  CHECK(nilpotency_degree(one, 4).degree == *expected - 1);
}

TEST_CASE("validation of D-complexes") {
  ChainComplex e(Z, 0, {1, 1});
  e.set_d(1, Matrix::from_rows(Z, {{1}}));
  ComplexPtr c = share(e);
  DComplex x = DComplex::zero(preset_diagram(PresetKind::D1, Z, {S1}), {c});
  CHECK(x.valid());
  x.edge_map[0].set(0, Matrix::from_rows(Z, {{1}}));
  CHECK_FALSE(x.valid());

  Rng rng(83);
  D0Complex d = random_reduced_d0(Z, S1, rng, D0Shape{});
  DComplex dx = d.to_dcomplex();
  CHECK(dx.valid());
  for (const Relation& r : dx.diagram.relations) {
    const std::size_t start = dx.diagram.edges[r.lhs[0]].from;
    CHECK(path_composite(dx, r.lhs, start).map == path_composite(dx, r.rhs, start).map);
  }
}
