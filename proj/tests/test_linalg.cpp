#include "doctest.h"

#include "dcx/error.hpp"
#include "dcx/fuzz.hpp"
#include "dcx/linalg.hpp"
#include "oracles.hpp"

using namespace dcx;

namespace {

const Ring Z = Ring::integers();
const Ring Q = Ring::rationals();

bool diagonal_chain(const SmithForm& s) {
  for (std::size_t i = 0; i < s.d.rows(); ++i)
    for (std::size_t j = 0; j < s.d.cols(); ++j)
      if (i != j && s.d(i, j) != 0) return false;
  for (std::size_t k = 0; k < s.factors.size(); ++k) {
    if (s.factors[k] <= 0) return false;
    if (s.d(k, k) != s.factors[k]) return false;
    if (k > 0 && s.factors[k] % s.factors[k - 1] != 0) return false;
  }
  for (std::size_t k = s.factors.size(); k < std::min(s.d.rows(), s.d.cols()); ++k)
    if (s.d(k, k) != 0) return false;
  return true;
}

}  // namespace

TEST_CASE("matrix composition acts on column vectors") {
  Matrix f = Matrix::from_rows(Z, {{1, 2}, {0, 1}});
  Matrix g = Matrix::from_rows(Z, {{0, 1}, {1, 0}});
  Matrix x = Matrix::from_rows(Z, {{5}, {7}});
  CHECK((g * f) * x == g * (f * x));
  CHECK(g * f == Matrix::from_rows(Z, {{0, 1}, {1, 2}}));
  CHECK(Matrix(Z, 0, 3).is_zero());
  CHECK((Matrix(Z, 2, 0) * Matrix(Z, 0, 3)) == Matrix(Z, 2, 3));
}

TEST_CASE("ring arithmetic") {
  Ring z6 = Ring::integers_mod(6);
  CHECK(z6.element(Scalar(7)) == 1);
  CHECK(z6.element(Scalar(-1)) == 5);
  CHECK(z6.is_unit(Scalar(5)));
  CHECK_FALSE(z6.is_unit(Scalar(3)));
  CHECK(z6.element(z6.inverse(Scalar(5)) * 5) == 1);
  CHECK_THROWS_AS(Ring::integers_mod(1), Error);
  CHECK_THROWS_AS(Z.element(Scalar(1, 2)), ShapeError);
  CHECK(Ring::parse("Z/7") == Ring::integers_mod(7));
  CHECK(Ring::parse("Q").is_field());
}

TEST_CASE("smith form of small matrices") {
  SUBCASE("zero") {
    SmithForm s = smith_normal_form(Matrix::from_rows(Z, {{0}}));
    CHECK(s.d == Matrix::from_rows(Z, {{0}}));
    CHECK(s.p.is_identity());
    CHECK(s.q.is_identity());
    CHECK(s.rank == 0);
  }
  SUBCASE("identity") {
    SmithForm s = smith_normal_form(Matrix::identity(Z, 2));
    CHECK(s.d.is_identity());
  }
  SUBCASE("two by two") {
    Matrix a = Matrix::from_rows(Z, {{2, 4}, {6, 8}});
    SmithForm s = smith_normal_form(a);
    CHECK(s.d == Matrix::from_rows(Z, {{2, 0}, {0, 4}}));
    CHECK(s.p * a * s.q == s.d);
    // d1 is the gcd of the entries, d1·d2 = |det|
    CHECK(oracle::determinant(a) == -8);
    CHECK(oracle::invariant_factors_by_minors(a) == std::vector<mpz_class>{2, 4});
  }
}

TEST_CASE("smith form agrees with gcds of minors on random matrices") {
  Rng rng(11);
  for (int t = 0; t < 150; ++t) {
    const auto r = static_cast<std::size_t>(uniform(rng, 1, 5));
    const auto c = static_cast<std::size_t>(uniform(rng, 1, 5));
    Matrix a = random_matrix(Z, r, c, rng, -9, 9);
    SmithForm s = smith_normal_form(a);
    REQUIRE(s.p * a * s.q == s.d);
    CHECK(oracle::is_unimodular(s.p));
    CHECK(oracle::is_unimodular(s.q));
    CHECK(diagonal_chain(s));
    CHECK(s.factors == oracle::invariant_factors_by_minors(a));
    CHECK(s.factors == oracle::invariant_factors_by_elimination(a));
    CHECK(s.rank == oracle::rank_q(a));
    CHECK(invariant_factors(a) == s.factors);
  }
}

TEST_CASE("smith form is reproducible") {
  Rng rng(5);
  Matrix a = random_matrix(Z, 4, 5, rng, -9, 9);
  SmithForm s1 = smith_normal_form(a), s2 = smith_normal_form(a);
  CHECK(s1.p == s2.p);
  CHECK(s1.q == s2.q);
}

TEST_CASE("rank over fields and Z") {
  Rng rng(3);
  for (int t = 0; t < 60; ++t) {
    Matrix a = random_matrix(Z, 4, 3, rng, -2, 2);
    CHECK(rank(a) == oracle::rank_q(a));
    CHECK(rank(a.over(Q)) == oracle::rank_q(a));
  }
  Matrix two = Matrix::from_rows(Z, {{2, 4}});
  CHECK(rank(two.over(Ring::integers_mod(2))) == 0);
  CHECK(rank(two.over(Ring::integers_mod(3))) == 1);
}

TEST_CASE("solve_linear examples") {
  CHECK(*solve_linear(Matrix::from_rows(Z, {{2}}), Matrix::from_rows(Z, {{4}})) == Matrix::from_rows(Z, {{2}}));
  CHECK_FALSE(solve_linear(Matrix::from_rows(Z, {{2}}), Matrix::from_rows(Z, {{3}})).has_value());
  auto x = solve_linear(Matrix::from_rows(Q, {{2}}), Matrix::from_rows(Q, {{3}}));
  REQUIRE(x);
  CHECK((*x)(0, 0) == Scalar(3, 2));
  // 2x = 1 over Z/5 has x = 3; 2x = 1 over Z/4 has none
  auto y = solve_linear(Matrix::from_rows(Ring::integers_mod(5), {{2}}), Matrix::from_rows(Ring::integers_mod(5), {{1}}));
  REQUIRE(y);
  CHECK((*y)(0, 0) == 3);
  CHECK_FALSE(solve_linear(Matrix::from_rows(Ring::integers_mod(4), {{2}}),
                           Matrix::from_rows(Ring::integers_mod(4), {{1}}))
                  .has_value());
}

TEST_CASE("diophantine verdicts match a bounded box search") {
  Rng rng(17);
  int solvable = 0, unsolvable = 0;
  for (int t = 0; t < 120; ++t) {
    Matrix a = random_matrix(Z, 3, 3, rng, -2, 2);
    std::vector<long> b(3);
    if (t % 2 == 0) {
      Matrix x0 = random_matrix(Z, 3, 1, rng, -1, 1);
      Matrix ax = a * x0;
      for (int i = 0; i < 3; ++i) b[i] = ax(i, 0).get_num().get_si();
    } else {
      for (auto& v : b) v = uniform(rng, -4, 4);
    }
    Matrix bm(Z, 3, 1);
    for (int i = 0; i < 3; ++i) bm.set(i, 0, b[i]);
    auto x = solve_linear(a, bm);
    const mpz_class det = oracle::determinant(a);
    long bound = 4;
    if (det != 0) {
      // Cramer: the unique rational solution is adj(a)·b / det, so |x_i| ≤ Σ|adj_ij||b_j|
      bound = 0;
      for (int i = 0; i < 3; ++i) {
        long row = 0;
        for (int j = 0; j < 3; ++j) {
          Matrix minor(Z, 2, 2);
          int rr = 0;
          for (int p = 0; p < 3; ++p) {
            if (p == j) continue;
            int cc = 0;
            for (int q = 0; q < 3; ++q) {
              if (q == i) continue;
              minor.set(rr, cc++, a(p, q));
            }
            ++rr;
          }
          row += std::abs(oracle::determinant(minor).get_si() * b[j]);
        }
        bound = std::max(bound, row);
      }
    }
    auto brute = oracle::box_solve(a, b, bound);
    if (x) {
      CHECK(a * *x == bm);
      ++solvable;
    } else {
      ++unsolvable;
    }
    if (brute) CHECK(x.has_value());
    if (det != 0) CHECK(x.has_value() == brute.has_value());
    if (!x) CHECK_FALSE(brute.has_value());
  }
  CHECK(solvable > 10);
  CHECK(unsolvable > 10);
}

TEST_CASE("kernel bases") {
  CHECK(kernel_basis(Matrix::from_rows(Z, {{1, 0}})) == Matrix::from_rows(Z, {{0}, {1}}));
  CHECK(kernel_basis(Matrix(Z, 1, 2)).is_identity());
  Matrix k = kernel_basis(Matrix::from_rows(Z, {{2, 4}}));
  REQUIRE(k.cols() == 1);
  // (2, −1) up to sign
  CHECK(((k(0, 0) == 2 && k(1, 0) == -1) || (k(0, 0) == -2 && k(1, 0) == 1)));
}

TEST_CASE("kernel bases are saturated and span small solutions") {
  Rng rng(23);
  for (int t = 0; t < 40; ++t) {
    Matrix a = random_matrix(Z, 2, 4, rng, -3, 3);
    Matrix k = kernel_basis(a);
    CHECK((a * k).is_zero());
    CHECK(oracle::rank_q(k) == k.cols());
    CHECK(k.cols() == 4 - oracle::rank_q(a));
    // saturated: the gcd of the maximal minors is 1
    if (k.cols() > 0) CHECK(oracle::invariant_factors_by_minors(k).back() == 1);
    for (int s = 0; s < 5; ++s) {
      Matrix x = random_matrix(Z, 4, 1, rng, -3, 3);
      Matrix y = k * random_matrix(Z, k.cols(), 1, rng, -3, 3);
      if (k.cols() > 0) CHECK(solve_linear(k, y).has_value());
      if ((a * x).is_zero()) CHECK(solve_linear(k, x).has_value());
    }
  }
}

TEST_CASE("kernel over Z/m") {
  Ring z4 = Ring::integers_mod(4);
  CHECK_THROWS_AS(kernel_basis(Matrix::from_rows(z4, {{2}})), NonFreeKernel);
  Ring z5 = Ring::integers_mod(5);
  Matrix k = kernel_basis(Matrix::from_rows(z5, {{1, 2}}));
  REQUIRE(k.cols() == 1);
  CHECK((Matrix::from_rows(z5, {{1, 2}}) * k).is_zero());
}

TEST_CASE("split injections and surjections") {
  CHECK(is_split_injection(Matrix::identity(Z, 3))->is_identity());
  CHECK_FALSE(is_split_injection(Matrix::from_rows(Z, {{2}})).has_value());
  CHECK(*is_split_injection(Matrix::from_rows(Z, {{1}, {0}})) == Matrix::from_rows(Z, {{1, 0}}));
  CHECK(is_split_injection(Matrix::from_rows(Q, {{2}})).has_value());
  auto s = is_split_surjection(Matrix::from_rows(Z, {{2, 3}}));
  REQUIRE(s);
  CHECK(Matrix::from_rows(Z, {{2, 3}}) * *s == Matrix::identity(Z, 1));
  CHECK_FALSE(is_split_surjection(Matrix::from_rows(Z, {{2, 4}})).has_value());

  Rng rng(29);
  for (int t = 0; t < 30; ++t) {
    Unimodular u = random_unimodular(Z, 4, rng);
    Matrix a = u.g.block(0, 0, 4, 2);
    auto sp = split_injection(a);
    REQUIRE(sp);
    CHECK((sp->retraction * a).is_identity());
    CHECK((sp->projection * sp->complement).is_identity());
    CHECK((sp->retraction * sp->complement).is_zero());
    CHECK((sp->projection * a).is_zero());
    CHECK((a * sp->retraction + sp->complement * sp->projection).is_identity());
  }
}

TEST_CASE("inverse of unimodular matrices") {
  Rng rng(31);
  for (int t = 0; t < 20; ++t) {
    Unimodular u = random_unimodular(Z, 4, rng);
    CHECK(oracle::is_unimodular(u.g));
    CHECK(*inverse(u.g) == u.inverse);
  }
  CHECK_FALSE(inverse(Matrix::from_rows(Z, {{2}})).has_value());
}
