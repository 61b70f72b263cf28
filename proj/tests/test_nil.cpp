#include "doctest.h"

#include "dcx/constructions.hpp"
#include "dcx/d0.hpp"
#include "dcx/error.hpp"
#include "dcx/fuzz.hpp"
#include "dcx/nil.hpp"
#include "oracles.hpp"

using namespace dcx;

namespace {

const Ring Z = Ring::integers();
const Bimodule S1 = Bimodule::free(Z, 1);

GradedMap id_of(const ComplexPtr& c) { return GradedMap::identity(c); }

// α^m : A → A ⊗ S^m built up one factor at a time.
GradedMap alpha_power(const SplittingData& s, const TotalSpace& t, std::size_t m) {
  GradedMap out = id_of(t.complex);
  for (std::size_t e = 1; e <= m; ++e) out = s.tensored_power(t.alpha, e - 1) * out;
  return out;
}

GradedMap delta_of(const SplittingData& s, const TotalSpace& t, const GradedMap& f) {
  GradedMap out = differential(f);
  for (std::size_t i = 0; i + 1 < s.levels; ++i)
    out -= t_operator(s, i) * s.tensored_power(f, i + 1) * alpha_power(s, t, i + 1);
  return out;
}

// T_p rebuilt from delta and the sigmas.
GradedMap t_rebuilt(const SplittingData& s, std::size_t p) {
  GradedMap x = id_of(s.tensored_power(s.kernel, p + 1));
  for (std::size_t t = 1; t <= p; ++t) x = s.tensored_power(s.sigma[t], p + 1 - t) * x;
  return s.delta[p] * x;
}

void check_split_identities(const SplittingData& s) {
  const std::size_t L = s.levels;
  for (std::size_t t = 0; t + 1 < L; ++t) {
    CHECK(s.u[t] * s.lambda[t] == id_of(s.a[t]));
    CHECK(s.lambda[t] * s.u[t] + s.v[t + 1] * s.pi[t + 1] == id_of(s.a[t + 1]));
    CHECK(s.theta[t + 1] * s.mu[t] == s.theta[t]);
    CHECK(differential(s.u[t]) == s.phi[t + 1] * s.pi[t + 1]);
    CHECK(differential(s.v[t + 1]) == -(s.lambda[t] * s.phi[t + 1]));
    CHECK(is_chain_map(s.delta[t]));
  }
  for (std::size_t t = 0; t < L; ++t) {
    CHECK(s.pi[t] * s.v[t] == id_of(s.quotient[t]));
    CHECK(s.theta[t] * s.j[t] == id_of(s.kernel));
    CHECK((s.beta[t] * s.j[t]).is_zero());
    CHECK(is_chain_map(s.j[t]));
  }
  for (std::size_t t = 1; t < L; ++t) {
    CHECK(s.beta[t] * s.sigma[t] == id_of(s.beta[t].target()));
    CHECK((s.theta[t] * s.sigma[t]).is_zero());
    CHECK(s.j[t] * s.theta[t] + s.sigma[t] * s.beta[t] == id_of(s.b[t]));
    CHECK(differential(s.theta[t]) == s.delta[t - 1] * s.beta[t]);
    CHECK(differential(s.sigma[t]) == -(s.j[t] * s.delta[t - 1]));
  }
}

void check_t_relations(const SplittingData& s, std::size_t upto) {
  for (std::size_t p = 0; p <= upto; ++p) {
    const GradedMap tp = t_operator(s, p);
    if (p + 1 < s.levels) CHECK(tp == t_rebuilt(s, p));
    GradedMap rhs(s.tensored_power(s.kernel, p + 1), s.kernel, -2);
    for (std::size_t i = 0; i < p; ++i)
      rhs += t_operator(s, i) * s.tensored_power(t_operator(s, p - 1 - i), i + 1);
    CHECK(differential(tp) == rhs);
    CHECK(check_t_relation(s, p));
  }
}

CalculusPair pair_with_levels(Rng& rng, std::size_t levels, const Bimodule& s = S1) {
  return random_calculus_pair(Z, s, levels, rng, 0, 1);
}

}  // namespace

TEST_CASE("splitting identities on random pairs") {
  Rng rng(101);
  for (int trial = 0; trial < 12; ++trial) {
    CalculusPair pr = pair_with_levels(rng, 2 + trial % 3);
    REQUIRE(pr.a.valid());
    REQUIRE(pr.b.valid());
    SplittingData s = derive_splittings(pr.a, pr.b);
    CHECK(s.levels == pr.a.top());
    check_split_identities(s);
    for (const IdentityCheck& c : check_identities(s)) {
      INFO(c.name);
      CHECK(c.holds);
    }
  }
}

TEST_CASE("splitting preconditions") {
  Rng rng(103);
  CalculusPair pr = pair_with_levels(rng, 3);
  CalculusPair shorter = pair_with_levels(rng, 2);
  CHECK_THROWS_AS(derive_splittings(pr.a, shorter.b), PreconditionError);
  // a target whose kernels grow is not a constant tower
  D0Shape growing;
  growing.levels = 3;
  growing.lo = 0;
  growing.hi = 1;
  bool rejected = false;
  for (int t = 0; t < 20 && !rejected; ++t) {
    D0Complex b = random_reduced_d0(Z, S1, rng, growing);
    bool constant = true;
    const ComplexPtr first = kernel_complex(b, 1).complex;
    for (std::size_t m = 2; m <= b.top(); ++m)
      for (int n = 0; n <= 1; ++n)
        if (kernel_complex(b, m).complex->rank(n) != first->rank(n)) constant = false;
    if (constant) continue;
    CHECK_THROWS_AS(derive_splittings(pr.a, b), PreconditionError);
    rejected = true;
  }
  CHECK(rejected);
}

TEST_CASE("T relation") {
  Rng rng(107);
  for (int trial = 0; trial < 6; ++trial) {
    CalculusPair pr = pair_with_levels(rng, 5 + trial % 2);
    SplittingData s = derive_splittings(pr.a, pr.b);
    CHECK(is_chain_map(t_operator(s, 0)));
    check_t_relations(s, 4);
  }
}

TEST_CASE("a block diagonal target has no T") {
  Rng rng(109);
  CalculusPair pr = pair_with_levels(rng, 3);
  D0Shape flat;
  flat.levels = 3;
  flat.lo = 0;
  flat.hi = 1;
  flat.constant_kernel = true;
  flat.twist_kernels = false;
  flat.scramble = false;
  D0Complex b = random_reduced_d0(Z, S1, rng, flat);
  SplittingData s = derive_splittings(pr.a, b);
  for (std::size_t p = 0; p + 1 < s.levels; ++p) REQUIRE(t_operator(s, p).is_zero());

  TotalSpace t = total_space(s);
  REQUIRE(t.contraction);
  const GradedMap& k = *t.contraction;
  for (int q = -1; q <= 1; ++q) {
    // with T = 0 a delta-cycle is a chain map and G is ±F k
    GradedMap h = random_graded_map(t.complex, s.kernel, q - 1, rng, 2);
    GradedMap f = differential(h);
    CHECK(delta_differential(s, t, f) == differential(f));
    Inversion inv = invert_homotopy(s, t, f);
    CHECK(inv.g == (f * k).scaled(q % 2 == 0 ? 1 : -1));
    CHECK(differential(inv.g) == f);
  }
}

TEST_CASE("delta squares to zero") {
  Rng rng(113);
  for (int trial = 0; trial < 8; ++trial) {
    CalculusPair pr = pair_with_levels(rng, 2 + trial % 3);
    SplittingData s = derive_splittings(pr.a, pr.b);
    TotalSpace t = total_space(s);
    for (std::size_t m = 0; m < t.alpha_power.size(); ++m) CHECK(t.alpha_power[m] == alpha_power(s, t, m));
    for (int q = -1; q <= 1; ++q) {
      GradedMap f = random_graded_map(t.complex, s.kernel, q, rng, 2);
      GradedMap df = delta_of(s, t, f);
      CHECK(delta_differential(s, t, f) == df);
      CHECK(delta_of(s, t, df).is_zero());
    }
  }
}

TEST_CASE("inversion") {
  CHECK(inversion_sign(0, 0) == 1);
  for (std::size_t p = 0; p < 5; ++p)
    for (int q = -3; q <= 3; ++q) {
      const int expected = ((q % 2 != 0) ? -1 : 1) * ((p * static_cast<std::size_t>(q < 0 ? -q : q)) % 2 ? -1 : 1);
      CHECK(inversion_sign(p, q) == expected);
    }

  Rng rng(127);
  int filtered_seen = 0;
  for (int trial = 0; trial < 8; ++trial) {
    CalculusPair pr = pair_with_levels(rng, 2 + trial % 3);
    SplittingData s = derive_splittings(pr.a, pr.b);
    TotalSpace t = total_space(s);
    REQUIRE(t.contraction);
    const GradedMap& k = *t.contraction;
    CHECK(differential(k) == id_of(t.complex));
    filtered_seen += t.filtered ? 1 : 0;
    for (int q = -1; q <= 1; ++q) {
      GradedMap zero(t.complex, s.kernel, q);
      CHECK(invert_homotopy(s, t, zero).g.is_zero());

      GradedMap h = random_graded_map(t.complex, s.kernel, q - 1, rng, 2);
      GradedMap f = delta_of(s, t, h);
      Inversion inv = invert_homotopy(s, t, f);
      CHECK(inv.g.degree() == h.degree());
      CHECK(delta_of(s, t, inv.g) == f);
      // G − H is delta-closed
      CHECK(delta_of(s, t, inv.g - h).is_zero());
      CHECK(inv.filtered == t.filtered);
      if (t.filtered) CHECK(invert_by_tuples(s, t, f) == inv.g);

      GradedMap bad = random_graded_map(t.complex, s.kernel, q, rng, 2);
      if (!delta_of(s, t, bad).is_zero()) CHECK_THROWS_AS(invert_homotopy(s, t, bad), PreconditionError);
    }
  }
  CHECK(filtered_seen > 0);
}

TEST_CASE("levels of a map out of the total space") {
  Rng rng(131);
  for (int trial = 0; trial < 8; ++trial) {
    CalculusPair pr = pair_with_levels(rng, 2 + trial % 3);
    SplittingData s = derive_splittings(pr.a, pr.b);
    TotalSpace t = total_space(s);
    for (int q = -1; q <= 1; ++q) {
      GradedMap f = random_graded_map(t.complex, s.kernel, q, rng, 2);
      std::vector<GradedMap> fh = fhat_from_F(s, t, f);
      REQUIRE(fh.size() == s.levels);
      CHECK(fh[0] == s.j[0] * f * t.inclusion[0]);
      CHECK(check_fhat_recursion(s, t, f, fh));
      CHECK(F_from_fhat(s, t, fh) == f);

      // every level restricts to the one below and sees only the kernel on top
      for (std::size_t n = 0; n + 1 < s.levels; ++n) CHECK(fh[n + 1] * s.lambda[n] == s.mu[n] * fh[n]);
      for (std::size_t n = 0; n < s.levels; ++n) CHECK(s.theta[n] * fh[n] == f * t.inclusion[n]);

      D0Morphism m = to_d0_morphism(s, pr.a, pr.b, fh);
      CHECK(is_d0_morphism(pr.a, pr.b, m));
      std::vector<GradedMap> back = from_d0_morphism(s, m);
      for (std::size_t n = 0; n < s.levels; ++n) CHECK(back[n] == fh[n]);

      // the levelwise differential is the levels of delta F
      D0Morphism dm = differential(m);
      std::vector<GradedMap> dfh = fhat_from_F(s, t, delta_of(s, t, f));
      for (std::size_t n = 0; n < s.levels; ++n) CHECK(dm.level[n + 1].retarget(s.a[n], s.b[n]) == dfh[n]);

      GradedMap zero(t.complex, s.kernel, q);
      for (const GradedMap& g : fhat_from_F(s, t, zero)) CHECK(g.is_zero());
    }
    CHECK_THROWS_AS(fhat_from_F(s, t, GradedMap(s.kernel, s.kernel, 0)), ShapeError);
  }
}

TEST_CASE("total space contraction") {
  ComplexPtr q = share(ChainComplex(Z, 0, {2, 1}));
  Cone c = cone(GradedMap::identity(q));
  GradedMap k = find_total_contraction(c.complex);
  CHECK(k.degree() == 1);
  CHECK(differential(k) == id_of(c.complex));

  Rng rng(137);
  for (int trial = 0; trial < 20; ++trial) {
    ComplexShape sh{-1, 2, 3, true, 4, true};
    ComplexPtr a = share(random_complex(Z, rng, sh));
    REQUIRE(oracle::acyclic_z(*a));
    CHECK(differential(find_total_contraction(a)) == id_of(a));
  }

  ChainComplex moore(Z, 0, {1, 1});
  moore.set_d(1, Matrix::from_rows(Z, {{2}}));
  CHECK_THROWS_AS(find_total_contraction(share(moore)), PreconditionError);
}

TEST_CASE("rank two bimodule") {
  Rng rng(139);
  const Bimodule s2 = Bimodule::free(Z, 2);
  for (int trial = 0; trial < 3; ++trial) {
    CalculusPair pr = random_calculus_pair(Z, s2, 3, rng, 0, 1);
    SplittingData s = derive_splittings(pr.a, pr.b);
    check_split_identities(s);
    check_t_relations(s, 2);
    TotalSpace t = total_space(s);
    REQUIRE(t.contraction);
    GradedMap h = random_graded_map(t.complex, s.kernel, -1, rng, 1);
    GradedMap f = delta_of(s, t, h);
    CHECK(delta_of(s, t, f).is_zero());
    CHECK(delta_of(s, t, invert_homotopy(s, t, f).g) == f);
  }
}
