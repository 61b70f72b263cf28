// Timed acceptance run: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dcx/constructions.hpp"
#include "dcx/d0.hpp"
#include "dcx/diagram.hpp"
#include "dcx/fuzz.hpp"
#include "dcx/homology.hpp"
#include "dcx/linalg.hpp"
#include "dcx/localization.hpp"
#include "dcx/nil.hpp"
#include "oracles.hpp"

using namespace dcx;

namespace {

const Ring Z = Ring::integers();
const Bimodule S1 = Bimodule::free(Z, 1);

class Tally {
 public:
  void check(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && first_failure_.empty()) first_failure_ = what;
    if (!ok) ++failures_;
  }
  bool passed() const { return failures_ == 0; }
  std::size_t checks() const { return checks_; }
  std::size_t failures() const { return failures_; }
  const std::string& first_failure() const { return first_failure_; }

 private:
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
  std::string first_failure_;
};

std::string at(const char* what, int trial) {
  std::ostringstream s;
  s << what << " (trial " << trial << ")";
  return s.str();
}

bool same_homology(const ChainComplex& a, const ChainComplex& b) {
  auto ha = oracle::homology_z(a), hb = oracle::homology_z(b);
  const int lo = std::min(a.empty() ? 0 : a.lo(), b.empty() ? 0 : b.lo()) - 1;
  const int hi = std::max(a.empty() ? 0 : a.hi(), b.empty() ? 0 : b.hi()) + 1;
  for (int n = lo; n <= hi; ++n)
    if (ha[n].betti != hb[n].betti || ha[n].torsion != hb[n].torsion) return false;
  return true;
}

bool levels_acyclic(const D0Complex& c, std::size_t n) {
  for (std::size_t i = 0; i <= n; ++i)
    if (!oracle::acyclic_z(*c.at(i))) return false;
  return true;
}

// 1. Smith forms and Diophantine verdicts.
void exact_linear_algebra(Tally& t) {
  Rng rng(1001);
  for (int k = 0; k < 500; ++k) {
    const auto r = static_cast<std::size_t>(uniform(rng, 1, 6));
    const auto c = static_cast<std::size_t>(uniform(rng, 1, 6));
    Matrix a = random_matrix(Z, r, c, rng, -9, 9);
    SmithForm s = smith_normal_form(a);
    t.check(s.p * a * s.q == s.d, at("p·a·q = d", k));
    t.check(oracle::is_unimodular(s.p) && oracle::is_unimodular(s.q), at("unimodular transforms", k));
    bool diagonal = true;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) {
        const Scalar& e = s.d(i, j);
        if (i != j && e != 0) diagonal = false;
        if (i == j && (e < 0 || (i >= s.rank) != (e == 0))) diagonal = false;
      }
    for (std::size_t i = 0; i + 1 < s.rank; ++i)
      if (s.factors[i + 1] % s.factors[i] != 0) diagonal = false;
    t.check(diagonal, at("divisibility chain", k));
    t.check(s.factors == oracle::invariant_factors_by_elimination(a), at("factors against elimination", k));
    t.check(s.rank == oracle::rank_q(a), at("rank", k));
  }
  int solvable = 0, unsolvable = 0;
  for (int k = 0; k < 300; ++k) {
    Matrix a = random_matrix(Z, 3, 3, rng, -2, 2);
    std::vector<long> b(3);
    if (k % 2 == 0) {
      Matrix ax = a * random_matrix(Z, 3, 1, rng, -1, 1);
      for (int i = 0; i < 3; ++i) b[i] = ax(i, 0).get_num().get_si();
    } else {
      for (auto& v : b) v = uniform(rng, -4, 4);
    }
    Matrix bm(Z, 3, 1);
    for (int i = 0; i < 3; ++i) bm.set(i, 0, b[i]);
    auto x = solve_linear(a, bm);
    long bound = 4;
    if (x) {
      t.check(a * *x == bm, at("solution satisfies the system", k));
      for (int i = 0; i < 3; ++i) bound = std::max(bound, std::abs((*x)(i, 0).get_num().get_si()));
      ++solvable;
    } else {
      ++unsolvable;
    }
    auto brute = oracle::box_solve(a, b, bound);
    t.check(x.has_value() == brute.has_value(), at("verdict against box search", k));
    if (!x && oracle::determinant(a) != 0) {
      // the only rational solution is not integral
      std::vector<long> none = b;
      t.check(!oracle::box_solve(a, none, 12).has_value(), at("no integral solution", k));
    }
  }
  t.check(solvable > 50 && unsolvable > 50, "both verdicts exercised");
}

// 2. Validation, cones, contractibility and cylinders.
void chain_core(Tally& t) {
  Rng rng(1002);
  int iso = 0, non_iso = 0, acyclic = 0;
  for (int k = 0; k < 200; ++k) {
    ComplexShape sh{0, 2, 3, k % 3 == 0, 4, true};
    ComplexPtr a = share(random_complex(Z, rng, sh));
    t.check(a->valid(), at("generated complex is valid", k));

    ChainComplex broken = *a;
    for (int n = broken.lo() + 1; n <= broken.hi(); ++n)
      if (broken.rank(n) > 0 && broken.rank(n - 1) > 0) {
        Matrix d = broken.d(n);
        d.set(0, 0, d(0, 0) + 1);
        broken.set_d(n, d);
        std::vector<int> expected;
        for (int m = broken.lo(); m <= broken.hi() + 1; ++m)
          if (!(broken.d(m - 1) * broken.d(m)).is_zero()) expected.push_back(m);
        t.check(broken.invalid_degrees() == expected, at("∂∂ validation", k));
        break;
      }

    const bool contractible = is_contractible(a);
    t.check(contractible == oracle::acyclic_z(*a), at("acyclic iff contractible", k));
    if (contractible) {
      ++acyclic;
      auto h = find_contraction(a);
      t.check(h && differential(*h) == GradedMap::identity(a), at("contraction witness", k));
    }

    GradedMap f;
    if (k % 2 == 0) {
      EquivalencePair e = random_equivalence(Z, rng, ComplexShape{0, 2, 2, false, 3, true});
      f = e.f;
    } else {
      ComplexPtr b = share(random_complex(Z, rng, sh));
      f = random_chain_map(a, b, 0, rng);
    }
    t.check(is_chain_map(f), at("fuzzed map is a chain map", k));
    Cone c = cone(f);
    t.check(c.complex->valid(), at("cone is a complex", k));
    const bool equivalence = oracle::induces_homology_iso(f);
    (equivalence ? iso : non_iso)++;
    t.check(is_acyclic(*c.complex) == equivalence, at("cone acyclic iff homology equivalence", k));

    Cylinder cy = cylinder(f);
    t.check(cy.complex->valid(), at("cylinder is a complex", k));
    t.check(is_short_exact({cy.j1, cy.quotient}), at("cylinder sequence exact", k));
    t.check(*cy.quotient.target() == *c.complex, at("cylinder quotient is the cone", k));
    t.check(cy.p * cy.j1 == f && cy.p * cy.j2 == GradedMap::identity(f.target()), at("cylinder factors f", k));
    t.check(is_acyclic(*cone(cy.p).complex), at("cylinder projection is an equivalence", k));
  }
  t.check(iso > 20 && non_iso > 20 && acyclic > 20, "both verdicts exercised");
}

// 3. Nilpotency of single-degree loops.
void nilpotency(Tally& t) {
  Rng rng(1003);
  std::vector<std::pair<DComplex, std::optional<std::size_t>>> seen;
  for (int k = 0; k < 100; ++k) {
    const auto dim = static_cast<std::size_t>(uniform(rng, 1, 5));
    const auto index = static_cast<std::size_t>(uniform(rng, 1, static_cast<long>(dim)));
    DComplex x = random_nilpotent_loop(Z, dim, index, rng);
    t.check(x.valid(), at("loop is a D-complex", k));
    auto expected = oracle::nilpotency_index(x.edge_map[0].at(0));
    t.check(expected == index, at("generated index", k));
    auto got = nilpotency_degree(x, 5).degree;
    t.check(expected && got == *expected - 1, at("degree = index − 1", k));
    seen.emplace_back(std::move(x), got);
  }
  for (std::size_t k = 0; k + 1 < seen.size(); k += 2) {
    auto got = nilpotency_degree(direct_sum(seen[k].first, seen[k + 1].first), 5).degree;
    t.check(got && seen[k].second && seen[k + 1].second &&
                *got == std::max(*seen[k].second, *seen[k + 1].second),
            at("sum takes the maximum", static_cast<int>(k)));
  }
}

// 4. Hom out of a point object and B-locality.
void point_objects(Tally& t) {
  Rng rng(1004);
  int local = 0, nonlocal = 0;
  for (int k = 0; k < 50; ++k) {
    D0Shape sh;
    sh.levels = 3;
    sh.contractible_upto = static_cast<std::size_t>(uniform(rng, 0, 3));
    D0Complex x = random_reduced_d0(Z, S1, rng, sh);
    t.check(x.valid() && is_reduced(x), at("reduced instance", k));
    for (std::size_t m = 1; m <= x.top(); ++m) {
      PointHom ph = point_hom(x, m);
      t.check(ph.iso_is_chain_isomorphism, at("evaluation is an isomorphism", k));
      t.check(same_homology(*ph.hom.complex, *kernel_complex(x, m).complex), at("hom homology = kernel homology", k));
    }
    for (std::size_t n = 0; n <= x.top(); ++n) {
      LocalityVerdict v = check_bn_local(x, n);
      t.check(v.local == levels_acyclic(x, n), at("B-local iff levels contractible", k));
      (v.local ? local : nonlocal)++;
      if (v.local)
        for (std::size_t i = 0; i <= n; ++i)
          t.check(differential(v.contractions[i]) == GradedMap::identity(x.at(i)), at("contraction witness", k));
    }
  }
  t.check(local > 10 && nonlocal > 10, "both verdicts exercised");
}

// 5. Hom out of a cone object and A-locality.
void cone_objects(Tally& t) {
  Rng rng(1005);
  int local = 0, nonlocal = 0;
  for (int k = 0; k < 50; ++k) {
    D0Complex x = random_reduced_d0(Z, S1, rng, D0Shape{});
    for (std::size_t m = 1; m < x.top(); ++m) {
      ConeHomSes ses = cone_point_hom(x, m);
      t.check(is_chain_map(ses.i) && is_chain_map(ses.pi), at("i and π are chain maps", k));
      t.check(is_short_exact({ses.i, ses.pi}), at("sequence exact", k));
      bool matches = true;
      const ChainComplex& km = *ses.kernel_m.complex;
      if (!km.empty())
        for (int p = km.lo(); p <= km.hi(); ++p) {
          const Matrix lam = ses.lambda_on_kernels.at(p);
          if (ses.connecting.at(p) != (p % 2 == 0 ? lam : -lam)) matches = false;
        }
      t.check(matches && ses.connecting_matches_lambda, at("connecting = ±λ", k));
    }
    for (RangeBound b : {RangeBound::Strict, RangeBound::Inclusive}) {
      const std::size_t top = b == RangeBound::Strict ? x.top() : x.top() - 1;
      for (std::size_t n = 1; n <= top; ++n) {
        LocalityVerdict kv = check_an_local(x, n, b, LocalityRoute::Kernels);
        LocalityVerdict ev = check_an_local(x, n, b, LocalityRoute::ExactSquares);
        t.check(kv.local == ev.local && kv.failing_index == ev.failing_index, at("routes agree", k));
        (kv.local ? local : nonlocal)++;
      }
    }
  }
  t.check(local > 10 && nonlocal > 10, "both verdicts exercised");
}

GradedMap alpha_power(const SplittingData& s, const TotalSpace& ts, std::size_t m) {
  GradedMap out = GradedMap::identity(ts.complex);
  for (std::size_t e = 1; e <= m; ++e) out = s.tensored_power(ts.alpha, e - 1) * out;
  return out;
}

GradedMap delta_of(const SplittingData& s, const TotalSpace& ts, const GradedMap& f) {
  GradedMap out = differential(f);
  for (std::size_t i = 0; i + 1 < s.levels; ++i)
    out -= t_operator(s, i) * s.tensored_power(f, i + 1) * alpha_power(s, ts, i + 1);
  return out;
}

// 6. Splitting identities, T relation, δ and inversion.
void splitting_calculus(Tally& t) {
  Rng rng(1006);
  for (int k = 0; k < 50; ++k) {
    CalculusPair pr = random_calculus_pair(Z, S1, 2 + static_cast<std::size_t>(k % 4), rng, 0, 1);
    SplittingData s = derive_splittings(pr.a, pr.b);
    bool all = true;
    for (const IdentityCheck& c : check_identities(s)) all = all && c.holds;
    t.check(all, at("splitting identities", k));
    for (std::size_t p = 0; p <= 4; ++p) {
      GradedMap rhs(s.tensored_power(s.kernel, p + 1), s.kernel, -2);
      for (std::size_t i = 0; i < p; ++i)
        rhs += t_operator(s, i) * s.tensored_power(t_operator(s, p - 1 - i), i + 1);
      t.check(differential(t_operator(s, p)) == rhs && check_t_relation(s, p), at("T relation", k));
    }
    TotalSpace ts = total_space(s);
    t.check(ts.contraction.has_value(), at("total space contractible", k));
    for (int q = -1; q <= 1; ++q) {
      GradedMap f = random_graded_map(ts.complex, s.kernel, q, rng, 2);
      GradedMap df = delta_of(s, ts, f);
      t.check(delta_differential(s, ts, f) == df, at("δ formula", k));
      t.check(delta_of(s, ts, df).is_zero(), at("δδ = 0", k));

      Inversion inv = invert_homotopy(s, ts, df);
      t.check(delta_of(s, ts, inv.g) == df, at("δG = F", k));
      if (ts.filtered) t.check(invert_by_tuples(s, ts, df) == inv.g, at("tuple expansion", k));

      std::vector<GradedMap> fh = fhat_from_F(s, ts, f);
      t.check(check_fhat_recursion(s, ts, f, fh), at("level recursion", k));
      t.check(F_from_fhat(s, ts, fh) == f, at("levels recover F", k));
      t.check(is_d0_morphism(pr.a, pr.b, to_d0_morphism(s, pr.a, pr.b, fh)), at("levels form a morphism", k));
    }
  }
}

// 7. Factorization through a levelwise contractible object.
void factorization(Tally& t) {
  Rng rng(1007);
  for (int k = 0; k < 30; ++k) {
    const auto n = static_cast<std::size_t>(uniform(rng, 1, 2));
    FactorizationInstance fi = random_factorization_instance(Z, rng, n, D0Shape{});
    t.check(is_d0_morphism(fi.d, fi.c, fi.f), at("input morphism", k));
    Factorization fac = factor_through_acyclic(fi.d, fi.c, fi.f, n);
    t.check(fac.e.valid(), at("E satisfies the invariants", k));
    t.check(is_d0_morphism(fi.d, fac.e, fac.into_e) && is_d0_morphism(fac.e, fi.c, fac.onto_c),
            at("both legs are morphisms", k));
    D0Morphism comp = compose(fac.onto_c, fac.into_e);
    bool equal = comp.level.size() == fi.f.level.size();
    for (std::size_t i = 0; equal && i < comp.level.size(); ++i) equal = comp.level[i] == fi.f.level[i];
    t.check(equal, at("composite equals f", k));
    bool witnessed = fac.contractions.size() > fac.e.top();
    for (std::size_t i = 0; witnessed && i <= fac.e.top(); ++i)
      witnessed = differential(fac.contractions[i]) == GradedMap::identity(fac.e.level[i]);
    t.check(witnessed, at("levels of E contractible", k));
  }
}

std::optional<mpz_class> oracle_exponent(const ChainComplex& c) {
  mpz_class e = 1;
  for (const auto& [n, h] : oracle::homology_z(c)) {
    if (h.betti > 0) return std::nullopt;
    for (const auto& f : h.torsion) e = lcm(e, f);
  }
  return e;
}

mpz_class oracle_order(const ChainComplex& c) {
  mpz_class o = 1;
  for (const auto& [n, h] : oracle::homology_z(c))
    for (const auto& f : h.torsion) o *= f;
  return o;
}

// 8. Orders, annihilators, order classes and vanishing.
void orders(Tally& t) {
  Rng rng(1008);
  for (int k = 0; k < 50; ++k) {
    ChainComplex a = oracle::finite_complex(rng, 0, 2, 2, 6);
    ChainComplex b = oracle::finite_complex(rng, 0, 2, 2, 6);
    OrderReport oa = homology_order(a), ob = homology_order(b);
    t.check(oa.finite && oa.order == oracle_order(a), at("order", k));
    t.check(homology_order(direct_sum(a, b)).order == oa.order * ob.order, at("order is multiplicative", k));

    AnnihilatorReport an = annihilator_exponent(a);
    const auto e = oracle_exponent(a);
    t.check(an.exponent && e && *an.exponent % *e == 0 && (*e * *e) % *an.exponent == 0, at("e | N | e²", k));
    t.check(an.witness && differential(*an.witness) ==
                              GradedMap::identity(an.witness->source()).scaled(Scalar(*an.exponent)),
            at("annihilator witness", k));

    ComplexPtr q = share(random_complex(Z, rng, ComplexShape{0, 2, 2, false, 3, true}));
    ChainComplex padded = direct_sum(a, *cone(GradedMap::identity(q)).complex);
    OrderClassReport r = classify_order_class(a, 2, 3), s = classify_order_class(padded, 2, 3);
    t.check(r.verdict == s.verdict && r.order == s.order, at("class invariant under padding", k));
    EquivalencePair eq = random_equivalence(Z, rng, ComplexShape{0, 2, 3, k % 2 == 0, 4, true});
    OrderClassReport ra = classify_order_class(*eq.a, 2, 3), rb = classify_order_class(*eq.b, 2, 3);
    t.check(ra.verdict == rb.verdict && ra.finite == rb.finite && ra.order == rb.order,
            at("class invariant under equivalence", k));
  }
  for (int k = 0; k < 50; ++k) {
    const auto levels = static_cast<std::size_t>(uniform(rng, 2, 3));
    ComplexPtr d = share(oracle::finite_complex(rng, 0, 2, 2, 6));
    D0Complex x = constant_d0(d, levels, S1);
    D0Shape late;
    late.levels = levels;
    D0Complex y = random_reduced_d0(Z, S1, rng, late);
    std::vector<ComplexPtr> lv{y.at(0), share(ChainComplex(Z))};
    for (std::size_t i = 1; i < y.level.size(); ++i) lv.push_back(y.level[i]);
    D0Complex g = D0Complex::zero(Z, S1, lv, y.stabilization + 1);
    for (std::size_t i = 0; i < y.lambda.size(); ++i) g.lambda[i + 1] = y.lambda[i].retarget(lv[i + 1], lv[i + 2]);
    for (std::size_t i = 1; i < y.alpha.size(); ++i) g.alpha[i + 1] = y.alpha[i].retarget(lv[i + 1], g.shifted[i]);
    t.check(g.valid() && is_late_shape(g) && is_constant_shape(x), at("shapes", k));
    VanishingReport v = hom_vanishing_F_to_G(x, g);
    t.check(v.vanishes && v.dimension == 0, at("morphism space is zero", k));
    t.check(hom_complex(x, g).total_dimension() == 0, at("hom complex is zero", k));
  }
}

struct Criterion {
  int id;
  const char* name;
  double limit;
  std::function<void(Tally&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "exact linear algebra", 10, exact_linear_algebra},
      {2, "chain core", 30, chain_core},
      {3, "nilpotency", 30, nilpotency},
      {4, "hom from point objects, B-locality", 60, point_objects},
      {5, "hom from cone objects, A-locality", 60, cone_objects},
      {6, "splitting calculus", 120, splitting_calculus},
      {7, "factorization", 60, factorization},
      {8, "orders and vanishing", 30, orders},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Tally t;
    std::string error;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(t);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = error.empty() && t.passed() && secs < c.limit;
    if (!ok) ++failed;
    std::printf("%s [%d] %-36s %7.2fs / %3.0fs  %zu checks", ok ? "PASS" : "FAIL", c.id, c.name, secs, c.limit,
                t.checks());
    if (!error.empty()) std::printf("  exception: %s", error.c_str());
    if (!t.passed()) std::printf("  %zu failed, first: %s", t.failures(), t.first_failure().c_str());
    if (secs >= c.limit) std::printf("  over time");
    std::printf("\n");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
