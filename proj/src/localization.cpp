#include "dcx/localization.hpp"

#include <numeric>

#include "dcx/error.hpp"
#include "dcx/homology.hpp"

namespace dcx {

namespace {

void require_integers(const ChainComplex& c, const char* what) {
  if (!c.ring().is_integers()) throw PreconditionError(std::string(what) + ": complex must be over Z");
  if (!c.valid()) throw PreconditionError(std::string(what) + ": d∘d ≠ 0");
}

}  // namespace

OrderReport homology_order(const ChainComplex& c) {
  require_integers(c, "order");
  OrderReport r{true, 1};
  for (const auto& [n, h] : homology(c)) {
    if (h.betti > 0) return OrderReport{false, 0};
    for (const auto& t : h.torsion) r.order *= t;
  }
  return r;
}

std::optional<mpz_class> homology_exponent(const ChainComplex& c) {
  require_integers(c, "exponent");
  mpz_class e = 1;
  for (const auto& [n, h] : homology(c)) {
    if (h.betti > 0) return std::nullopt;
    for (const auto& t : h.torsion) e = lcm(e, t);
  }
  return e;
}

AnnihilatorReport annihilator_exponent(const ChainComplex& c) {
  AnnihilatorReport r;
  auto e = homology_exponent(c);
  if (!e) return r;
  ComplexPtr cp = share(c);
  const mpz_class bound = *e * *e;
  for (mpz_class n = 1; n <= bound; ++n) {
    if (bound % n != 0) continue;
    GradedMap f = GradedMap::identity(cp).scaled(Scalar(n));
    if (auto h = find_null_homotopy(f)) {
      r.exponent = n;
      r.witness = *h;
      return r;
    }
    r.tried.push_back(n);
  }
  throw Error("annihilator: no divisor of e² annihilates the complex up to homotopy");
}

std::vector<std::pair<mpz_class, unsigned>> factorize(mpz_class n) {
  std::vector<std::pair<mpz_class, unsigned>> out;
  if (n < 0) n = -n;
  for (mpz_class p = 2; p * p <= n; ++p) {
    unsigned k = 0;
    while (n % p == 0) {
      n /= p;
      ++k;
    }
    if (k > 0) out.emplace_back(p, k);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

const char* to_string(OrderClass c) {
  switch (c) {
    case OrderClass::InA: return "in_A";
    case OrderClass::InB: return "in_B";
    case OrderClass::Intersection: return "intersection";
    case OrderClass::Neither: return "neither";
  }
  return "neither";
}

OrderClassReport classify_order_class(const ChainComplex& c, const mpz_class& p, const mpz_class& q) {
  if (p == q || mpz_probab_prime_p(p.get_mpz_t(), 25) == 0 || mpz_probab_prime_p(q.get_mpz_t(), 25) == 0)
    throw PreconditionError("order class: p and q must be distinct primes");
  OrderClassReport r;
  OrderReport o = homology_order(c);
  r.finite = o.finite;
  if (!o.finite) return r;
  r.order = o.order;
  r.factors = factorize(o.order);
  if (r.factors.empty()) r.verdict = OrderClass::Intersection;
  else if (r.factors.size() == 1 && r.factors[0].first == p) r.verdict = OrderClass::InA;
  else if (r.factors.size() == 1 && r.factors[0].first == q) r.verdict = OrderClass::InB;
  return r;
}

bool rational_acyclicity(const ChainComplex& c) {
  require_integers(c, "rational acyclicity");
  for (const auto& [n, h] : homology(c))
    if (h.betti > 0) return false;
  return true;
}

D0Complex constant_d0(const ComplexPtr& d, std::size_t levels, const Bimodule& s) {
  if (levels < 1) throw PreconditionError("constant D0 complex needs a level above 0");
  std::vector<ComplexPtr> lv{share(ChainComplex(d->ring()))};
  for (std::size_t i = 1; i <= levels; ++i) lv.push_back(d);
  D0Complex x = D0Complex::zero(d->ring(), s, lv, 1);
  for (std::size_t i = 1; i < levels; ++i) x.lambda[i] = GradedMap::identity(d);
  return x;
}

bool is_constant_shape(const D0Complex& x) {
  if (!x.problems().empty() || x.top() < 1) return false;
  for (std::size_t i = 1; i < x.top(); ++i)
    if (!x.level[i]->same_shape(*x.level[i + 1]) || !(x.lambda[i] == GradedMap::identity(x.level[i]))) return false;
  for (std::size_t i = 1; i <= x.top(); ++i)
    if (!x.alpha[i].is_zero()) return false;
  return true;
}

bool is_late_shape(const D0Complex& y) {
  return y.problems().empty() && y.at(0)->is_zero() && y.at(1)->is_zero();
}

VanishingReport hom_vanishing_F_to_G(const D0Complex& x, const D0Complex& y) {
  if (!is_constant_shape(x)) throw PreconditionError("source is not of the shape (0 → B = B = …)");
  if (!is_late_shape(y)) throw PreconditionError("target is not of the shape (0 → 0 → B_2 → …)");
  VanishingReport r;
  r.certificate = hom_constraint_ranks(x, y);
  for (const auto& c : r.certificate) r.dimension += c.unknowns - c.rank;
  r.vanishes = r.dimension == 0;
  return r;
}

}  // namespace dcx
