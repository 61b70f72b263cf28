#pragma once

#include <gmpxx.h>

#include <optional>
#include <utility>
#include <vector>

#include "dcx/chain.hpp"
#include "dcx/d0.hpp"

namespace dcx {

/// Order of the homology of a complex over Z: the product of every torsion
/// invariant factor in every degree, when no degree has a free part.
struct OrderReport {
  bool finite = false;
  mpz_class order = 0;  // meaningful only when finite
};
OrderReport homology_order(const ChainComplex& c);

/// lcm of all torsion invariant factors (1 for an acyclic complex); nullopt if
/// some Betti number is nonzero.
std::optional<mpz_class> homology_exponent(const ChainComplex& c);

struct AnnihilatorReport {
  std::optional<mpz_class> exponent;  // least N with N·id ≃ 0
  std::optional<GradedMap> witness;   // H with dH + Hd = N·id
  std::vector<mpz_class> tried;       // candidates rejected before the answer
};
/// Searches the divisors of e² (e the homology exponent) in increasing order.
AnnihilatorReport annihilator_exponent(const ChainComplex& c);

/// Prime factorization by trial division, primes ascending.
std::vector<std::pair<mpz_class, unsigned>> factorize(mpz_class n);

enum class OrderClass { InA, InB, Intersection, Neither };
const char* to_string(OrderClass c);

struct OrderClassReport {
  OrderClass verdict = OrderClass::Neither;
  bool finite = false;
  mpz_class order = 0;
  std::vector<std::pair<mpz_class, unsigned>> factors;
};
/// InA for order p^m (m ≥ 1), InB for q^n (n ≥ 1), Intersection for order 1.
/// Throws PreconditionError unless p and q are distinct primes.
OrderClassReport classify_order_class(const ChainComplex& c, const mpz_class& p, const mpz_class& q);

/// c ⊗ Q acyclic, i.e. every Betti number vanishes.
bool rational_acyclicity(const ChainComplex& c);

/// (0 → D = D = …) with identity lambdas and zero alphas, `levels` levels above 0.
D0Complex constant_d0(const ComplexPtr& d, std::size_t levels, const Bimodule& s);
bool is_constant_shape(const D0Complex& x);
/// Levels 0 and 1 are zero.
bool is_late_shape(const D0Complex& y);

struct VanishingReport {
  bool vanishes = false;
  std::size_t dimension = 0;  // total dimension of the morphism space
  std::vector<ConstraintRank> certificate;
};
/// The morphism space from a constant-shape object to a late-shape object.
/// Throws PreconditionError on inputs of other shapes.
VanishingReport hom_vanishing_F_to_G(const D0Complex& x, const D0Complex& y);

}  // namespace dcx
