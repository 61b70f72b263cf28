#include "dcx/homology.hpp"

#include <sstream>

#include "dcx/error.hpp"
#include "dcx/linalg.hpp"

namespace dcx {

namespace {

HomologyGroup homology_mod(const ChainComplex& c, int n) {
  const Ring zz = Ring::integers();
  const std::size_t rn = c.rank(n);
  const mpz_class m(c.ring().modulus());
  // Cycles Z = {x : ∂x ≡ 0 mod m}, the projection of ker[∂ | m·I].
  const Matrix dn = c.d(n).over(zz);
  const std::size_t below = c.rank(n - 1);
  Matrix lifted = hstack(dn, Matrix::identity(zz, below).scaled(Scalar(m)));
  Matrix ker = kernel_basis(lifted);
  Matrix cycles = lattice_basis(ker.block(0, 0, rn, ker.cols()));
  // Boundaries plus m·Zⁿ.
  Matrix bounds = hstack(c.d(n + 1).over(zz), Matrix::identity(zz, rn).scaled(Scalar(m)));
  auto coords = solve_linear(cycles, bounds);
  if (!coords) throw Error("homology over " + c.ring().name() + ": boundaries escape the cycle lattice");
  HomologyGroup h;
  for (const auto& d : invariant_factors(*coords)) {
    if (d == 1) continue;
    if (d == m)
      ++h.betti;
    else
      h.torsion.push_back(d);
  }
  h.free = h.torsion.empty();
  return h;
}

}  // namespace

HomologyGroup homology_at(const ChainComplex& c, int n) {
  HomologyGroup h;
  const std::size_t rn = c.rank(n);
  if (rn == 0) return h;
  const Ring& ring = c.ring();
  if (ring.is_mod()) return homology_mod(c, n);
  const std::size_t r_out = rank(c.d(n));
  if (ring.is_integers()) {
    auto factors = invariant_factors(c.d(n + 1));
    h.betti = rn - r_out - factors.size();
    for (const auto& d : factors)
      if (d != 1) h.torsion.push_back(d);
  } else {
    h.betti = rn - r_out - rank(c.d(n + 1));
  }
  return h;
}

std::map<int, HomologyGroup> homology(const ChainComplex& c) {
  std::map<int, HomologyGroup> out;
  if (c.empty()) return out;
  for (int n = c.lo(); n <= c.hi(); ++n) out[n] = homology_at(c, n);
  return out;
}

bool is_acyclic(const ChainComplex& c) {
  if (c.empty()) return true;
  for (int n = c.lo(); n <= c.hi(); ++n)
    if (!homology_at(c, n).is_zero()) return false;
  return true;
}

std::string format_group(const HomologyGroup& h, const Ring& ring) {
  if (h.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  if (h.betti > 0) {
    std::string base = ring.name();
    if (ring.is_mod() && h.betti > 1) base = "(" + base + ")";
    os << base;
    if (h.betti > 1) os << "^" << h.betti;
    first = false;
  }
  for (const auto& d : h.torsion) {
    if (!first) os << " + ";
    os << "Z/" << d.get_str();
    first = false;
  }
  return os.str();
}

}  // namespace dcx
