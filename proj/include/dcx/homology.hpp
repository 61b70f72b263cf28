#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

#include "dcx/chain.hpp"

namespace dcx {

/// H_n ≅ R^betti ⊕ ⊕ R/torsion[i]. Over Z/m the torsion factors are proper
/// divisors of m, and free is false whenever any are present.
struct HomologyGroup {
  std::size_t betti = 0;
  std::vector<mpz_class> torsion;
  bool free = true;

  bool is_zero() const { return betti == 0 && torsion.empty(); }
  friend bool operator==(const HomologyGroup&, const HomologyGroup&) = default;
};

/// Homology in every degree of the support (degree → group).
std::map<int, HomologyGroup> homology(const ChainComplex& c);
HomologyGroup homology_at(const ChainComplex& c, int n);
bool is_acyclic(const ChainComplex& c);

/// "Z^2 + Z/4", "0", "Q", "(Z/6)^2 + Z/2".
std::string format_group(const HomologyGroup& h, const Ring& ring);

}  // namespace dcx
