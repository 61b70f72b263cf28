#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <vector>

#include "dcx/matrix.hpp"

namespace dcx {

/// d = p·a·q with p, q unimodular and d diagonal, d₁ | d₂ | … ≥ 0.
struct SmithForm {
  Matrix d;
  Matrix p;
  Matrix q;
  std::size_t rank = 0;
  /// The nonzero diagonal entries d₁..d_rank.
  std::vector<mpz_class> factors;
};

/// Smith normal form over Z. Pivot rule: smallest nonzero absolute value,
/// ties broken by (row, col), so the output is reproducible.
SmithForm smith_normal_form(const Matrix& a);

/// Nonzero invariant factors only (no transforms); a must be over Z.
std::vector<mpz_class> invariant_factors(const Matrix& a);

/// Rank over Z or over a field. Throws for Z/m with m composite.
std::size_t rank(const Matrix& a);

/// Some x with a·x = b, or nullopt when the system has no solution over the
/// ring (Diophantine over Z, elimination over Q, lifting to Z over Z/m).
std::optional<Matrix> solve_linear(const Matrix& a, const Matrix& b);

/// Columns form a basis of ker(a). Over Z/m throws NonFreeKernel when the
/// kernel is not a free module.
Matrix kernel_basis(const Matrix& a);

/// A left inverse r (r·a = identity) if one exists.
std::optional<Matrix> is_split_injection(const Matrix& a);

/// A right inverse s (a·s = identity) if one exists.
std::optional<Matrix> is_split_surjection(const Matrix& a);

std::optional<Matrix> inverse(const Matrix& a);

/// Decomposition of a split injection a: Rᵏ → Rⁿ as Rⁿ = im(a) ⊕ im(complement)
/// with retraction·a = 1, projection·complement = 1, retraction·complement = 0,
/// projection·a = 0 and a·retraction + complement·projection = 1.
struct Splitting {
  Matrix retraction;
  Matrix complement;
  Matrix projection;
};

/// nullopt unless a is split injective with free cokernel.
std::optional<Splitting> split_injection(const Matrix& a);

/// Z only: a basis (as columns) of the lattice spanned by the columns of g.
Matrix lattice_basis(const Matrix& g);

}  // namespace dcx
