#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "dcx/chain.hpp"
#include "dcx/d0.hpp"
#include "dcx/diagram.hpp"

namespace dcx {

using Rng = std::mt19937_64;

long uniform(Rng& rng, long lo, long hi);

Matrix random_matrix(Ring ring, std::size_t rows, std::size_t cols, Rng& rng, long lo = -3, long hi = 3);

struct Unimodular {
  Matrix g;
  Matrix inverse;
};
/// A product of random elementary operations, with its inverse.
Unimodular random_unimodular(Ring ring, std::size_t n, Rng& rng);

/// Per-degree unimodular changes of basis for one complex.
struct BasisChange {
  ComplexPtr before;
  ComplexPtr after;
  std::vector<Unimodular> per_degree;  // indexed by n − lo
  /// g·f for a map into `before`, f·g⁻¹ for a map out of it.
  GradedMap push_target(const GradedMap& f) const;
  GradedMap push_source(const GradedMap& f) const;
  const Unimodular& at(int n) const;
};
BasisChange random_basis_change(const ComplexPtr& c, Rng& rng);

struct ComplexShape {
  int lo = 0;
  int hi = 2;
  std::size_t pieces = 3;
  bool acyclic = false;
  long max_multiplier = 4;
  bool scramble = true;
};
/// Direct sum of elementary pieces (a free generator, or R →(a) R one degree
/// down) followed by a random change of basis.
ChainComplex random_complex(Ring ring, Rng& rng, const ComplexShape& shape);

/// Flattened entries of every block of a graded map, degree by degree.
std::vector<Scalar> flatten(const GradedMap& f);
GradedMap unflatten(const GradedMap& shape, const std::vector<Scalar>& v);

/// Residual of an affine condition on a graded map; zero means satisfied.
using Residual = std::function<std::vector<Scalar>(const GradedMap&)>;
/// A random solution (particular solution plus a random kernel combination)
/// among maps shaped like `shape`, or nullopt if the condition is unsolvable.
std::optional<GradedMap> random_solution(const GradedMap& shape, const Residual& residual, Rng& rng,
                                         long spread = 2);

GradedMap random_graded_map(const ComplexPtr& a, const ComplexPtr& b, int degree, Rng& rng, long spread = 2);

/// Random chain map of the given degree (a random combination of a basis of cycles).
GradedMap random_chain_map(const ComplexPtr& a, const ComplexPtr& b, int degree, Rng& rng);

/// (A, B, f) where f is a homotopy equivalence: B is A plus a contractible
/// summand after a change of basis.
struct EquivalencePair {
  ComplexPtr a, b;
  GradedMap f;
};
EquivalencePair random_equivalence(Ring ring, Rng& rng, const ComplexShape& shape);

/// D1 complex on R^k in degree 0 with a loop that is a nilpotent matrix of the given index.
DComplex random_nilpotent_loop(Ring ring, std::size_t k, std::size_t index, Rng& rng);

struct D0Shape {
  std::size_t levels = 3;
  int lo = 0;
  int hi = 1;
  std::size_t pieces = 2;
  /// Levels 1..contractible_upto get acyclic kernel summands.
  std::size_t contractible_upto = 0;
  bool twist_kernels = true;
  bool scramble = true;
  /// Chance that the summand added to the kernel at a level ≥ 2 is acyclic.
  double acyclic_growth = 0.5;
  /// Levels ≥ 2 reuse the kernel of level 1, so every Ker(alpha_i) is one complex.
  bool constant_kernel = false;
};
/// Reduced D0 complex: B_i = K_i ⊕ B_{i−1} ⊗ S with alpha the projection and
/// lambda built from kernel inclusions K_i ↣ K_{i+1}, then scrambled.
D0Complex random_reduced_d0(Ring ring, const Bimodule& s, Rng& rng, const D0Shape& shape);

/// D0 complex in B_n: levels up to n from the reduced generator, then each
/// level adds a cone(id) summand with alpha extended by a random chain map.
D0Complex random_bn_d0(Ring ring, const Bimodule& s, std::size_t n, Rng& rng, const D0Shape& shape);

struct FactorizationInstance {
  D0Complex d;
  D0Complex c;
  D0Morphism f;
  std::size_t n = 0;
};
/// A test object A with contractible levels A_t = A_{t−1} ⊕ C_t (C_t contractible,
/// glued by a boundary) and a reduced target with constant kernel, both with
/// `levels` nonzero levels.
struct CalculusPair {
  D0Complex a;
  D0Complex b;
};
CalculusPair random_calculus_pair(Ring ring, const Bimodule& s, std::size_t levels, Rng& rng, int lo = 0,
                                  int hi = 2);

FactorizationInstance random_factorization_instance(Ring ring, Rng& rng, std::size_t n, const D0Shape& shape);

}  // namespace dcx
