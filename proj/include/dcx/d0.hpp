#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dcx/chain.hpp"
#include "dcx/diagram.hpp"
#include "dcx/homology.hpp"

namespace dcx {

/// Tower 0 = B_0 ↣ B_1 ↣ … ↣ B_N with alpha_i: B_i → B_{i−1} ⊗ S, a diagram
/// truncated at N. Reducedness and locality only look at levels ≤ N; the
/// accessors below extend it by B_N, lambda = id and
/// alpha_{i+1} = (lambda_{i−1} ⊗ S)·alpha_i when two objects of different
/// heights meet.
struct D0Complex {
  Ring ring;
  Bimodule s;
  std::size_t stabilization = 0;
  std::vector<ComplexPtr> level;   // level[0] is the zero complex
  std::vector<ComplexPtr> shifted; // level[i] ⊗ S
  std::vector<GradedMap> lambda;   // lambda[i]: level[i] → level[i+1], i < N
  std::vector<GradedMap> alpha;    // alpha[i]: level[i] → shifted[i−1], 1 ≤ i ≤ N; alpha[0] unused

  /// Levels with zero structure maps; levels[0] must be zero.
  static D0Complex zero(Ring ring, Bimodule s, std::vector<ComplexPtr> levels, std::size_t stabilization);

  std::size_t top() const { return level.size() - 1; }
  /// Level i, for any i ≥ 0 (levels above N repeat B_N).
  const ComplexPtr& at(std::size_t i) const { return level[std::min(i, top())]; }
  const ComplexPtr& at_shifted(std::size_t i) const { return shifted[std::min(i, top())]; }
  /// lambda_i for any i (identity above N).
  GradedMap lambda_at(std::size_t i) const;
  /// alpha_i for any i ≥ 1, using the extension rule above N.
  GradedMap alpha_at(std::size_t i) const;

  std::vector<std::string> problems() const;
  bool valid() const { return problems().empty(); }

  /// The same data as a complex over the truncated D0 diagram.
  DComplex to_dcomplex() const;
};

/// Composite C_a → C_b of lambdas (a ≤ b).
GradedMap lambda_composite(const D0Complex& x, std::size_t a, std::size_t b);

struct ClassMembership {
  bool in_bn = false;
  bool in_an = false;
  bool reduced = false;
  /// First i ≥ n whose lambda_i is not a homology equivalence.
  std::optional<std::size_t> failing_lambda;
  /// First alpha_i that is not degreewise surjective.
  std::optional<std::size_t> failing_alpha;
  std::optional<GradedMap> contraction;  // of B_n, when in_an
};
ClassMembership classify(const D0Complex& x, std::size_t n);
bool is_reduced(const D0Complex& x);

enum class TestObjectKind { Point, ConePoint };
/// Point: g_m, zeros below level m and R in degree 0 from m on.
/// ConePoint: R at level m and cone(id_R) from m+1 on, lambda_m the inclusion
/// of the degree-0 generator; the degree-1 generator e has ∂e = −1.
D0Complex test_object(TestObjectKind kind, std::size_t m, std::size_t levels, Ring ring, const Bimodule& s);

/// Ker(alpha_m) as a complex, with its inclusion into level m.
struct KernelComplex {
  ComplexPtr complex;
  GradedMap inclusion;
};
/// Throws PreconditionError if a kernel is not free.
KernelComplex kernel_complex(const D0Complex& x, std::size_t m);

/// Graded D0 morphisms X → Y of degree p, one block family per level 0..M.
struct D0Morphism {
  int degree = 0;
  std::vector<GradedMap> level;  // level[k]: X_k → Y_k
};

/// Hom(X, Y) as a chain complex. In degree p the morphisms are the columns of
/// basis.at(p) in the coordinates given by `vectorize`.
struct HomComplex {
  ComplexPtr complex;
  std::map<int, Matrix> basis;
  std::size_t levels = 0;  // levels 0..levels−1 carry independent data
  std::shared_ptr<const D0Complex> x;
  std::shared_ptr<const D0Complex> y;

  std::vector<Scalar> vectorize(const D0Morphism& f) const;
  D0Morphism unvectorize(int p, const std::vector<Scalar>& v) const;
  /// Morphism given by the coordinates c in the basis of degree p.
  D0Morphism element(int p, const Matrix& c) const;
  /// Coordinates of a morphism in the basis; nullopt if it is not one.
  std::optional<Matrix> coordinates(const D0Morphism& f) const;
  std::size_t dimension(int p) const;
  std::size_t total_dimension() const;
};

/// Builds the space of D0 morphisms and its Leibniz differential.
HomComplex hom_complex(const D0Complex& x, const D0Complex& y);
/// Unknowns and rank of the linear constraints cutting out degree-p morphisms;
/// the degree-p space is zero iff rank = unknowns.
struct ConstraintRank {
  int degree = 0;
  std::size_t unknowns = 0;
  std::size_t rank = 0;
};
std::vector<ConstraintRank> hom_constraint_ranks(const D0Complex& x, const D0Complex& y);

/// Levelwise Leibniz differential of a morphism.
D0Morphism differential(const D0Morphism& f);
bool is_d0_morphism(const D0Complex& x, const D0Complex& y, const D0Morphism& f);
D0Morphism compose(const D0Morphism& g, const D0Morphism& f);

/// Hom(g_m, C) ≅ Ker(alpha_m) through f ↦ f_m(1).
struct PointHom {
  HomComplex hom;
  KernelComplex kernel;
  GradedMap iso;  // hom.complex → kernel.complex
  bool iso_is_chain_isomorphism = false;
};
PointHom point_hom(const D0Complex& c, std::size_t m);

/// 0 → K' →i Hom(g_m^cone, C) →π Ker(alpha_m) → 0 with K'_p = Ker(alpha_{m+1})_{p+1}.
struct ConeHomSes {
  HomComplex hom;
  KernelComplex kernel_m;
  KernelComplex kernel_next;
  ComplexPtr shifted_kernel;  // K'
  GradedMap i;
  GradedMap pi;
  /// Connecting map Ker(alpha_m) → K' of degree −1 computed from a section of π.
  GradedMap connecting;
  /// lambda restricted to kernels: Ker(alpha_m) → Ker(alpha_{m+1}).
  GradedMap lambda_on_kernels;
  bool i_chain = false, pi_chain = false, exact = false;
  /// connecting = (−1)^p · lambda in degree p, as maps on kernels.
  bool connecting_matches_lambda = false;
};
ConeHomSes cone_point_hom(const D0Complex& c, std::size_t m);

struct LocalityVerdict {
  bool local = false;
  std::optional<std::size_t> failing_index;
  std::map<int, HomologyGroup> failing_homology;
  std::vector<GradedMap> contractions;
};
/// Local iff levels 0..n are contractible. Requires a reduced input.
LocalityVerdict check_bn_local(const D0Complex& c, std::size_t n);

enum class RangeBound { Strict, Inclusive };
enum class LocalityRoute { Kernels, ExactSquares };
/// Local iff cone(lambda: Ker alpha_m → Ker alpha_{m+1}) is acyclic for every m
/// in range (strict: 1 ≤ m < n, inclusive: 1 ≤ m ≤ n). The range must stay
/// below the top: n ≤ N (strict) or n < N (inclusive). The exact-square route
/// tests the cone of the induced map cone(lambda_m) → cone(lambda_{m−1} ⊗ S).
LocalityVerdict check_an_local(const D0Complex& c, std::size_t n, RangeBound bound,
                               LocalityRoute route = LocalityRoute::Kernels);

/// D → E → C with E contractible at every level, built from pushouts.
struct Factorization {
  D0Complex e;
  D0Morphism into_e;  // D → E
  D0Morphism onto_c;  // E → C
  std::vector<GradedMap> contractions;
};
/// f: D → C of degree 0 with D in B_n and C_i contractible for i ≤ n.
Factorization factor_through_acyclic(const D0Complex& d, const D0Complex& c, const D0Morphism& f, std::size_t n);

}  // namespace dcx
