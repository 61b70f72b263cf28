#pragma once

#include "dcx/chain.hpp"

namespace dcx {

/// C(f)_n = A_{n-1} ⊕ B_n with ∂ = [[−∂A, 0], [−f, ∂B]].
struct Cone {
  ComplexPtr complex;
  GradedMap inclusion;   // B → C(f), b ↦ (0, b)
  GradedMap projection;  // C(f) → A, degree −1, (a, b) ↦ a
};
Cone cone(const GradedMap& f);

/// T(f)_n = A_n ⊕ A_{n-1} ⊕ B_n, ∂(a, a', b) = (∂a + a', −∂a', −f·a' + ∂b).
struct Cylinder {
  ComplexPtr complex;
  GradedMap j1;        // A ↣ T(f)
  GradedMap j2;        // B ↣ T(f)
  GradedMap p;         // T(f) ↠ B, p∘j2 = id, p∘j1 = f
  GradedMap quotient;  // T(f) ↠ C(f), kernel j1(A)
  ComplexPtr cone;
};
Cylinder cylinder(const GradedMap& f);

/// (sC)_n = C_{n-1} with differential −∂.
ChainComplex suspension(const ChainComplex& c);
/// (s⁻¹C)_n = C_{n+1} with differential −∂.
ChainComplex desuspension(const ChainComplex& c);
/// Shift by k (k > 0 suspends), with sign (−1)^k on the differential.
ChainComplex shift(const ChainComplex& c, int k);

struct DirectSum {
  ComplexPtr complex;
  GradedMap in1, in2, pr1, pr2;
};
DirectSum direct_sum(const ComplexPtr& a, const ComplexPtr& b);
ChainComplex direct_sum(const ChainComplex& a, const ChainComplex& b);
/// f ⊕ g between the given sums.
GradedMap direct_sum_map(const GradedMap& f, const GradedMap& g, ComplexPtr source, ComplexPtr target);

/// Cofibration f: A ↣ Y presented through a degreewise splitting.
struct CofibrationSplit {
  std::vector<Matrix> retraction;  // r_n with r_n f_n = 1
  std::vector<Matrix> complement;  // c_n spanning a complement
  std::vector<Matrix> projection;  // P_n with P_n c_n = 1, P_n f_n = 0
  int lo = 0;
};
/// nullopt unless every block of f is split injective with free cokernel.
std::optional<CofibrationSplit> split_cofibration(const GradedMap& f);

/// W = Y ⊔_A Z for a cofibration f: A ↣ Y and any g: A → Z, presented as
/// W_n = Z_n ⊕ Q_n with Q the chosen complement of f.
struct Pushout {
  ComplexPtr complex;
  GradedMap from_y;  // Y → W
  GradedMap from_z;  // Z → W
  GradedMap f, g;
  CofibrationSplit split;
};
Pushout pushout_along_cofibration(const GradedMap& f, const GradedMap& g);
/// The unique u: W → X with u∘from_y = hy and u∘from_z = hz, given hy∘f = hz∘g.
GradedMap pushout_factor(const Pushout& w, const GradedMap& hy, const GradedMap& hz);

/// 0 → X →i Y →p Z → 0, degree-0 chain maps.
struct ShortExactSequence {
  GradedMap i;
  GradedMap p;
};
/// True iff i is injective, p surjective, p∘i = 0 and im i = ker p in each degree.
bool is_short_exact(const ShortExactSequence& ses);

/// The rotated sequence 0 → s⁻¹Z → X ⊕ E → Y → 0 with E contractible.
struct RotatedSes {
  ShortExactSequence ses;
  ComplexPtr contractible;       // E
  GradedMap connecting;          // s⁻¹Z → X, ρ(∂t − t∂)
  GradedMap section;             // t: Z → Y (degree 0, not a chain map)
};
RotatedSes rotate_ses(const ShortExactSequence& ses);

/// E = ⊕ cone(id) on free modules of Y's ranks together with a degreewise
/// surjective chain map E ↠ Y.
struct AcyclicCover {
  ComplexPtr complex;
  GradedMap epi;
};
AcyclicCover acyclic_cover(const ComplexPtr& y);

}  // namespace dcx
