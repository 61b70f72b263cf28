#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dcx/chain.hpp"
#include "dcx/d0.hpp"

namespace dcx {

/// Splittings for a test object A (levels A_0 ⊆ … ⊆ A_{L−1}, quotients C_t)
/// against a reduced target B whose kernels Ker(beta_t) are one complex K.
/// Index t here is D0 level t + 1.
struct SplittingData {
  Ring ring;
  Bimodule s;
  std::size_t levels = 0;  // L

  std::vector<ComplexPtr> a;        // A_t
  std::vector<GradedMap> lambda;    // A_t → A_{t+1}, t < L−1
  std::vector<GradedMap> alpha;     // A_t → A_{t−1} ⊗ S
  std::vector<ComplexPtr> quotient; // C_t, with C_0 = A_0
  std::vector<GradedMap> u;         // u[t]: A_{t+1} → A_t, u·lambda = 1
  std::vector<GradedMap> v;         // v[t]: C_t → A_t
  std::vector<GradedMap> pi;        // pi[t]: A_t → C_t
  std::vector<GradedMap> phi;       // phi[t]: C_t → A_{t−1}, degree −1; phi[0] unused

  ComplexPtr kernel;                // K = B_0
  std::vector<ComplexPtr> b;        // B_t
  std::vector<GradedMap> mu;        // B_t → B_{t+1}
  std::vector<GradedMap> beta;      // B_t → B_{t−1} ⊗ S
  std::vector<GradedMap> j;         // K → B_t
  std::vector<GradedMap> theta;     // B_t → K
  std::vector<GradedMap> sigma;     // sigma[t]: B_{t−1} ⊗ S → B_t; sigma[0] unused
  std::vector<GradedMap> delta;     // delta[t]: B_t ⊗ S → K, degree −1, t < L−1

  /// T_p: K ⊗ S^{p+1} → K for p ≤ L−2.
  std::vector<GradedMap> t_ops;

  Bimodule power(std::size_t m) const;
  ComplexPtr tensored_power(const ComplexPtr& c, std::size_t m) const;
  /// f ⊗ S^m between the tensored source and target.
  GradedMap tensored_power(const GradedMap& f, std::size_t m) const;
};

/// Throws PreconditionError when a lambda of `a` is not a cofibration, an alpha
/// of `b` is not split surjective, or the kernels of b do not form one complex.
SplittingData derive_splittings(const D0Complex& a, const D0Complex& b);

struct IdentityCheck {
  std::string name;
  bool holds = true;
  std::optional<std::size_t> failing_level;
};
/// Split exactness, compatibility, the four differential formulas and the
/// chain-map conditions on every structure map and boundary.
std::vector<IdentityCheck> check_identities(const SplittingData& s);

/// T_p, or the zero map beyond the available levels.
GradedMap t_operator(const SplittingData& s, std::size_t p);
/// Σ_{i+j=p−1} T_i ∘ (T_j ⊗ S^{i+1}).
GradedMap t_products(const SplittingData& s, std::size_t p);
bool check_t_relation(const SplittingData& s, std::size_t p);

/// A = A_{L−1} with its graded identification ⊕ C_t ≅ A.
struct TotalSpace {
  ComplexPtr complex;
  std::vector<GradedMap> inclusion;   // A_t → A
  std::vector<GradedMap> coordinate;  // A → C_t, the rows of P⁻¹
  GradedMap alpha;                    // A → A ⊗ S
  std::vector<GradedMap> alpha_power; // alpha_power[m]: A → A ⊗ S^m, m ≤ L
  std::optional<GradedMap> contraction;
  /// k(A_t) ⊆ A_t for every t.
  bool filtered = false;
};
TotalSpace total_space(const SplittingData& s);
/// A contraction of an acyclic complex; throws PreconditionError otherwise.
GradedMap find_total_contraction(const ComplexPtr& a);

/// f̂_n = Σ_k σ_n…σ_{k+1} j_k F λ_k^∞ α_{k+1}…α_n.
std::vector<GradedMap> fhat_from_F(const SplittingData& s, const TotalSpace& t, const GradedMap& f);
/// The inductive formula f̂_{n+1} = j θ f̂_n u_n + σ (f̂_n ⊗ S) α_{n+1} + j f_{n+1} π_{n+1},
/// with f̂_0 = j_0 F λ_0^∞.
bool check_fhat_recursion(const SplittingData& s, const TotalSpace& t, const GradedMap& f,
                          const std::vector<GradedMap>& fhat);
/// F from its levels: f_n = θ_n f̂_n v_n and F = Σ f_n·coordinate_n.
GradedMap F_from_fhat(const SplittingData& s, const TotalSpace& t, const std::vector<GradedMap>& fhat);

/// Levels as a morphism of the D0 complexes (level 0 is zero) and back.
D0Morphism to_d0_morphism(const SplittingData& s, const D0Complex& a, const D0Complex& b,
                          const std::vector<GradedMap>& fhat);
std::vector<GradedMap> from_d0_morphism(const SplittingData& s, const D0Morphism& f);

/// δF = dF − Σ_i T_i (F ⊗ S^{i+1}) α^{i+1}.
GradedMap delta_differential(const SplittingData& s, const TotalSpace& t, const GradedMap& f);

/// Sign of the p-th term of the inversion series for deg F = q.
int inversion_sign(std::size_t p, int q);

struct Inversion {
  GradedMap g;
  std::vector<GradedMap> terms;  // X_p before the sign
  bool filtered = false;
};
/// G = Σ_p (−1)^{(p+1)q} X_p with X_0 = F k and X_p = Σ_i T_i (X_{p−1} ⊗ S^{i+1}) α^{i+1} k.
/// Throws PreconditionError if δF ≠ 0 or A has no contraction; verifies δG = F.
Inversion invert_homotopy(const SplittingData& s, const TotalSpace& t, const GradedMap& f);
/// The same sum expanded over tuples (i_1, …, i_p) with Σ (i_w + 1) ≤ L − 1.
/// Requires a filtered contraction.
GradedMap invert_by_tuples(const SplittingData& s, const TotalSpace& t, const GradedMap& f);

}  // namespace dcx
