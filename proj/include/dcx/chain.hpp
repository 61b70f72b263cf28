#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dcx/matrix.hpp"

namespace dcx {

/// Bounded complex of free modules. Degrees outside [lo, hi] have rank 0.
/// d(n) is the differential C_n → C_{n-1}, shape rank(n-1) × rank(n).
class ChainComplex {
 public:
  ChainComplex() = default;
  explicit ChainComplex(Ring ring) : ring_(ring), empty_(ring, 0, 0) {}
  /// Zero differentials; ranks[k] is the rank in degree lo + k.
  ChainComplex(Ring ring, int lo, std::vector<std::size_t> ranks);

  /// Complex with the given ranks on [lo, hi] and zero differentials.
  static ChainComplex with_ranks(Ring ring, int lo, std::vector<std::size_t> ranks) {
    return ChainComplex(ring, lo, std::move(ranks));
  }

  const Ring& ring() const { return ring_; }
  int lo() const { return lo_; }
  int hi() const { return lo_ + static_cast<int>(ranks_.size()) - 1; }
  bool empty() const { return ranks_.empty(); }
  std::size_t rank(int n) const;
  std::size_t total_rank() const;
  bool is_zero() const { return total_rank() == 0; }

  const Matrix& d(int n) const;
  void set_d(int n, Matrix m);

  /// Degrees n with d(n-1)·d(n) ≠ 0; empty iff this is a complex.
  std::vector<int> invalid_degrees() const;
  bool valid() const { return invalid_degrees().empty(); }

  /// Same ring and ranks in every degree.
  bool same_shape(const ChainComplex& other) const;
  friend bool operator==(const ChainComplex& a, const ChainComplex& b);

 private:
  Ring ring_;
  int lo_ = 0;
  std::vector<std::size_t> ranks_;
  // d_[k] is the differential out of degree lo_ + k, for k in [0, size], so the
  // boundary blocks rank(hi)×0 and 0×rank(lo) are stored too.
  std::vector<Matrix> d_;
  Matrix empty_;
};

using ComplexPtr = std::shared_ptr<const ChainComplex>;

inline ComplexPtr share(ChainComplex c) { return std::make_shared<const ChainComplex>(std::move(c)); }

/// Family of matrices C_n → D_{n+degree}. Composition is g * f = g∘f.
class GradedMap {
 public:
  GradedMap() = default;
  /// The zero map of the given degree.
  GradedMap(ComplexPtr source, ComplexPtr target, int degree);

  static GradedMap identity(const ComplexPtr& c);

  const ComplexPtr& source() const { return source_; }
  const ComplexPtr& target() const { return target_; }
  int degree() const { return degree_; }
  const Ring& ring() const { return source_->ring(); }

  /// Block leaving source degree n (zero matrix of the right shape outside the support).
  Matrix at(int n) const;
  void set(int n, Matrix m);
  void add_at(int n, const Matrix& m);

  bool is_zero() const;
  GradedMap scaled(const Scalar& factor) const;

  GradedMap& operator+=(const GradedMap& other);
  GradedMap& operator-=(const GradedMap& other);
  friend GradedMap operator+(GradedMap a, const GradedMap& b) { return a += b; }
  friend GradedMap operator-(GradedMap a, const GradedMap& b) { return a -= b; }
  friend GradedMap operator-(const GradedMap& a) { return a.scaled(-1); }
  friend GradedMap operator*(const GradedMap& g, const GradedMap& f);
  friend bool operator==(const GradedMap& a, const GradedMap& b);

  /// Same blocks, reattached to complexes of identical shape.
  GradedMap retarget(ComplexPtr source, ComplexPtr target) const;

  std::string str() const;

 private:
  ComplexPtr source_;
  ComplexPtr target_;
  int degree_ = 0;
  std::vector<Matrix> blocks_;  // indexed by n - source.lo()
};

/// Leibniz differential d∘f − (−1)^deg f∘d.
GradedMap differential(const GradedMap& f);
bool is_chain_map(const GradedMap& f);
/// True iff d∘h + h∘d = f − g for a degree +1 map h.
bool is_homotopy(const GradedMap& h, const GradedMap& f, const GradedMap& g);

/// Predicate on the unknown entries of a homotopy block: (source degree, row, col).
using EntryMask = std::function<bool(int, std::size_t, std::size_t)>;

/// Some h of degree deg f + 1 with differential(h) = f, or nullopt. Throws
/// PreconditionError if f is not a cycle. With a mask, only the permitted entries
/// of h may be nonzero.
std::optional<GradedMap> find_null_homotopy(const GradedMap& f);
std::optional<GradedMap> find_null_homotopy(const GradedMap& f, const EntryMask& mask);

/// A contraction k (dk + kd = id) when one exists.
std::optional<GradedMap> find_contraction(const ComplexPtr& c);
bool is_contractible(const ComplexPtr& c);

/// Free bimodule of finite rank. Generator g acts on coefficients by
/// x ↦ twist[g]·x, an idempotent multiplier (a ring endomorphism of Z/m).
struct Bimodule {
  Ring base;
  std::size_t rank = 1;
  std::vector<Scalar> twist;

  static Bimodule free(Ring base, std::size_t rank);
  static Bimodule twisted(Ring base, std::vector<Scalar> twist);

  Scalar twist_of(std::size_t g) const { return twist.empty() ? Scalar(1) : twist[g]; }
  bool is_identity_twist() const;
  /// Twist acts bijectively (all multipliers are 1).
  bool is_automorphism() const { return is_identity_twist(); }
  /// Throws PreconditionError unless every multiplier is an idempotent element.
  void validate() const;
  std::string str() const;

  friend bool operator==(const Bimodule& a, const Bimodule& b);
};

/// (X ⊗ inner) ⊗ outer as a single bimodule: generator (go, gi) has index
/// go·inner.rank + gi.
Bimodule tensor_bimodules(const Bimodule& outer, const Bimodule& inner);
Bimodule bimodule_power(const Bimodule& s, std::size_t k);

/// C ⊗ S: generator g contributes a copy of C twisted by twist[g]; index g·rank(n) + i.
ChainComplex tensor_with_bimodule(const ChainComplex& c, const Bimodule& s);
/// f ⊗ S between the tensored complexes.
GradedMap tensor_map(const GradedMap& f, const Bimodule& s, ComplexPtr source, ComplexPtr target);

}  // namespace dcx
