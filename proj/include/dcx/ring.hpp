#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace dcx {

/// Every matrix entry is stored as an exact rational; the owning ring decides
/// which rationals are legal and how they are reduced.
using Scalar = mpq_class;

enum class RingKind { Integers, Rationals, IntegersMod };

/// One of Z, Q or Z/m (m >= 2).
class Ring {
 public:
  constexpr Ring() = default;

  static Ring integers() { return Ring(RingKind::Integers, 0); }
  static Ring rationals() { return Ring(RingKind::Rationals, 0); }
  static Ring integers_mod(long modulus);

  /// Parses "Z", "Q" or "Z/<m>".
  static Ring parse(std::string_view text);

  RingKind kind() const { return kind_; }
  long modulus() const { return modulus_; }
  bool is_field() const;
  bool is_integers() const { return kind_ == RingKind::Integers; }
  bool is_rationals() const { return kind_ == RingKind::Rationals; }
  bool is_mod() const { return kind_ == RingKind::IntegersMod; }

  /// Brings a value into canonical form for this ring; throws ShapeError if the
  /// value is not an element (e.g. 1/2 over Z).
  void normalize(Scalar& x) const;
  Scalar element(const Scalar& x) const {
    Scalar y = x;
    normalize(y);
    return y;
  }
  bool is_unit(const Scalar& x) const;
  /// Multiplicative inverse of a unit.
  Scalar inverse(const Scalar& x) const;

  std::string name() const;

  friend bool operator==(const Ring&, const Ring&) = default;

 private:
  constexpr Ring(RingKind kind, long modulus) : kind_(kind), modulus_(modulus) {}

  RingKind kind_ = RingKind::Integers;
  long modulus_ = 0;
};

}  // namespace dcx
