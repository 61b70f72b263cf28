#include "dcx/ring.hpp"

#include <charconv>

#include "dcx/error.hpp"

namespace dcx {

Ring Ring::integers_mod(long modulus) {
  if (modulus < 2) throw ShapeError("Z/m requires m >= 2, got " + std::to_string(modulus));
  return Ring(RingKind::IntegersMod, modulus);
}

Ring Ring::parse(std::string_view text) {
  if (text == "Z") return integers();
  if (text == "Q") return rationals();
  if (text.size() > 2 && text.substr(0, 2) == "Z/") {
    long m = 0;
    auto digits = text.substr(2);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), m);
    if (ec == std::errc() && ptr == digits.data() + digits.size()) return integers_mod(m);
  }
  throw ParseError("unknown ring '" + std::string(text) + "' (expected Z, Q or Z/<m>)");
}

bool Ring::is_field() const {
  switch (kind_) {
    case RingKind::Integers:
      return false;
    case RingKind::Rationals:
      return true;
    case RingKind::IntegersMod:
      return mpz_probab_prime_p(mpz_class(modulus_).get_mpz_t(), 30) != 0;
  }
  return false;
}

void Ring::normalize(Scalar& x) const {
  if (kind_ == RingKind::Rationals) {
    x.canonicalize();
    return;
  }
  x.canonicalize();
  if (x.get_den() != 1) throw ShapeError("value " + x.get_str() + " is not an element of " + name());
  if (kind_ == RingKind::IntegersMod) {
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), x.get_num_mpz_t(), static_cast<unsigned long>(modulus_));
    x = r;
  }
}

bool Ring::is_unit(const Scalar& x) const {
  switch (kind_) {
    case RingKind::Integers:
      return x == 1 || x == -1;
    case RingKind::Rationals:
      return x != 0;
    case RingKind::IntegersMod: {
      mpz_class g;
      mpz_class m(modulus_);
      mpz_gcd(g.get_mpz_t(), x.get_num_mpz_t(), m.get_mpz_t());
      return g == 1;
    }
  }
  return false;
}

Scalar Ring::inverse(const Scalar& x) const {
  if (!is_unit(x)) throw PreconditionError(x.get_str() + " is not a unit of " + name());
  switch (kind_) {
    case RingKind::Integers:
      return x;
    case RingKind::Rationals:
      return Scalar(1) / x;
    case RingKind::IntegersMod: {
      mpz_class inv;
      mpz_class m(modulus_);
      mpz_invert(inv.get_mpz_t(), x.get_num_mpz_t(), m.get_mpz_t());
      return Scalar(inv);
    }
  }
  return x;
}

std::string Ring::name() const {
  switch (kind_) {
    case RingKind::Integers:
      return "Z";
    case RingKind::Rationals:
      return "Q";
    case RingKind::IntegersMod:
      return "Z/" + std::to_string(modulus_);
  }
  return "?";
}

}  // namespace dcx
