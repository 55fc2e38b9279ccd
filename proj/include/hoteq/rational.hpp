#pragma once
// Exact rational arithmetic (GMP-backed), extended positions with -inf/+inf
// sentinels, strict text parsing, and dyadic (k / 2^i) helpers.

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace hoteq {

using Rat = mpq_class;
using Int = mpz_class;

// Error for malformed textual input (rationals, instance files, profiles).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Build a canonical rational from machine integers.
Rat make_rat(long num, long den = 1);

// Strict parser for the on-disk rational format: `-?[0-9]+(/[1-9][0-9]*)?`,
// canonical only (lowest terms, no "/1", no leading zeros, no "-0").
// `where` names the offending field in error messages.
Rat rat_from_string(const std::string& text, const std::string& where = "rational");

// Canonical rendering: "a" for integers, "a/b" otherwise (b > 1, gcd(a,b)=1).
std::string rat_to_string(const Rat& v);

// Least i >= 0 such that v = k / 2^i for an integer k; nullopt when the
// (canonical) denominator is not a power of two.
std::optional<int> dyadic_level(const Rat& v);

// floor(v) as an arbitrary-precision integer.
Int floor_int(const Rat& v);
// ceil(v) as an arbitrary-precision integer.
Int ceil_int(const Rat& v);

// Position on the extended line: -inf, a finite rational, or +inf.
class XPos {
 public:
  XPos() : kind_(Kind::Fin), v_(0) {}
  XPos(const Rat& v) : kind_(Kind::Fin), v_(v) {}  // NOLINT: implicit by design
  static XPos neg_inf() { return XPos(Kind::Neg); }
  static XPos pos_inf() { return XPos(Kind::Pos); }

  bool is_finite() const { return kind_ == Kind::Fin; }
  bool is_neg_inf() const { return kind_ == Kind::Neg; }
  bool is_pos_inf() const { return kind_ == Kind::Pos; }

  // Finite value; only valid when is_finite().
  const Rat& value() const {
    if (!is_finite()) throw std::logic_error("XPos::value on infinite position");
    return v_;
  }

  friend bool operator==(const XPos& a, const XPos& b) {
    if (a.kind_ != b.kind_) return false;
    return a.kind_ != Kind::Fin || a.v_ == b.v_;
  }
  friend bool operator!=(const XPos& a, const XPos& b) { return !(a == b); }
  friend bool operator<(const XPos& a, const XPos& b) {
    if (a.kind_ == Kind::Neg) return b.kind_ != Kind::Neg;
    if (a.kind_ == Kind::Pos) return false;
    if (b.kind_ == Kind::Neg) return false;
    if (b.kind_ == Kind::Pos) return true;
    return a.v_ < b.v_;
  }
  friend bool operator<=(const XPos& a, const XPos& b) { return a < b || a == b; }
  friend bool operator>(const XPos& a, const XPos& b) { return b < a; }
  friend bool operator>=(const XPos& a, const XPos& b) { return b <= a; }

  // "-inf", "+inf", or the canonical rational text.
  std::string to_string() const;

 private:
  enum class Kind { Neg, Fin, Pos };
  explicit XPos(Kind k) : kind_(k), v_(0) {}
  Kind kind_;
  Rat v_;
};

}  // namespace hoteq
