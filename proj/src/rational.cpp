// Exact rational helpers: strict text format, dyadic levels, floors.

#include "hoteq/rational.hpp"

namespace hoteq {

Rat make_rat(long num, long den) {
  if (den == 0) throw std::invalid_argument("make_rat: zero denominator");
  Rat r(num, den);
  r.canonicalize();
  return r;
}

namespace {

bool digits_only(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

// Canonical integer text: "0" or nonzero without leading zeros.
bool canonical_uint(const std::string& s) {
  if (!digits_only(s)) return false;
  return s.size() == 1 || s[0] != '0';
}

}  // namespace

Rat rat_from_string(const std::string& text, const std::string& where) {
  auto fail = [&](const std::string& why) -> Rat {
    throw ParseError(where + ": '" + text + "' is not a canonical rational (" + why + ")");
  };

  std::string body = text;
  bool neg = false;
  if (!body.empty() && body[0] == '-') {
    neg = true;
    body = body.substr(1);
  }
  std::string num = body, den;
  if (auto slash = body.find('/'); slash != std::string::npos) {
    num = body.substr(0, slash);
    den = body.substr(slash + 1);
  }

  if (!canonical_uint(num)) return fail("expected digits without leading zeros");
  if (neg && num == "0") return fail("negative zero");

  if (den.empty()) {
    Rat r(Int(num.c_str(), 10));
    return neg ? Rat(-r) : r;
  }
  if (!canonical_uint(den)) return fail("bad denominator digits");
  if (den == "0") return fail("zero denominator");
  if (den == "1") return fail("denominator 1 must be written as an integer");

  Int n(num.c_str(), 10), d(den.c_str(), 10);
  Int g;
  mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  if (g != 1) return fail("not in lowest terms");

  Rat r(n, d);
  r.canonicalize();  // already canonical; keeps the invariant explicit
  return neg ? Rat(-r) : r;
}

std::string rat_to_string(const Rat& v) {
  if (v.get_den() == 1) return v.get_num().get_str();
  return v.get_num().get_str() + "/" + v.get_den().get_str();
}

std::optional<int> dyadic_level(const Rat& v) {
  const Int& den = v.get_den();
  if (mpz_popcount(den.get_mpz_t()) != 1) return std::nullopt;  // not 2^i
  return static_cast<int>(mpz_scan1(den.get_mpz_t(), 0));
}

Int floor_int(const Rat& v) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), v.get_num().get_mpz_t(), v.get_den().get_mpz_t());
  return q;
}

Int ceil_int(const Rat& v) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), v.get_num().get_mpz_t(), v.get_den().get_mpz_t());
  return q;
}

std::string XPos::to_string() const {
  if (is_neg_inf()) return "-inf";
  if (is_pos_inf()) return "+inf";
  return rat_to_string(v_);
}

}  // namespace hoteq
