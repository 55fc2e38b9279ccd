// Window utilities. All values are differences of the split cdf
// h(x) = mass(<x) + atom(x)/2, which makes vote conservation a telescoping
// identity: adjacent windows share exactly the half-atom at their common
// midpoint boundary.

#include "hoteq/utility.hpp"

#include <algorithm>
#include <stdexcept>

namespace hoteq {

Rat mu(const Rat& s, const Rat& t) { return (s + t) / 2; }

XPos mu_x(const XPos& s, const XPos& t) {
  if (s.is_neg_inf() || t.is_neg_inf()) {
    if (s.is_pos_inf() || t.is_pos_inf())
      throw std::logic_error("mu_x: midpoint of -inf and +inf");
    return XPos::neg_inf();
  }
  if (s.is_pos_inf() || t.is_pos_inf()) return XPos::pos_inf();
  return XPos(mu(s.value(), t.value()));
}

UtilParts util_window(const VoterModel& vm, const XPos& left_nbr, const Rat& s,
                      const XPos& right_nbr) {
  if (!(left_nbr < XPos(s) && XPos(s) < right_nbr))
    throw std::invalid_argument("util_window: neighbours must bracket the candidate");
  XPos lo = mu_x(left_nbr, XPos(s));
  XPos hi = mu_x(XPos(s), right_nbr);
  Rat own = atom_mass_at(vm, s);
  Rat at_s = cdf(vm, s) - own / 2;  // split cdf at the candidate itself
  Rat left = at_s - split_cdf(vm, lo) - own / 2;
  Rat right = split_cdf(vm, hi) - at_s - own / 2;
  return {left + right + own, left, right};
}

UtilParts util(const VoterModel& vm, const Profile& S, int i) {
  if (i < 0 || static_cast<size_t>(i) >= S.size())
    throw std::out_of_range("util: candidate index");
  XPos l = (i == 0) ? XPos::neg_inf() : XPos(S[i - 1]);
  XPos r = (static_cast<size_t>(i) + 1 == S.size()) ? XPos::pos_inf() : XPos(S[i + 1]);
  return util_window(vm, l, S[i], r);
}

UtilParts utilout(const VoterModel& vm, const Profile& S, const Rat& z) {
  // Locate z among the occupied positions; collocation is not a move.
  auto it = std::lower_bound(S.begin(), S.end(), z);
  if (it != S.end() && *it == z)
    throw std::invalid_argument("utilout: position already occupied");
  XPos l = (it == S.begin()) ? XPos::neg_inf() : XPos(*(it - 1));
  XPos r = (it == S.end()) ? XPos::pos_inf() : XPos(*it);
  return util_window(vm, l, z, r);
}

}  // namespace hoteq
