// Structural validation of instances and profiles.

#include "hoteq/model.hpp"

#include <algorithm>
#include <string>

namespace hoteq {

bool is_finite_space(const Instance& inst) {
  return std::holds_alternative<FiniteSpace>(inst.space);
}
const FiniteSpace& finite_space(const Instance& inst) {
  if (!std::holds_alternative<FiniteSpace>(inst.space))
    throw InstanceError("space: a finite position set is required here");
  return std::get<FiniteSpace>(inst.space);
}
const IntervalSpace& interval_space(const Instance& inst) {
  if (!std::holds_alternative<IntervalSpace>(inst.space))
    throw InstanceError("space: an interval [0, R] is required here");
  return std::get<IntervalSpace>(inst.space);
}

void validate_instance(const Instance& inst) {
  if (inst.m < 1) throw InstanceError("m: must be >= 1");

  const VoterModel& vm = inst.voters;
  if (!vm.has_atoms() && !vm.has_density())
    throw InstanceError("voters: needs atoms or a density (>= 2 breakpoints)");
  if (vm.density.size() == 1)
    throw InstanceError("voters.density: a density needs >= 2 breakpoints");

  for (size_t i = 0; i < vm.atoms.size(); ++i) {
    const std::string at = "voters.atoms[" + std::to_string(i) + "]";
    if (vm.atoms[i].weight <= 0) throw InstanceError(at + ".weight: must be > 0");
    if (i > 0 && !(vm.atoms[i - 1].pos < vm.atoms[i].pos))
      throw InstanceError(at + ".pos: atom positions must strictly increase");
  }
  bool any_density_mass = false;
  for (size_t i = 0; i < vm.density.size(); ++i) {
    const std::string at = "voters.density[" + std::to_string(i) + "]";
    if (vm.density[i].f < 0) throw InstanceError(at + ".f: must be >= 0");
    if (vm.density[i].f > 0) any_density_mass = true;
    if (i > 0 && !(vm.density[i - 1].x < vm.density[i].x))
      throw InstanceError(at + ".x: density breakpoints must strictly increase");
  }
  if (vm.has_density() && !any_density_mass)
    throw InstanceError("voters.density: density is identically zero");

  if (is_finite_space(inst)) {
    const auto& pos = finite_space(inst).positions;
    if (pos.empty()) throw InstanceError("space.positions: must be nonempty");
    for (size_t i = 1; i < pos.size(); ++i)
      if (!(pos[i - 1] < pos[i]))
        throw InstanceError("space.positions[" + std::to_string(i) +
                            "]: positions must strictly increase");
    if (static_cast<size_t>(inst.m) > pos.size())
      throw InstanceError("m: more candidates than available positions");
  } else {
    const Rat& R = interval_space(inst).R;
    if (R <= 0) throw InstanceError("space.R: must be > 0");
    for (size_t i = 0; i < vm.atoms.size(); ++i)
      if (vm.atoms[i].pos < 0 || vm.atoms[i].pos > R)
        throw InstanceError("voters.atoms[" + std::to_string(i) +
                            "].pos: outside the candidate interval [0, R]");
    for (size_t i = 0; i < vm.density.size(); ++i)
      if (vm.density[i].x < 0 || vm.density[i].x > R)
        throw InstanceError("voters.density[" + std::to_string(i) +
                            "].x: outside the candidate interval [0, R]");
  }

  if (inst.density_bound) {
    if (*inst.density_bound <= 0) throw InstanceError("M: must be > 0");
    for (size_t i = 0; i < vm.density.size(); ++i)
      if (vm.density[i].f > *inst.density_bound)
        throw InstanceError("M: density exceeds the declared bound at breakpoint " +
                            std::to_string(i));
  }
}

bool position_in_space(const Rat& x, const Instance& inst) {
  if (is_finite_space(inst)) {
    const auto& pos = finite_space(inst).positions;
    return std::binary_search(pos.begin(), pos.end(), x);
  }
  return x >= 0 && x <= interval_space(inst).R;
}

void validate_profile(const Profile& s, const Instance& inst) {
  if (static_cast<int>(s.size()) != inst.m)
    throw InstanceError("profile: expected " + std::to_string(inst.m) +
                        " positions, got " + std::to_string(s.size()));
  for (size_t i = 0; i < s.size(); ++i) {
    if (i > 0 && !(s[i - 1] < s[i]))
      throw InstanceError("profile[" + std::to_string(i) +
                          "]: positions must strictly increase");
    if (!position_in_space(s[i], inst))
      throw InstanceError("profile[" + std::to_string(i) +
                          "]: not a legal position of the candidate space");
  }
}

}  // namespace hoteq
