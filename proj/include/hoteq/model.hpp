#pragma once
// Problem data: voter mass models, candidate spaces, instances, profiles.

#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "hoteq/rational.hpp"

namespace hoteq {

// A point mass at `pos` of size `weight` (> 0).
struct Atom {
  Rat pos;
  Rat weight;
};

// Breakpoint of a piecewise-linear density: f interpolates linearly between
// consecutive breakpoints and is zero outside [x_front, x_back].
struct DensityPoint {
  Rat x;
  Rat f;
};

// Voter mass = atoms + piecewise-linear density. Either part may be absent,
// not both. Atom positions strictly increase; density x strictly increase.
struct VoterModel {
  std::vector<Atom> atoms;
  std::vector<DensityPoint> density;

  bool has_atoms() const { return !atoms.empty(); }
  bool has_density() const { return density.size() >= 2; }
  bool atoms_only() const { return has_atoms() && !has_density(); }
  bool density_only() const { return has_density() && !has_atoms(); }
};

// Candidates choose from an explicit finite list of positions...
struct FiniteSpace {
  std::vector<Rat> positions;  // strictly increasing
};
// ...or from the continuum [0, R].
struct IntervalSpace {
  Rat R;
};
using CandidateSpace = std::variant<FiniteSpace, IntervalSpace>;

struct Instance {
  int m = 0;                        // number of candidates, >= 1
  CandidateSpace space;
  VoterModel voters;
  std::optional<Rat> density_bound;  // declared upper bound M on the density
};

// Strictly increasing candidate positions, size m.
using Profile = std::vector<Rat>;

// Structured data error; the message names the offending field.
class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool is_finite_space(const Instance& inst);
const FiniteSpace& finite_space(const Instance& inst);
const IntervalSpace& interval_space(const Instance& inst);

// Full structural validation; throws InstanceError naming the field.
void validate_instance(const Instance& inst);

// Profile shape: size m, strictly increasing, every position legal for the
// instance's candidate space. Throws InstanceError.
void validate_profile(const Profile& s, const Instance& inst);

// True iff `x` is a legal candidate position of the instance.
bool position_in_space(const Rat& x, const Instance& inst);

}  // namespace hoteq
