#pragma once
// JSON (de)serialization for instances, profiles, and command results.
// All numbers travel as canonical rational strings; emission is
// deterministic (sorted keys, two-space indent, no floats).

#include <string>

#include <nlohmann/json.hpp>

#include "hoteq/contdp.hpp"
#include "hoteq/deviation.hpp"
#include "hoteq/model.hpp"
#include "hoteq/reflect.hpp"
#include "hoteq/verify.hpp"

namespace hoteq {

using Json = nlohmann::json;

// Instance files: {"version":1, "m":N, "space":{...}, "voters":{...}, "M"?}.
// space: {"type":"finite","positions":[...]} or {"type":"interval","R":"10"}.
// voters: {"atoms":[{"pos","weight"},...]?, "density":[{"x","f"},...]?}.
// Unknown top-level keys are ignored (fixtures carry auxiliary data).
Instance instance_from_json(const Json& j);
Json instance_to_json(const Instance& inst);

Instance load_instance_file(const std::string& path);

// "a,b,c" (canonical rationals) -> profile; shape NOT yet validated.
Profile profile_from_string(const std::string& text);
// A bare JSON array, or an object with a "profile" array.
Profile profile_from_json(const Json& j);
Json profile_to_json(const Profile& s);

Json piece_to_json(const Piece& p);
Json report_to_json(const VerificationReport& r);
Json deviation_report_to_json(const DeviationReport& r);
Json shift_result_to_json(const ShiftResult& r);
Json approx_result_to_json(const ApproxResult& r);

// Canonical rendering used for every result file.
std::string dump_result(const Json& j);

}  // namespace hoteq
