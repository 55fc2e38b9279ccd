#include "hoteq/io.hpp"

#include <fstream>
#include <string>
#include <utility>

namespace hoteq {

namespace {

const Json& require_key(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + "." + key + ": missing");
  return *it;
}

Rat rat_field(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where + ": expected a rational string");
  return rat_from_string(j.get<std::string>(), where);
}

Json xpos_to_json(const XPos& x) {
  if (x.is_neg_inf()) return "-inf";
  if (x.is_pos_inf()) return "+inf";
  return rat_to_string(x.value());
}

}  // namespace

Instance instance_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("instance: expected an object");
  if (auto it = j.find("version"); it != j.end()) {
    if (!it->is_number_integer() || it->get<long>() != 1)
      throw ParseError("version: expected the integer 1");
  }

  Instance inst;
  const Json& jm = require_key(j, "m", "instance");
  if (!jm.is_number_integer() || jm.get<long>() < 1)
    throw ParseError("m: expected a positive integer");
  inst.m = static_cast<int>(jm.get<long>());

  const Json& js = require_key(j, "space", "instance");
  const Json& jt = require_key(js, "type", "space");
  if (!jt.is_string()) throw ParseError("space.type: expected a string");
  const std::string type = jt.get<std::string>();
  if (type == "finite") {
    const Json& jp = require_key(js, "positions", "space");
    if (!jp.is_array() || jp.empty())
      throw ParseError("space.positions: expected a nonempty array");
    FiniteSpace sp;
    for (std::size_t i = 0; i < jp.size(); ++i)
      sp.positions.push_back(
          rat_field(jp[i], "space.positions[" + std::to_string(i) + "]"));
    inst.space = std::move(sp);
  } else if (type == "interval") {
    inst.space = IntervalSpace{rat_field(require_key(js, "R", "space"), "space.R")};
  } else {
    throw ParseError("space.type: expected \"finite\" or \"interval\"");
  }

  const Json& jv = require_key(j, "voters", "instance");
  if (!jv.is_object()) throw ParseError("voters: expected an object");
  if (auto it = jv.find("atoms"); it != jv.end()) {
    if (!it->is_array()) throw ParseError("voters.atoms: expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string at = "voters.atoms[" + std::to_string(i) + "]";
      Atom a;
      a.pos = rat_field(require_key((*it)[i], "pos", at), at + ".pos");
      a.weight = rat_field(require_key((*it)[i], "weight", at), at + ".weight");
      inst.voters.atoms.push_back(std::move(a));
    }
  }
  if (auto it = jv.find("density"); it != jv.end()) {
    if (!it->is_array()) throw ParseError("voters.density: expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string at = "voters.density[" + std::to_string(i) + "]";
      DensityPoint p;
      p.x = rat_field(require_key((*it)[i], "x", at), at + ".x");
      p.f = rat_field(require_key((*it)[i], "f", at), at + ".f");
      inst.voters.density.push_back(std::move(p));
    }
  }

  if (auto it = j.find("M"); it != j.end()) {
    inst.density_bound = rat_field(*it, "M");
  } else if (inst.voters.has_density()) {
    // Default declared bound: the density's actual maximum (piecewise-linear
    // densities attain their maximum at a breakpoint).
    Rat mx = 0;
    for (const DensityPoint& p : inst.voters.density) mx = std::max(mx, p.f);
    inst.density_bound = mx;
  }

  validate_instance(inst);
  return inst;
}

Json instance_to_json(const Instance& inst) {
  Json j;
  j["version"] = 1;
  j["m"] = inst.m;
  if (is_finite_space(inst)) {
    Json pos = Json::array();
    for (const Rat& p : finite_space(inst).positions) pos.push_back(rat_to_string(p));
    j["space"] = Json{{"type", "finite"}, {"positions", std::move(pos)}};
  } else {
    j["space"] = Json{{"type", "interval"}, {"R", rat_to_string(interval_space(inst).R)}};
  }
  Json voters = Json::object();
  if (!inst.voters.atoms.empty()) {
    Json atoms = Json::array();
    for (const Atom& a : inst.voters.atoms)
      atoms.push_back(Json{{"pos", rat_to_string(a.pos)}, {"weight", rat_to_string(a.weight)}});
    voters["atoms"] = std::move(atoms);
  }
  if (!inst.voters.density.empty()) {
    Json dens = Json::array();
    for (const DensityPoint& p : inst.voters.density)
      dens.push_back(Json{{"x", rat_to_string(p.x)}, {"f", rat_to_string(p.f)}});
    voters["density"] = std::move(dens);
  }
  j["voters"] = std::move(voters);
  if (inst.density_bound) j["M"] = rat_to_string(*inst.density_bound);
  return j;
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open instance file: " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  return instance_from_json(j);
}

Profile profile_from_string(const std::string& text) {
  if (text.empty()) throw ParseError("profile: empty");
  Profile s;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',') {
      const std::string tok = text.substr(start, i - start);
      s.push_back(rat_from_string(tok, "profile[" + std::to_string(s.size()) + "]"));
      start = i + 1;
    }
  }
  return s;
}

Profile profile_from_json(const Json& j) {
  const Json* arr = &j;
  if (j.is_object()) arr = &require_key(j, "profile", "profile file");
  if (!arr->is_array()) throw ParseError("profile: expected an array of rational strings");
  Profile s;
  for (std::size_t i = 0; i < arr->size(); ++i)
    s.push_back(rat_field((*arr)[i], "profile[" + std::to_string(i) + "]"));
  return s;
}

Json profile_to_json(const Profile& s) {
  Json arr = Json::array();
  for (const Rat& p : s) arr.push_back(rat_to_string(p));
  return arr;
}

Json piece_to_json(const Piece& p) {
  return Json{{"lo", xpos_to_json(p.lo)},
              {"hi", xpos_to_json(p.hi)},
              {"value", rat_to_string(p.value)}};
}

Json report_to_json(const VerificationReport& r) {
  Json j;
  j["ok"] = r.ok;
  Json utils = Json::array();
  for (const Rat& u : r.utilities) utils.push_back(rat_to_string(u));
  j["utilities"] = std::move(utils);
  j["min_utility"] = rat_to_string(r.min_utility);
  j["max_gap_value"] = rat_to_string(r.max_gap_value);
  if (r.witness) {
    Json w;
    w["candidate"] = r.witness->candidate;
    w["position"] = rat_to_string(r.witness->position);
    if (r.witness->piece) w["piece"] = piece_to_json(*r.witness->piece);
    w["value"] = rat_to_string(r.witness->value);
    w["gain"] = rat_to_string(r.witness->gain);
    j["witness"] = std::move(w);
  }
  return j;
}

Json deviation_report_to_json(const DeviationReport& r) {
  Json j;
  j["sup"] = rat_to_string(r.sup);
  if (r.best_piece) j["best_piece"] = piece_to_json(*r.best_piece);
  if (r.best_point) j["best_point"] = rat_to_string(*r.best_point);
  Json pieces = Json::array();
  for (const Piece& p : r.pieces) pieces.push_back(piece_to_json(p));
  j["pieces"] = std::move(pieces);
  return j;
}

Json shift_result_to_json(const ShiftResult& r) {
  Json j;
  j["profile"] = profile_to_json(r.profile);
  Json trace = Json::array();
  for (const ShiftStep& st : r.trace) {
    trace.push_back(
        Json{{"kind", st.kind == ShiftStep::Kind::ShiftRight ? "shift_right" : "shift_left"},
             {"iteration", st.iteration},
             {"candidate", st.candidate},
             {"from", rat_to_string(st.from)},
             {"to", rat_to_string(st.to)}});
  }
  j["trace"] = std::move(trace);
  return j;
}

Json approx_result_to_json(const ApproxResult& r) {
  Json j;
  switch (r.kind) {
    case ApproxResult::Kind::QuantileFallback: j["kind"] = "quantile_fallback"; break;
    case ApproxResult::Kind::GridDP: j["kind"] = "grid_dp"; break;
    case ApproxResult::Kind::BinarySearchBracket: j["kind"] = "binary_search_bracket"; break;
  }
  j["profile"] = profile_to_json(r.profile);
  j["guarantee"] = rat_to_string(r.guarantee);
  if (r.eps_low) j["eps_low"] = rat_to_string(*r.eps_low);
  if (r.eps_high) j["eps_high"] = rat_to_string(*r.eps_high);
  j["certifies_no_eps_equilibrium"] = r.certifies_no_eps_equilibrium;
  if (r.refuted_eps) j["refuted_eps"] = rat_to_string(*r.refuted_eps);
  return j;
}

std::string dump_result(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace hoteq
