// Command-line surface: solving, verification, deviation reports, dyadic
// canonicalization, hard-instance generation, paired-condition checking,
// quantiles, and the brute-force oracle. Results are deterministic JSON on
// stdout (or --output); diagnostics go to stderr.
// Exit codes: 0 = found / verified true, 1 = none / verified false,
// 2 = usage or data error.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hoteq/contdp.hpp"
#include "hoteq/dp.hpp"
#include "hoteq/io.hpp"
#include "hoteq/measure.hpp"
#include "hoteq/reflect.hpp"
#include "hoteq/utility.hpp"
#include "hoteq/verify.hpp"

namespace {

using hoteq::Json;
using hoteq::Rat;

void emit(const Json& j, const std::string& output_path) {
  const std::string text = hoteq::dump_result(j);
  if (output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output_path);
  if (!out) throw hoteq::ParseError("cannot write output file: " + output_path);
  out << text;
}

hoteq::Profile read_profile(const std::string& flag, const std::string& file) {
  if (!flag.empty() && !file.empty())
    throw hoteq::ParseError("give either --profile or --profile-file, not both");
  if (!flag.empty()) return hoteq::profile_from_string(flag);
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw hoteq::ParseError("cannot open profile file: " + file);
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::parse_error& e) {
      throw hoteq::ParseError(file + ": " + e.what());
    }
    return hoteq::profile_from_json(j);
  }
  throw hoteq::ParseError("a profile is required (--profile or --profile-file)");
}

std::optional<Rat> parse_eps(const std::string& text) {
  if (text.empty()) return std::nullopt;
  return hoteq::rat_from_string(text, "--epsilon");
}

Json utilities_json(const hoteq::VoterModel& vm, const hoteq::Profile& S) {
  Json arr = Json::array();
  for (int i = 0; i < static_cast<int>(S.size()); ++i)
    arr.push_back(hoteq::rat_to_string(hoteq::util(vm, S, i).total));
  return arr;
}

int run_solve(const hoteq::Instance& inst, const std::string& mode,
              const std::optional<Rat>& eps, const std::string& output) {
  std::string selected = mode;
  if (selected == "auto") {
    if (hoteq::is_finite_space(inst)) selected = "dp";
    else if (inst.voters.atoms_only()) selected = "grid";
    else if (inst.voters.density_only()) selected = "cc";
    else
      throw hoteq::ParseError(
          "no solver covers mixed atom+density voters on an interval space");
  }

  Json j;
  j["mode"] = selected;
  if (selected == "dp") {
    if (!hoteq::is_finite_space(inst))
      throw hoteq::ParseError("--mode dp requires a finite candidate space");
    hoteq::DpOptions opts;
    if (eps) opts = {hoteq::DpMode::Eps, *eps};
    std::optional<hoteq::Profile> S = hoteq::dp_solve(inst, opts);
    if (!S) {
      j["status"] = "none";
      emit(j, output);
      return 1;
    }
    j["status"] = eps ? "eps_equilibrium" : "equilibrium";
    if (eps) j["epsilon"] = hoteq::rat_to_string(*eps);
    j["profile"] = hoteq::profile_to_json(*S);
    j["utilities"] = utilities_json(inst.voters, *S);
    emit(j, output);
    return 0;
  }
  if (selected == "grid") {
    if (hoteq::is_finite_space(inst) || !inst.voters.atoms_only())
      throw hoteq::ParseError(
          "--mode grid requires an interval space with atoms-only voters");
    if (eps)
      throw hoteq::ParseError("exact grid solving takes no --epsilon");
    std::optional<hoteq::Profile> S = hoteq::solve_grid(inst);
    if (!S) {
      j["status"] = "none";
      emit(j, output);
      return 1;
    }
    j["status"] = "equilibrium";
    j["profile"] = hoteq::profile_to_json(*S);
    j["utilities"] = utilities_json(inst.voters, *S);
    emit(j, output);
    return 0;
  }
  if (selected == "cc") {
    if (hoteq::is_finite_space(inst) || !inst.voters.density_only())
      throw hoteq::ParseError(
          "--mode cc requires an interval space with a pure density");
    hoteq::ApproxResult r = hoteq::solve_cc(inst, eps);
    j["status"] = "eps_equilibrium";
    j["approx"] = hoteq::approx_result_to_json(r);
    j["profile"] = hoteq::profile_to_json(r.profile);
    j["utilities"] = utilities_json(inst.voters, r.profile);
    emit(j, output);
    return 0;
  }
  throw hoteq::ParseError("--mode: expected auto, dp, grid, or cc");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "exact and approximate candidate-positioning equilibria on a line"};
  app.require_subcommand(1);

  std::string instance_path, profile_flag, profile_file, output, mode = "auto";
  std::string eps_text, delta_text;
  int gap_index = -1;
  int hard_k = 0;

  auto add_instance = [&](CLI::App* sc) {
    sc->add_option("--instance", instance_path, "instance JSON file")->required();
  };
  auto add_profile = [&](CLI::App* sc) {
    sc->add_option("--profile", profile_flag, "comma-separated rational positions");
    sc->add_option("--profile-file", profile_file, "JSON profile file");
  };
  auto add_output = [&](CLI::App* sc) {
    sc->add_option("--output", output, "write the result file here instead of stdout");
  };

  CLI::App* sc_solve = app.add_subcommand("solve", "find an equilibrium");
  add_instance(sc_solve);
  add_output(sc_solve);
  sc_solve->add_option("--epsilon", eps_text, "approximation tolerance (rational)");
  sc_solve->add_option("--mode", mode, "auto|dp|grid|cc")->default_val("auto");

  CLI::App* sc_verify = app.add_subcommand("verify", "check a profile");
  add_instance(sc_verify);
  add_profile(sc_verify);
  add_output(sc_verify);
  sc_verify->add_option("--epsilon", eps_text, "tolerated improvement (rational)");

  CLI::App* sc_deviate = app.add_subcommand("deviate", "entrant report for one gap");
  add_instance(sc_deviate);
  add_profile(sc_deviate);
  add_output(sc_deviate);
  sc_deviate->add_option("--gap", gap_index, "gap index 0..m (0 = left of the profile)")
      ->required();

  CLI::App* sc_shift = app.add_subcommand("shift", "canonicalize onto low dyadic bits");
  add_instance(sc_shift);
  add_profile(sc_shift);
  add_output(sc_shift);

  CLI::App* sc_hard = app.add_subcommand("gen-hard", "emit a hard instance family member");
  sc_hard->add_option("--k", hard_k, "family index k >= 1")->required();
  add_output(sc_hard);

  CLI::App* sc_el = app.add_subcommand("el-check", "paired-equilibrium conditions");
  add_instance(sc_el);
  add_profile(sc_el);
  add_output(sc_el);
  sc_el->add_option("--delta", delta_text, "pair distance (rational)")->required();

  CLI::App* sc_quant = app.add_subcommand("quantiles", "mass-quantile profile");
  add_instance(sc_quant);
  add_output(sc_quant);

  CLI::App* sc_oracle = app.add_subcommand("oracle", "brute-force all equilibria");
  add_instance(sc_oracle);
  add_output(sc_oracle);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*sc_solve) {
      hoteq::Instance inst = hoteq::load_instance_file(instance_path);
      return run_solve(inst, mode, parse_eps(eps_text), output);
    }
    if (*sc_verify) {
      hoteq::Instance inst = hoteq::load_instance_file(instance_path);
      hoteq::Profile S = read_profile(profile_flag, profile_file);
      hoteq::validate_profile(S, inst);
      std::optional<Rat> eps = parse_eps(eps_text);
      hoteq::VerificationReport rep =
          eps ? hoteq::is_eps_equilibrium(S, inst, *eps) : hoteq::is_equilibrium(S, inst);
      Json j = hoteq::report_to_json(rep);
      j["status"] = rep.ok ? (eps ? "eps_equilibrium" : "equilibrium") : "none";
      if (eps) j["epsilon"] = hoteq::rat_to_string(*eps);
      j["profile"] = hoteq::profile_to_json(S);
      emit(j, output);
      return rep.ok ? 0 : 1;
    }
    if (*sc_deviate) {
      hoteq::Instance inst = hoteq::load_instance_file(instance_path);
      hoteq::Profile S = read_profile(profile_flag, profile_file);
      hoteq::validate_profile(S, inst);
      const int m = static_cast<int>(S.size());
      if (gap_index < 0 || gap_index > m)
        throw hoteq::ParseError("--gap: expected an index in 0..m");
      hoteq::XPos lo = gap_index > 0 ? hoteq::XPos(S[gap_index - 1]) : hoteq::XPos::neg_inf();
      hoteq::XPos hi = gap_index < m ? hoteq::XPos(S[gap_index]) : hoteq::XPos::pos_inf();
      hoteq::DeviationReport rep;
      if (hoteq::is_finite_space(inst)) {
        // Entrants restricted to unoccupied grid positions inside the gap.
        rep.sup = 0;
        for (const Rat& z : hoteq::finite_space(inst).positions) {
          if (!(lo < hoteq::XPos(z) && hoteq::XPos(z) < hi)) continue;
          if (std::binary_search(S.begin(), S.end(), z)) continue;
          Rat v = hoteq::entrant_value_at(inst.voters, lo, hi, z);
          if (!rep.best_point || v > rep.sup) {
            rep.sup = v;
            rep.best_point = z;
          }
        }
      } else {
        rep = hoteq::gap_sup(inst.voters, lo, hi);
      }
      Json j = hoteq::deviation_report_to_json(rep);
      j["gap"] = gap_index;
      emit(j, output);
      return 0;
    }
    if (*sc_shift) {
      hoteq::Instance inst = hoteq::load_instance_file(instance_path);
      hoteq::Profile S = read_profile(profile_flag, profile_file);
      hoteq::ShiftResult r = hoteq::shift_to_low_bits(S, inst);
      Json j = hoteq::shift_result_to_json(r);
      j["status"] = "equilibrium";
      emit(j, output);
      return 0;
    }
    if (*sc_hard) {
      hoteq::HardInstance h = hoteq::gen_hard(hard_k);
      Json j = hoteq::instance_to_json(h.instance);
      j["profile"] = hoteq::profile_to_json(h.profile);
      emit(j, output);
      return 0;
    }
    if (*sc_el) {
      hoteq::Instance inst = hoteq::load_instance_file(instance_path);
      hoteq::Profile S = read_profile(profile_flag, profile_file);
      Rat delta = hoteq::rat_from_string(delta_text, "--delta");
      hoteq::ElReport r = hoteq::el_conditions(S, inst, delta);
      Json j{{"c1", r.c1}, {"c2", r.c2}, {"c3", r.c3}, {"c4", r.c4}, {"all", r.all()}};
      emit(j, output);
      return r.all() ? 0 : 1;
    }
    if (*sc_quant) {
      hoteq::Instance inst = hoteq::load_instance_file(instance_path);
      hoteq::Profile S = hoteq::quantile_profile(inst);
      Json j{{"profile", hoteq::profile_to_json(S)}};
      emit(j, output);
      return 0;
    }
    if (*sc_oracle) {
      hoteq::Instance inst = hoteq::load_instance_file(instance_path);
      std::vector<hoteq::Profile> all = hoteq::brute_force_solve(inst);
      Json arr = Json::array();
      for (const hoteq::Profile& S : all) arr.push_back(hoteq::profile_to_json(S));
      Json j{{"equilibria", std::move(arr)}, {"count", all.size()}};
      emit(j, output);
      return all.empty() ? 1 : 0;
    }
  } catch (const hoteq::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    emit(Json{{"status", "error"}, {"message", e.what()}}, "");
    return 2;
  } catch (const hoteq::InstanceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    emit(Json{{"status", "error"}, {"message", e.what()}}, "");
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    emit(Json{{"status", "error"}, {"message", e.what()}}, "");
    return 2;
  }
  return 2;
}
