// Python module exposing the solver stack. Instances travel as JSON strings
// (same schema as the files the CLI reads), profiles as lists of canonical
// rational strings, and structured results as the same JSON documents the
// CLI prints. Input errors surface as ValueError.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "hoteq/contdp.hpp"
#include "hoteq/deviation.hpp"
#include "hoteq/dp.hpp"
#include "hoteq/io.hpp"
#include "hoteq/model.hpp"
#include "hoteq/rational.hpp"
#include "hoteq/reflect.hpp"
#include "hoteq/verify.hpp"

namespace py = pybind11;

namespace {

using namespace hoteq;

Instance inst_of(const std::string& text) {
  return instance_from_json(Json::parse(text));
}

Profile prof_of(const std::vector<std::string>& xs) {
  Profile S;
  S.reserve(xs.size());
  for (const std::string& x : xs) S.push_back(rat_from_string(x, "profile"));
  return S;
}

std::vector<std::string> prof_out(const Profile& S) {
  std::vector<std::string> xs;
  xs.reserve(S.size());
  for (const Rat& v : S) xs.push_back(rat_to_string(v));
  return xs;
}

std::optional<Rat> eps_of(const std::optional<std::string>& eps) {
  if (!eps) return std::nullopt;
  return rat_from_string(*eps, "epsilon");
}

}  // namespace

PYBIND11_MODULE(hoteq_py, m) {
  m.doc() =
      "Exact solver for spatial-competition equilibria: existence and "
      "construction of pure and approximate equilibria on finite position "
      "sets and on [0, R].";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const InstanceError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const Json::parse_error& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def(
      "solve_dp",
      [](const std::string& instance, const std::optional<std::string>& epsilon)
          -> std::optional<std::vector<std::string>> {
        Instance inst = inst_of(instance);
        DpOptions opts;
        if (epsilon) opts = {DpMode::Eps, *eps_of(epsilon)};
        std::optional<Profile> S = dp_solve(inst, opts);
        if (!S) return std::nullopt;
        return prof_out(*S);
      },
      py::arg("instance"), py::arg("epsilon") = std::nullopt,
      "Exact (or, with epsilon, approximate) equilibrium on a finite "
      "position set; None when none exists.");

  m.def(
      "solve_grid",
      [](const std::string& instance) -> std::optional<std::vector<std::string>> {
        std::optional<Profile> S = solve_grid(inst_of(instance));
        if (!S) return std::nullopt;
        return prof_out(*S);
      },
      py::arg("instance"),
      "Exact equilibrium of an interval instance with atomic voters, found "
      "on the dyadic grid of level m; None when none exists.");

  m.def(
      "solve_cc",
      [](const std::string& instance, const std::optional<std::string>& epsilon) {
        return dump_result(approx_result_to_json(
            solve_cc(inst_of(instance), eps_of(epsilon))));
      },
      py::arg("instance"), py::arg("epsilon") = std::nullopt,
      "Approximate equilibrium of a density instance (JSON result; same "
      "document the CLI prints).");

  m.def(
      "verify",
      [](const std::string& instance, const std::vector<std::string>& profile,
         const std::optional<std::string>& epsilon) {
        Instance inst = inst_of(instance);
        Profile S = prof_of(profile);
        VerificationReport rep = epsilon
                                     ? is_eps_equilibrium(S, inst, *eps_of(epsilon))
                                     : is_equilibrium(S, inst);
        return dump_result(report_to_json(rep));
      },
      py::arg("instance"), py::arg("profile"), py::arg("epsilon") = std::nullopt,
      "Verification report (JSON) for a profile; with epsilon, tolerant "
      "verification.");

  m.def(
      "deviate",
      [](const std::string& instance, const std::vector<std::string>& profile,
         int gap) {
        Instance inst = inst_of(instance);
        Profile S = prof_of(profile);
        validate_profile(S, inst);
        const int mm = static_cast<int>(S.size());
        if (gap < 0 || gap > mm)
          throw ParseError("gap: expected an index in 0..m");
        XPos lo = gap > 0 ? XPos(S[static_cast<std::size_t>(gap - 1)])
                          : XPos::neg_inf();
        XPos hi = gap < mm ? XPos(S[static_cast<std::size_t>(gap)])
                           : XPos::pos_inf();
        DeviationReport rep;
        if (is_finite_space(inst)) {
          rep.sup = 0;
          for (const Rat& z : finite_space(inst).positions) {
            if (!(lo < XPos(z) && XPos(z) < hi)) continue;
            if (std::binary_search(S.begin(), S.end(), z)) continue;
            Rat v = entrant_value_at(inst.voters, lo, hi, z);
            if (!rep.best_point || v > rep.sup) {
              rep.sup = v;
              rep.best_point = z;
            }
          }
        } else {
          rep = gap_sup(inst.voters, lo, hi);
        }
        Json j = deviation_report_to_json(rep);
        j["gap"] = gap;
        return dump_result(j);
      },
      py::arg("instance"), py::arg("profile"), py::arg("gap"),
      "Best-entrant report (JSON) for one gap of the profile (0 = left of "
      "everyone, m = right of everyone).");

  m.def(
      "shift",
      [](const std::string& instance, const std::vector<std::string>& profile) {
        return dump_result(shift_result_to_json(
            shift_to_low_bits(prof_of(profile), inst_of(instance))));
      },
      py::arg("instance"), py::arg("profile"),
      "Canonicalize an equilibrium onto low dyadic bits; JSON result with "
      "the full move trace.");

  m.def(
      "gen_hard",
      [](int k) {
        HardInstance h = gen_hard(k);
        Json j = instance_to_json(h.instance);
        j["profile"] = profile_to_json(h.profile);
        return dump_result(j);
      },
      py::arg("k"),
      "Member k of the hard family (instance JSON with its equilibrium "
      "under \"profile\").");

  m.def(
      "el_check",
      [](const std::string& instance, const std::vector<std::string>& profile,
         const std::string& delta) {
        ElReport r = el_conditions(prof_of(profile), inst_of(instance),
                                   rat_from_string(delta, "delta"));
        Json j{{"c1", r.c1}, {"c2", r.c2}, {"c3", r.c3}, {"c4", r.c4},
               {"all", r.all()}};
        return dump_result(j);
      },
      py::arg("instance"), py::arg("profile"), py::arg("delta"),
      "The four paired-local-equilibrium conditions at pair distance delta "
      "(JSON booleans c1..c4 and their conjunction).");

  m.def(
      "quantiles",
      [](const std::string& instance) {
        return prof_out(quantile_profile(inst_of(instance)));
      },
      py::arg("instance"),
      "Mass-quantile profile of a density instance: candidate i at the "
      "i/(m+1) quantile.");

  m.def(
      "oracle",
      [](const std::string& instance, std::uint64_t bound) {
        std::vector<std::vector<std::string>> out;
        for (const Profile& S : brute_force_solve(inst_of(instance), bound))
          out.push_back(prof_out(S));
        return out;
      },
      py::arg("instance"), py::arg("bound") = 1000000,
      "All equilibria of a finite instance by exhaustive enumeration "
      "(errors out past `bound` placements).");
}
