#include "qclone/report.hpp"

#include <cstdio>

namespace qclone {

namespace {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

Json functions_json(const std::vector<BoolFunc>& fs) {
  Json arr = Json::array();
  for (const auto& f : fs) arr.push_back(f.to_hex());
  return arr;
}

}  // namespace

Json to_json(const BoolFunc& f) {
  Json j;
  j["n"] = f.n();
  j["table_hex"] = f.to_hex();
  return j;
}

BoolFunc bool_func_from_json(const nlohmann::json& j) {
  return BoolFunc::from_hex(j.at("n").get<unsigned>(), j.at("table_hex").get<std::string>());
}

Json to_json(const StateVector& psi) {
  Json arr = Json::array();
  for (const auto& a : psi.amps()) arr.push_back(Json::array({a.real(), a.imag()}));
  return arr;
}

Json to_json(const FamilyBundle& b) {
  Json j;
  j["variant"] = std::string(1, variant_name(b.variant));
  j["n"] = b.n;
  j["encoding"] = "table_hex";
  j["s_f0"] = functions_json(b.s_f0);
  j["s1"] = functions_json(b.s1);
  j["s2"] = functions_json(b.s2);
  j["s_f12"] = functions_json(b.s_f12);
  Json sets = Json::array();
  for (const auto& h : b.h_sets) {
    Json s;
    s["canonical"] = h.canonical.to_hex();
    s["members"] = Json::array({h.canonical.to_hex(), h.other.to_hex()});
    sets.push_back(std::move(s));
  }
  j["h_sets"] = std::move(sets);
  j["counts"] = {{"s_f0", b.s_f0.size()},       {"s1", b.s1.size()},
                 {"s2", b.s2.size()},           {"s_f12", b.s_f12.size()},
                 {"s_f", 2 * b.h_sets.size()},  {"h_sets", b.h_sets.size()}};
  return j;
}

Json number_json(double value, const std::optional<Fraction>& exact) {
  Json j;
  j["decimal"] = value;
  j["exact"] = exact ? Json(to_string(*exact)) : Json(nullptr);
  return j;
}

Json number_json(double value) { return number_json(value, recover_fraction(value)); }

Json efficiency_report(const FamilyBundle& bundle) {
  const CloneSpec spec = clone_spec_for_family(bundle);
  const auto& g = spec.gammas;
  Json j;
  j["variant"] = std::string(1, variant_name(bundle.variant));
  j["n"] = bundle.n;

  Json overlaps = Json::array();
  for (Eigen::Index r = 0; r < spec.gram1.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < spec.gram1.cols(); ++c) row.push_back(spec.gram1(r, c).real());
    overlaps.push_back(std::move(row));
  }
  j["overlaps"] = std::move(overlaps);
  j["objective"] = "lexicographic";
  j["gamma"] = g;
  Json exact = Json::array();
  for (double x : g) {
    auto f = recover_fraction(x);
    exact.push_back(f ? Json(to_string(*f)) : Json(nullptr));
  }
  j["gamma_exact"] = std::move(exact);

  const AnalyticScores a = analytic_scores(bundle, g);
  j["p_success"] = number_json(a.flag_fraction, a.flag_fraction_exact);
  Json post = Json::array();
  for (double p : failure_posterior(g)) post.push_back(number_json(p));
  j["failure_posterior"] = std::move(post);
  j["failure_guess"] = number_json(a.p_guess, a.p_guess_exact);
  j["flag_fraction"] = number_json(a.flag_fraction, a.flag_fraction_exact);
  j["boundary_min_eigenvalue"] = residual_min_eigenvalue(spec, g);

  EfficiencyOptions mean_opts;
  mean_opts.objective = Objective::kAverage;
  const auto mean_opt = max_efficiencies(spec, mean_opts);
  double mean = 0.0;
  for (double x : mean_opt) mean += x / static_cast<double>(mean_opt.size());
  j["mean_objective"] = {{"gamma", mean_opt}, {"p_success", mean}};
  return j;
}

Json to_json(const AnalyticScores& a) {
  Json j;
  j["variant"] = std::string(1, variant_name(a.variant));
  j["n"] = a.n;
  Json gam = Json::array();
  for (std::size_t i = 0; i < a.gammas.size(); ++i) gam.push_back(number_json(a.gammas[i], a.gammas_exact[i]));
  j["gamma"] = std::move(gam);
  j["p1"] = number_json(a.p1, a.p1_exact);
  j["p2"] = number_json(a.p2, a.p2_exact);
  j["p2_closed_form"] = number_json(a.p2_closed_form, a.p2_closed_form_exact);
  j["flag_fraction"] = number_json(a.flag_fraction, a.flag_fraction_exact);
  j["failure_guess"] = number_json(a.p_guess, a.p_guess_exact);
  return j;
}

Json to_json(const ScoreReport& r) {
  Json j;
  j["variant"] = std::string(1, variant_name(r.variant));
  j["n"] = r.n;
  j["strategy"] = std::string(strategy_name(r.strategy));
  j["trials"] = r.trials;
  j["successes"] = r.successes;
  j["rate"] = r.rate;
  j["analytic"] = r.analytic;
  j["ci99"] = r.ci99;
  return j;
}

Json to_json(const ExperimentResult& r) {
  Json j;
  const auto& c = r.config;
  j["config"] = {{"variant", std::string(1, variant_name(c.variant))},
                 {"n", c.n},
                 {"trials", c.trials},
                 {"seed", c.seed},
                 {"distinct_f12", c.distinct_f12},
                 {"physical_wrong_branch", c.physical_wrong_branch}};
  Json reports = Json::array();
  if (r.no_cloning) reports.push_back(to_json(*r.no_cloning));
  if (r.cloning) reports.push_back(to_json(*r.cloning));
  j["reports"] = std::move(reports);
  j["analytic"] = to_json(r.analytic);
  if (r.cloning) {
    const double rate = r.cloning->rate;
    const double ci = r.cloning->ci99;
    j["p2_candidates"] = {
        {"compositional", {{"value", r.analytic.p2}, {"inside_ci99", std::abs(rate - r.analytic.p2) <= ci}}},
        {"closed_form",
         {{"value", r.analytic.p2_closed_form},
          {"inside_ci99", std::abs(rate - r.analytic.p2_closed_form) <= ci}}}};
  }
  const auto& d = r.diagnostics;
  j["diagnostics"] = {{"flag_successes", d.flag_successes},
                      {"successes_given_flag", d.successes_given_flag},
                      {"flag_failures", d.flag_failures},
                      {"s1_type_given_failure", d.s1_type_given_failure},
                      {"f0_s2_type", d.f0_s2_type},
                      {"no_cloning_successes_given_s2_type", d.no_cloning_successes_given_s2_type}};
  return j;
}

std::string csv_header() { return "variant,n,strategy,trials,successes,rate,analytic,ci99"; }

std::string csv_row(const ScoreReport& r) {
  return std::string(1, variant_name(r.variant)) + "," + std::to_string(r.n) + "," +
         std::string(strategy_name(r.strategy)) + "," + std::to_string(r.trials) + "," +
         std::to_string(r.successes) + "," + format_double(r.rate) + "," +
         format_double(r.analytic) + "," + format_double(r.ci99);
}

}  // namespace qclone
