// Command-line front end: families, efficiencies, analytic, simulate, verify.
//
// Exit codes: 0 success, 1 invalid arguments or configuration, 2 a
// verification check failed.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qclone/errors.hpp"
#include "qclone/report.hpp"
#include "qclone/strategies.hpp"
#include "qclone/verify.hpp"

namespace {

using namespace qclone;

constexpr int kExitValidation = 1;
constexpr int kExitVerification = 2;

struct Args {
  std::string variant = "A";
  std::optional<unsigned> n;
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 7;
  unsigned threads = 1;
  std::string output = "json";
  bool distinct_f12 = false;
  bool physical_wrong_branch = false;
  bool variant_given = false;
  std::string inject_gammas;
};

unsigned resolve_n(const Args& a, FamilyVariant v) {
  const unsigned n = a.n.value_or(base_bits(v));
  if (n < base_bits(v) || n > kMaxBits) {
    throw ValidationError("--n must lie in [" + std::to_string(base_bits(v)) + ", " +
                          std::to_string(kMaxBits) + "] for variant " + variant_name(v));
  }
  return n;
}

std::string show(const Json& number) {
  std::ostringstream s;
  s << number["decimal"].get<double>();
  if (!number["exact"].is_null()) s << " (" << number["exact"].get<std::string>() << ")";
  return s.str();
}

void print_families(const FamilyBundle& b, const std::string& output) {
  auto list = [&](const char* name, const std::vector<BoolFunc>& fs) {
    for (std::size_t i = 0; i < fs.size(); ++i) {
      if (output == "csv") {
        std::cout << name << "," << i << "," << b.n << "," << fs[i].to_hex() << "\n";
      } else {
        std::cout << "  " << name << "[" << i << "] = h_" << fs[i].to_bits() << "\n";
      }
    }
  };
  if (output == "json") {
    std::cout << to_json(b).dump(2) << "\n";
    return;
  }
  if (output == "csv") {
    std::cout << "set,index,n,table_hex\n";
  } else {
    std::cout << "variant " << variant_name(b.variant) << ", n = " << b.n << ": |s_f0| = "
              << b.s_f0.size() << ", |s1| = " << b.s1.size() << ", |s2| = " << b.s2.size()
              << ", |s_f| = " << 2 * b.h_sets.size() << ", " << b.h_sets.size() << " H sets\n";
  }
  list("s_f0", b.s_f0);
  list("s1", b.s1);
  list("s2", b.s2);
  for (std::size_t i = 0; i < b.h_sets.size(); ++i) {
    const auto& h = b.h_sets[i];
    if (output == "csv") {
      std::cout << "h_set," << i << "," << b.n << "," << h.canonical.to_hex() << "\n";
    } else {
      std::cout << "  H[" << i << "] = {h_" << h.canonical.to_bits() << ", h_" << h.other.to_bits()
                << "}\n";
    }
  }
}

void print_efficiencies(const Json& j, const std::string& output) {
  if (output == "json") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  if (output == "csv") {
    std::cout << "variant,n,index,gamma,gamma_exact\n";
    for (std::size_t i = 0; i < j["gamma"].size(); ++i) {
      std::cout << j["variant"].get<std::string>() << "," << j["n"] << "," << i << ","
                << j["gamma"][i].get<double>() << ","
                << (j["gamma_exact"][i].is_null() ? "" : j["gamma_exact"][i].get<std::string>())
                << "\n";
    }
    return;
  }
  std::cout << "variant " << j["variant"].get<std::string>() << ", n = " << j["n"] << "\n";
  std::cout << "  overlaps:";
  for (const auto& row : j["overlaps"]) std::cout << " " << row.dump();
  std::cout << "\n";
  for (std::size_t i = 0; i < j["gamma"].size(); ++i) {
    std::cout << "  gamma_" << i + 1 << " = " << j["gamma"][i].get<double>();
    if (!j["gamma_exact"][i].is_null()) std::cout << " (" << j["gamma_exact"][i].get<std::string>() << ")";
    std::cout << "\n";
  }
  std::cout << "  P_success = " << show(j["p_success"]) << "\n";
  std::cout << "  failure posterior:";
  for (const auto& p : j["failure_posterior"]) std::cout << " " << show(p);
  std::cout << "\n  flag fraction = " << show(j["flag_fraction"]) << "\n";
  std::cout << "  boundary lambda_min = " << j["boundary_min_eigenvalue"].get<double>() << "\n";
  std::cout << "  mean-objective optimum: " << j["mean_objective"]["gamma"].dump()
            << ", P_success = " << j["mean_objective"]["p_success"].get<double>() << "\n";
}

void print_analytic(const AnalyticScores& a, const std::string& output) {
  const Json j = to_json(a);
  if (output == "json") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  if (output == "csv") {
    std::cout << "variant,n,p1,p2,p2_closed_form,flag_fraction,failure_guess\n"
              << variant_name(a.variant) << "," << a.n << "," << a.p1 << "," << a.p2 << ","
              << a.p2_closed_form << "," << a.flag_fraction << "," << a.p_guess << "\n";
    return;
  }
  std::cout << "variant " << variant_name(a.variant) << ", n = " << a.n << "\n"
            << "  p1 (no cloning)        = " << show(j["p1"]) << "\n"
            << "  p2 (cloning, composed) = " << show(j["p2"]) << "\n"
            << "  p2 (closed form)       = " << show(j["p2_closed_form"]) << "\n"
            << "  flag fraction          = " << show(j["flag_fraction"]) << "\n"
            << "  failure-branch guess   = " << show(j["failure_guess"]) << "\n";
}

void print_simulation(const ExperimentResult& r, const std::string& output) {
  if (output == "json") {
    std::cout << to_json(r).dump(2) << "\n";
    return;
  }
  if (output == "csv") {
    std::cout << csv_header() << "\n";
    if (r.no_cloning) std::cout << csv_row(*r.no_cloning) << "\n";
    if (r.cloning) std::cout << csv_row(*r.cloning) << "\n";
    return;
  }
  const auto line = [](const ScoreReport& s) {
    std::printf("  %-10s  rate %.6f +- %.6f (99%%)  analytic %.6f  [%llu/%llu]\n",
                std::string(strategy_name(s.strategy)).c_str(), s.rate, s.ci99, s.analytic,
                static_cast<unsigned long long>(s.successes), static_cast<unsigned long long>(s.trials));
  };
  std::printf("variant %c, n = %u, seed %llu\n", variant_name(r.config.variant), r.config.n,
              static_cast<unsigned long long>(r.config.seed));
  if (r.no_cloning) line(*r.no_cloning);
  if (r.cloning) {
    line(*r.cloning);
    std::printf("  p2 candidates: compositional %.6f, closed form %.6f\n", r.analytic.p2,
                r.analytic.p2_closed_form);
  }
  std::fflush(stdout);
}

std::vector<double> parse_gammas(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ValidationError("--inject-gammas: cannot parse '" + item + "'");
    }
  }
  if (out.size() != 3) throw ValidationError("--inject-gammas expects three comma-separated values");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probabilistic cloning vs. no-cloning strategies: families, efficiencies, scores"};
  app.require_subcommand(1);
  Args a;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--variant", a.variant, "Instance family")
        ->check(CLI::IsMember({"A", "B", "a", "b"}))
        ->each([&](const std::string&) { a.variant_given = true; });
    sub->add_option("--n", a.n, "Number of input bits (default: 3 for A, 2 for B)");
    sub->add_option("--output", a.output, "Output format")->check(CLI::IsMember({"json", "csv", "table"}));
  };
  auto add_run = [&](CLI::App* sub) {
    sub->add_option("--trials", a.trials, "Monte Carlo trials");
    sub->add_option("--seed", a.seed, "Run seed");
    sub->add_option("--threads", a.threads, "Worker threads");
    sub->add_flag("--distinct-f12", a.distinct_f12, "Draw f2 different from f1");
    sub->add_flag("--physical-wrong-branch", a.physical_wrong_branch,
                  "Score a wrong f0 hypothesis by the measurement actually made");
  };

  auto* families = app.add_subcommand("families", "List the function sets and H partition");
  add_common(families);
  auto* efficiencies = app.add_subcommand("efficiencies", "Optimal cloning efficiencies");
  add_common(efficiencies);
  auto* analytic = app.add_subcommand("analytic", "Closed-form success probabilities");
  add_common(analytic);
  auto* simulate = app.add_subcommand("simulate", "Seeded Monte Carlo of both strategies");
  add_common(simulate);
  add_run(simulate);
  auto* verify = app.add_subcommand("verify", "Run the acceptance checks");
  add_common(verify);
  verify->add_option("--seed", a.seed, "Run seed");
  verify->add_option("--threads", a.threads, "Worker threads");
  verify->add_option("--inject-gammas", a.inject_gammas,
                     "Override the efficiencies with g1,g2,g3 (fault injection)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    const FamilyVariant variant = parse_variant(a.variant);
    if (*families) {
      print_families(build_family(variant, resolve_n(a, variant)), a.output);
    } else if (*efficiencies) {
      print_efficiencies(efficiency_report(build_family(variant, resolve_n(a, variant))), a.output);
    } else if (*analytic) {
      const auto b = build_family(variant, resolve_n(a, variant));
      print_analytic(analytic_scores(b, clone_spec_for_family(b).gammas), a.output);
    } else if (*simulate) {
      ExperimentConfig c;
      c.variant = variant;
      c.n = resolve_n(a, variant);
      c.trials = a.trials;
      c.seed = a.seed;
      c.threads = a.threads;
      c.distinct_f12 = a.distinct_f12;
      c.physical_wrong_branch = a.physical_wrong_branch;
      print_simulation(run_experiment(c), a.output);
    } else if (*verify) {
      VerifyOptions o;
      if (a.variant_given) o.variant = variant;
      o.seed = a.seed;
      o.threads = a.threads;
      if (!a.inject_gammas.empty()) o.gamma_override = parse_gammas(a.inject_gammas);
      Json lines = Json::array();
      const auto results = run_verification(o, [&](const CheckResult& r) {
        if (a.output == "json") {
          lines.push_back({{"criterion", r.criterion}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        } else {
          std::cout << (r.passed ? "PASS" : "FAIL") << "  [" << r.criterion << "] " << r.name << ": "
                    << r.detail << std::endl;
        }
      });
      bool all = true;
      for (const auto& r : results) all = all && r.passed;
      if (a.output == "json") {
        std::cout << Json{{"passed", all}, {"checks", lines}}.dump(2) << "\n";
      } else {
        std::cout << (all ? "all checks passed" : "verification FAILED") << "\n";
      }
      return all ? 0 : kExitVerification;
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}
