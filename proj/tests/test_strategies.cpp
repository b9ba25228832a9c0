#include <cmath>

#include "doctest.h"
#include "qclone/errors.hpp"
#include "qclone/report.hpp"
#include "qclone/strategies.hpp"

using namespace qclone;

namespace {
ExperimentConfig config(FamilyVariant v, unsigned n, std::uint64_t trials, std::uint64_t seed = 5) {
  ExperimentConfig c;
  c.variant = v;
  c.n = n;
  c.trials = trials;
  c.seed = seed;
  return c;
}
}  // namespace

TEST_CASE("exact scores") {
  const auto a = build_family(FamilyVariant::A, 3);
  const auto sa = analytic_scores(a, clone_spec_for_family(a).gammas);
  CHECK(*sa.p1_exact == Fraction(43, 64));
  CHECK(*sa.p2_exact == Fraction(3749, 4064));
  CHECK(sa.p2_closed_form_exact == *sa.p2_exact);
  CHECK(*sa.flag_fraction_exact == Fraction(77, 127));
  CHECK(*sa.p_guess_exact == Fraction(4, 5));
  CHECK(sa.p2 == doctest::Approx(0.9224902).epsilon(1e-7));

  const auto b = build_family(FamilyVariant::B, 2);
  const auto sb = analytic_scores(b, clone_spec_for_family(b).gammas);
  CHECK(*sb.p1_exact == Fraction(11, 16));
  CHECK(*sb.p2_exact == Fraction(41, 56));
  CHECK(sb.p2_closed_form_exact == Fraction(3, 4));

  for (unsigned n = 3; n <= 8; ++n) {
    const auto f = build_family(FamilyVariant::A, n);
    const auto s = analytic_scores(f, clone_spec_for_family(f).gammas);
    const double four_n = std::pow(4.0, n);
    CHECK(s.p1 == doctest::Approx(2.0 / 3 + 1.0 / (3 * four_n)));
    CHECK(s.p2 == doctest::Approx(117.0 / 127 + 10.0 / (127 * four_n)));
    CHECK(s.p2 > 117.0 / 127);
    CHECK(s.p1 < 117.0 / 127);
  }
}

TEST_CASE("conditionally deterministic branches") {
  const TaskContext ctx(FamilyVariant::A, 3);
  TrialRng inst_rng(3), rng(4);
  int s2_type = 0, flagged = 0;
  for (int t = 0; t < 5000; ++t) {
    const auto inst = sample_instance(ctx.bundle(), inst_rng);
    const auto nc = no_cloning_trial(ctx, inst, rng);
    CHECK(nc.branch == Branch::kAssumeS2);
    if (!ctx.bundle().is_s1_type(inst.f0)) {
      ++s2_type;
      CHECK(nc.success);
      CHECK_FALSE(nc.resampled);
    }
    const auto cl = cloning_trial(ctx, inst, rng);
    REQUIRE(cl.flag.has_value());
    if (*cl.flag) {
      ++flagged;
      CHECK(cl.branch == Branch::kCloneSuccess);
      CHECK(cl.success);
    } else {
      CHECK(cl.branch == Branch::kCloneFailure);
      CHECK(cl.f0_hypothesis == ctx.bundle().s1_type_index);
    }
    CHECK(cl.success == (cl.guesses == cl.truth));
  }
  CHECK(s2_type > 3000);
  CHECK(flagged > 2500);
}

TEST_CASE("Monte Carlo agrees with the exact scores") {
  for (auto [v, n] : {std::pair{FamilyVariant::A, 3u}, std::pair{FamilyVariant::A, 4u},
                      std::pair{FamilyVariant::B, 2u}, std::pair{FamilyVariant::B, 3u}}) {
    const auto r = run_experiment(config(v, n, 200'000));
    for (const auto& s : {*r.no_cloning, *r.cloning}) {
      CAPTURE(strategy_name(s.strategy));
      CHECK(std::abs(s.rate - s.analytic) < s.ci99);
    }
  }
}

TEST_CASE("reproducibility") {
  auto c = config(FamilyVariant::A, 3, 20'000, 42);
  const auto one = to_json(run_experiment(c)).dump();
  CHECK(to_json(run_experiment(c)).dump() == one);
  c.threads = 3;
  CHECK(to_json(run_experiment(c)).dump() == one);
  const auto threaded = run_experiment(c);
  c.threads = 1;
  const auto serial = run_experiment(c);
  CHECK(threaded.cloning->successes == serial.cloning->successes);
  CHECK(threaded.no_cloning->successes == serial.no_cloning->successes);
  CHECK(threaded.diagnostics.instance_checksum == serial.diagnostics.instance_checksum);
  c.seed = 43;
  CHECK(to_json(run_experiment(c)).dump() != one);
}

TEST_CASE("common random numbers across strategy subsets") {
  auto c = config(FamilyVariant::B, 2, 10'000);
  const auto both = run_experiment(c);
  c.run_cloning = false;
  const auto nc_only = run_experiment(c);
  c.run_cloning = true;
  c.run_no_cloning = false;
  const auto cl_only = run_experiment(c);
  CHECK(both.diagnostics.instance_checksum == nc_only.diagnostics.instance_checksum);
  CHECK(both.diagnostics.instance_checksum == cl_only.diagnostics.instance_checksum);
  CHECK(both.no_cloning->successes == nc_only.no_cloning->successes);
  CHECK(both.cloning->successes == cl_only.cloning->successes);
  CHECK_FALSE(cl_only.no_cloning.has_value());
}

TEST_CASE("configuration errors") {
  auto c = config(FamilyVariant::A, 3, 0);
  CHECK_THROWS_AS(validate(c), ValidationError);
  CHECK_THROWS_AS(run_experiment(c), ValidationError);
  c = config(FamilyVariant::A, 2, 10);
  CHECK_THROWS(run_experiment(c));
  c = config(FamilyVariant::A, 3, 10);
  c.threads = 0;
  CHECK_THROWS_AS(validate(c), ValidationError);
  c.threads = 1;
  c.run_cloning = c.run_no_cloning = false;
  CHECK_THROWS_AS(validate(c), ValidationError);
  CHECK_THROWS(TaskContext(FamilyVariant::A, 3, std::vector<double>{0.5, 0.9, 0.9}));
}

TEST_CASE("variants of the wrong-branch accounting and instance law") {
  auto c = config(FamilyVariant::A, 3, 50'000);
  c.physical_wrong_branch = true;
  const auto physical = run_experiment(c);
  CHECK(physical.cloning->rate > 0.5);
  CHECK(physical.no_cloning->rate >= 2.0 / 3 - 0.01);
  c.physical_wrong_branch = false;
  c.distinct_f12 = true;
  const auto distinct = run_experiment(c);
  CHECK(distinct.cloning->rate > 0.85);
}

TEST_CASE("confidence interval") {
  CHECK(binomial_ci99(0.5, 10'000) == doctest::Approx(2.5758293035489004 * 0.005));
  CHECK(binomial_ci99(0.0, 100) == 0.0);
}
