#include <cmath>

#include "doctest.h"
#include "qclone/fraction.hpp"
#include "qclone/report.hpp"
#include "qclone/strategies.hpp"

using namespace qclone;

TEST_CASE("fraction recovery") {
  CHECK(*recover_fraction(7.0 / 127) == Fraction(7, 127));
  CHECK(*recover_fraction(3749.0 / 4064) == Fraction(3749, 4064));
  CHECK(*recover_fraction(0.5) == Fraction(1, 2));
  CHECK(*recover_fraction(-0.25) == Fraction(-1, 4));
  CHECK(*recover_fraction(2.0) == Fraction(2));
  CHECK_FALSE(recover_fraction(std::sqrt(2.0)).has_value());
  CHECK_FALSE(recover_fraction(1.0 / 10007).has_value());
  CHECK(to_string(Fraction(112, 127)) == "112/127");
  CHECK(to_string(Fraction(3)) == "3");
}

TEST_CASE("efficiency report fields") {
  const auto j = efficiency_report(build_family(FamilyVariant::A, 3));
  REQUIRE(j.contains("gamma"));
  REQUIRE(j.contains("gamma_exact"));
  CHECK(j["gamma_exact"][0] == "7/127");
  CHECK(j["gamma_exact"][1] == "112/127");
  CHECK(j["gamma"][2].get<double>() == doctest::Approx(112.0 / 127));
  CHECK(j["p_success"]["exact"] == "77/127");
}

TEST_CASE("family JSON uses hex tables") {
  const auto j = to_json(build_family(FamilyVariant::A, 3));
  CHECK(j["s_f0"][0] == "40");
  CHECK(j["s_f0"][2] == "c3");
  const auto f = to_json(BoolFunc::from_bits("11000011"));
  CHECK(f.dump() == R"({"n":3,"table_hex":"c3"})");
}

TEST_CASE("CSV rows") {
  CHECK(csv_header() == "variant,n,strategy,trials,successes,rate,analytic,ci99");
  ExperimentConfig c;
  c.trials = 1000;
  const auto r = run_experiment(c);
  const auto row = csv_row(*r.cloning);
  CHECK(row.rfind("A,3,cloning,1000,", 0) == 0);
  CHECK(std::count(row.begin(), row.end(), ',') == 7);
}
