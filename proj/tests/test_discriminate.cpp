#include <cmath>

#include "doctest.h"
#include "qclone/bitfunc.hpp"
#include "qclone/discriminate.hpp"
#include "qclone/errors.hpp"

using namespace qclone;

TEST_CASE("basis validation") {
  const auto a = build_family(FamilyVariant::A, 3);
  CHECK_NOTHROW(basis_from_functions(a.s1));
  CHECK_NOTHROW(basis_from_functions(a.s2));
  auto dup = a.s2;
  dup[1] = dup[0];
  CHECK_THROWS_AS(basis_from_functions(dup), MeasurementError);
}

TEST_CASE("an incomplete basis fails the completeness check") {
  const auto a = build_family(FamilyVariant::A, 3);
  const auto partial = basis_from_functions(std::vector<BoolFunc>(a.s2.begin(), a.s2.begin() + 7));
  CHECK_THROWS_AS(partial.born_probabilities(phase_state(a.s2[7])), MeasurementError);
}

TEST_CASE("a complement is identified with certainty") {
  const auto a = build_family(FamilyVariant::A, 3);
  const auto basis = basis_from_functions(a.s2);
  TrialRng rng(1);
  for (std::size_t i = 0; i < a.s2.size(); ++i) {
    const auto psi = phase_state(a.s2[i].complement());
    for (int rep = 0; rep < 20; ++rep) CHECK(measure(basis, psi, rng) == i);
  }
}

TEST_CASE("Born statistics of a superposition") {
  const auto b = build_family(FamilyVariant::B, 2);
  const auto basis = basis_from_functions(b.s2);
  const auto psi = phase_state(b.s1[0]);
  const auto probs = basis.born_probabilities(psi);
  double total = 0.0;
  for (double p : probs) total += p;
  CHECK(total == doctest::Approx(1.0));
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double amp = inner(basis.vector(i), psi).real();
    CHECK(probs[i] == doctest::Approx(amp * amp));
  }
  TrialRng rng(8);
  const int trials = 200'000;
  std::vector<int> counts(probs.size());
  for (int t = 0; t < trials; ++t) ++counts[measure(basis, psi, rng)];
  for (std::size_t i = 0; i < probs.size(); ++i) {
    CHECK(std::abs(counts[i] - trials * probs[i]) <= 3 * std::sqrt(trials * probs[i] * (1 - probs[i])) + 1);
  }
}

TEST_CASE("unnormalized input is rejected") {
  const auto basis = basis_from_functions(build_family(FamilyVariant::B, 2).s2);
  auto psi = phase_state(BoolFunc::from_bits("0110"));
  psi *= 1.1;
  CHECK_THROWS_AS(basis.born_probabilities(psi), MeasurementError);
  TrialRng rng(2);
  CHECK_THROWS_AS(measure(basis, StateVector(3), rng), DimensionError);
}
