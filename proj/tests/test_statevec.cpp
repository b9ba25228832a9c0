#include <bit>
#include <cmath>
#include <random>

#include "doctest.h"
#include "qclone/bitfunc.hpp"
#include "qclone/errors.hpp"
#include "qclone/statevec.hpp"

using namespace qclone;

namespace {
BoolFunc random_func(unsigned n, std::mt19937_64& gen) {
  BoolFunc f(n);
  for (std::size_t k = 0; k < f.size(); ++k) f.set(k, gen() & 1u);
  return f;
}

// Dense Hadamard transform with entries (-1)^{popcount(x & y)} / sqrt(2^n).
StateVector dense_hadamard(const StateVector& psi) {
  const std::size_t d = psi.dim();
  std::vector<Complex> out(d);
  for (std::size_t y = 0; y < d; ++y)
    for (std::size_t x = 0; x < d; ++x)
      out[y] += (std::popcount(x & y) % 2 ? -1.0 : 1.0) * psi[x];
  for (auto& a : out) a /= std::sqrt(double(d));
  return StateVector(out);
}
}  // namespace

TEST_CASE("phase-state overlaps") {
  const auto f = BoolFunc::from_bits("01000000");
  const auto g = BoolFunc::from_bits("01010101");
  const auto h = BoolFunc::from_bits("11000011");
  CHECK(inner(phase_state(f), phase_state(g)).real() == doctest::Approx(0.25));
  CHECK(inner(phase_state(f), phase_state(h)).real() == doctest::Approx(0.25));
  CHECK(std::abs(inner(phase_state(g), phase_state(h))) == doctest::Approx(0.0));
  CHECK(phase_state(f).norm_squared() == doctest::Approx(1.0));
}

TEST_CASE("overlap equals 1 - 2 d/2^n") {
  std::mt19937_64 gen(3);
  for (unsigned n = 1; n <= 10; ++n) {
    for (int rep = 0; rep < 10; ++rep) {
      const auto f = random_func(n, gen), g = random_func(n, gen);
      const double expect = 1.0 - 2.0 * double(f.hamming(g)) / double(f.size());
      CHECK(inner(phase_state(f), phase_state(g)).real() == doctest::Approx(expect));
      CHECK(phase_overlap(f, phase_state(g)).real() == doctest::Approx(expect));
    }
  }
}

TEST_CASE("oracle application") {
  const auto f = BoolFunc::from_bits("0110");
  const auto psi = oracle_phase_apply(f, walsh_hadamard(StateVector(2)));
  CHECK(inner(psi, phase_state(f)).real() == doctest::Approx(1.0));
  CHECK_THROWS_AS(oracle_phase_apply(BoolFunc::from_bits("01"), psi), DimensionError);
}

TEST_CASE("Walsh-Hadamard transform") {
  SUBCASE("parity maps to all-ones") {
    BoolFunc parity(3);
    for (std::size_t x = 0; x < 8; ++x) parity.set(x, std::popcount(x) % 2);
    const auto out = walsh_hadamard(phase_state(parity));
    CHECK(std::abs(out[7]) == doctest::Approx(1.0));
  }
  SUBCASE("matches the dense matrix and is an involution") {
    std::mt19937_64 gen(9);
    std::normal_distribution<double> normal;
    std::vector<Complex> amps(8);
    for (auto& a : amps) a = {normal(gen), normal(gen)};
    const StateVector psi(amps);
    const auto fast = walsh_hadamard(psi);
    const auto dense = dense_hadamard(psi);
    const auto back = walsh_hadamard(fast);
    for (std::size_t x = 0; x < 8; ++x) {
      CHECK(std::abs(fast[x] - dense[x]) < 1e-12);
      CHECK(std::abs(back[x] - psi[x]) < 1e-12);
    }
  }
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(StateVector(std::vector<Complex>(3)), DimensionError);
  CHECK(StateVector::basis_state(2, 3)[3] == Complex(1.0));
  CHECK_THROWS(StateVector::basis_state(2, 4));
}
