#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "qclone/bitfunc.hpp"
#include "qclone/errors.hpp"
#include "qclone/report.hpp"

using namespace qclone;

namespace {
BoolFunc B(const char* bits) { return BoolFunc::from_bits(bits); }

BoolFunc random_func(unsigned n, std::mt19937_64& gen) {
  BoolFunc f(n);
  for (std::size_t k = 0; k < f.size(); ++k) f.set(k, gen() & 1u);
  return f;
}
}  // namespace

TEST_CASE("xor of truth tables") {
  CHECK((B("01000000") ^ B("01010101")) == B("00010101"));
  CHECK((B("01000000") ^ B("11000011")) == B("10000011"));
  CHECK((B("0100") ^ B("0011")) == B("0111"));
  CHECK_THROWS_AS(B("0100") ^ B("01000000"), DimensionError);
}

TEST_CASE("bit order and hex packing") {
  const auto f = B("01000000");
  CHECK(f.n() == 3);
  CHECK(f[1]);
  CHECK_FALSE(f[0]);
  CHECK(f.to_hex() == "40");
  CHECK(B("11000011").to_hex() == "c3");
  CHECK(BoolFunc::from_hex(3, "c3") == B("11000011"));
  CHECK(B("0100").to_hex() == "4");
  CHECK_THROWS(BoolFunc::from_bits("0120"));
  CHECK_THROWS(BoolFunc::from_bits("010"));
}

TEST_CASE("complement, weight and distance") {
  const auto f = B("01010101");
  CHECK(f.complement() == B("10101010"));
  CHECK(f.weight() == 4);
  CHECK(f.hamming(B("01000000")) == 3);
  CHECK(f.complement().complement() == f);
  CHECK(B("0110").repeated(2) == B("01100110"));
  CHECK(BoolFunc::concat(B("0110"), B("1001")) == B("01101001"));
}

TEST_CASE("wide tables round-trip through hex and JSON") {
  std::mt19937_64 gen(11);
  for (unsigned n = 1; n <= kMaxBits; ++n) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto f = random_func(n, gen);
      CHECK(BoolFunc::from_hex(n, f.to_hex()) == f);
      CHECK(BoolFunc::from_bits(f.to_bits()) == f);
      const auto j = to_json(f);
      CHECK(j["n"] == n);
      CHECK(bool_func_from_json(nlohmann::json::parse(j.dump())) == f);
      CHECK(f.complement().weight() == f.size() - f.weight());
    }
  }
}

TEST_CASE("family sizes") {
  for (unsigned n = 3; n <= 10; ++n) {
    const auto a = build_family(FamilyVariant::A, n);
    CHECK(a.s_f0.size() == 3);
    CHECK(a.s1.size() == (std::size_t{1} << n));
    CHECK(a.s2.size() == (std::size_t{1} << n));
    CHECK(a.s_f12.size() == (std::size_t{2} << n));
    CHECK(a.h_sets.size() == (std::size_t{1} << n));
    CHECK(a.s_f().size() == (std::size_t{2} << n));
  }
  const auto b = build_family(FamilyVariant::B, 2);
  CHECK(b.s1.size() == 4);
  CHECK(b.h_sets.size() == 4);
  CHECK_THROWS_AS(build_family(FamilyVariant::A, 2), DomainError);
  CHECK_THROWS_AS(build_family(FamilyVariant::B, 1), DomainError);
  CHECK_THROWS_AS(build_family(FamilyVariant::A, kMaxBits + 1), DomainError);
  CHECK_THROWS_AS(parse_variant("C"), ValidationError);
}

TEST_CASE("base lists for variant A") {
  const auto a = build_family(FamilyVariant::A, 3);
  CHECK(a.s_f0[0] == B("01000000"));
  CHECK(a.s_f0[1] == B("01010101"));
  CHECK(a.s_f0[2] == B("11000011"));
  CHECK(a.s1[1] == B("10110000"));
  CHECK(a.s2[7] == B("10100101"));
  CHECK(a.s1_type_index == 0);
  CHECK(a.h_sets[1].canonical == B("00001111"));
  CHECK(a.h_sets[1].other == B("11110000"));
}

TEST_CASE("H-set lookup") {
  const auto a = build_family(FamilyVariant::A, 3);
  CHECK(h_set_of(a, B("00000000")) == 0u);
  CHECK(h_set_of(a, B("11111111")) == 0u);
  CHECK(h_set_of(a, B("01010101")) == 2u);
  CHECK(h_set_of(a, B("10101010")) == 2u);
  CHECK_FALSE(h_set_of(a, B("00010101")).has_value());
  CHECK_THROWS_AS(h_set_of(a, B("0000")), DimensionError);
}

TEST_CASE("structural invariants") {
  for (auto v : {FamilyVariant::A, FamilyVariant::B}) {
    for (unsigned n = base_bits(v); n <= 6; ++n) {
      CAPTURE(n);
      const auto b = build_family(v, n);
      const std::size_t half = std::size_t{1} << (n - 1);
      for (const auto* set : {&b.s1, &b.s2}) {
        for (std::size_t i = 0; i < set->size(); ++i)
          for (std::size_t j = i + 1; j < set->size(); ++j) CHECK((*set)[i].hamming((*set)[j]) == half);
      }
      const auto sf = b.s_f();
      CHECK(std::set<BoolFunc>(sf.begin(), sf.end()).size() == sf.size());
      for (const auto& h : b.h_sets) {
        CHECK(h.other == h.canonical.complement());
        CHECK(h.canonical < h.other);
      }
      for (std::size_t i = 0; i < 3; ++i) {
        const bool in_s1 = std::find(b.s1.begin(), b.s1.end(), b.s_f0[i]) != b.s1.end();
        const bool in_s2 = std::find(b.s2.begin(), b.s2.end(), b.s_f0[i]) != b.s2.end();
        CHECK(in_s1 == b.is_s1_type(i));
        CHECK(in_s2 == !b.is_s1_type(i));
        const auto& partners = b.partners(i);
        CHECK(partners == allowed_partners(b, i));
        for (std::size_t g : partners) CHECK(h_set_of(b, b.s_f0[i] ^ b.s_f12[g]).has_value());
      }
    }
  }
}

TEST_CASE("instance sampling respects admissibility") {
  const auto a = build_family(FamilyVariant::A, 4);
  TrialRng rng(5);
  for (int t = 0; t < 2000; ++t) {
    const auto inst = sample_instance(a, rng, t % 2 == 0);
    const auto& p = a.partners(inst.f0);
    CHECK(std::find(p.begin(), p.end(), inst.f1) != p.end());
    CHECK(std::find(p.begin(), p.end(), inst.f2) != p.end());
    if (t % 2 == 0) CHECK(inst.f1 != inst.f2);
  }
}
