#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qclone/rng.hpp"

namespace qclone {

/// Largest supported number of input bits. Truth tables and state vectors are
/// dense, so memory grows as 2^n.
inline constexpr unsigned kMaxBits = 14;

/**
 * A Boolean function {0,1}^n -> {0,1} stored as its packed truth table.
 *
 * Entry k is h(k) where k is the input read as an n-bit big-endian integer,
 * so the bit string "a0 a1 ... a_{2^n-1}" lists h(00..0), h(00..1), ... in
 * order. `from_bits("01000000")` is the function with h(001) = 1 only.
 */
class BoolFunc {
 public:
  BoolFunc() = default;
  /// Constant-zero function on n bits.
  explicit BoolFunc(unsigned n);

  /// Parse a truth table written as a string of '0'/'1' of length 2^n.
  static BoolFunc from_bits(std::string_view bits);
  /// Parse the hex form produced by to_hex(); the first table entry is the
  /// most significant bit of the first hex digit.
  static BoolFunc from_hex(unsigned n, std::string_view hex);
  /// Table of `lo` followed by table of `hi`; result has one more input bit.
  static BoolFunc concat(const BoolFunc& lo, const BoolFunc& hi);

  unsigned n() const { return n_; }
  std::size_t size() const { return std::size_t{1} << n_; }

  bool operator[](std::size_t k) const {
    return (words_[k >> 6] >> (k & 63)) & 1u;
  }
  bool at(std::size_t k) const;
  void set(std::size_t k, bool value);

  BoolFunc complement() const;
  /// The table repeated `copies` times (copies must be a power of two).
  BoolFunc repeated(std::size_t copies) const;
  std::size_t weight() const;
  std::size_t hamming(const BoolFunc& other) const;

  std::string to_bits() const;
  std::string to_hex() const;

  std::span<const std::uint64_t> words() const { return words_; }

  bool operator==(const BoolFunc& other) const = default;
  /// Lexicographic order of the bit strings a0 a1 ... (a function with a 0 at
  /// the first differing position sorts first). Functions with fewer input
  /// bits sort first.
  std::strong_ordering operator<=>(const BoolFunc& other) const;

 private:
  friend BoolFunc operator^(const BoolFunc& f, const BoolFunc& g);
  void clear_padding();

  unsigned n_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Pointwise XOR; throws DimensionError when the input sizes differ.
BoolFunc operator^(const BoolFunc& f, const BoolFunc& g);

struct BoolFuncHash {
  std::size_t operator()(const BoolFunc& f) const noexcept;
};

enum class FamilyVariant { A, B };

/// Smallest n the family is defined for: 3 for A (8-bit blocks), 2 for B.
unsigned base_bits(FamilyVariant variant);
char variant_name(FamilyVariant variant);
FamilyVariant parse_variant(std::string_view text);

/// One H set {h, complement(h)}; `canonical` is the lexicographically
/// smaller member.
struct HSet {
  BoolFunc canonical;
  BoolFunc other;

  bool contains(const BoolFunc& g) const { return g == canonical || g == other; }
};

/**
 * The function sets of one problem instance family at a given n.
 *
 * h_sets[i] is the pair {s2[i], complement(s2[i])}, so the H sets are listed
 * in the same order as s2. s_f12 is s1 followed by s2.
 */
struct FamilyBundle {
  FamilyVariant variant = FamilyVariant::A;
  unsigned n = 0;
  std::vector<BoolFunc> s_f0;
  std::vector<BoolFunc> s1;
  std::vector<BoolFunc> s2;
  std::vector<BoolFunc> s_f12;
  std::vector<HSet> h_sets;
  /// Index into s_f0 of the element that lies in s1; the other two lie in s2.
  std::size_t s1_type_index = 0;

  /// Flattened union of all H sets (2^{n+1} functions).
  std::vector<BoolFunc> s_f() const;
  bool is_s1_type(std::size_t f0_index) const { return f0_index == s1_type_index; }

  std::optional<std::size_t> h_set_index(const BoolFunc& g) const;
  /// Indices into s_f12 of the admissible f1/f2 for the given f0.
  const std::vector<std::size_t>& partners(std::size_t f0_index) const {
    return partners_.at(f0_index);
  }

 private:
  friend FamilyBundle build_family(FamilyVariant, unsigned);
  std::unordered_map<BoolFunc, std::size_t, BoolFuncHash> h_lookup_;
  std::vector<std::vector<std::size_t>> partners_;
};

/// Builds the sets at level n by applying the doubling recursion to the
/// explicit base lists. Throws DomainError for n < base_bits(variant) or
/// n > kMaxBits.
FamilyBundle build_family(FamilyVariant variant, unsigned n);

/// Index of the H set containing g, or nullopt when g is not in S_f.
std::optional<std::size_t> h_set_of(const FamilyBundle& bundle, const BoolFunc& g);

/// Indices into s_f12 of the functions g with f0 ^ g in S_f.
std::vector<std::size_t> allowed_partners(const FamilyBundle& bundle,
                                          std::size_t f0_index);

/// A sampled task instance: f0 is an index into s_f0, f1 and f2 index s_f12.
struct Instance {
  std::size_t f0 = 0;
  std::size_t f1 = 0;
  std::size_t f2 = 0;

  bool operator==(const Instance&) const = default;
};

/// Uniform f0, then f1 and f2 drawn independently and uniformly from the
/// admissible partners of f0. With `distinct_f12`, f2 is redrawn from the
/// partners other than f1.
Instance sample_instance(const FamilyBundle& bundle, TrialRng& rng,
                         bool distinct_f12 = false);

}  // namespace qclone
