#include "qclone/bitfunc.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <stdexcept>

#include "qclone/errors.hpp"

namespace qclone {

namespace {

std::size_t word_count(unsigned n) { return ((std::size_t{1} << n) + 63) / 64; }

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

BoolFunc::BoolFunc(unsigned n) : n_(n) {
  if (n > kMaxBits) {
    throw DomainError("BoolFunc: n = " + std::to_string(n) + " exceeds the cap of " +
                      std::to_string(kMaxBits));
  }
  words_.assign(word_count(n), 0);
}

BoolFunc BoolFunc::from_bits(std::string_view bits) {
  if (bits.empty() || !std::has_single_bit(bits.size())) {
    throw std::invalid_argument("BoolFunc::from_bits: length must be a power of two");
  }
  BoolFunc f(static_cast<unsigned>(std::countr_zero(bits.size())));
  for (std::size_t k = 0; k < bits.size(); ++k) {
    if (bits[k] != '0' && bits[k] != '1') {
      throw std::invalid_argument("BoolFunc::from_bits: expected only '0' and '1'");
    }
    f.set(k, bits[k] == '1');
  }
  return f;
}

BoolFunc BoolFunc::from_hex(unsigned n, std::string_view hex) {
  BoolFunc f(n);
  const std::size_t digits = (f.size() + 3) / 4;
  if (hex.size() != digits) {
    throw std::invalid_argument("BoolFunc::from_hex: expected " + std::to_string(digits) +
                                " hex digits for n = " + std::to_string(n));
  }
  for (std::size_t d = 0; d < digits; ++d) {
    const int v = hex_value(hex[d]);
    if (v < 0) throw std::invalid_argument("BoolFunc::from_hex: bad hex digit");
    for (std::size_t b = 0; b < 4; ++b) {
      const bool bit = (v >> (3 - b)) & 1;
      const std::size_t k = 4 * d + b;
      if (k < f.size()) {
        f.set(k, bit);
      } else if (bit) {
        throw std::invalid_argument("BoolFunc::from_hex: nonzero padding bits");
      }
    }
  }
  return f;
}

BoolFunc BoolFunc::concat(const BoolFunc& lo, const BoolFunc& hi) {
  if (lo.n_ != hi.n_) throw DimensionError("BoolFunc::concat: operand sizes differ");
  BoolFunc out(lo.n_ + 1);
  const std::size_t half = lo.size();
  if (half >= 64) {
    std::copy(lo.words_.begin(), lo.words_.end(), out.words_.begin());
    std::copy(hi.words_.begin(), hi.words_.end(), out.words_.begin() + lo.words_.size());
  } else {
    out.words_[0] = lo.words_[0] | (hi.words_[0] << half);
  }
  return out;
}

bool BoolFunc::at(std::size_t k) const {
  if (k >= size()) throw std::out_of_range("BoolFunc::at");
  return (*this)[k];
}

void BoolFunc::set(std::size_t k, bool value) {
  if (k >= size()) throw std::out_of_range("BoolFunc::set");
  const std::uint64_t mask = std::uint64_t{1} << (k & 63);
  if (value) {
    words_[k >> 6] |= mask;
  } else {
    words_[k >> 6] &= ~mask;
  }
}

void BoolFunc::clear_padding() {
  if (size() < 64) words_[0] &= (std::uint64_t{1} << size()) - 1;
}

BoolFunc BoolFunc::complement() const {
  BoolFunc out = *this;
  for (auto& w : out.words_) w = ~w;
  out.clear_padding();
  return out;
}

BoolFunc BoolFunc::repeated(std::size_t copies) const {
  if (copies == 0 || !std::has_single_bit(copies)) {
    throw std::invalid_argument("BoolFunc::repeated: copies must be a power of two");
  }
  BoolFunc out = *this;
  for (std::size_t c = 1; c < copies; c *= 2) out = concat(out, out);
  return out;
}

std::size_t BoolFunc::weight() const {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::size_t BoolFunc::hamming(const BoolFunc& other) const {
  if (n_ != other.n_) throw DimensionError("BoolFunc::hamming: operand sizes differ");
  std::size_t total = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    total += static_cast<std::size_t>(std::popcount(words_[i] ^ other.words_[i]));
  }
  return total;
}

std::string BoolFunc::to_bits() const {
  std::string s(size(), '0');
  for (std::size_t k = 0; k < size(); ++k) {
    if ((*this)[k]) s[k] = '1';
  }
  return s;
}

std::string BoolFunc::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  const std::size_t digits = (size() + 3) / 4;
  std::string s(digits, '0');
  for (std::size_t d = 0; d < digits; ++d) {
    int v = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      const std::size_t k = 4 * d + b;
      v = (v << 1) | ((k < size() && (*this)[k]) ? 1 : 0);
    }
    s[d] = kDigits[v];
  }
  return s;
}

std::strong_ordering BoolFunc::operator<=>(const BoolFunc& other) const {
  if (n_ != other.n_) return n_ <=> other.n_;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    const std::uint64_t diff = words_[i] ^ other.words_[i];
    if (diff != 0) {
      const bool mine = (words_[i] >> std::countr_zero(diff)) & 1u;
      return mine ? std::strong_ordering::greater : std::strong_ordering::less;
    }
  }
  return std::strong_ordering::equal;
}

BoolFunc operator^(const BoolFunc& f, const BoolFunc& g) {
  if (f.n() != g.n()) {
    throw DimensionError("xor: operands have " + std::to_string(f.n()) + " and " +
                         std::to_string(g.n()) + " input bits");
  }
  BoolFunc out(f.n());
  for (std::size_t i = 0; i < out.words_.size(); ++i) out.words_[i] = f.words_[i] ^ g.words_[i];
  return out;
}

std::size_t BoolFuncHash::operator()(const BoolFunc& f) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ f.n();
  for (auto w : f.words()) {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

unsigned base_bits(FamilyVariant variant) { return variant == FamilyVariant::A ? 3 : 2; }

char variant_name(FamilyVariant variant) { return variant == FamilyVariant::A ? 'A' : 'B'; }

FamilyVariant parse_variant(std::string_view text) {
  if (text == "A" || text == "a") return FamilyVariant::A;
  if (text == "B" || text == "b") return FamilyVariant::B;
  throw ValidationError("unknown family variant '" + std::string(text) + "' (expected A or B)");
}

std::vector<BoolFunc> FamilyBundle::s_f() const {
  std::vector<BoolFunc> out;
  out.reserve(2 * h_sets.size());
  for (const auto& h : h_sets) {
    out.push_back(h.canonical);
    out.push_back(h.other);
  }
  return out;
}

std::optional<std::size_t> FamilyBundle::h_set_index(const BoolFunc& g) const {
  if (g.n() != n) throw DimensionError("h_set_of: function size does not match the family");
  auto it = h_lookup_.find(g);
  if (it == h_lookup_.end()) return std::nullopt;
  return it->second;
}

namespace {

std::vector<BoolFunc> parse_all(std::initializer_list<std::string_view> tables) {
  std::vector<BoolFunc> out;
  for (auto t : tables) out.push_back(BoolFunc::from_bits(t));
  return out;
}

HSet make_hset(const BoolFunc& a, const BoolFunc& b) {
  return a < b ? HSet{a, b} : HSet{b, a};
}

// h -> {hh, ~h h}
std::vector<BoolFunc> double_up(const std::vector<BoolFunc>& level) {
  std::vector<BoolFunc> out;
  out.reserve(2 * level.size());
  for (const auto& a : level) out.push_back(BoolFunc::concat(a, a));
  for (const auto& a : level) out.push_back(BoolFunc::concat(a.complement(), a));
  return out;
}

}  // namespace

FamilyBundle build_family(FamilyVariant variant, unsigned n) {
  const unsigned base = base_bits(variant);
  if (n < base || n > kMaxBits) {
    throw DomainError("build_family: n = " + std::to_string(n) + " outside [" +
                      std::to_string(base) + ", " + std::to_string(kMaxBits) + "] for variant " +
                      variant_name(variant));
  }

  FamilyBundle b;
  b.variant = variant;
  b.n = base;
  if (variant == FamilyVariant::A) {
    b.s_f0 = parse_all({"01000000", "01010101", "11000011"});
    b.s1 = parse_all({"01000000", "10110000", "10001100", "00100110", "00010101", "10000011",
                      "00101001", "00011010"});
    b.s2 = parse_all({"00000000", "00001111", "01010101", "00110011", "10011001", "11000011",
                      "01101001", "10100101"});
  } else {
    b.s_f0 = parse_all({"0100", "0011", "1001"});
    b.s1 = parse_all({"0001", "0010", "0100", "1000"});
    b.s2 = parse_all({"0000", "0011", "0101", "1001"});
  }

  for (; b.n < n; ++b.n) {
    for (auto& f : b.s_f0) f = BoolFunc::concat(f, f);
    b.s1 = double_up(b.s1);
    b.s2 = double_up(b.s2);
  }

  // At every level the H sets are {h, ~h} for h in S_2: at the base level by
  // the explicit lists, above it because {aa, ~a~a} and {~aa, a~a} are exactly
  // {h, ~h} for the two children h of a.
  b.h_sets.reserve(b.s2.size());
  for (const auto& h : b.s2) b.h_sets.push_back(make_hset(h, h.complement()));

  b.s_f12 = b.s1;
  b.s_f12.insert(b.s_f12.end(), b.s2.begin(), b.s2.end());

  for (std::size_t i = 0; i < b.h_sets.size(); ++i) {
    b.h_lookup_.emplace(b.h_sets[i].canonical, i);
    b.h_lookup_.emplace(b.h_sets[i].other, i);
  }

  // Both base lists put the S_1 member of S_f0 first.
  b.s1_type_index = 0;

  for (std::size_t i = 0; i < b.s_f0.size(); ++i) b.partners_.push_back(allowed_partners(b, i));
  return b;
}

std::optional<std::size_t> h_set_of(const FamilyBundle& bundle, const BoolFunc& g) {
  return bundle.h_set_index(g);
}

std::vector<std::size_t> allowed_partners(const FamilyBundle& bundle, std::size_t f0_index) {
  const BoolFunc& f0 = bundle.s_f0.at(f0_index);
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < bundle.s_f12.size(); ++j) {
    if (bundle.h_set_index(f0 ^ bundle.s_f12[j])) out.push_back(j);
  }
  return out;
}

Instance sample_instance(const FamilyBundle& bundle, TrialRng& rng, bool distinct_f12) {
  Instance inst;
  std::uniform_int_distribution<std::size_t> pick_f0(0, bundle.s_f0.size() - 1);
  inst.f0 = pick_f0(rng);
  const auto& partners = bundle.partners(inst.f0);
  std::uniform_int_distribution<std::size_t> pick(0, partners.size() - 1);
  inst.f1 = partners[pick(rng)];
  if (distinct_f12 && partners.size() > 1) {
    std::uniform_int_distribution<std::size_t> pick_rest(0, partners.size() - 2);
    std::size_t j = pick_rest(rng);
    if (partners[j] == inst.f1) j = partners.size() - 1;
    inst.f2 = partners[j];
  } else {
    inst.f2 = partners[pick(rng)];
  }
  return inst;
}

}  // namespace qclone
