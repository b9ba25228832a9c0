#include "qclone/fraction.hpp"

#include <cmath>

namespace qclone {

std::optional<Fraction> recover_fraction(double x, std::int64_t max_denominator, double tolerance) {
  if (!std::isfinite(x)) return std::nullopt;
  // Convergents h_k / k_k of the continued fraction of x.
  std::int64_t h_prev = 1, h = static_cast<std::int64_t>(std::floor(x));
  std::int64_t k_prev = 0, k = 1;
  double rest = x - std::floor(x);
  for (int depth = 0; depth < 64 && rest > 1e-15; ++depth) {
    const double inv = 1.0 / rest;
    const auto a = static_cast<std::int64_t>(std::floor(inv));
    const std::int64_t k_next = a * k + k_prev;
    if (k_next > max_denominator) break;
    const std::int64_t h_next = a * h + h_prev;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
    if (std::abs(x - static_cast<double>(h) / static_cast<double>(k)) <= 1e-15) break;
    rest = inv - static_cast<double>(a);
  }
  if (std::abs(x - static_cast<double>(h) / static_cast<double>(k)) > tolerance) return std::nullopt;
  return Fraction(h, k);
}

std::string to_string(const Fraction& f) {
  if (f.denominator() == 1) return std::to_string(f.numerator());
  return std::to_string(f.numerator()) + "/" + std::to_string(f.denominator());
}

double to_double(const Fraction& f) { return boost::rational_cast<double>(f); }

}  // namespace qclone
