#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <boost/rational.hpp>

namespace qclone {

using Fraction = boost::rational<std::int64_t>;

/// Nearest continued-fraction convergent of x with denominator at most
/// `max_denominator`, returned only if it is within `tolerance` of x.
std::optional<Fraction> recover_fraction(double x, std::int64_t max_denominator = 10000,
                                         double tolerance = 1e-9);

std::string to_string(const Fraction& f);
double to_double(const Fraction& f);

}  // namespace qclone
