#pragma once

#include <cstddef>
#include <vector>

#include "qclone/bitfunc.hpp"
#include "qclone/rng.hpp"
#include "qclone/statevec.hpp"

namespace qclone {

/// Orthonormality / completeness tolerance for measurement bases.
inline constexpr double kBasisTolerance = 1e-10;
inline constexpr double kCompletenessTolerance = 1e-9;

/**
 * Orthonormal basis of phase states. Vector i is phase_state(functions[i]);
 * measuring reports the index i, and callers map it to whatever identity the
 * function carries (an H set, a member of S_1, ...). Vectors are generated on
 * demand from the truth tables.
 */
class MeasurementBasis {
 public:
  const std::vector<BoolFunc>& functions() const { return functions_; }
  std::size_t size() const { return functions_.size(); }
  unsigned n() const { return n_; }
  StateVector vector(std::size_t i) const { return phase_state(functions_.at(i)); }

  /// |<v_i|psi>|^2 for every basis vector. Throws MeasurementError when the
  /// probabilities do not sum to 1 within kCompletenessTolerance.
  std::vector<double> born_probabilities(const StateVector& psi) const;

 private:
  friend MeasurementBasis basis_from_functions(std::vector<BoolFunc> reps);
  unsigned n_ = 0;
  std::vector<BoolFunc> functions_;
};

/// Throws MeasurementError when two phase states are not orthogonal (this
/// includes duplicated or complementary functions), DimensionError when the
/// functions have different sizes.
MeasurementBasis basis_from_functions(std::vector<BoolFunc> reps);

/// Born-rule sample of the outcome index.
std::size_t measure(const MeasurementBasis& basis, const StateVector& psi, TrialRng& rng);

}  // namespace qclone
