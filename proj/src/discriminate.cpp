#include "qclone/discriminate.hpp"

#include <cmath>
#include <random>
#include <string>

#include "qclone/errors.hpp"

namespace qclone {

MeasurementBasis basis_from_functions(std::vector<BoolFunc> reps) {
  if (reps.empty()) throw MeasurementError("basis_from_functions: empty basis");
  const unsigned n = reps.front().n();
  for (const auto& f : reps) {
    if (f.n() != n) throw DimensionError("basis_from_functions: mixed function sizes");
  }
  if (reps.size() > reps.front().size()) {
    throw MeasurementError("basis_from_functions: more vectors than dimensions");
  }
  // <phase(f)|phase(g)> = 1 - 2 d(f, g) / 2^n, so orthogonality is d = 2^{n-1}.
  const double dim = static_cast<double>(reps.front().size());
  for (std::size_t i = 0; i < reps.size(); ++i) {
    for (std::size_t j = i + 1; j < reps.size(); ++j) {
      const double overlap = 1.0 - 2.0 * static_cast<double>(reps[i].hamming(reps[j])) / dim;
      if (std::abs(overlap) > kBasisTolerance) {
        throw MeasurementError("basis_from_functions: vectors " + std::to_string(i) + " and " +
                               std::to_string(j) + " overlap by " + std::to_string(overlap));
      }
    }
  }
  MeasurementBasis basis;
  basis.n_ = n;
  basis.functions_ = std::move(reps);
  return basis;
}

std::vector<double> MeasurementBasis::born_probabilities(const StateVector& psi) const {
  if (psi.n() != n_) throw DimensionError("measure: state and basis sizes differ");
  std::vector<double> probs(functions_.size());
  double total = 0.0;
  for (std::size_t i = 0; i < functions_.size(); ++i) {
    probs[i] = std::norm(phase_overlap(functions_[i], psi));
    total += probs[i];
  }
  if (std::abs(total - 1.0) > kCompletenessTolerance) {
    throw MeasurementError("measure: Born probabilities sum to " + std::to_string(total) +
                           "; the state has weight outside the basis span");
  }
  return probs;
}

std::size_t measure(const MeasurementBasis& basis, const StateVector& psi, TrialRng& rng) {
  const auto probs = basis.born_probabilities(psi);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double r = u(rng);
  for (std::size_t i = 0; i < probs.size(); ++i) {
    r -= probs[i];
    if (r < 0.0) return i;
  }
  // Rounding left r slightly positive: fall back to the last outcome with
  // nonzero weight.
  for (std::size_t i = probs.size(); i-- > 0;) {
    if (probs[i] > 0.0) return i;
  }
  return probs.size() - 1;
}

}  // namespace qclone
