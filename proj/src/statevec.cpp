#include "qclone/statevec.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "qclone/errors.hpp"

namespace qclone {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw DimensionError(std::string(what) + ": dimensions " + std::to_string(a) + " and " +
                         std::to_string(b) + " differ");
  }
}

// 2^{-n/2}
double amplitude_scale(unsigned n) { return 1.0 / std::sqrt(std::ldexp(1.0, static_cast<int>(n))); }

}  // namespace

StateVector::StateVector(unsigned n) : n_(n), amps_(std::size_t{1} << n) {
  if (n > kMaxBits) throw DomainError("StateVector: too many qubits");
  amps_[0] = 1.0;
}

StateVector::StateVector(std::vector<Complex> amps) : amps_(std::move(amps)) {
  if (amps_.empty() || !std::has_single_bit(amps_.size())) {
    throw DimensionError("StateVector: length must be a power of two");
  }
  n_ = static_cast<unsigned>(std::countr_zero(amps_.size()));
}

StateVector StateVector::basis_state(unsigned n, std::size_t index) {
  StateVector v(n);
  if (index >= v.dim()) throw std::out_of_range("StateVector::basis_state");
  v.amps_[0] = 0.0;
  v.amps_[index] = 1.0;
  return v;
}

double StateVector::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

StateVector& StateVector::operator*=(Complex scale) {
  for (auto& a : amps_) a *= scale;
  return *this;
}

StateVector phase_state(const BoolFunc& f) {
  const double amp = amplitude_scale(f.n());
  std::vector<Complex> amps(f.size());
  for (std::size_t x = 0; x < amps.size(); ++x) amps[x] = f[x] ? -amp : amp;
  return StateVector(std::move(amps));
}

StateVector oracle_phase_apply(const BoolFunc& f, StateVector psi) {
  require_same_size(f.size(), psi.dim(), "oracle_phase_apply");
  for (std::size_t x = 0; x < psi.dim(); ++x) {
    if (f[x]) psi[x] = -psi[x];
  }
  return psi;
}

Complex inner(const StateVector& a, const StateVector& b) {
  require_same_size(a.dim(), b.dim(), "inner");
  Complex s = 0.0;
  for (std::size_t x = 0; x < a.dim(); ++x) s += std::conj(a[x]) * b[x];
  return s;
}

Complex phase_overlap(const BoolFunc& f, const StateVector& psi) {
  require_same_size(f.size(), psi.dim(), "phase_overlap");
  Complex s = 0.0;
  for (std::size_t x = 0; x < psi.dim(); ++x) s += f[x] ? -psi[x] : psi[x];
  return s * amplitude_scale(f.n());
}

StateVector walsh_hadamard(StateVector psi) {
  auto amps = psi.amps();
  for (std::size_t half = 1; half < amps.size(); half <<= 1) {
    for (std::size_t block = 0; block < amps.size(); block += 2 * half) {
      for (std::size_t i = block; i < block + half; ++i) {
        const Complex u = amps[i];
        const Complex v = amps[i + half];
        amps[i] = u + v;
        amps[i + half] = u - v;
      }
    }
  }
  psi *= amplitude_scale(psi.n());
  return psi;
}

}  // namespace qclone
