#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qclone/bitfunc.hpp"

namespace qclone {

using Complex = std::complex<double>;

/// Dense pure state of n qubits; amplitude x belongs to the basis ket |x>.
class StateVector {
 public:
  StateVector() = default;
  /// |0...0> on n qubits.
  explicit StateVector(unsigned n);
  /// Takes ownership of `amps`; the length must be a power of two. No
  /// normalization is applied.
  explicit StateVector(std::vector<Complex> amps);

  static StateVector basis_state(unsigned n, std::size_t index);

  unsigned n() const { return n_; }
  std::size_t dim() const { return amps_.size(); }
  std::span<const Complex> amps() const { return amps_; }
  std::span<Complex> amps() { return amps_; }
  const Complex& operator[](std::size_t x) const { return amps_[x]; }
  Complex& operator[](std::size_t x) { return amps_[x]; }

  double norm_squared() const;
  StateVector& operator*=(Complex scale);

 private:
  unsigned n_ = 0;
  std::vector<Complex> amps_;
};

/// 2^{-n/2} sum_x (-1)^{f(x)} |x>: the output of the phase-kickback circuit
/// H^n, then one query of f with the target qubit prepared in |->.
StateVector phase_state(const BoolFunc& f);

/// Phase oracle: |x> -> (-1)^{f(x)} |x>.
StateVector oracle_phase_apply(const BoolFunc& f, StateVector psi);

/// <a|b>, conjugate-linear in the first argument.
Complex inner(const StateVector& a, const StateVector& b);

/// Overlap <phase_state(f)|psi> without materializing phase_state(f).
Complex phase_overlap(const BoolFunc& f, const StateVector& psi);

/// H applied to every qubit (fast Walsh-Hadamard transform, normalized).
StateVector walsh_hadamard(StateVector psi);

}  // namespace qclone
