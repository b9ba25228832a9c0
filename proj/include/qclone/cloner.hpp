#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qclone/bitfunc.hpp"
#include "qclone/rng.hpp"
#include "qclone/statevec.hpp"

namespace qclone {

/// Minimum eigenvalue accepted as positive semidefinite.
inline constexpr double kFeasibilityTolerance = 1e-10;

/**
 * A linearly independent ensemble of pure states together with the 1 -> 2
 * probabilistic cloning efficiencies assigned to them.
 *
 * gram1(i, j) = <psi_i|psi_j> and gram2(i, j) = <psi_i|psi_j>^2. Efficiencies
 * gamma are achievable when gram1 - sqrt(G) gram2 sqrt(G) is positive
 * semidefinite, G = diag(gamma).
 */
struct CloneSpec {
  std::vector<StateVector> states;
  Eigen::MatrixXcd gram1;
  Eigen::MatrixXcd gram2;
  std::vector<double> gammas;

  std::size_t size() const { return states.size(); }
};

/// Builds the Gram matrices. Throws DomainError when the states are linearly
/// dependent and DimensionError when their qubit counts differ. `gammas`
/// defaults to all zeros; explicit gammas must be feasible.
CloneSpec make_clone_spec(std::vector<StateVector> states, std::vector<double> gammas = {});

/// Replaces the efficiencies, checking feasibility.
CloneSpec with_gammas(CloneSpec spec, std::vector<double> gammas);

/// +-1 per state so that the overlaps along a spanning tree of the nonzero
/// overlap graph become nonnegative. Within each connected component the
/// assignment flipping fewer states is chosen. Throws GaugeError for complex
/// overlaps or for a sign pattern that no assignment makes nonnegative.
std::vector<int> gauge_signs(const Eigen::MatrixXcd& gram);
std::vector<StateVector> gauge_normalize(std::vector<StateVector> states);

Eigen::MatrixXcd residual_matrix(const CloneSpec& spec, std::span<const double> gammas);
double residual_min_eigenvalue(const CloneSpec& spec, std::span<const double> gammas);
bool feasible(const CloneSpec& spec, std::span<const double> gammas);

/// Groups of state indices whose efficiencies are tied. The order of the
/// groups is the priority order used by Objective::kLexicographic.
using SymmetryPattern = std::vector<std::vector<std::size_t>>;

/// Ties i and j whenever swapping them leaves `gram` unchanged (closed under
/// transitivity). Groups are ordered by size, largest first, then by their
/// smallest index.
SymmetryPattern detect_symmetry(const Eigen::MatrixXcd& gram);

enum class Objective {
  /// Maximize the first group's efficiency, then the next one among the
  /// maximizers, and so on.
  kLexicographic,
  /// Maximize the mean efficiency.
  kAverage,
};

struct EfficiencyOptions {
  /// Defaults to detect_symmetry() of the gauged Gram matrix.
  std::optional<SymmetryPattern> symmetry;
  Objective objective = Objective::kLexicographic;
};

/**
 * Optimal efficiencies under the positive-semidefiniteness condition.
 *
 * The states are gauged first, so the result does not depend on their signs.
 * The search runs in s = sqrt(gamma) coordinates, where the minimum eigenvalue
 * of the residual is jointly concave: an outer bisection on the feasibility of
 * each priority group, an inner bisection on the sign of the derivative of the
 * minimum eigenvalue for the remaining groups. Intended for small ensembles;
 * the cost grows exponentially with the number of groups.
 */
std::vector<double> max_efficiencies(const CloneSpec& spec, const EfficiencyOptions& options = {});

/// Flag outcome of one cloning attempt on states[which]: true with
/// probability gammas[which].
bool sample_clone(const CloneSpec& spec, std::size_t which, TrialRng& rng);

/// Posterior over the input state given a failed flag, uniform prior:
/// (1 - gamma_i) / sum_j (1 - gamma_j). Uniform when every gamma is 1.
std::vector<double> failure_posterior(std::span<const double> gammas);
std::vector<double> failure_posterior(const CloneSpec& spec);

/// Gauged phase states of the family's f0 candidates with the lexicographic
/// optimum as efficiencies.
CloneSpec clone_spec_for_family(const FamilyBundle& bundle);

}  // namespace qclone
