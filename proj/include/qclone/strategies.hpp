#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qclone/bitfunc.hpp"
#include "qclone/cloner.hpp"
#include "qclone/discriminate.hpp"
#include "qclone/fraction.hpp"
#include "qclone/rng.hpp"

namespace qclone {

enum class Strategy { kNoCloning, kCloning };
std::string_view strategy_name(Strategy s);

/// Path a trial took through its strategy.
enum class Branch {
  kAssumeS2,      // no-cloning: f1, f2 assumed in S_2
  kCloneSuccess,  // cloning: flag reported success
  kCloneFailure,  // cloning: flag reported failure, f0 guessed to be the S_1-type candidate
};
std::string_view branch_name(Branch b);

struct TrialRecord {
  Instance instance;
  Strategy strategy = Strategy::kNoCloning;
  Branch branch = Branch::kAssumeS2;
  std::optional<bool> flag;           // cloning flag
  std::optional<bool> classical_bit;  // f0 at the classical query point
  /// Index into s_f0 the guesses were derived from; empty after a successful
  /// clone, where no hypothesis about f0 is needed.
  std::optional<std::size_t> f0_hypothesis;
  std::array<std::size_t, 2> labels{};  // measurement outcome indices
  /// Guesses were replaced by a uniform draw over H-set pairs because the
  /// hypothesis about f0 was wrong.
  bool resampled = false;
  std::array<std::size_t, 2> guesses{};  // H-set indices
  std::array<std::size_t, 2> truth{};    // H sets of f0^f1, f0^f2
  bool success = false;
};

struct TrialOptions {
  /// Score a wrong f0 hypothesis by the Born statistics of the measurement
  /// actually performed instead of a uniform draw over H-set pairs.
  bool physical_wrong_branch = false;
};

/**
 * Everything a trial needs, precomputed once per (variant, n): the family,
 * the cloning machine, the two measurement bases and the XOR -> H-set lookup
 * tables. Immutable and safe to share between threads.
 */
class TaskContext {
 public:
  /// Efficiencies default to the optimizer's output; an override must be
  /// feasible for the family's states.
  TaskContext(FamilyVariant variant, unsigned n,
              std::optional<std::vector<double>> gammas = std::nullopt);

  const FamilyBundle& bundle() const { return bundle_; }
  const CloneSpec& clone_spec() const { return spec_; }
  const MeasurementBasis& s1_basis() const { return s1_basis_; }
  const MeasurementBasis& s2_basis() const { return s2_basis_; }

  /// Input at which the two S_2-type f0 candidates differ.
  std::size_t classical_query_point() const { return query_point_; }
  /// H set of s_f0[f0] ^ s_f12[g]; throws std::out_of_range when g is not an
  /// admissible partner of f0.
  std::size_t target_h_set(std::size_t f0, std::size_t g) const;
  /// H set guessed from hypothesis f0 and S_2 measurement outcome k.
  std::size_t s2_guess(std::size_t f0_hypothesis, std::size_t k) const;
  /// H set guessed from the S_1-type hypothesis and S_1 measurement outcome k.
  std::size_t s1_guess(std::size_t k) const { return s1_guess_[k]; }
  std::size_t h_set_count() const { return bundle_.h_sets.size(); }

 private:
  FamilyBundle bundle_;
  CloneSpec spec_;
  MeasurementBasis s1_basis_;
  MeasurementBasis s2_basis_;
  std::size_t query_point_ = 0;
  std::vector<std::vector<std::size_t>> target_;    // [f0][g]
  std::vector<std::vector<std::size_t>> s2_guess_;  // [f0][k]
  std::vector<std::size_t> s1_guess_;
};

TrialRecord no_cloning_trial(const TaskContext& ctx, const Instance& inst, TrialRng& rng,
                             const TrialOptions& options = {});
TrialRecord cloning_trial(const TaskContext& ctx, const Instance& inst, TrialRng& rng,
                          const TrialOptions& options = {});

/// Closed-form scores. Doubles always; exact fractions when every efficiency
/// is recovered as a fraction.
struct AnalyticScores {
  FamilyVariant variant = FamilyVariant::A;
  unsigned n = 0;
  std::vector<double> gammas;
  double p1 = 0.0;
  /// p_s + (1 - p_s) [p_g + (1 - p_g) / 4^n] with p_s the mean efficiency and
  /// p_g the failure posterior of the S_1-type candidate.
  double p2 = 0.0;
  /// The family's closed-form expression for p2: 117/127 + 5/(127 2^{2n-1})
  /// for A, 5/7 + 2/(7 2^{2n-1}) for B. For B it differs from p2 by a factor
  /// two in the small term.
  double p2_closed_form = 0.0;
  double flag_fraction = 0.0;  // mean efficiency
  double p_guess = 0.0;

  std::vector<std::optional<Fraction>> gammas_exact;
  std::optional<Fraction> p1_exact;
  std::optional<Fraction> p2_exact;
  Fraction p2_closed_form_exact;
  std::optional<Fraction> flag_fraction_exact;
  std::optional<Fraction> p_guess_exact;
};

AnalyticScores analytic_scores(const FamilyBundle& bundle, std::span<const double> gammas);

/// Two-sided 99% normal-approximation half-width of a binomial rate.
double binomial_ci99(double rate, std::uint64_t trials);
inline constexpr double kZ99 = 2.5758293035489004;

struct ExperimentConfig {
  FamilyVariant variant = FamilyVariant::A;
  unsigned n = 3;
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool distinct_f12 = false;
  bool physical_wrong_branch = false;
  bool run_no_cloning = true;
  bool run_cloning = true;
  std::optional<std::vector<double>> gammas;
};

/// Throws ValidationError for trials == 0, threads == 0, n outside
/// [base_bits, kMaxBits] or an empty strategy set.
void validate(const ExperimentConfig& config);

struct ScoreReport {
  Strategy strategy = Strategy::kNoCloning;
  FamilyVariant variant = FamilyVariant::A;
  unsigned n = 0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double rate = 0.0;
  double analytic = 0.0;
  double ci99 = 0.0;
};

/// Conditional counts gathered alongside the scores.
struct ExperimentDiagnostics {
  std::uint64_t flag_successes = 0;
  std::uint64_t successes_given_flag = 0;
  std::uint64_t flag_failures = 0;
  std::uint64_t s1_type_given_failure = 0;
  std::uint64_t f0_s2_type = 0;
  std::uint64_t no_cloning_successes_given_s2_type = 0;
  std::uint64_t instance_checksum = 0;  // order-independent digest of the instance stream
};

struct ExperimentResult {
  ExperimentConfig config;
  AnalyticScores analytic;
  std::optional<ScoreReport> no_cloning;
  std::optional<ScoreReport> cloning;
  ExperimentDiagnostics diagnostics;
};

/// Runs both strategies on the same instance stream. Trial t draws its
/// instance and each strategy's randomness from streams seeded by
/// derive_seed(seed, t, .), so results do not depend on the thread count.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace qclone
