#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qclone/bitfunc.hpp"

namespace qclone {

struct CheckResult {
  int criterion = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  /// Restrict family-specific checks to one variant.
  std::optional<FamilyVariant> variant;
  std::uint64_t seed = 7;
  unsigned threads = 1;
  /// Replaces the optimizer's efficiencies everywhere (fault injection).
  std::optional<std::vector<double>> gamma_override;
};

/// Which p2 expression a cloning run at variant B supports.
struct ClosedFormAdjudication {
  unsigned n = 0;
  std::uint64_t trials = 0;
  double rate = 0.0;
  double ci99 = 0.0;
  double compositional = 0.0;
  double closed_form = 0.0;
  bool compositional_inside = false;
  bool closed_form_inside = false;

  /// True when the interval contains exactly one of the two candidates.
  bool decisive() const { return compositional_inside != closed_form_inside; }
  std::string supported() const;
};

ClosedFormAdjudication adjudicate_closed_form(unsigned n, std::uint64_t trials, std::uint64_t seed,
                                              unsigned threads = 1,
                                              std::optional<std::vector<double>> gammas = std::nullopt);

/// Runs every acceptance check; `on_result` is invoked as each one finishes.
std::vector<CheckResult> run_verification(
    const VerifyOptions& options, const std::function<void(const CheckResult&)>& on_result = {});

}  // namespace qclone
