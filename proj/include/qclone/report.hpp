#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qclone/bitfunc.hpp"
#include "qclone/cloner.hpp"
#include "qclone/fraction.hpp"
#include "qclone/statevec.hpp"
#include "qclone/strategies.hpp"

namespace qclone {

using Json = nlohmann::ordered_json;

/// {"n": 3, "table_hex": "40"}
Json to_json(const BoolFunc& f);
BoolFunc bool_func_from_json(const nlohmann::json& j);

/// Amplitudes as [[re, im], ...].
Json to_json(const StateVector& psi);

/// All function sets and the H partition with canonical representatives.
Json to_json(const FamilyBundle& bundle);

/// {"decimal": x, "exact": "p/q" | null}
Json number_json(double value, const std::optional<Fraction>& exact);
Json number_json(double value);

/// Overlaps, optimal efficiencies ("gamma", "gamma_exact"), mean success,
/// failure posterior, boundary eigenvalue, and the mean-objective optimum for
/// comparison.
Json efficiency_report(const FamilyBundle& bundle);

Json to_json(const AnalyticScores& a);
Json to_json(const ScoreReport& r);
Json to_json(const ExperimentResult& r);

/// "variant,n,strategy,trials,successes,rate,analytic,ci99"
std::string csv_header();
std::string csv_row(const ScoreReport& r);

}  // namespace qclone
