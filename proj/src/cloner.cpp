#include "qclone/cloner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <string>

#include "qclone/errors.hpp"

namespace qclone {

namespace {

constexpr int kBisectionSteps = 64;
constexpr double kOverlapZero = 1e-12;

double min_eigenvalue(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

void check_gammas(const CloneSpec& spec, std::span<const double> gammas) {
  if (gammas.size() != spec.size()) {
    throw DimensionError("expected " + std::to_string(spec.size()) + " efficiencies, got " +
                         std::to_string(gammas.size()));
  }
  for (double g : gammas) {
    if (!(g >= 0.0 && g <= 1.0)) throw DomainError("efficiency outside [0, 1]");
  }
}

// Residual X1 - S X2 S as a function of one sqrt-efficiency per group.
class GroupedResidual {
 public:
  GroupedResidual(Eigen::MatrixXcd x1, Eigen::MatrixXcd x2, const SymmetryPattern& groups)
      : x1_(std::move(x1)), x2_(std::move(x2)), groups_(groups), group_of_(x1_.rows()) {
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      for (auto i : groups_[g]) group_of_[i] = g;
    }
  }

  struct Eval {
    double lambda = 0.0;
    Eigen::VectorXcd v;
  };

  std::size_t groups() const { return groups_.size(); }
  std::size_t group_size(std::size_t g) const { return groups_[g].size(); }

  Eigen::VectorXd expand(std::span<const double> s) const {
    Eigen::VectorXd full(x1_.rows());
    for (Eigen::Index i = 0; i < full.size(); ++i) full(i) = s[group_of_[i]];
    return full;
  }

  Eval eval(std::span<const double> s) const {
    const Eigen::VectorXd full = expand(s);
    const Eigen::MatrixXcd r = x1_ - (full.asDiagonal() * x2_ * full.asDiagonal());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r);
    return {es.eigenvalues()(0), es.eigenvectors().col(0)};
  }

  // d lambda_min / d s_g via the eigenvector of the smallest eigenvalue.
  double slope(const Eval& e, std::span<const double> s, std::size_t g) const {
    const Eigen::VectorXd full = expand(s);
    const Eigen::VectorXcd w = x2_ * (full.asDiagonal() * e.v);
    double d = 0.0;
    for (auto i : groups_[g]) {
      d -= 2.0 * (std::conj(e.v(static_cast<Eigen::Index>(i))) * w(static_cast<Eigen::Index>(i))).real();
    }
    return d;
  }

 private:
  Eigen::MatrixXcd x1_;
  Eigen::MatrixXcd x2_;
  SymmetryPattern groups_;
  std::vector<std::size_t> group_of_;
};

struct Point {
  double lambda = 0.0;
  std::vector<double> s;
};

// Maximizes lambda_min over groups [level, k) with the earlier groups held
// fixed. lambda_min is concave in s, and so is its partial maximum, so each
// level bisects on the sign of the derivative; by the envelope theorem the
// derivative of the inner maximum is the partial derivative at the inner
// maximizer. Flat stretches resolve to the right.
Point maximize_tail(const GroupedResidual& p, std::vector<double> s, std::size_t level) {
  if (level == p.groups()) return {p.eval(s).lambda, std::move(s)};
  auto slope_at = [&](double t) {
    s[level] = t;
    Point inner = maximize_tail(p, s, level + 1);
    return p.slope(p.eval(inner.s), inner.s, level);
  };
  double lo = 0.0;
  double hi = 1.0;
  if (slope_at(1.0) >= 0.0) {
    lo = 1.0;
  } else {
    for (int it = 0; it < kBisectionSteps && hi - lo > 1e-16; ++it) {
      const double mid = 0.5 * (lo + hi);
      (slope_at(mid) >= 0.0 ? lo : hi) = mid;
    }
  }
  s[level] = lo;
  return maximize_tail(p, std::move(s), level + 1);
}

std::vector<double> lexicographic_optimum(const GroupedResidual& p) {
  std::vector<double> s(p.groups(), 0.0);
  std::vector<double> witness = maximize_tail(p, s, 0).s;
  for (std::size_t j = 0; j < p.groups(); ++j) {
    auto best_with = [&](double t) {
      s[j] = t;
      return maximize_tail(p, s, j + 1);
    };
    Point top = best_with(1.0);
    if (top.lambda >= 0.0) {
      s[j] = 1.0;
      witness = std::move(top.s);
      continue;
    }
    // [lo, hi] brackets the largest t admitting a feasible completion.
    double lo = witness[j];
    double hi = 1.0;
    for (int it = 0; it < kBisectionSteps && hi - lo > 1e-16; ++it) {
      const double mid = 0.5 * (lo + hi);
      (best_with(mid).lambda >= 0.0 ? lo : hi) = mid;
    }
    s[j] = lo;
    // The constraint is now active: the feasible completions are the
    // maximizers of lambda_min, which are stable under the small error in lo.
    return maximize_tail(p, s, j + 1).s;
  }
  return s;
}

double average_value(const GroupedResidual& p, std::span<const double> s) {
  double v = 0.0;
  for (std::size_t g = 0; g < p.groups(); ++g) v += static_cast<double>(p.group_size(g)) * s[g] * s[g];
  return v;
}

// Largest feasible value of group `level` with every other group fixed, or
// nullopt when no value is feasible. Requires level to be the last group.
std::optional<std::vector<double>> sup_last(const GroupedResidual& p, std::vector<double> s,
                                            std::size_t level) {
  Point w = maximize_tail(p, s, level);
  if (w.lambda < 0.0) return std::nullopt;
  s = w.s;
  s[level] = 1.0;
  if (p.eval(s).lambda >= 0.0) return s;
  double lo = w.s[level];
  double hi = 1.0;
  for (int it = 0; it < kBisectionSteps && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    s[level] = mid;
    (p.eval(s).lambda >= 0.0 ? lo : hi) = mid;
  }
  s[level] = lo;
  return s;
}

std::optional<std::vector<double>> average_tail(const GroupedResidual& p, std::vector<double> s,
                                                std::size_t level) {
  if (level + 1 == p.groups()) return sup_last(p, std::move(s), level);
  auto value_at = [&](double t) -> std::pair<double, std::optional<std::vector<double>>> {
    s[level] = t;
    auto best = average_tail(p, s, level + 1);
    if (!best) return {-std::numeric_limits<double>::infinity(), std::nullopt};
    return {average_value(p, *best), std::move(best)};
  };
  // Coarse scan, then golden-section refinement around the best grid point.
  constexpr int kGrid = 64;
  int best_i = -1;
  double best_v = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kGrid; ++i) {
    const double v = value_at(static_cast<double>(i) / kGrid).first;
    if (v > best_v) {
      best_v = v;
      best_i = i;
    }
  }
  if (best_i < 0) return std::nullopt;
  double a = std::max(0, best_i - 1) / static_cast<double>(kGrid);
  double b = std::min(kGrid, best_i + 1) / static_cast<double>(kGrid);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = value_at(c).first;
  double fd = value_at(d).first;
  for (int it = 0; it < 80 && b - a > 1e-13; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = value_at(c).first;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = value_at(d).first;
    }
  }
  auto centre = value_at(0.5 * (a + b));
  auto grid = value_at(static_cast<double>(best_i) / kGrid);
  return centre.first >= grid.first ? centre.second : grid.second;
}

void validate_pattern(const SymmetryPattern& groups, std::size_t m) {
  std::vector<int> seen(m, 0);
  for (const auto& g : groups) {
    if (g.empty()) throw std::invalid_argument("symmetry pattern: empty group");
    for (auto i : g) {
      if (i >= m) throw std::invalid_argument("symmetry pattern: index out of range");
      ++seen[i];
    }
  }
  if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; })) {
    throw std::invalid_argument("symmetry pattern must partition the state indices");
  }
}

}  // namespace

CloneSpec make_clone_spec(std::vector<StateVector> states, std::vector<double> gammas) {
  if (states.empty()) throw std::invalid_argument("make_clone_spec: no states");
  const auto m = static_cast<Eigen::Index>(states.size());
  CloneSpec spec;
  spec.gram1.resize(m, m);
  spec.gram2.resize(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      const Complex o = inner(states[i], states[j]);
      spec.gram1(i, j) = o;
      spec.gram2(i, j) = o * o;
    }
  }
  if (min_eigenvalue(spec.gram1) <= 1e-12) {
    throw DomainError("make_clone_spec: states are linearly dependent");
  }
  spec.states = std::move(states);
  if (gammas.empty()) gammas.assign(spec.size(), 0.0);
  return with_gammas(std::move(spec), std::move(gammas));
}

CloneSpec with_gammas(CloneSpec spec, std::vector<double> gammas) {
  if (!feasible(spec, gammas)) throw DomainError("with_gammas: efficiencies are not achievable");
  spec.gammas = std::move(gammas);
  return spec;
}

std::vector<int> gauge_signs(const Eigen::MatrixXcd& gram) {
  const auto m = static_cast<std::size_t>(gram.rows());
  for (Eigen::Index i = 0; i < gram.rows(); ++i) {
    for (Eigen::Index j = 0; j < gram.cols(); ++j) {
      if (std::abs(gram(i, j).imag()) > kOverlapZero) {
        throw GaugeError("gauge: overlap <" + std::to_string(i) + "|" + std::to_string(j) +
                         "> is not real");
      }
    }
  }
  auto overlap = [&](std::size_t i, std::size_t j) {
    return gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)).real();
  };
  std::vector<int> sign(m, 0);
  for (std::size_t root = 0; root < m; ++root) {
    if (sign[root] != 0) continue;
    std::vector<std::size_t> component{root};
    sign[root] = 1;
    std::queue<std::size_t> q;
    q.push(root);
    while (!q.empty()) {
      const auto i = q.front();
      q.pop();
      for (std::size_t j = 0; j < m; ++j) {
        if (sign[j] != 0 || std::abs(overlap(i, j)) <= kOverlapZero) continue;
        sign[j] = overlap(i, j) > 0 ? sign[i] : -sign[i];
        component.push_back(j);
        q.push(j);
      }
    }
    const auto flipped = std::count_if(component.begin(), component.end(),
                                       [&](std::size_t i) { return sign[i] < 0; });
    if (2 * static_cast<std::size_t>(flipped) > component.size()) {
      for (auto i : component) sign[i] = -sign[i];
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (sign[i] * sign[j] * overlap(i, j) < -kOverlapZero) {
        throw GaugeError("gauge: overlap signs cannot all be made nonnegative");
      }
    }
  }
  return sign;
}

std::vector<StateVector> gauge_normalize(std::vector<StateVector> states) {
  const auto m = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXcd gram(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) gram(i, j) = inner(states[i], states[j]);
  }
  const auto sign = gauge_signs(gram);
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (sign[i] < 0) states[i] *= -1.0;
  }
  return states;
}

Eigen::MatrixXcd residual_matrix(const CloneSpec& spec, std::span<const double> gammas) {
  check_gammas(spec, gammas);
  Eigen::VectorXd root(static_cast<Eigen::Index>(gammas.size()));
  for (std::size_t i = 0; i < gammas.size(); ++i) root(static_cast<Eigen::Index>(i)) = std::sqrt(gammas[i]);
  return spec.gram1 - root.asDiagonal() * spec.gram2 * root.asDiagonal();
}

double residual_min_eigenvalue(const CloneSpec& spec, std::span<const double> gammas) {
  return min_eigenvalue(residual_matrix(spec, gammas));
}

bool feasible(const CloneSpec& spec, std::span<const double> gammas) {
  return residual_min_eigenvalue(spec, gammas) >= -kFeasibilityTolerance;
}

SymmetryPattern detect_symmetry(const Eigen::MatrixXcd& gram) {
  const auto m = static_cast<std::size_t>(gram.rows());
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
    return parent[i] == i ? i : parent[i] = find(parent[i]);
  };
  auto swapped = [&](std::size_t k, std::size_t i, std::size_t j) {
    return k == i ? j : (k == j ? i : k);
  };
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      bool invariant = true;
      for (std::size_t a = 0; a < m && invariant; ++a) {
        for (std::size_t b = 0; b < m && invariant; ++b) {
          const auto pa = static_cast<Eigen::Index>(swapped(a, i, j));
          const auto pb = static_cast<Eigen::Index>(swapped(b, i, j));
          invariant = std::abs(gram(pa, pb) - gram(static_cast<Eigen::Index>(a),
                                                   static_cast<Eigen::Index>(b))) <= kOverlapZero;
        }
      }
      if (invariant) parent[find(j)] = find(i);
    }
  }
  SymmetryPattern groups;
  std::vector<long> slot(m, -1);
  for (std::size_t i = 0; i < m; ++i) {
    const auto r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<long>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(slot[r])].push_back(i);
  }
  std::stable_sort(groups.begin(), groups.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return groups;
}

std::vector<double> max_efficiencies(const CloneSpec& spec, const EfficiencyOptions& options) {
  const auto sign = gauge_signs(spec.gram1);
  Eigen::VectorXd d(static_cast<Eigen::Index>(sign.size()));
  for (std::size_t i = 0; i < sign.size(); ++i) d(static_cast<Eigen::Index>(i)) = sign[i];
  const Eigen::MatrixXcd x1 = d.asDiagonal() * spec.gram1 * d.asDiagonal();

  const SymmetryPattern groups = options.symmetry ? *options.symmetry : detect_symmetry(x1);
  validate_pattern(groups, spec.size());
  const GroupedResidual problem(x1, spec.gram2, groups);

  std::vector<double> s;
  if (options.objective == Objective::kLexicographic) {
    s = lexicographic_optimum(problem);
  } else {
    auto best = average_tail(problem, std::vector<double>(groups.size(), 0.0), 0);
    if (!best) throw std::runtime_error("max_efficiencies: no feasible point found");
    s = std::move(*best);
  }

  std::vector<double> gammas(spec.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (auto i : groups[g]) gammas[i] = std::clamp(s[g] * s[g], 0.0, 1.0);
  }
  return gammas;
}

bool sample_clone(const CloneSpec& spec, std::size_t which, TrialRng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return u(rng) < spec.gammas.at(which);
}

std::vector<double> failure_posterior(std::span<const double> gammas) {
  std::vector<double> out(gammas.size());
  double total = 0.0;
  for (double g : gammas) total += 1.0 - g;
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    out[i] = total > 0.0 ? (1.0 - gammas[i]) / total : 1.0 / static_cast<double>(gammas.size());
  }
  return out;
}

std::vector<double> failure_posterior(const CloneSpec& spec) { return failure_posterior(spec.gammas); }

CloneSpec clone_spec_for_family(const FamilyBundle& bundle) {
  std::vector<StateVector> states;
  for (const auto& f : bundle.s_f0) states.push_back(phase_state(f));
  CloneSpec spec = make_clone_spec(gauge_normalize(std::move(states)));
  auto gammas = max_efficiencies(spec);
  return with_gammas(std::move(spec), std::move(gammas));
}

}  // namespace qclone
