#include "qclone/strategies.hpp"

#include <algorithm>
#include <exception>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

#include "qclone/errors.hpp"

namespace qclone {

namespace {

constexpr std::size_t kNoSet = static_cast<std::size_t>(-1);

std::size_t lookup(const FamilyBundle& b, const BoolFunc& g) {
  auto idx = b.h_set_index(g);
  return idx ? *idx : kNoSet;
}

std::array<std::size_t, 2> uniform_pair(std::size_t sets, TrialRng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, sets - 1);
  const std::size_t g1 = pick(rng);
  const std::size_t g2 = pick(rng);
  return {g1, g2};
}

void finish(const TaskContext& ctx, TrialRecord& r) {
  r.truth = {ctx.target_h_set(r.instance.f0, r.instance.f1),
             ctx.target_h_set(r.instance.f0, r.instance.f2)};
  r.success = r.guesses == r.truth;
}

}  // namespace

std::string_view strategy_name(Strategy s) {
  return s == Strategy::kNoCloning ? "no_cloning" : "cloning";
}

std::string_view branch_name(Branch b) {
  switch (b) {
    case Branch::kAssumeS2: return "assume_s2";
    case Branch::kCloneSuccess: return "clone_success";
    case Branch::kCloneFailure: return "clone_failure";
  }
  return "?";
}

TaskContext::TaskContext(FamilyVariant variant, unsigned n, std::optional<std::vector<double>> gammas)
    : bundle_(build_family(variant, n)),
      spec_(gammas ? with_gammas(clone_spec_for_family(bundle_), *gammas)
                   : clone_spec_for_family(bundle_)),
      s1_basis_(basis_from_functions(bundle_.s1)),
      s2_basis_(basis_from_functions(bundle_.s2)) {
  const auto& f0s = bundle_.s_f0;
  std::vector<std::size_t> s2_type;
  for (std::size_t i = 0; i < f0s.size(); ++i) {
    if (!bundle_.is_s1_type(i)) s2_type.push_back(i);
  }
  if (s2_type.size() != 2) throw std::logic_error("TaskContext: expected two S_2-type candidates");
  const BoolFunc diff = f0s[s2_type[0]] ^ f0s[s2_type[1]];
  query_point_ = 0;
  while (query_point_ < diff.size() && !diff[query_point_]) ++query_point_;

  target_.resize(f0s.size());
  s2_guess_.resize(f0s.size());
  for (std::size_t i = 0; i < f0s.size(); ++i) {
    for (const auto& g : bundle_.s_f12) target_[i].push_back(lookup(bundle_, f0s[i] ^ g));
    for (const auto& g : bundle_.s2) s2_guess_[i].push_back(lookup(bundle_, f0s[i] ^ g));
  }
  for (const auto& g : bundle_.s1) {
    s1_guess_.push_back(lookup(bundle_, f0s[bundle_.s1_type_index] ^ g));
  }
}

std::size_t TaskContext::target_h_set(std::size_t f0, std::size_t g) const {
  const std::size_t h = target_.at(f0).at(g);
  if (h == kNoSet) throw std::out_of_range("target_h_set: f0 ^ g is not in S_f");
  return h;
}

std::size_t TaskContext::s2_guess(std::size_t f0_hypothesis, std::size_t k) const {
  return s2_guess_.at(f0_hypothesis).at(k);
}

TrialRecord no_cloning_trial(const TaskContext& ctx, const Instance& inst, TrialRng& rng,
                             const TrialOptions& options) {
  const auto& b = ctx.bundle();
  TrialRecord r;
  r.instance = inst;
  r.strategy = Strategy::kNoCloning;
  r.branch = Branch::kAssumeS2;

  // The single f0 query is spent classically, assuming f0 is S_2-type.
  const std::size_t x0 = ctx.classical_query_point();
  const bool bit = b.s_f0[inst.f0][x0];
  r.classical_bit = bit;
  std::size_t hyp = 0;
  for (std::size_t i = 0; i < b.s_f0.size(); ++i) {
    if (!b.is_s1_type(i) && b.s_f0[i][x0] == bit) hyp = i;
  }
  r.f0_hypothesis = hyp;

  const BoolFunc& f1 = b.s_f12[inst.f1];
  const BoolFunc& f2 = b.s_f12[inst.f2];
  r.labels = {measure(ctx.s2_basis(), phase_state(f1), rng),
              measure(ctx.s2_basis(), phase_state(f2), rng)};
  r.guesses = {ctx.s2_guess(hyp, r.labels[0]), ctx.s2_guess(hyp, r.labels[1])};

  if (hyp != inst.f0 && !options.physical_wrong_branch) {
    r.guesses = uniform_pair(ctx.h_set_count(), rng);
    r.resampled = true;
  }
  finish(ctx, r);
  return r;
}

TrialRecord cloning_trial(const TaskContext& ctx, const Instance& inst, TrialRng& rng,
                          const TrialOptions& options) {
  const auto& b = ctx.bundle();
  const auto& spec = ctx.clone_spec();
  TrialRecord r;
  r.instance = inst;
  r.strategy = Strategy::kCloning;

  const BoolFunc& f1 = b.s_f12[inst.f1];
  const BoolFunc& f2 = b.s_f12[inst.f2];
  const bool flag = sample_clone(spec, inst.f0, rng);
  r.flag = flag;

  if (flag) {
    // Two exact copies of the clonee; each picks up one phase query and ends
    // in a state of the S_2 phase basis, up to sign.
    r.branch = Branch::kCloneSuccess;
    const StateVector& clonee = spec.states[inst.f0];
    r.labels = {measure(ctx.s2_basis(), oracle_phase_apply(f1, clonee), rng),
                measure(ctx.s2_basis(), oracle_phase_apply(f2, clonee), rng)};
    // h_sets[k] contains s2[k].
    r.guesses = r.labels;
  } else {
    r.branch = Branch::kCloneFailure;
    const std::size_t hyp = b.s1_type_index;
    r.f0_hypothesis = hyp;
    r.labels = {measure(ctx.s1_basis(), phase_state(f1), rng),
                measure(ctx.s1_basis(), phase_state(f2), rng)};
    r.guesses = {ctx.s1_guess(r.labels[0]), ctx.s1_guess(r.labels[1])};
    if (hyp != inst.f0 && !options.physical_wrong_branch) {
      r.guesses = uniform_pair(ctx.h_set_count(), rng);
      r.resampled = true;
    }
  }
  finish(ctx, r);
  return r;
}

AnalyticScores analytic_scores(const FamilyBundle& bundle, std::span<const double> gammas) {
  if (gammas.size() != bundle.s_f0.size()) {
    throw DimensionError("analytic_scores: one efficiency per f0 candidate expected");
  }
  AnalyticScores a;
  a.variant = bundle.variant;
  a.n = bundle.n;
  a.gammas.assign(gammas.begin(), gammas.end());

  const auto m = static_cast<std::int64_t>(bundle.s_f0.size());
  std::int64_t s2_type = 0;
  for (std::size_t i = 0; i < bundle.s_f0.size(); ++i) s2_type += bundle.is_s1_type(i) ? 0 : 1;
  const auto sets = static_cast<std::int64_t>(bundle.h_sets.size());
  const Fraction chance(1, sets * sets);
  const Fraction q(s2_type, m);

  a.p1_exact = q + (Fraction(1) - q) * chance;
  a.p1 = to_double(*a.p1_exact);

  const auto posterior = failure_posterior(gammas);
  a.flag_fraction = std::accumulate(gammas.begin(), gammas.end(), 0.0) / static_cast<double>(m);
  a.p_guess = posterior[bundle.s1_type_index];
  const double c = 1.0 / static_cast<double>(sets * sets);
  a.p2 = a.flag_fraction + (1.0 - a.flag_fraction) * (a.p_guess + (1.0 - a.p_guess) * c);

  const auto two_n_minus_1 = std::int64_t{1} << (2 * bundle.n - 1);
  a.p2_closed_form_exact = bundle.variant == FamilyVariant::A
                               ? Fraction(117, 127) + Fraction(5, 127 * two_n_minus_1)
                               : Fraction(5, 7) + Fraction(2, 7 * two_n_minus_1);
  a.p2_closed_form = to_double(a.p2_closed_form_exact);

  bool all_exact = true;
  for (double g : gammas) {
    a.gammas_exact.push_back(recover_fraction(g));
    all_exact = all_exact && a.gammas_exact.back().has_value();
  }
  if (all_exact) {
    Fraction sum(0);
    Fraction miss(0);
    for (const auto& g : a.gammas_exact) {
      sum += *g;
      miss += Fraction(1) - *g;
    }
    const Fraction ps = sum / m;
    const Fraction pg =
        miss == Fraction(0) ? Fraction(1, m) : (Fraction(1) - *a.gammas_exact[bundle.s1_type_index]) / miss;
    a.flag_fraction_exact = ps;
    a.p_guess_exact = pg;
    a.p2_exact = ps + (Fraction(1) - ps) * (pg + (Fraction(1) - pg) * chance);
  }
  return a;
}

double binomial_ci99(double rate, std::uint64_t trials) {
  if (trials == 0) return 0.0;
  return kZ99 * std::sqrt(rate * (1.0 - rate) / static_cast<double>(trials));
}

void validate(const ExperimentConfig& config) {
  if (config.trials == 0) throw ValidationError("trials must be at least 1");
  if (config.threads == 0) throw ValidationError("threads must be at least 1");
  const unsigned base = base_bits(config.variant);
  if (config.n < base || config.n > kMaxBits) {
    throw ValidationError("n must lie in [" + std::to_string(base) + ", " +
                          std::to_string(kMaxBits) + "] for variant " +
                          variant_name(config.variant));
  }
  if (!config.run_no_cloning && !config.run_cloning) {
    throw ValidationError("no strategy selected");
  }
}

namespace {

struct Tally {
  std::uint64_t nc_success = 0;
  std::uint64_t cl_success = 0;
  ExperimentDiagnostics d;

  void merge(const Tally& o) {
    nc_success += o.nc_success;
    cl_success += o.cl_success;
    d.flag_successes += o.d.flag_successes;
    d.successes_given_flag += o.d.successes_given_flag;
    d.flag_failures += o.d.flag_failures;
    d.s1_type_given_failure += o.d.s1_type_given_failure;
    d.f0_s2_type += o.d.f0_s2_type;
    d.no_cloning_successes_given_s2_type += o.d.no_cloning_successes_given_s2_type;
    d.instance_checksum += o.d.instance_checksum;
  }
};

std::uint64_t instance_digest(std::uint64_t trial, const Instance& inst) {
  TrialRng mix(trial ^ (inst.f0 << 40) ^ (inst.f1 << 20) ^ inst.f2);
  return mix();
}

Tally run_range(const TaskContext& ctx, const ExperimentConfig& config, std::uint64_t begin,
                std::uint64_t end) {
  const TrialOptions options{config.physical_wrong_branch};
  const auto& b = ctx.bundle();
  Tally t;
  for (std::uint64_t trial = begin; trial < end; ++trial) {
    TrialRng inst_rng(derive_seed(config.seed, trial, 0));
    const Instance inst = sample_instance(b, inst_rng, config.distinct_f12);
    t.d.instance_checksum += instance_digest(trial, inst);
    const bool s2_type = !b.is_s1_type(inst.f0);
    if (s2_type) ++t.d.f0_s2_type;

    if (config.run_no_cloning) {
      TrialRng rng(derive_seed(config.seed, trial, 1));
      const bool ok = no_cloning_trial(ctx, inst, rng, options).success;
      t.nc_success += ok;
      if (s2_type) t.d.no_cloning_successes_given_s2_type += ok;
    }
    if (config.run_cloning) {
      TrialRng rng(derive_seed(config.seed, trial, 2));
      const TrialRecord r = cloning_trial(ctx, inst, rng, options);
      t.cl_success += r.success;
      if (*r.flag) {
        ++t.d.flag_successes;
        t.d.successes_given_flag += r.success;
      } else {
        ++t.d.flag_failures;
        t.d.s1_type_given_failure += b.is_s1_type(inst.f0);
      }
    }
  }
  return t;
}

ScoreReport make_report(Strategy s, const ExperimentConfig& c, std::uint64_t successes,
                        double analytic) {
  ScoreReport r;
  r.strategy = s;
  r.variant = c.variant;
  r.n = c.n;
  r.trials = c.trials;
  r.successes = successes;
  r.rate = static_cast<double>(successes) / static_cast<double>(c.trials);
  r.analytic = analytic;
  r.ci99 = binomial_ci99(r.rate, c.trials);
  return r;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  const TaskContext ctx(config.variant, config.n, config.gammas);

  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(config.threads, config.trials));
  std::vector<Tally> partial(workers);
  if (workers == 1) {
    partial[0] = run_range(ctx, config, 0, config.trials);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t begin = config.trials * w / workers;
      const std::uint64_t end = config.trials * (w + 1) / workers;
      pool.emplace_back([&, w, begin, end] {
        try {
          partial[w] = run_range(ctx, config, begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  Tally total;
  for (const auto& p : partial) total.merge(p);

  ExperimentResult res;
  res.config = config;
  res.analytic = analytic_scores(ctx.bundle(), ctx.clone_spec().gammas);
  res.diagnostics = total.d;
  if (config.run_no_cloning) {
    res.no_cloning = make_report(Strategy::kNoCloning, config, total.nc_success, res.analytic.p1);
  }
  if (config.run_cloning) {
    res.cloning = make_report(Strategy::kCloning, config, total.cl_success, res.analytic.p2);
  }
  return res;
}

}  // namespace qclone
