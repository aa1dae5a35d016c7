#include "steptx/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

#include "steptx/alignment.hpp"
#include "steptx/estimators.hpp"
#include "steptx/rng.hpp"
#include "steptx/selection.hpp"
#include "steptx/solvers.hpp"
#include "steptx/tuning.hpp"

namespace steptx {

namespace {

constexpr std::size_t kLayoutBase = 200;  // grid the layouts are defined on

const std::vector<std::size_t>& layout_changepoints(Scenario s) {
  static const std::vector<std::size_t> equal = {25, 50, 75, 100, 125, 150, 175};
  static const std::vector<std::size_t> unequal = {20, 40, 50, 120, 134, 160, 176};
  return s == Scenario::equally_spaced ? equal : unequal;
}

// Segment levels as gamma multiples.
constexpr double kLevelUnits[] = {2.0, 4.0, 1.0, 5.0, 7.0, 8.0, 2.0, 1.0};

void check_scenario(const ScenarioSpec& spec) {
  if (spec.n0 == 0) throw argument_error("scenario: n0 must be >= 1");
  if (!std::isfinite(spec.gamma) || spec.gamma <= 0.0) {
    throw argument_error("scenario: gamma must be finite and > 0");
  }
  if (!std::isfinite(spec.sigma) || spec.sigma < 0.0) {
    throw argument_error("scenario: sigma must be finite and >= 0");
  }
  if (!(spec.rho_noise >= 0.0 && spec.rho_noise < 1.0)) {
    throw argument_error("scenario: rho_noise must be in [0, 1)");
  }
}

void check_configuration(const ConfigurationSpec& config) {
  if (config.source_lens.empty()) {
    throw argument_error("configuration: need at least one source length");
  }
  for (std::size_t n : config.source_lens) {
    if (n == 0) throw argument_error("configuration: source lengths must be >= 1");
  }
  const int K = static_cast<int>(config.source_lens.size());
  int prev = 0;
  for (int k : config.informative) {
    if (k < 1 || k > K) {
      throw argument_error("configuration: informative index " +
                           std::to_string(k) + " is outside [1, " +
                           std::to_string(K) + "]");
    }
    if (k <= prev) {
      throw argument_error(
          "configuration: informative indices must be strictly increasing");
    }
    prev = k;
  }
  if (!(config.h_fraction >= 0.0 && config.h_fraction <= 1.0)) {
    throw argument_error("configuration: h_fraction must be in [0, 1]");
  }
  if (config.kappa < 0.0 || config.kappa_tilde < 0.0) {
    throw argument_error("configuration: kappa variances must be >= 0");
  }
  if (!(config.rho_discrepancy >= 0.0 && config.rho_discrepancy < 1.0)) {
    throw argument_error("configuration: rho_discrepancy must be in [0, 1)");
  }
}

// AR(1) path with innovation sd `sd`: x_1 = e_1, x_i = rho x_{i-1} +
// (1 - rho) e_i. With rho = 0 this is exactly the iid stream.
std::vector<double> ar1_path(std::size_t n, double sd, double rho,
                             CounterRng& rng) {
  std::vector<double> x(n);
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double innov = sd * rng.gaussian();
    x[i] = (i == 0) ? innov : rho * prev + (1.0 - rho) * innov;
    prev = x[i];
  }
  return x;
}

}  // namespace

Signal scenario_truth(const ScenarioSpec& spec) {
  check_scenario(spec);
  const auto& base_cps = layout_changepoints(spec.scenario);

  std::vector<std::size_t> cps;
  if (spec.n0 == kLayoutBase) {
    cps = base_cps;
  } else {
    for (std::size_t t : base_cps) {
      // Round t * n0/200 to the nearest index.
      const std::size_t scaled =
          (t * spec.n0 + kLayoutBase / 2) / kLayoutBase;
      cps.push_back(scaled);
    }
    for (std::size_t i = 0; i < cps.size(); ++i) {
      const bool in_range = cps[i] >= 1 && cps[i] <= spec.n0 - 1;
      if (!in_range || (i > 0 && cps[i] <= cps[i - 1])) {
        throw argument_error(
            "scenario: n0 = " + std::to_string(spec.n0) +
            " is too short to keep the scaled changepoints distinct");
      }
    }
  }

  std::vector<double> f(spec.n0);
  std::size_t seg = 0;
  for (std::size_t i = 1; i <= spec.n0; ++i) {
    while (seg < cps.size() && i > cps[seg]) ++seg;
    f[i - 1] = kLevelUnits[seg] * spec.gamma;
  }
  return Signal(std::move(f));
}

TargetDraw gen_target(const ScenarioSpec& spec, std::uint64_t seed) {
  Signal truth = scenario_truth(spec);
  CounterRng rng({seed, rng_tag::target_noise});
  const auto noise = ar1_path(spec.n0, spec.sigma, spec.rho_noise, rng);
  std::vector<double> data(spec.n0);
  for (std::size_t i = 0; i < spec.n0; ++i) data[i] = truth[i] + noise[i];
  return TargetDraw{std::move(truth), Signal(std::move(data))};
}

std::vector<SourceDataset> gen_sources(const Signal& truth,
                                       const ConfigurationSpec& config,
                                       double sigma, double rho_noise,
                                       std::uint64_t seed) {
  check_configuration(config);
  if (!std::isfinite(sigma) || sigma < 0.0) {
    throw argument_error("gen_sources: sigma must be finite and >= 0");
  }
  if (!(rho_noise >= 0.0 && rho_noise < 1.0)) {
    throw argument_error("gen_sources: rho_noise must be in [0, 1)");
  }

  std::vector<SourceDataset> out;
  out.reserve(config.source_lens.size());
  for (std::size_t k = 1; k <= config.source_lens.size(); ++k) {
    const std::size_t n_k = config.source_lens[k - 1];
    const bool informative =
        std::binary_search(config.informative.begin(),
                           config.informative.end(), static_cast<int>(k));
    const Signal base = expand(truth, n_k);

    const auto window = static_cast<std::size_t>(
        std::floor(config.h_fraction * static_cast<double>(n_k)));
    std::vector<double> shifted(base.values().begin(), base.values().end());
    if (config.configuration == Configuration::deterministic) {
      const double d = informative ? config.alpha : config.alpha_tilde;
      for (std::size_t j = 0; j < window; ++j) shifted[j] += d;
    } else {
      const double sd =
          std::sqrt(informative ? config.kappa : config.kappa_tilde);
      CounterRng rng({seed, rng_tag::discrepancy, k});
      // The discrepancy process runs over the whole source; only the
      // leading window enters the signal.
      const auto delta = ar1_path(n_k, sd, config.rho_discrepancy, rng);
      for (std::size_t j = 0; j < window; ++j) shifted[j] += delta[j];
    }
    Signal source_truth{std::move(shifted)};

    CounterRng rng({seed, rng_tag::source_noise, k});
    const auto noise = ar1_path(n_k, sigma, rho_noise, rng);
    std::vector<double> data(n_k);
    for (std::size_t i = 0; i < n_k; ++i) data[i] = source_truth[i] + noise[i];
    out.emplace_back(Signal(std::move(data)), static_cast<int>(k),
                     std::move(source_truth));
  }
  return out;
}

namespace {

struct MethodPlan {
  std::string id;
  PenaltyKind kind;
  enum class Pipeline {
    target_only,
    first_informative,
    true_set,
    detected_set,
    all_sources,
    interleave_first,
    interleave_all_sources,
  } pipeline;
};

const std::vector<MethodPlan>& method_table() {
  using P = MethodPlan::Pipeline;
  static const std::vector<MethodPlan> table = {
      {"l1", PenaltyKind::l1, P::target_only},
      {"l0", PenaltyKind::l0, P::target_only},
      {"l1-T-1", PenaltyKind::l1, P::first_informative},
      {"l0-T-1", PenaltyKind::l0, P::first_informative},
      {"l1-T-A", PenaltyKind::l1, P::true_set},
      {"l0-T-A", PenaltyKind::l0, P::true_set},
      {"l1-T-Ahat", PenaltyKind::l1, P::detected_set},
      {"l0-T-Ahat", PenaltyKind::l0, P::detected_set},
      {"l1-T-K", PenaltyKind::l1, P::all_sources},
      {"l0-T-K", PenaltyKind::l0, P::all_sources},
      {"l0-T-01", PenaltyKind::l0, P::interleave_first},
      {"l0-T-0K", PenaltyKind::l0, P::interleave_all_sources},
  };
  return table;
}

const MethodPlan& lookup_method(const std::string& id) {
  for (const auto& m : method_table()) {
    if (m.id == id) return m;
  }
  std::string known;
  for (const auto& m : method_table()) {
    known += known.empty() ? m.id : ", " + m.id;
  }
  throw argument_error("unknown method '" + id + "'; known methods: " + known);
}

struct TrialContext {
  const ScenarioSpec& scenario;
  const ConfigurationSpec& config;
  const SimOptions& options;
  std::span<const std::string> methods;
};

std::vector<SourceDataset> subset_sources(
    const std::vector<SourceDataset>& sources, std::span<const int> keep) {
  std::vector<SourceDataset> out;
  out.reserve(keep.size());
  for (int k : keep) out.push_back(sources[static_cast<std::size_t>(k - 1)]);
  return out;
}

void run_one_trial(const TrialContext& ctx, std::size_t trial,
                   std::uint64_t base_seed, std::vector<TrialResult>& sink) {
  const std::uint64_t seed = CounterRng::derive({base_seed, trial});
  const TargetDraw target = gen_target(ctx.scenario, seed);
  const auto sources =
      gen_sources(target.truth, ctx.config, ctx.scenario.sigma,
                  ctx.scenario.rho_noise, seed);
  const std::size_t n0 = ctx.scenario.n0;
  const std::size_t true_s0 = changepoints_of(target.truth, 0.0).size();

  const std::vector<double> grid = default_lambda_grid(target.data);
  const auto pick_lambda = [&](const Signal& input, PenaltyKind kind,
                               Variant variant,
                               std::span<const std::size_t> lens) {
    const LambdaPolicy& pol = ctx.options.lambda;
    switch (pol.mode) {
      case LambdaPolicy::Mode::fixed:
        return pol.fixed_value;
      case LambdaPolicy::Mode::theoretical:
        return theoretical_lambda(variant, kind, pol.s0.value_or(true_s0), n0,
                                  lens, pol.constant);
      case LambdaPolicy::Mode::cross_validation:
        break;
    }
    CvSpec cv;
    cv.grid = grid;
    return cv_select_lambda(input, kind, cv);
  };

  // Detection runs at most once per trial and is shared by both penalties.
  std::optional<InformativeSet> detected;
  const auto detect = [&]() -> const InformativeSet& {
    if (!detected) {
      const SelectionPolicy& pol = ctx.options.selection;
      SelectionConfig sel;
      for (const auto& s : sources) {
        sel.screen_widths.push_back(
            std::min<std::size_t>(pol.screen_width, s.size()));
      }
      if (pol.tau_rule == TauRule::permutation) {
        PermutationSpec perm;
        perm.permutations = pol.permutations;
        perm.quantile = pol.quantile;
        perm.rng_seed = CounterRng::derive({seed, rng_tag::permutation});
        const double tau = permutation_threshold(target.data, sources,
                                                 sel.screen_widths, perm);
        sel.thresholds.assign(sources.size(), tau);
      } else {
        for (const auto& s : sources) {
          sel.thresholds.push_back(
              theoretical_threshold(pol.tau_s0.value_or(true_s0), n0,
                                    s.size(), pol.tau_constant));
        }
      }
      detected = detect_informative(target.data, sources, sel);
    }
    return *detected;
  };

  const auto first_informative = [&]() -> const SourceDataset& {
    if (ctx.config.informative.empty()) {
      throw argument_error(
          "simulation: this method needs a nonempty informative set");
    }
    return sources[static_cast<std::size_t>(ctx.config.informative.front()) -
                   1];
  };

  for (const auto& id : ctx.methods) {
    const MethodPlan& plan = lookup_method(id);
    Signal estimate = target.truth;  // placeholder, overwritten below
    std::optional<std::vector<int>> selected;
    using P = MethodPlan::Pipeline;
    switch (plan.pipeline) {
      case P::target_only: {
        const Signal& input = target.data;
        const std::size_t lens[] = {n0};
        estimate = solve(input, PenaltySpec(plan.kind,
                                            pick_lambda(input, plan.kind,
                                                        Variant::target_only,
                                                        lens)));
        break;
      }
      case P::first_informative: {
        const SourceDataset& src = first_informative();
        const Signal input = unisource_input(src, n0);
        const std::size_t lens[] = {src.size()};
        estimate = solve(input, PenaltySpec(plan.kind,
                                            pick_lambda(input, plan.kind,
                                                        Variant::unisource,
                                                        lens)));
        break;
      }
      case P::true_set: {
        if (ctx.config.informative.empty()) {
          throw argument_error(
              "simulation: this method needs a nonempty informative set");
        }
        const auto subset = subset_sources(sources, ctx.config.informative);
        std::vector<std::size_t> lens;
        for (const auto& s : subset) lens.push_back(s.size());
        const Signal input = multisource_input(subset, n0);
        estimate = solve(input, PenaltySpec(plan.kind,
                                            pick_lambda(input, plan.kind,
                                                        Variant::multisource,
                                                        lens)));
        break;
      }
      case P::detected_set: {
        const InformativeSet& a_hat = detect();
        selected = a_hat.indices;
        if (a_hat.empty()) {
          // No source passes: fall back to fitting the target alone.
          const Signal& input = target.data;
          const std::size_t lens[] = {n0};
          estimate = solve(input,
                           PenaltySpec(plan.kind,
                                       pick_lambda(input, plan.kind,
                                                   Variant::target_only,
                                                   lens)));
          break;
        }
        const auto subset = subset_sources(sources, a_hat.indices);
        std::vector<std::size_t> lens;
        for (const auto& s : subset) lens.push_back(s.size());
        const Signal input = multisource_input(subset, n0);
        estimate = solve(input, PenaltySpec(plan.kind,
                                            pick_lambda(input, plan.kind,
                                                        Variant::multisource,
                                                        lens)));
        break;
      }
      case P::all_sources: {
        std::vector<std::size_t> lens;
        for (const auto& s : sources) lens.push_back(s.size());
        const Signal input = multisource_input(sources, n0);
        estimate = solve(input, PenaltySpec(plan.kind,
                                            pick_lambda(input, plan.kind,
                                                        Variant::multisource,
                                                        lens)));
        break;
      }
      case P::interleave_first: {
        const SourceDataset& src = first_informative();
        const Signal input = target_unisource_input(target.data, src);
        const std::size_t lens[] = {src.size()};
        estimate = solve_l0(input, pick_lambda(input, PenaltyKind::l0,
                                               Variant::target_unisource,
                                               lens));
        break;
      }
      case P::interleave_all_sources: {
        std::vector<std::size_t> lens;
        for (const auto& s : sources) lens.push_back(s.size());
        const Signal input = target_multisource_input(target.data, sources);
        estimate = solve_l0(input, pick_lambda(input, PenaltyKind::l0,
                                               Variant::target_multisource,
                                               lens));
        break;
      }
    }
    sink.push_back(TrialResult{plan.id, trial, mse_loss(estimate, target.truth),
                               std::move(selected), seed});
  }
}

}  // namespace

std::vector<std::string> standard_methods() {
  std::vector<std::string> out;
  for (const auto& m : method_table()) {
    if (m.id == "l0-T-01" || m.id == "l0-T-0K") continue;
    out.push_back(m.id);
  }
  return out;
}

bool is_known_method(const std::string& id) {
  for (const auto& m : method_table()) {
    if (m.id == id) return true;
  }
  return false;
}

std::vector<TrialResult> run_monte_carlo(const ScenarioSpec& scenario,
                                         const ConfigurationSpec& config,
                                         std::span<const std::string> methods,
                                         std::size_t trials,
                                         std::uint64_t base_seed,
                                         const SimOptions& options) {
  check_scenario(scenario);
  check_configuration(config);
  if (methods.empty()) {
    throw argument_error("run_monte_carlo: need at least one method");
  }
  for (const auto& id : methods) lookup_method(id);
  if (trials == 0) {
    throw argument_error("run_monte_carlo: need at least one trial");
  }

  TrialContext ctx{scenario, config, options, methods};
  std::vector<std::vector<TrialResult>> slots(trials);

  const unsigned hw = std::max(1u, options.threads);
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(hw, trials));
  if (workers <= 1) {
    for (std::size_t t = 0; t < trials; ++t) {
      run_one_trial(ctx, t + 1, base_seed, slots[t]);
    }
  } else {
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        try {
          for (std::size_t t = w; t < trials; t += workers) {
            run_one_trial(ctx, t + 1, base_seed, slots[t]);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::vector<TrialResult> out;
  for (auto& s : slots) {
    for (auto& r : s) out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), [](const TrialResult& a,
                                       const TrialResult& b) {
    if (a.method != b.method) return a.method < b.method;
    return a.trial < b.trial;
  });
  return out;
}

std::vector<MethodSummary> summarize(std::span<const TrialResult> results) {
  if (results.empty()) {
    throw argument_error("summarize: need at least one result");
  }
  std::vector<MethodSummary> out;
  for (const auto& r : results) {
    MethodSummary* row = nullptr;
    for (auto& s : out) {
      if (s.method == r.method) {
        row = &s;
        break;
      }
    }
    if (!row) {
      out.push_back(MethodSummary{r.method, 0.0, 0.0, 0});
      row = &out.back();
    }
    ++row->trials;
  }
  for (auto& s : out) {
    double mean = 0.0;
    std::size_t k = 0;
    for (const auto& r : results) {
      if (r.method == s.method) mean += (r.loss - mean) / static_cast<double>(++k);
    }
    double ss = 0.0;
    for (const auto& r : results) {
      if (r.method == s.method) ss += (r.loss - mean) * (r.loss - mean);
    }
    s.mean_loss = mean;
    s.se = s.trials > 1
               ? std::sqrt(ss / static_cast<double>(s.trials - 1) /
                           static_cast<double>(s.trials))
               : 0.0;
  }
  std::sort(out.begin(), out.end(), [](const MethodSummary& a,
                                       const MethodSummary& b) {
    return a.method < b.method;
  });
  return out;
}

}  // namespace steptx
