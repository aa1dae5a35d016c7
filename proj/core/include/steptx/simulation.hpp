#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "steptx/signal.hpp"

namespace steptx {

// Target layouts. Changepoints are fixed at n0 = 200 and scale
// proportionally (rounded to the nearest grid index) for other lengths.
enum class Scenario { equally_spaced, unequally_spaced };

struct ScenarioSpec {
  Scenario scenario = Scenario::equally_spaced;
  double gamma = 0.5;   // jump size unit; segment levels are multiples of it
  std::size_t n0 = 200;
  double sigma = 0.5;   // noise standard deviation
  double rho_noise = 0.0;  // AR(1) weight; 0 keeps the stream iid
};

// Source discrepancy styles: a deterministic shift of alpha (informative) or
// alpha_tilde (uninformative) on the leading floor(h_fraction * n_k)
// entries, or centred Gaussian draws with variance kappa / kappa_tilde on
// the same window.
enum class Configuration { deterministic, gaussian };

struct ConfigurationSpec {
  Configuration configuration = Configuration::deterministic;
  std::vector<int> informative;           // 1-based source positions
  std::vector<std::size_t> source_lens;   // one length per source
  double alpha = 0.2;
  double alpha_tilde = 2.0;
  double kappa = 0.2;        // variances for the gaussian style
  double kappa_tilde = 5.0;
  double h_fraction = 0.15;
  double rho_discrepancy = 0.0;  // AR(1) weight across a source's window
};

// The noise-free target for a scenario.
Signal scenario_truth(const ScenarioSpec& spec);

struct TargetDraw {
  Signal truth;
  Signal data;
};

// Target truth plus one noisy observation of it.
TargetDraw gen_target(const ScenarioSpec& spec, std::uint64_t seed);

// Sources observed at their own frequencies: expanded truth, plus the
// configured discrepancy on the leading window, plus noise. Each source's
// noise-free signal rides along as SourceDataset::truth.
std::vector<SourceDataset> gen_sources(const Signal& truth,
                                       const ConfigurationSpec& config,
                                       double sigma, double rho_noise,
                                       std::uint64_t seed);

// Method identifiers accepted by the driver:
//   l1, l0                  target-only fits
//   l1-T-1,    l0-T-1       transfer from the first informative source
//   l1-T-A,    l0-T-A       transfer from the true informative set
//   l1-T-Ahat, l0-T-Ahat    transfer from the detected set
//   l1-T-K,    l0-T-K       transfer from all sources
//   l0-T-01                 target interleaved with the first informative source
//   l0-T-0K                 target interleaved with all sources
std::vector<std::string> standard_methods();
bool is_known_method(const std::string& id);

enum class TauRule { permutation, theoretical };

struct SelectionPolicy {
  std::size_t screen_width = 50;  // clamped to each source's length
  TauRule tau_rule = TauRule::permutation;
  std::size_t permutations = 200;  // permutation replicates B
  double quantile = 0.99;          // permutation quantile q
  double tau_constant = 2.0;       // theoretical threshold constant
  // Jump count fed to the theoretical rule; defaults to the truth's count.
  std::optional<std::size_t> tau_s0;
};

struct LambdaPolicy {
  enum class Mode { cross_validation, theoretical, fixed };
  Mode mode = Mode::cross_validation;
  double fixed_value = 0.0;
  double constant = 1.0;  // theoretical rate multiplier
  // Jump count for the theoretical rules; defaults to the truth's count.
  std::optional<std::size_t> s0;
};

struct SimOptions {
  SelectionPolicy selection;
  LambdaPolicy lambda;
  unsigned threads = 1;
};

struct TrialResult {
  std::string method;
  std::size_t trial;  // 1-based
  double loss;
  // Set for the detection-based methods: the selected source positions.
  std::optional<std::vector<int>> selected;
  std::uint64_t seed;  // the trial's derived seed
};

// Runs `trials` independent draws. Trial t uses a seed derived from
// (base_seed, t) only, so results are identical for any thread count and
// any execution order. Output is sorted by (method, trial).
std::vector<TrialResult> run_monte_carlo(const ScenarioSpec& scenario,
                                         const ConfigurationSpec& config,
                                         std::span<const std::string> methods,
                                         std::size_t trials,
                                         std::uint64_t base_seed,
                                         const SimOptions& options = {});

struct MethodSummary {
  std::string method;
  double mean_loss;
  double se;  // standard error of the mean; 0 for a single trial
  std::size_t trials;
};

std::vector<MethodSummary> summarize(std::span<const TrialResult> results);

}  // namespace steptx
