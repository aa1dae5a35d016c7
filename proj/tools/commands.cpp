#include "commands.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "csv.hpp"
#include "steptx/alignment.hpp"
#include "steptx/errors.hpp"
#include "steptx/estimators.hpp"
#include "steptx/selection.hpp"
#include "steptx/simulation.hpp"
#include "steptx/solvers.hpp"
#include "steptx/tuning.hpp"

namespace steptx::cli {

namespace {

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<SourceDataset> load_sources(const std::vector<std::string>& paths) {
  std::vector<SourceDataset> out;
  out.reserve(paths.size());
  for (std::size_t k = 0; k < paths.size(); ++k) {
    out.emplace_back(read_signal_csv(paths[k]), static_cast<int>(k + 1));
  }
  return out;
}

double parse_number(const std::string& text, const char* what) {
  double x = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw usage_error(std::string(what) + ": expected a number, got \"" +
                      text + "\"");
  }
  return x;
}

// Writes to `path` when nonempty, otherwise to `fallback`. The stream must
// outlive the use site, hence the holder.
struct OutStream {
  std::ofstream file;
  std::ostream* os;
  OutStream(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      os = &fallback;
    } else {
      file.open(path);
      if (!file) throw csv_error(path, 0, 0, "cannot open file for writing");
      os = &file;
    }
  }
};

std::string join_positions(std::span<const int> xs) {
  if (xs.empty()) return "EMPTY";
  std::ostringstream os;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) os << ',';
    os << xs[i];
  }
  return os.str();
}

// Flags shared by every command that runs informative-source detection.
struct SelectionArgs {
  std::size_t screen_width = 50;  // 0 switches to the theoretical rule
  double screen_constant = 8.0;
  std::size_t s0 = 0;
  std::string tau_rule = "permutation";
  double tau_constant = 2.0;
  std::size_t perm_b = 200;
  double perm_q = 0.99;
  std::uint64_t seed = 0;
};

void add_selection_flags(CLI::App* sub, SelectionArgs& a,
                         bool with_seed = true) {
  sub->add_option("--screen-width", a.screen_width,
                  "Entries kept per source when screening deviations; 0 "
                  "applies the theoretical size rule")
      ->capture_default_str();
  sub->add_option("--screen-constant", a.screen_constant,
                  "Constant in the theoretical screening size")
      ->capture_default_str();
  sub->add_option("--s0", a.s0,
                  "Jump count driving the theoretical selection rules")
      ->capture_default_str();
  sub->add_option("--tau", a.tau_rule,
                  "Threshold rule for inclusion: permutation or theory")
      ->check(CLI::IsMember({"permutation", "theory"}))
      ->capture_default_str();
  sub->add_option("--tau-constant", a.tau_constant,
                  "Constant in the theoretical threshold")
      ->capture_default_str();
  sub->add_option("--perm-B", a.perm_b, "Permutation replicates")
      ->capture_default_str();
  sub->add_option("--perm-q", a.perm_q, "Permutation quantile in (0, 1)")
      ->capture_default_str();
  if (with_seed) {
    sub->add_option("--seed", a.seed, "Seed for the permutation draws")
        ->capture_default_str();
  }
}

std::vector<std::size_t> detection_widths(
    const SelectionArgs& a, std::size_t n0,
    std::span<const SourceDataset> sources) {
  std::vector<std::size_t> widths;
  widths.reserve(sources.size());
  for (const auto& s : sources) {
    if (a.screen_width > 0) {
      widths.push_back(std::min(a.screen_width, s.size()));
    } else {
      widths.push_back(
          theoretical_screen_width(a.s0, n0, s.size(), a.screen_constant));
    }
  }
  return widths;
}

InformativeSet run_detection(const Signal& y,
                             std::span<const SourceDataset> sources,
                             const SelectionArgs& a) {
  SelectionConfig config;
  config.screen_widths = detection_widths(a, y.size(), sources);
  if (a.tau_rule == "permutation") {
    PermutationSpec spec;
    spec.permutations = a.perm_b;
    spec.quantile = a.perm_q;
    spec.rng_seed = a.seed;
    const double tau = permutation_threshold(y, sources, config.screen_widths,
                                             spec);
    config.thresholds.assign(sources.size(), tau);
  } else {
    for (const auto& s : sources) {
      config.thresholds.push_back(
          theoretical_threshold(a.s0, y.size(), s.size(), a.tau_constant));
    }
  }
  return detect_informative(y, sources, config);
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
  std::string method;
  std::string target_path;
  std::vector<std::string> source_paths;
  std::size_t n0 = 0;  // 0 means taken from the target
  std::string penalty = "";
  std::string lambda = "cv";
  double lambda_constant = 1.0;
  bool sparsity_free = false;
  std::string select = "none";
  std::string aleft_path;
  std::string out_path;
  SelectionArgs selection;
};

Variant variant_of(const std::string& method) {
  if (method == "target-only") return Variant::target_only;
  if (method == "unisource") return Variant::unisource;
  if (method == "multisource") return Variant::multisource;
  if (method == "affine") return Variant::affine;
  if (method == "target-unisource") return Variant::target_unisource;
  if (method == "target-multisource") return Variant::target_multisource;
  throw usage_error("unknown method: " + method);
}

LeftInverseMatrix load_left_inverse(const std::string& path) {
  auto rows = read_matrix_csv(path);
  const std::size_t r = rows.size();
  const std::size_t c = rows[0].size();
  std::vector<double> entries;
  entries.reserve(r * c);
  for (const auto& row : rows) {
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return LeftInverseMatrix(r, c, std::move(entries));
}

int cmd_estimate(const EstimateArgs& a, std::ostream& out, std::ostream& err) {
  const Variant variant = variant_of(a.method);
  const bool needs_target = variant == Variant::target_only ||
                            variant == Variant::target_unisource ||
                            variant == Variant::target_multisource ||
                            a.select == "detect";
  const bool single_source = variant == Variant::unisource ||
                             variant == Variant::affine ||
                             variant == Variant::target_unisource;
  const bool needs_sources = variant != Variant::target_only;

  if (needs_target && a.target_path.empty()) {
    throw usage_error("--target is required for method " + a.method +
                      (a.select == "detect" ? " with --select detect" : ""));
  }
  if (needs_sources && a.source_paths.empty()) {
    throw usage_error("--source is required for method " + a.method);
  }
  if (single_source && a.source_paths.size() != 1) {
    throw usage_error("method " + a.method + " takes exactly one --source");
  }
  if (a.select == "detect" && variant != Variant::multisource) {
    throw usage_error("--select detect applies to --method multisource only");
  }
  if (variant == Variant::affine && a.aleft_path.empty()) {
    throw usage_error("--aleft is required for method affine");
  }

  const bool l0_only = variant == Variant::affine ||
                       variant == Variant::target_unisource ||
                       variant == Variant::target_multisource;
  PenaltyKind kind = PenaltyKind::l1;
  if (a.penalty.empty()) {
    kind = l0_only ? PenaltyKind::l0 : PenaltyKind::l1;
  } else if (a.penalty == "l1") {
    if (l0_only) {
      throw usage_error("method " + a.method +
                        " supports the jump-count penalty only; drop "
                        "--penalty or pass l0");
    }
    kind = PenaltyKind::l1;
  } else {
    kind = PenaltyKind::l0;
  }

  std::optional<Signal> target;
  if (!a.target_path.empty()) target.emplace(read_signal_csv(a.target_path));
  std::vector<SourceDataset> sources = load_sources(a.source_paths);

  std::optional<LeftInverseMatrix> a_left;
  if (variant == Variant::affine) a_left.emplace(load_left_inverse(a.aleft_path));

  std::size_t n0 = a.n0;
  if (target.has_value()) {
    if (n0 != 0 && n0 != target->size()) {
      throw usage_error("--n0 contradicts the target length");
    }
    n0 = target->size();
  } else if (variant == Variant::affine) {
    if (n0 != 0 && n0 != a_left->rows()) {
      throw usage_error("--n0 contradicts the matrix row count");
    }
    n0 = a_left->rows();
  } else if (n0 == 0) {
    throw usage_error("--n0 (or --target) is required for method " + a.method);
  }

  // Detection narrows the working source set before anything else runs.
  std::optional<InformativeSet> detected;
  if (a.select == "detect") {
    detected = run_detection(*target, sources, a.selection);
    err << "selected = " << join_positions(detected->indices) << '\n';
    if (detected->empty()) {
      err << "no informative source found; falling back to target-only\n";
    } else {
      std::vector<SourceDataset> kept;
      for (int pos : detected->indices) {
        kept.push_back(sources[static_cast<std::size_t>(pos - 1)]);
      }
      sources = std::move(kept);
    }
  }
  const bool fallback = detected.has_value() && detected->empty();
  const Variant effective =
      fallback ? Variant::target_only : variant;

  // The vector the single solver call will see; lambda selection operates on
  // exactly this vector.
  Signal input = [&]() -> Signal {
    switch (effective) {
      case Variant::target_only:
        return *target;
      case Variant::unisource:
        return unisource_input(sources[0], n0);
      case Variant::multisource:
        return multisource_input(sources, n0);
      case Variant::affine:
        return affine_input(sources[0], *a_left);
      case Variant::target_unisource:
        return target_unisource_input(*target, sources[0]);
      case Variant::target_multisource:
        return target_multisource_input(*target, sources);
    }
    throw usage_error("unknown method");
  }();

  double lambda = 0;
  if (a.lambda == "cv") {
    CvSpec spec;
    spec.grid = default_lambda_grid(input);
    lambda = cv_select_lambda(input, kind, spec);
  } else if (a.lambda == "theory") {
    const TuningForm form =
        a.sparsity_free ? TuningForm::sparsity_free : TuningForm::oracle;
    if (effective == Variant::affine) {
      lambda = theoretical_lambda_affine(a.selection.s0, *a_left,
                                         a.lambda_constant, form);
    } else {
      std::vector<std::size_t> lens;
      for (const auto& s : sources) lens.push_back(s.size());
      lambda = theoretical_lambda(effective, kind, a.selection.s0, n0, lens,
                                  a.lambda_constant, form);
    }
  } else {
    lambda = parse_number(a.lambda, "--lambda");
  }

  const Signal estimate = solve(input, PenaltySpec(kind, lambda));
  err << "lambda = " << format_double(lambda) << '\n';

  OutStream dest(a.out_path, out);
  write_signal_csv(*dest.os, estimate);
  return 0;
}

// ------------------------------------------------------------------ select

struct SelectArgs {
  std::string target_path;
  std::vector<std::string> source_paths;
  bool refine = false;
  std::string out_path;
  SelectionArgs selection;
};

int cmd_select(const SelectArgs& a, std::ostream& out, std::ostream& err) {
  (void)err;
  const Signal y = read_signal_csv(a.target_path);
  const std::vector<SourceDataset> sources = load_sources(a.source_paths);
  const InformativeSet picked = run_detection(y, sources, a.selection);

  OutStream dest(a.out_path, out);
  *dest.os << join_positions(picked.indices) << '\n';
  if (a.refine) {
    std::vector<std::size_t> lens;
    for (const auto& s : sources) lens.push_back(s.size());
    if (picked.empty()) {
      *dest.os << "EMPTY\n";
    } else {
      const InformativeSet refined = refine_subset(picked, lens);
      *dest.os << join_positions(refined.indices) << '\n';
    }
  }
  return 0;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  int scenario = 1;
  int config = 1;
  double gamma = 0.5;
  std::size_t n0 = 200;
  double sigma = 0.5;
  double rho_noise = 0.0;
  std::size_t K = 10;
  std::size_t nk = 0;  // 0 means 2 * n0
  std::vector<std::size_t> nk_list;
  std::size_t a_count = 0;  // 0 means every source is informative
  std::vector<int> informative;
  double alpha = 0.2;
  double alpha_tilde = 2.0;
  double kappa = 0.2;
  double kappa_tilde = 5.0;
  double h_fraction = 0.15;
  double rho_delta = 0.0;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::string methods;
  unsigned threads = 0;  // 0 means STEPTX_THREADS or 1
  bool reference_design = false;
  std::string lambda = "cv";
  double lambda_constant = 1.0;
  std::int64_t lambda_s0 = -1;
  std::int64_t tau_s0 = -1;
  std::string out_path;
  std::string summary_path;
  SelectionArgs selection;
};

std::vector<std::string> split_csv_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t pos = text.find(',', start);
    if (pos == std::string::npos) pos = text.size();
    std::string item = text.substr(start, pos - start);
    if (!item.empty()) out.push_back(item);
    start = pos + 1;
  }
  return out;
}

unsigned env_threads() {
  const char* v = std::getenv("STEPTX_THREADS");
  if (v == nullptr) return 1;
  const std::string s(v);
  unsigned n = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), n);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || n == 0) {
    return 1;
  }
  return n;
}

int cmd_simulate(const SimulateArgs& a, const CLI::App* sub, std::ostream& out,
                 std::ostream& err) {
  SimulateArgs args = a;
  if (args.reference_design) {
    for (const char* flag : {"--n0", "--sigma", "--K", "--nk", "--nk-list"}) {
      if (sub->count(flag) > 0) {
        throw usage_error(std::string("--reference-design conflicts with ") + flag);
      }
    }
    args.n0 = 200;
    args.sigma = 0.5;
    args.K = 10;
    args.nk = 400;
    args.nk_list.clear();
  }
  if (!args.nk_list.empty() && sub->count("--K") > 0) {
    throw usage_error("--nk-list fixes the source count; drop --K");
  }
  if (args.a_count > 0 && !args.informative.empty()) {
    throw usage_error("pass either --a or --informative, not both");
  }

  ScenarioSpec scenario;
  scenario.scenario = args.scenario == 1 ? Scenario::equally_spaced
                                         : Scenario::unequally_spaced;
  scenario.gamma = args.gamma;
  scenario.n0 = args.n0;
  scenario.sigma = args.sigma;
  scenario.rho_noise = args.rho_noise;

  ConfigurationSpec config;
  config.configuration = args.config == 1 ? Configuration::deterministic
                                          : Configuration::gaussian;
  if (!args.nk_list.empty()) {
    config.source_lens = args.nk_list;
  } else {
    const std::size_t len = args.nk == 0 ? 2 * args.n0 : args.nk;
    config.source_lens.assign(args.K, len);
  }
  const std::size_t K = config.source_lens.size();
  if (!args.informative.empty()) {
    config.informative = args.informative;
  } else {
    const std::size_t count = args.a_count == 0 ? K : args.a_count;
    if (count > K) {
      throw usage_error("--a exceeds the number of sources");
    }
    for (std::size_t k = 1; k <= count; ++k) {
      config.informative.push_back(static_cast<int>(k));
    }
  }
  config.alpha = args.alpha;
  config.alpha_tilde = args.alpha_tilde;
  config.kappa = args.kappa;
  config.kappa_tilde = args.kappa_tilde;
  config.h_fraction = args.h_fraction;
  config.rho_discrepancy = args.rho_delta;

  std::vector<std::string> methods;
  if (args.methods.empty()) {
    methods = standard_methods();
  } else {
    methods = split_csv_list(args.methods);
    for (const auto& m : methods) {
      if (!is_known_method(m)) throw usage_error("unknown method id: " + m);
    }
  }

  SimOptions options;
  options.threads = args.threads == 0 ? env_threads() : args.threads;
  options.selection.screen_width =
      args.selection.screen_width == 0 ? 0 : args.selection.screen_width;
  options.selection.tau_rule = args.selection.tau_rule == "permutation"
                                   ? TauRule::permutation
                                   : TauRule::theoretical;
  options.selection.permutations = args.selection.perm_b;
  options.selection.quantile = args.selection.perm_q;
  options.selection.tau_constant = args.selection.tau_constant;
  if (args.tau_s0 >= 0) {
    options.selection.tau_s0 = static_cast<std::size_t>(args.tau_s0);
  }
  if (args.lambda == "cv") {
    options.lambda.mode = LambdaPolicy::Mode::cross_validation;
  } else if (args.lambda == "theory") {
    options.lambda.mode = LambdaPolicy::Mode::theoretical;
  } else {
    options.lambda.mode = LambdaPolicy::Mode::fixed;
    options.lambda.fixed_value = parse_number(args.lambda, "--lambda");
  }
  options.lambda.constant = args.lambda_constant;
  if (args.lambda_s0 >= 0) {
    options.lambda.s0 = static_cast<std::size_t>(args.lambda_s0);
  }

  const std::vector<TrialResult> results = run_monte_carlo(
      scenario, config, methods, args.trials, args.seed, options);
  const std::vector<MethodSummary> summaries = summarize(results);

  const std::string summary_text = summary_csv(summaries);
  out << summary_text;
  if (!args.summary_path.empty()) {
    OutStream dest(args.summary_path, out);
    *dest.os << summary_text;
  }
  if (!args.out_path.empty()) {
    OutStream dest(args.out_path, out);
    *dest.os << results_csv(results);
  }
  err << "trials = " << args.trials << ", methods = " << methods.size()
      << ", threads = " << options.threads << '\n';
  return 0;
}

// --------------------------------------------------------- bench-frequency

struct BenchFrequencyArgs {
  std::vector<std::size_t> nk_list;
  std::string out_path;
};

int cmd_bench_frequency(const BenchFrequencyArgs& a, std::ostream& out,
                        std::ostream& err) {
  OutStream dest(a.out_path, out);
  *dest.os << "K,effective_size\n";
  std::size_t best_k = 1;
  double best = -1;
  for (std::size_t K = 1; K <= a.nk_list.size(); ++K) {
    const double value = frequency_curve(a.nk_list, K);
    *dest.os << K << ',' << format_double(value) << '\n';
    if (value > best) {
      best = value;
      best_k = K;
    }
  }
  err << "argmax K = " << best_k << '\n';
  return 0;
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out,
            std::ostream& err) {
  CLI::App app(
      "Piecewise-constant signal estimation with transfer from "
      "higher-frequency sources");
  app.require_subcommand(1);

  EstimateArgs est;
  CLI::App* sub_est = app.add_subcommand(
      "estimate", "Fit one estimator and write index,value rows");
  sub_est
      ->add_option("--method", est.method,
                   "target-only, unisource, multisource, affine, "
                   "target-unisource, or target-multisource")
      ->required();
  sub_est->add_option("--target", est.target_path, "Target series CSV");
  sub_est->add_option("--source", est.source_paths,
                      "Source series CSV (repeat per source)");
  sub_est->add_option("--n0", est.n0,
                      "Output grid length when no --target is given");
  sub_est->add_option("--penalty", est.penalty,
                      "l1 (total variation) or l0 (jump count)")
      ->check(CLI::IsMember({"l1", "l0"}));
  sub_est
      ->add_option("--lambda", est.lambda,
                   "cv, theory, or an explicit nonnegative value")
      ->capture_default_str();
  sub_est->add_option("--lambda-constant", est.lambda_constant,
                      "Constant for --lambda theory")
      ->capture_default_str();
  sub_est->add_flag("--sparsity-free", est.sparsity_free,
                    "Use the jump-count-free theoretical rates");
  sub_est->add_option("--select", est.select,
                      "none or all use every source; detect keeps the "
                      "detected sources (multisource only)")
      ->check(CLI::IsMember({"none", "all", "detect"}))
      ->capture_default_str();
  sub_est->add_option("--aleft", est.aleft_path,
                      "Left-inverse matrix CSV for --method affine");
  sub_est->add_option("--out", est.out_path, "Output path (default stdout)");
  add_selection_flags(sub_est, est.selection);

  SelectArgs sel;
  CLI::App* sub_sel = app.add_subcommand(
      "select", "Detect informative sources for a target");
  sub_sel->add_option("--target", sel.target_path, "Target series CSV")
      ->required();
  sub_sel
      ->add_option("--source", sel.source_paths,
                   "Source series CSV (repeat per source)")
      ->required();
  sub_sel->add_flag("--refine", sel.refine,
                    "Also print the effective-sample-size-optimal subset");
  sub_sel->add_option("--out", sel.out_path, "Output path (default stdout)");
  add_selection_flags(sub_sel, sel.selection);

  SimulateArgs sim;
  CLI::App* sub_sim = app.add_subcommand(
      "simulate", "Monte Carlo study over the built-in data generators");
  sub_sim->add_option("--scenario", sim.scenario, "1 equal, 2 unequal spacing")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  sub_sim
      ->add_option("--config", sim.config,
                   "1 deterministic shifts, 2 gaussian discrepancies")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  sub_sim->add_option("--gamma", sim.gamma, "Jump size unit")
      ->capture_default_str();
  sub_sim->add_option("--n0", sim.n0, "Target length")->capture_default_str();
  sub_sim->add_option("--sigma", sim.sigma, "Noise standard deviation")
      ->capture_default_str();
  sub_sim->add_option("--rho-noise", sim.rho_noise,
                      "AR(1) weight of the observation noise")
      ->capture_default_str();
  sub_sim->add_option("--K", sim.K, "Source count (uniform lengths)")
      ->capture_default_str();
  sub_sim->add_option("--nk", sim.nk,
                      "Uniform source length (default 2 * n0)");
  sub_sim->add_option("--nk-list", sim.nk_list,
                      "Explicit source lengths, comma separated")
      ->delimiter(',');
  sub_sim->add_option("--a", sim.a_count,
                      "Number of informative sources, counted from the first");
  sub_sim->add_option("--informative", sim.informative,
                      "Explicit informative positions, comma separated")
      ->delimiter(',');
  sub_sim->add_option("--alpha", sim.alpha, "Informative shift size")
      ->capture_default_str();
  sub_sim->add_option("--alpha-tilde", sim.alpha_tilde,
                      "Uninformative shift size")
      ->capture_default_str();
  sub_sim->add_option("--kappa", sim.kappa, "Informative gaussian variance")
      ->capture_default_str();
  sub_sim->add_option("--kappa-tilde", sim.kappa_tilde,
                      "Uninformative gaussian variance")
      ->capture_default_str();
  sub_sim->add_option("--H", sim.h_fraction,
                      "Fraction of each source carrying the discrepancy")
      ->capture_default_str();
  sub_sim->add_option("--rho-delta", sim.rho_delta,
                      "AR(1) weight of gaussian discrepancies")
      ->capture_default_str();
  sub_sim->add_option("--trials", sim.trials, "Monte Carlo replications")
      ->capture_default_str();
  sub_sim->add_option("--seed", sim.seed, "Base seed")->capture_default_str();
  sub_sim->add_option("--methods", sim.methods,
                      "Comma-separated method ids (default: the standard set)");
  sub_sim->add_option("--threads", sim.threads,
                      "Worker threads (default: STEPTX_THREADS or 1)");
  sub_sim->add_flag("--reference-design", sim.reference_design,
                    "Pin n0 = 200, sigma = 0.5, K = 10, source length 400");
  sub_sim
      ->add_option("--lambda", sim.lambda,
                   "cv, theory, or an explicit nonnegative value")
      ->capture_default_str();
  sub_sim->add_option("--lambda-constant", sim.lambda_constant,
                      "Constant for --lambda theory")
      ->capture_default_str();
  sub_sim->add_option("--lambda-s0", sim.lambda_s0,
                      "Jump count for --lambda theory (default: the truth's)");
  sub_sim->add_option("--tau-s0", sim.tau_s0,
                      "Jump count for --tau theory (default: the truth's)");
  sub_sim->add_option("--out", sim.out_path, "Per-trial results CSV path");
  sub_sim->add_option("--summary", sim.summary_path, "Summary CSV path");
  add_selection_flags(sub_sim, sim.selection, /*with_seed=*/false);

  BenchFrequencyArgs bench;
  CLI::App* sub_bench = app.add_subcommand(
      "bench-frequency",
      "Effective sample size of using the first K sources, per K");
  sub_bench
      ->add_option("--nk-list", bench.nk_list,
                   "Source lengths, comma separated")
      ->delimiter(',')
      ->required();
  sub_bench->add_option("--out", bench.out_path,
                        "Output path (default stdout)");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("steptx");
  for (const auto& s : args) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (sub_est->parsed()) return cmd_estimate(est, out, err);
    if (sub_sel->parsed()) return cmd_select(sel, out, err);
    if (sub_sim->parsed()) return cmd_simulate(sim, sub_sim, out, err);
    if (sub_bench->parsed()) return cmd_bench_frequency(bench, out, err);
    err << "error: no command given\n";
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  } catch (const usage_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const csv_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const dimension_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const precondition_error& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const argument_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  args.reserve(static_cast<std::size_t>(argc > 0 ? argc - 1 : 0));
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace steptx::cli
