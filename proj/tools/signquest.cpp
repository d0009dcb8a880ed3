// signquest: command-line front end for the sign-estimation experiments.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/os.h>
#include <json.hpp>

#include "signquest/bench/campaign.hpp"
#include "signquest/bench/experiments.hpp"
#include "signquest/core/sign_vector.hpp"
#include "signquest/models/diagnostics.hpp"
#include "signquest/models/mlp.hpp"
#include "signquest/oracles/directional_derivative.hpp"
#include "signquest/oracles/hamming_oracle.hpp"
#include "signquest/signsearch/goo.hpp"
#include "signquest/signsearch/hamming_search.hpp"
#include "signquest/signsearch/signhunter.hpp"
#include "signquest/util/parallel.hpp"
#include "signquest/util/rng.hpp"

namespace fs = std::filesystem;
using namespace signquest;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;

struct Common {
  std::uint64_t seed = 1;
  fs::path out = "results";
  std::size_t jobs = default_jobs();
  bool verbose = false;
};

struct ToyData {
  std::size_t samples = 600;
  std::size_t dim = 16;
  std::size_t classes = 3;
  std::size_t epochs = 100;
};

void add_toy_options(CLI::App* cmd, ToyData& d) {
  cmd->add_option("--samples", d.samples, "Blob samples used to train the MLP")->check(CLI::PositiveNumber);
  cmd->add_option("--dim", d.dim, "Blob feature dimension")->check(CLI::PositiveNumber);
  cmd->add_option("--classes", d.classes, "Blob classes")->check(CLI::Range(2, 1000));
  cmd->add_option("--epochs", d.epochs, "MLP training epochs");
}

/// Blob data split 2:1 into train and test, with an MLP trained on the first part.
struct ToySetup {
  Dataset train, test;
  TrainedMlp trained;
};

ToySetup make_toy(const ToyData& d, std::uint64_t seed) {
  BlobConfig blobs;
  blobs.samples = d.samples + d.samples / 2;
  blobs.dim = d.dim;
  blobs.classes = d.classes;
  blobs.seed = derive_seed(seed, {0});
  const Dataset all = make_blobs(blobs);
  Dataset train = all.slice(0, d.samples);
  Dataset test = all.slice(d.samples, all.size() - d.samples);
  TrainConfig tc;
  tc.epochs = d.epochs;
  tc.seed = derive_seed(seed, {1});
  TrainedMlp trained = train_mlp(train, tc);
  return {std::move(train), std::move(test), std::move(trained)};
}

fs::path prepare(const Common& c, const std::string& file) {
  fs::create_directories(c.out);
  return c.out / file;
}

// attack ---------------------------------------------------------------------

int run_attack(const Common& c, const fs::path& config_path, bool traces, bool seed_given) {
  CampaignConfig config = load_campaign(config_path);
  if (seed_given) config.seed = c.seed;
  if (traces) config.record_traces = true;
  config.jobs = c.jobs;
  const CampaignResult result = run_campaign(config);
  const fs::path dir = write_campaign(result, c.out);
  for (const auto& s : result.summaries) {
    std::cout << fmt::format("{} {}: failure_rate={:.4f} avg_queries={} attempted={} excluded={}\n",
                             s.attack, to_string(s.norm), s.failure_rate,
                             s.avg_queries ? fmt::format("{:.2f}", *s.avg_queries) : "null",
                             s.attempted, s.excluded);
  }
  if (c.verbose) std::cout << "wrote " << dir.string() << '\n';
  return 0;
}

// signsearch -----------------------------------------------------------------

struct SearchOptions {
  std::string strategy = "signhunter";
  std::string objective = "quadratic";
  std::size_t n = 7;
  std::uint64_t budget = 0;
  double probe = 1e-4;
};

int run_signsearch(const Common& c, const SearchOptions& o) {
  std::unique_ptr<ToyModel> model;
  std::vector<double> point;
  if (o.objective == "quadratic") {
    auto toy = make_quadratic_toy(o.n, c.seed);
    model = std::make_unique<QuadraticModel>(std::move(toy.model));
    point = std::move(toy.point);
  } else if (o.objective == "linear") {
    Rng rng(c.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> coef(o.n);
    for (double& v : coef) v = normal(rng);
    model = std::make_unique<LinearModel>(std::move(coef));
    point.assign(o.n, 0.0);
  } else {
    throw CLI::ValidationError("--objective", "must be linear or quadratic");
  }
  const SignVector truth = SignVector::sign_of(model->gradient(point, 0));
  ModelLossOracle loss(*model);
  DirectionalDerivativeOracle dd(loss, point, 0, o.probe);
  const SignObjective g = [&dd](const SignVector& q) { return dd.derivative(q); };
  const std::uint64_t budget =
      o.budget > 0 ? o.budget : std::max<std::uint64_t>(SignHunter::total_steps(o.n) + 1, 4 * o.n);

  SearchResult r;
  if (o.strategy == "signhunter") {
    r = signhunter_run(g, o.n, budget, c.seed, &truth);
  } else if (o.strategy == "goo") {
    r = goo_run(g, o.n, budget, {}, &truth);
  } else if (o.strategy == "sequential") {
    r = sequential_flip(g, o.n, &truth);
  } else if (o.strategy == "elim") {
    NoiselessHammingOracle oracle(truth);
    ElimOptions opts;
    opts.budget = budget;
    opts.seed = c.seed;
    opts.truth = &truth;
    r = elim_run(oracle, o.n, opts);
  } else if (o.strategy == "elim-noisy") {
    NoisyHammingOracle oracle(dd, SignVector(o.n));
    Rng rng(c.seed);
    oracle.sample_coordinates(NoisyHammingOracle::default_sample_size(o.n), rng);
    ElimOptions opts;
    opts.budget = budget;
    opts.seed = c.seed;
    opts.truth = &truth;
    r = elim_run(oracle, o.n, opts);
    r.queries += oracle.samples().size() + 1;
  } else if (o.strategy == "linear") {
    NoiselessHammingOracle oracle(truth);
    r.estimate = linear_system_retrieve(oracle, o.n);
    r.queries = oracle.query_count();
  } else {
    throw CLI::ValidationError("--strategy", "unknown strategy " + o.strategy);
  }

  const fs::path path = prepare(c, fmt::format("signsearch_{}_{}.csv", o.strategy, o.n));
  {
    auto out = fmt::output_file(path.string());
    out.print("query_index,hamming_to_truth,value\n");
    for (const auto& p : r.trace) {
      out.print("{},{},{:.17g}\n", p.query_index,
                p.hamming_to_truth ? std::to_string(*p.hamming_to_truth) : "", p.value);
    }
  }
  std::cout << fmt::format("{} n={}: queries={} hamming_to_truth={}{}\n", o.strategy, o.n, r.queries,
                           hamming_distance(r.estimate, truth), r.flagged ? " (flagged)" : "");
  return 0;
}

// hamming-bench --------------------------------------------------------------

int run_hamming_bench(const Common& c, std::size_t n_min, std::size_t n_max, std::size_t trials,
                      const std::string& which) {
  std::vector<HammingStrategy> strategies;
  if (which == "elim" || which == "all") strategies.push_back(HammingStrategy::elim);
  if (which == "linear_system" || which == "all") strategies.push_back(HammingStrategy::linear_system);
  const fs::path path = prepare(c, "query_ratios.csv");
  auto out = fmt::output_file(path.string());
  out.print("strategy,n,mean_ratio,min_ratio,max_ratio,lower_bound,trials,failures\n");
  std::cout << fmt::format("{:<14} {:>3} {:>10} {:>10}\n", "strategy", "n", "mean_rho", "bound");
  std::size_t violations = 0;
  for (auto s : strategies) {
    for (const auto& row : query_ratio_bench(s, n_min, n_max, trials, c.seed)) {
      out.print("{},{},{:.6f},{:.6f},{:.6f},{:.6f},{},{}\n", to_string(s), row.n, row.mean_ratio,
                row.min_ratio, row.max_ratio, row.lower_bound, row.trials, row.failures);
      std::cout << fmt::format("{:<14} {:>3} {:>10.4f} {:>10.4f}\n", to_string(s), row.n,
                               row.mean_ratio, row.lower_bound);
      violations += row.mean_ratio < row.lower_bound;
    }
  }
  std::cout << fmt::format("lower-bound violations: {}\n", violations);
  return 0;
}

// noisy-fgsm -----------------------------------------------------------------

int run_noisy_fgsm(const Common& c, const ToyData& d, double epsilon, const std::string& norm_text,
                   std::size_t seeds) {
  const Norm norm = parse_norm(norm_text);
  const ToySetup toy = make_toy(d, c.seed);
  std::vector<double> ks;
  for (int k = 0; k <= 100; k += 10) ks.push_back(k);
  const fs::path path = prepare(c, "noisy_fgsm.csv");
  auto out = fmt::output_file(path.string());
  out.print("mode,k,seed,misclassification_rate\n");
  for (KeepMode mode : {KeepMode::top, KeepMode::random}) {
    std::vector<std::vector<double>> per_seed(seeds);
    parallel_for(seeds, c.jobs, [&](std::size_t s) {
      per_seed[s] = noisy_fgsm_rates(toy.trained.model, toy.test, epsilon, norm, ks, mode,
                                     derive_seed(c.seed, {s}));
    });
    std::string line = to_string(mode) + ":";
    for (std::size_t k = 0; k < ks.size(); ++k) {
      double mean = 0.0;
      for (std::size_t s = 0; s < seeds; ++s) {
        out.print("{},{},{},{:.6f}\n", to_string(mode), ks[k], s, per_seed[s][k]);
        mean += per_seed[s][k];
      }
      line += fmt::format(" {:.0f}%={:.3f}", ks[k], mean / static_cast<double>(seeds));
    }
    std::cout << line << '\n';
  }
  return 0;
}

// contopt --------------------------------------------------------------------

int run_contopt(const Common& c, std::size_t n, std::size_t trials, const ContOptConfig& base) {
  ContOptConfig config = base;
  config.seed = c.seed;
  const ContOptStudy study = contopt_study(n, trials, config, c.jobs);
  write_contopt_csv(study, prepare(c, fmt::format("contopt_n{}.csv", n)));
  std::cout << fmt::format("n={} trials={} mean final loss: signhunter={:.6g} nes={:.6g} zosignsgd={:.6g}\n",
                           n, trials, study.mean_final[0], study.mean_final[1], study.mean_final[2]);
  return 0;
}

// gradcheck ------------------------------------------------------------------

int run_gradcheck(const Common& c, const ToyData& d, std::size_t points, double tolerance) {
  const ToySetup toy = make_toy(d, c.seed);
  Rng rng(derive_seed(c.seed, {2}));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> coef(d.dim);
  for (double& v : coef) v = normal(rng);
  const LinearModel linear(coef);
  const LinearBinaryClassifier binary(coef, 0.1);
  const QuadraticToy quad = make_quadratic_toy(d.dim, derive_seed(c.seed, {3}));
  const SyntheticConcaveLoss concave(d.dim);
  const std::vector<const ToyModel*> models{&linear, &binary, &quad.model, &concave, &toy.trained.model};

  int failures = 0;
  for (const ToyModel* m : models) {
    const InputRange range = m->input_range();
    std::uniform_real_distribution<double> u(range.lo, range.hi);
    std::uniform_int_distribution<int> label(0, static_cast<int>(std::max<std::size_t>(m->num_classes(), 1)) - 1);
    double worst = 0.0;
    std::size_t passed = 0;
    for (std::size_t p = 0; p < points; ++p) {
      std::vector<double> x(m->input_dim());
      for (double& v : x) v = u(rng);
      const int y = label(rng);
      worst = std::max(worst, gradient_check_error(*m, x, y));
      passed += gradient_check(*m, x, y, tolerance);
    }
    failures += passed != points;
    std::cout << fmt::format("{:<18} {}/{} passed, max relative error {:.3e}\n", m->name(), passed,
                             points, worst);
  }
  return failures == 0 ? 0 : kExitRuntime;
}

// maghist --------------------------------------------------------------------

int run_maghist(const Common& c, const ToyData& d, const HistogramConfig& base) {
  const ToySetup toy = make_toy(d, c.seed);
  HistogramConfig hc = base;
  hc.seed = c.seed;
  const auto hists = magnitude_histogram(toy.trained.model, toy.test, hc);
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  double mean_conc = 0.0;
  for (const auto& h : hists) {
    doc.push_back({{"image_id", h.image_id},
                   {"bin_edges", h.bin_edges},
                   {"counts", h.counts},
                   {"median", h.median},
                   {"iqr", h.iqr},
                   {"concentration", std::isfinite(h.concentration) ? nlohmann::ordered_json(h.concentration)
                                                                    : nlohmann::ordered_json(nullptr)}});
    mean_conc += h.concentration;
  }
  std::ofstream(prepare(c, hc.perturbed ? "maghist_perturbed.json" : "maghist.json")) << doc.dump(2) << '\n';
  std::cout << fmt::format("images={} mean IQR/median={:.4f}\n", hists.size(),
                           hists.empty() ? 0.0 : mean_conc / static_cast<double>(hists.size()));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Query-only gradient-sign estimation and adversarial attack toolkit"};
  app.require_subcommand(1);
  Common common;
  bool seed_given = false;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", common.seed, "Master seed")->envname("SIGNQUEST_SEED")
        ->each([&](const std::string&) { seed_given = true; });
    cmd->add_option("--out", common.out, "Output directory");
    cmd->add_option("--jobs", common.jobs, "Worker threads")->check(CLI::PositiveNumber);
    cmd->add_flag("-v,--verbose", common.verbose, "Extra output");
  };

  auto* attack = app.add_subcommand("attack", "Run an attack campaign from a JSON config");
  fs::path config_path;
  bool traces = false;
  attack->add_option("--config", config_path, "Campaign JSON")->required();
  attack->add_flag("--traces", traces, "Write averaged per-query traces");
  add_common(attack);

  auto* search = app.add_subcommand("signsearch", "Recover a gradient sign on a toy objective");
  SearchOptions so;
  search->add_option("--strategy", so.strategy, "signhunter|goo|elim|elim-noisy|sequential|linear");
  search->add_option("--objective", so.objective, "linear|quadratic");
  search->add_option("--n", so.n, "Dimension")->check(CLI::Range(1, 20));
  search->add_option("--budget", so.budget, "Query budget (0 = automatic)");
  search->add_option("--probe", so.probe, "Finite-difference probe")->check(CLI::PositiveNumber);
  add_common(search);

  auto* hbench = app.add_subcommand("hamming-bench", "Query ratios with a noiseless Hamming oracle");
  std::size_t n_min = 1, n_max = 10, trials = 30;
  std::string which = "all";
  hbench->add_option("--n-min", n_min)->check(CLI::Range(1, 20));
  hbench->add_option("--n-max", n_max)->check(CLI::Range(1, 20));
  hbench->add_option("--trials", trials)->check(CLI::PositiveNumber);
  hbench->add_option("--strategy", which, "elim|linear_system|all")
      ->check(CLI::IsMember({"elim", "linear_system", "all"}));
  add_common(hbench);

  auto* nfgsm = app.add_subcommand("noisy-fgsm", "Misclassification rate versus correct sign share");
  ToyData toy;
  double nf_eps = 0.2;
  std::string nf_norm = "linf";
  std::size_t nf_seeds = 30;
  nfgsm->add_option("--epsilon", nf_eps)->check(CLI::NonNegativeNumber);
  nfgsm->add_option("--norm", nf_norm)->check(CLI::IsMember({"linf", "l2"}));
  nfgsm->add_option("--seeds", nf_seeds)->check(CLI::PositiveNumber);
  add_toy_options(nfgsm, toy);
  add_common(nfgsm);

  auto* copt = app.add_subcommand("contopt", "Minimise ||x - x*||^2 with SignHunter, NES and ZOSignSGD");
  std::size_t co_n = 1000, co_trials = 30;
  ContOptConfig co;
  copt->add_option("--n", co_n)->check(CLI::PositiveNumber);
  copt->add_option("--trials", co_trials)->check(CLI::PositiveNumber);
  copt->add_option("--budget", co.eval_budget, "Function evaluations per run");
  copt->add_option("--step", co.step_size)->check(CLI::PositiveNumber);
  copt->add_option("--probe", co.fd_probe)->check(CLI::PositiveNumber);
  copt->add_option("--samples", co.samples, "Antithetic pairs per baseline step")->check(CLI::PositiveNumber);
  add_common(copt);

  auto* gcheck = app.add_subcommand("gradcheck", "Compare analytic and finite-difference gradients");
  std::size_t gc_points = 20;
  double gc_tol = 1e-4;
  gcheck->add_option("--points", gc_points)->check(CLI::PositiveNumber);
  gcheck->add_option("--tolerance", gc_tol)->check(CLI::PositiveNumber);
  add_toy_options(gcheck, toy);
  add_common(gcheck);

  auto* mhist = app.add_subcommand("maghist", "Histograms of gradient-coordinate magnitudes");
  HistogramConfig hc;
  mhist->add_option("--images", hc.num_images)->check(CLI::PositiveNumber);
  mhist->add_flag("--perturbed", hc.perturbed, "Sample a point of the l_inf ball per image");
  mhist->add_option("--epsilon", hc.epsilon)->check(CLI::NonNegativeNumber);
  mhist->add_option("--bins", hc.bins)->check(CLI::PositiveNumber);
  add_toy_options(mhist, toy);
  add_common(mhist);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*attack) return run_attack(common, config_path, traces, seed_given);
    if (*search) return run_signsearch(common, so);
    if (*hbench) {
      if (n_min > n_max) throw CLI::ValidationError("--n-min", "must not exceed --n-max");
      return run_hamming_bench(common, n_min, n_max, trials, which);
    }
    if (*nfgsm) return run_noisy_fgsm(common, toy, nf_eps, nf_norm, nf_seeds);
    if (*copt) return run_contopt(common, co_n, co_trials, co);
    if (*gcheck) return run_gradcheck(common, toy, gc_points, gc_tol);
    if (*mhist) return run_maghist(common, toy, hc);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
