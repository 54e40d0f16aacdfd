// Command-line driver: single runs, sweeps, profiles, speedups, growth
// estimates and the lower-bound lab.

#include "aprox/analysis.hpp"
#include "aprox/harness/config.hpp"
#include "aprox/harness/io.hpp"
#include "aprox/harness/lower_bound.hpp"
#include "aprox/harness/sweep.hpp"
#include "aprox/optimizers.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace aprox;
using namespace aprox::harness;

struct Common {
  std::string config_path;
  std::string preset_name;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::optional<unsigned> jobs;
  std::optional<bool> accelerated;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "JSON sweep configuration");
  cmd->add_option("--preset", c.preset_name, "built-in preset name");
  cmd->add_option("--seed", c.seed, "master seed");
  cmd->add_option("--out", c.out_dir, "output directory");
  cmd->add_option("--jobs", c.jobs, "worker threads");
  cmd->add_option("--accelerated", c.accelerated, "use the accelerated iteration (true/false)");
}

SweepConfig resolve_config(const Common& c) {
  SweepConfig cfg;
  if (!c.config_path.empty()) {
    cfg = load_config_file(c.config_path);
  } else {
    cfg = preset(c.preset_name.empty() ? "desk-linreg" : c.preset_name);
  }
  if (c.seed) cfg.master_seed = *c.seed;
  if (!c.out_dir.empty()) cfg.out_dir = c.out_dir;
  if (c.jobs) cfg.jobs = *c.jobs;
  if (c.accelerated) {
    for (auto& m : cfg.methods) m.accelerated = *c.accelerated;
  }
  cfg.validate();
  return cfg;
}

std::string csv_path_for(const Common& c, const std::string& explicit_path) {
  if (!explicit_path.empty()) return explicit_path;
  return (std::filesystem::path(c.out_dir.empty() ? "out" : c.out_dir) / "sweep.csv").string();
}

int cmd_run(const Common& c, const std::string& method, Index m, double alpha0, Index seed, double cond,
            Index stride) {
  SweepConfig cfg = resolve_config(c);
  const MethodSpec spec = method_spec(method, c.accelerated.value_or(false));
  cfg.record_stride = stride;
  const ProblemInstance inst = make_cell_instance(cfg, cond, seed);
  const double f_star = inst.optimum().f_star;
  const Vector x0 = Vector::Zero(inst.dimension());
  const double eps = cfg.epsilon * (inst.objective(x0) - f_star);
  Rng rng = make_rng(derive_seed(cfg.master_seed, {static_cast<std::uint64_t>(seed), 0x72756eULL}));
  RunOptions opts;
  opts.record_stride = stride;
  opts.f_star = f_star;
  const StepSchedule schedule = cell_schedule(cfg, inst, spec, alpha0);
  const Index K = (cfg.budget + m - 1) / m;
  const RunRecord rec = spec.accelerated ? run_accelerated(inst, spec.strategy, schedule, m, K, eps, rng, opts)
                                         : run_base(inst, spec.strategy, schedule, m, K, eps, rng, opts);
  std::printf("k,samples,gap\n");
  std::printf("0,0,%s\n", format_double(rec.initial_gap).c_str());
  for (std::size_t j = 0; j < rec.gaps.size(); ++j) {
    std::printf("%lld,%lld,%s\n", static_cast<long long>(rec.iterations[j]), static_cast<long long>(rec.samples[j]),
                format_double(rec.gaps[j]).c_str());
  }
  const auto t = time_to_epsilon(rec, eps);
  std::fprintf(stderr, "status=%s epsilon=%s samples_to_eps=%s\n", std::string(to_string(rec.status)).c_str(),
               format_double(eps).c_str(), t ? std::to_string(*t).c_str() : "none");
  return 0;
}

int cmd_sweep(const Common& c) {
  const SweepConfig cfg = resolve_config(c);
  std::filesystem::create_directories(cfg.out_dir);
  std::cerr << "[sweep] " << cfg.name << ": " << cfg.conds.size() * static_cast<std::size_t>(cfg.seeds) *
                                                      cfg.methods.size() * cfg.ms.size() * cfg.alpha0s.size()
            << " cells on " << cfg.jobs << " thread(s)\n";
  const SweepResult result = execute_sweep(cfg, &std::cerr);
  const auto path = (std::filesystem::path(cfg.out_dir) / "sweep.csv").string();
  write_csv(result, path);
  std::cout << "wrote " << path << " (" << result.rows.size() << " rows)\n";
  return 0;
}

int cmd_profile(const Common& c, const std::string& csv, const std::string& unit) {
  const SweepResult result = read_csv(csv_path_for(c, csv));
  const bool acc = c.accelerated.value_or(false);
  const ProfileResult prof =
      performance_profile(profile_input(result, acc, unit == "iterations" ? TimeUnit::Iterations : TimeUnit::Samples));
  const std::filesystem::path dir = c.out_dir.empty() ? "out" : c.out_dir;
  std::filesystem::create_directories(dir);
  write_profile_csv(prof, (dir / "profile.csv").string());
  std::vector<Series> series;
  for (const auto& curve : prof.curves) series.push_back({curve.method, curve.ratios, curve.fractions});
  emit_svg(series, (dir / "profile.svg").string(), PlotKind::Profile, "performance profile");
  std::printf("kept %lld cells, discarded %lld\n", static_cast<long long>(prof.kept_cells),
              static_cast<long long>(prof.discarded_cells));
  std::printf("%-12s %8s %8s %8s\n", "method", "r=1", "r=2", "r=4");
  for (const auto& curve : prof.curves) {
    std::printf("%-12s %8.3f %8.3f %8.3f\n", curve.method.c_str(), curve.value_at(1.0), curve.value_at(2.0),
                curve.value_at(4.0));
  }
  return 0;
}

int cmd_speedup(const Common& c, const std::string& csv, const std::string& unit) {
  const SweepResult result = read_csv(csv_path_for(c, csv));
  const bool acc = c.accelerated.value_or(false);
  const TimeUnit tu = unit == "samples" ? TimeUnit::Samples : TimeUnit::Iterations;
  std::map<std::string, std::map<Index, double>> table;
  for (const auto& r : result.rows) {
    if (r.accelerated != acc || table.count(r.method)) continue;
    try {
      table[r.method] = speedup_table(speedup_samples(result, r.method, acc, tu));
    } catch (const std::domain_error& e) {
      std::cerr << "speedup: " << r.method << ": " << e.what() << '\n';
      table[r.method] = {};
    }
  }
  const std::filesystem::path dir = c.out_dir.empty() ? "out" : c.out_dir;
  std::filesystem::create_directories(dir);
  write_speedup_csv(table, (dir / "speedup.csv").string());
  std::vector<Series> series;
  for (const auto& [method, row] : table) {
    Series s{method, {}, {}};
    for (const auto& [m, v] : row) {
      s.xs.push_back(static_cast<double>(m));
      s.ys.push_back(v);
      std::printf("%s,m=%lld,speedup=%s\n", method.c_str(), static_cast<long long>(m), format_double(v).c_str());
    }
    series.push_back(std::move(s));
  }
  if (!series.empty()) emit_svg(series, (dir / "speedup.svg").string(), PlotKind::Speedup, "minibatch speedup");
  return 0;
}

int cmd_growth(double gamma, Index n, Index N, double alpha, Index seeds, std::uint64_t master) {
  const double bound = 1.0 / (std::pow(2.0, 2.0 - gamma) * (1.0 + gamma) * static_cast<double>(n));
  std::printf("seed,lambda0,lambda1,bound,negative_probes\n");
  Index hits = 0;
  for (Index s = 0; s < seeds; ++s) {
    ProblemParams p;
    p.kind = LossKind::PowerReg;
    p.gamma = gamma;
    p.n = n;
    p.N = N;
    p.seed = derive_seed(master, {static_cast<std::uint64_t>(s)});
    const ProblemInstance inst = generate_problem(p);
    Rng rng = make_rng(p.seed);
    const GrowthEstimate est = estimate_gamma_growth(inst, gamma, alpha, GrowthOptions{}, rng);
    hits += est.lambda1 >= bound;
    std::printf("%lld,%s,%s,%s,%lld\n", static_cast<long long>(s), format_double(est.lambda0).c_str(),
                format_double(est.lambda1).c_str(), format_double(bound).c_str(),
                static_cast<long long>(est.negative_probes));
  }
  std::fprintf(stderr, "lambda1 >= bound on %lld of %lld seeds\n", static_cast<long long>(hits),
               static_cast<long long>(seeds));
  return 0;
}

int cmd_lbtest(const std::string& kind, Index n, Index m, double R, Index trials, Index rounds, double gamma,
               double delta, const std::string& method, double alpha0, std::uint64_t seed) {
  if (kind == "orthcol") {
    const OrthColReport rep = orthcol_lab(n, m, R, trials, rounds, seed);
    std::printf("k,empirical_risk,closed_form,rank_risk,mean_rank,expected_rank\n");
    for (const auto& r : rep.rounds) {
      std::printf("%lld,%s,%s,%s,%s,%s\n", static_cast<long long>(r.k), format_double(r.empirical_risk).c_str(),
                  format_double(r.closed_form).c_str(), format_double(r.rank_risk).c_str(),
                  format_double(r.mean_rank).c_str(), format_double(r.expected_rank).c_str());
    }
    return 0;
  }
  if (kind == "twopoint") {
    const TwoPointReport rep = twopoint_lab(gamma, delta, R, trials, rounds, BatchStrategy::from_name(method), alpha0, seed);
    std::printf("k,mean_dist_sq,envelope\n");
    for (const auto& r : rep.rounds) {
      std::printf("%lld,%s,%s\n", static_cast<long long>(r.k), format_double(r.mean_dist_sq).c_str(),
                  format_double(r.envelope).c_str());
    }
    return 0;
  }
  throw ConfigError("lbtest: --kind must be 'orthcol' or 'twopoint'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model-based minibatch stochastic optimization experiments"};
  app.require_subcommand(1);

  Common common;
  auto* run = app.add_subcommand("run", "single trajectory; prints the gap trace as CSV");
  add_common(run, common);
  std::string method = "pma";
  Index m = 1, seed = 0, stride = 1;
  double alpha0 = 1.0, cond = 1.0;
  run->add_option("--method", method, "sgm, prox, pia, pma, pam");
  run->add_option("--m", m, "batch size");
  run->add_option("--alpha0", alpha0, "initial stepsize");
  run->add_option("--instance", seed, "instance seed index");
  run->add_option("--cond", cond, "condition number");
  run->add_option("--stride", stride, "record stride");

  auto* sweep = app.add_subcommand("sweep", "run the full grid and write sweep.csv");
  add_common(sweep, common);

  std::string csv, unit = "samples";
  auto* profile = app.add_subcommand("profile", "performance profiles from a sweep CSV");
  add_common(profile, common);
  profile->add_option("--csv", csv, "sweep CSV (default OUT/sweep.csv)");
  profile->add_option("--unit", unit, "samples or iterations");

  std::string speedup_unit = "iterations";
  auto* speedup = app.add_subcommand("speedup", "minibatch speedups from a sweep CSV");
  add_common(speedup, common);
  speedup->add_option("--csv", csv, "sweep CSV (default OUT/sweep.csv)");
  speedup->add_option("--unit", speedup_unit, "iterations or samples");

  double gamma = 0.0, alpha = std::numeric_limits<double>::infinity();
  Index dim = 10, samples = 2000, seeds = 20;
  auto* growth = app.add_subcommand("growth", "growth-constant estimates on power regression");
  add_common(growth, common);
  growth->add_option("--gamma", gamma, "growth exponent in [0, 1]");
  growth->add_option("--n", dim, "dimension");
  growth->add_option("--N", samples, "dataset size");
  growth->add_option("--alpha", alpha, "stepsize cap (default inf)");
  growth->add_option("--seeds", seeds, "number of instances");

  std::string lb_kind = "orthcol", lb_method = "pma";
  Index lb_n = 32, lb_m = 4, trials = 500, rounds = 20;
  double radius = 1.0, delta = 0.1, lb_alpha = std::numeric_limits<double>::infinity();
  auto* lbtest = app.add_subcommand("lbtest", "lower-bound laboratory");
  add_common(lbtest, common);
  lbtest->add_option("--kind", lb_kind, "orthcol or twopoint");
  lbtest->add_option("--n", lb_n, "dimension (orthcol)");
  lbtest->add_option("--m", lb_m, "columns per round (orthcol)");
  lbtest->add_option("--R", radius, "radius");
  lbtest->add_option("--trials", trials, "Monte Carlo trials");
  lbtest->add_option("--rounds", rounds, "rounds");
  lbtest->add_option("--gamma", gamma, "exponent (twopoint)");
  lbtest->add_option("--delta", delta, "informative-sample probability (twopoint)");
  lbtest->add_option("--method", lb_method, "optimizer (twopoint)");
  lbtest->add_option("--alpha0", lb_alpha, "initial stepsize (twopoint)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*run) return cmd_run(common, method, m, alpha0, seed, cond, stride);
    if (*sweep) return cmd_sweep(common);
    if (*profile) return cmd_profile(common, csv, unit);
    if (*speedup) return cmd_speedup(common, csv, speedup_unit);
    if (*growth) return cmd_growth(gamma, dim, samples, alpha, seeds, common.seed.value_or(0));
    if (*lbtest) {
      return cmd_lbtest(lb_kind, lb_n, lb_m, radius, trials, rounds, gamma, delta, lb_method, lb_alpha,
                        common.seed.value_or(0));
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
