#include "aprox/harness/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

namespace aprox::harness {

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t bits(double v) { return std::bit_cast<std::uint64_t>(v); }

}  // namespace

void SweepResult::sort() {
  std::sort(rows.begin(), rows.end(), [](const CellResult& a, const CellResult& b) { return a.key() < b.key(); });
}

std::string noise_label(const NoiseSpec& noise) {
  char buf[64];
  switch (noise.kind) {
    case NoiseKind::None: return "none";
    case NoiseKind::GaussianResidual: std::snprintf(buf, sizeof buf, "gaussian:%g", noise.level); break;
    case NoiseKind::LaplaceResidual: std::snprintf(buf, sizeof buf, "laplace:%g", noise.level); break;
    case NoiseKind::LabelFlip: std::snprintf(buf, sizeof buf, "flip:%g", noise.level); break;
  }
  return buf;
}

ProblemInstance make_cell_instance(const SweepConfig& cfg, double cond, Index seed) {
  ProblemParams p = cfg.problem;
  p.cond = cond;
  p.seed = derive_seed(cfg.master_seed, {static_cast<std::uint64_t>(p.kind), bits(cond), static_cast<std::uint64_t>(seed)});
  return generate_problem(p);
}

StepSchedule cell_schedule(const SweepConfig& cfg, const ProblemInstance& inst, const MethodSpec&, double alpha0) {
  if (cfg.schedule == ScheduleChoice::Adaptive) {
    const auto L = inst.smoothness();
    if (!L) throw ConfigError("schedule: adaptive steps need a smooth instance");
    return StepSchedule::smoothness_adaptive(*L, 1.0 / alpha0, 0.5);
  }
  return StepSchedule::poly(alpha0, cfg.beta);
}

CellResult run_cell(const SweepConfig& cfg, const ProblemInstance& inst, const MethodSpec& method, Index m,
                    double alpha0, Index seed) {
  CellResult row;
  row.problem = std::string(to_string(inst.kind()));
  row.noise = noise_label(inst.params().noise);
  row.cond = inst.params().cond;
  row.method = method.name;
  row.accelerated = method.accelerated;
  row.m = m;
  row.alpha0 = alpha0;
  row.seed = seed;

  const Vector x0 = Vector::Zero(inst.dimension());
  const double f_star = inst.optimum().f_star;
  const double eps_abs = cfg.epsilon * (inst.objective(x0) - f_star);
  const Index K = (cfg.budget + m - 1) / m;
  Rng rng = make_rng(derive_seed(cfg.master_seed, {inst.params().seed, fnv1a(method.name), method.accelerated ? 1u : 0u,
                                                   static_cast<std::uint64_t>(m), bits(alpha0)}));
  RunOptions opts;
  opts.record_stride = cfg.record_stride;
  opts.f_star = f_star;
  const StepSchedule schedule = cell_schedule(cfg, inst, method, alpha0);

  RunRecord rec;
  if (!(eps_abs > 0.0)) {
    row.k_to_eps = 0;
    row.samples_to_eps = 0;
    row.status = RunStatus::Converged;
    return row;
  }
  rec = method.accelerated ? run_accelerated(inst, method.strategy, schedule, m, K, eps_abs, rng, opts)
                           : run_base(inst, method.strategy, schedule, m, K, eps_abs, rng, opts);
  row.status = rec.status;
  if (rec.status == RunStatus::Converged) {
    row.k_to_eps = iterations_to_epsilon(rec, eps_abs);
    if (row.k_to_eps) row.samples_to_eps = *row.k_to_eps * m;
  }
  row.final_gap = rec.gaps.empty() ? rec.initial_gap : rec.gaps.back();
  return row;
}

SweepResult execute_sweep(const SweepConfig& cfg, std::ostream* progress) {
  cfg.validate();
  struct Task {
    std::size_t instance;
    std::size_t method;
    Index m;
    double alpha0;
  };

  // Instances (and their reference optima) are built up front and shared
  // read-only across workers.
  std::vector<ProblemInstance> instances;
  std::vector<Index> instance_seed;
  for (double cond : cfg.conds) {
    for (Index s = 0; s < cfg.seeds; ++s) {
      instances.push_back(make_cell_instance(cfg, cond, s));
      (void)instances.back().optimum();
      instance_seed.push_back(s);
    }
  }
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < instances.size(); ++i)
    for (std::size_t mth = 0; mth < cfg.methods.size(); ++mth)
      for (Index m : cfg.ms)
        for (double a : cfg.alpha0s) tasks.push_back({i, mth, m, a});

  SweepResult result;
  result.rows.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      const Task& task = tasks[t];
      result.rows[t] = run_cell(cfg, instances[task.instance], cfg.methods[task.method], task.m, task.alpha0,
                                instance_seed[task.instance]);
      const std::size_t finished = done.fetch_add(1) + 1;
      if (progress && (finished % 50 == 0 || finished == tasks.size())) {
        std::lock_guard<std::mutex> lock(log_mutex);
        *progress << "[sweep] " << finished << "/" << tasks.size() << " cells\n";
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(tasks.size())));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  result.sort();
  return result;
}

ProfileInput profile_input(const SweepResult& result, bool accelerated, TimeUnit unit) {
  std::vector<std::string> methods;
  for (const auto& r : result.rows) {
    if (r.accelerated == accelerated && std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
      methods.push_back(r.method);
    }
  }
  std::sort(methods.begin(), methods.end());
  using CellKey = std::tuple<std::string, std::string, double, Index, double, Index>;
  std::map<CellKey, std::vector<double>> cells;
  for (const auto& r : result.rows) {
    if (r.accelerated != accelerated) continue;
    auto& row = cells[{r.problem, r.noise, r.cond, r.m, r.alpha0, r.seed}];
    row.resize(methods.size(), infinity());
    const auto col = static_cast<std::size_t>(std::find(methods.begin(), methods.end(), r.method) - methods.begin());
    const auto t = unit == TimeUnit::Samples ? r.samples_to_eps : r.k_to_eps;
    if (r.status == RunStatus::Converged && t) row[col] = static_cast<double>(*t);
  }
  ProfileInput in;
  in.methods = methods;
  for (auto& [key, row] : cells) in.times.push_back(row);
  return in;
}

std::vector<SpeedupSample> speedup_samples(const SweepResult& result, const std::string& method, bool accelerated,
                                           TimeUnit unit) {
  std::vector<SpeedupSample> out;
  for (const auto& r : result.rows) {
    if (r.method != method || r.accelerated != accelerated) continue;
    const auto t = unit == TimeUnit::Samples ? r.samples_to_eps : r.k_to_eps;
    out.push_back({r.m, r.alpha0, r.status == RunStatus::Converged && t ? static_cast<double>(*t) : infinity()});
  }
  return out;
}

}  // namespace aprox::harness
