// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "aprox/analysis.hpp"
#include "aprox/box_qp.hpp"
#include "aprox/harness/config.hpp"
#include "aprox/harness/lower_bound.hpp"
#include "aprox/harness/sweep.hpp"
#include "aprox/optimizers.hpp"
#include "aprox/prox.hpp"
#include "support/testing.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace aprox;
using testing::Gen;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double softplus(double t) { return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

// ---------------------------------------------------------------------------
// 1. Prox solvers against dense grids. The grid cannot reach the argmin of a
// nonsmooth primal to within its spacing (the minimizer may sit on a kink the
// grid straddles), so a solver passes when (a) no node of a coarse-to-fine
// grid search over a box around the solution beats it and (b) the fine grid
// anchored at the solver output has its argmin within two spacings.

Outcome prox_oracle() {
  constexpr double h = 1e-3;
  constexpr double half = 6.0;
  Gen gen(1001);
  Index failures = 0, total = 0;
  double worst_value = -kInf, worst_dist = 0.0;

  auto judge = [&](const std::function<double(const Vector&)>& primal, const Vector& sol, const Vector& xk) {
    ++total;
    const bool inside = (sol - xk).lpNorm<Eigen::Infinity>() < half;
    const double coarse = testing::multiscale_argmin(primal, xk, half, h).value;
    const double excess = primal(sol) - coarse;
    const double dist = (testing::grid_argmin(primal, sol, 10 * h, h).x - sol).lpNorm<Eigen::Infinity>();
    worst_value = std::max(worst_value, excess);
    worst_dist = std::max(worst_dist, dist);
    if (!inside || excess > 1e-12 || dist > 2 * h) ++failures;
  };

  for (int t = 0; t < 200; ++t) {
    const Index n = gen.integer(1, 3), m = gen.integer(1, 3);
    const double mm = static_cast<double>(m);
    const Vector xk = gen.vec(n);
    const double alpha = gen.uniform(0.2, 2.0);
    const double inv = 0.5 / alpha;

    {  // truncated step
      const Vector g = gen.vec(n);
      const double lower = gen.uniform(-1.0, 1.0);
      const double value = lower + gen.uniform(0.0, 3.0);
      auto primal = [&](const Vector& y) {
        return std::max(value + g.dot(y - xk), lower) + inv * (y - xk).squaredNorm();
      };
      judge(primal, truncated_step(xk, value, g, lower, alpha), xk);
    }
    {  // averaged truncated models
      const Matrix G = gen.mat(n, m);
      Vector v(m);
      for (Index i = 0; i < m; ++i) v(i) = gen.uniform(0.0, 3.0);
      auto primal = [&](const Vector& y) {
        double s = 0.0;
        for (Index i = 0; i < m; ++i) s += std::max(v(i) + G.col(i).dot(y - xk), 0.0);
        return s / mm + inv * (y - xk).squaredNorm();
      };
      judge(primal, pam_step(xk, G, v, alpha, 1e-13).x_next, xk);
    }
    const Matrix A = gen.mat(m, n);
    const Vector b = gen.vec(m);
    {
      auto primal = [&](const Vector& y) { return (A * y - b).squaredNorm() / (2 * mm) + inv * (y - xk).squaredNorm(); };
      judge(primal, prox_step_linreg(xk, A, b, alpha), xk);
    }
    {
      auto primal = [&](const Vector& y) { return (A * y - b).lpNorm<1>() / (2 * mm) + inv * (y - xk).squaredNorm(); };
      judge(primal, prox_step_absreg(xk, A, b, alpha, 1e-13).x_next, xk);
    }
    {
      Vector lab(m);
      for (Index i = 0; i < m; ++i) lab(i) = gen.coin() ? 1.0 : -1.0;
      auto primal = [&](const Vector& y) {
        const Vector z = lab.cwiseProduct(A * y);
        double s = 0.0;
        for (Index i = 0; i < m; ++i) s += softplus(-z(i));
        return s / (2 * mm) + inv * (y - xk).squaredNorm();
      };
      judge(primal, prox_step_logistic(xk, A, lab, alpha, 1e-13).x_next, xk);
    }
  }
  return {failures == 0, fmt("%ld/%ld instances fail; worst value excess %.2e, worst anchored-grid offset %.1e (limit %.0e)",
                             static_cast<long>(failures), static_cast<long>(total), worst_value, worst_dist, 2 * h)};
}

// ---------------------------------------------------------------------------

Outcome box_qp() {
  Gen gen(1002);
  double worst_kkt = 0.0, worst_gap = 0.0, worst_polyak = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const Index m = gen.integer(1, 16);
    BoxQP<double> qp = BoxQP<double>::uniform(gen.psd(m, gen.integer(1, m)), gen.vec(m, 2.0),
                                              std::pow(10.0, gen.uniform(-2, 2)), 0.0, 1.0 / static_cast<double>(m));
    const auto sol = solve_box_qp(qp, 1e-10);
    worst_kkt = std::max(worst_kkt, box_qp_kkt_residual(qp, sol.lambda));
    worst_gap = std::max(worst_gap, std::abs(sol.duality_gap));
  }
  for (int t = 0; t < 1000; ++t) {
    const Vector g = gen.vec(gen.integer(1, 5));
    const double v = gen.uniform(0.0, 3.0), a = std::pow(10.0, gen.uniform(-2, 2));
    Matrix Q(1, 1);
    Q(0, 0) = g.squaredNorm();
    const auto sol = solve_box_qp(BoxQP<double>::uniform(Q, Vector::Constant(1, v), a, 0.0, 1.0), 1e-14);
    worst_polyak = std::max(worst_polyak, std::abs(sol.lambda(0) - std::min(1.0, v / (a * g.squaredNorm()))));
  }
  return {worst_kkt <= 1e-8 && worst_gap <= 1e-8 && worst_polyak <= 1e-12,
          fmt("max KKT %.2e, max gap %.2e, max |lambda - Polyak| %.2e", worst_kkt, worst_gap, worst_polyak)};
}

// ---------------------------------------------------------------------------

std::vector<ProblemInstance> condition_instances() {
  std::vector<ProblemInstance> out;
  auto add = [&](LossKind k, NoiseSpec noise, double gamma = 0.0) {
    ProblemParams p;
    p.kind = k;
    p.N = 50;
    p.n = 6;
    p.noise = noise;
    p.gamma = gamma;
    p.seed = 3000 + out.size();
    out.push_back(generate_problem(p));
  };
  add(LossKind::LinReg, NoiseSpec::gaussian(0.5));
  add(LossKind::LinReg, NoiseSpec::none());
  add(LossKind::AbsReg, NoiseSpec::laplace(0.5));
  add(LossKind::Logistic, NoiseSpec::label_flip(0.1));
  add(LossKind::HalfspaceIntersection, NoiseSpec::none());
  add(LossKind::PowerReg, NoiseSpec::none(), 0.5);
  ProblemParams tp;
  tp.kind = LossKind::TwoPoint;
  tp.gamma = 0.3;
  tp.delta = 0.4;
  out.push_back(generate_problem(tp));
  return out;
}

Outcome model_conditions() {
  const BatchStrategy strategies[] = {BatchStrategy::sgm(), BatchStrategy::prox(), BatchStrategy::pma(),
                                      BatchStrategy::pam(), BatchStrategy::pia(ModelKind::Linear),
                                      BatchStrategy::pia(ModelKind::Truncated), BatchStrategy::pia(ModelKind::FullProx)};
  Gen gen(1003);
  Index bad = 0, checked = 0;
  double worst_anchor = 0.0, worst_slack = kInf;
  for (const ProblemInstance& inst : condition_instances()) {
    for (const BatchStrategy& s : strategies) {
      for (int rep = 0; rep < 5; ++rep) {
        const Batch batch = sample_batch(inst, gen.integer(1, 8), gen.rng());
        const BatchModel model = build_batch_model(inst, gen.vec(inst.dimension()), batch, s);
        const ModelConditionReport r = check_model_conditions(inst, model, 1000, gen.rng());
        ++checked;
        worst_anchor = std::max(worst_anchor, r.anchor_error);
        if (r.c3_applicable) worst_slack = std::min(worst_slack, r.min_lower_slack);
        if (!(r.c1_ok && r.c2_ok && r.c3_ok) || r.anchor_error > 1e-12 || (r.c3_applicable && r.min_lower_slack < -1e-9)) {
          ++bad;
        }
      }
    }
  }
  return {bad == 0, fmt("%ld/%ld models violate a condition; max anchor error %.1e, min lower slack %.1e",
                        static_cast<long>(bad), static_cast<long>(checked), worst_anchor, worst_slack)};
}

// ---------------------------------------------------------------------------

Outcome three_point_trajectories() {
  constexpr Index K = 10000;
  Gen gen(1004);
  double worst_three_point = -kInf, worst_expansion = -kInf;
  Index steps = 0;

  auto make = [](LossKind kind, NoiseSpec noise, std::uint64_t seed, double gamma = 0.0) {
    ProblemParams p;
    p.kind = kind;
    p.N = 100;
    p.n = 10;
    p.noise = noise;
    p.gamma = gamma;
    p.seed = seed;
    return generate_problem(p);
  };

  // Three-point inequality along trajectories of every model-of-average method.
  const std::vector<ProblemInstance> noisy{make(LossKind::LinReg, NoiseSpec::gaussian(0.5), 1),
                                           make(LossKind::AbsReg, NoiseSpec::laplace(0.5), 2),
                                           make(LossKind::Logistic, NoiseSpec::label_flip(0.05), 3),
                                           make(LossKind::HalfspaceIntersection, NoiseSpec::none(), 4),
                                           make(LossKind::PowerReg, NoiseSpec::none(), 5, 1.0)};
  for (const ProblemInstance& inst : noisy) {
    for (const BatchStrategy& s : {BatchStrategy::sgm(), BatchStrategy::prox(), BatchStrategy::pma(),
                                   BatchStrategy::pam()}) {
      for (bool accelerated : {false, true}) {
        RunOptions opts;
        opts.f_star = -1.0;
        opts.record_stride = K;
        opts.observer = [&](const StepInfo& info) {
          const Vector& xp = *info.prox_out;
          const double mx = evaluate_model(*info.model, xp);
          Vector y = *info.center + gen.vec(inst.dimension());
          worst_three_point = std::max(worst_three_point, three_point_excess(mx, evaluate_model(*info.model, y), *info.center, xp, y,
                                                            info.alpha));
          ++steps;
        };
        Rng rng = make_rng(7);
        const StepSchedule sched = StepSchedule::poly(1.0);
        if (accelerated) {
          run_accelerated(inst, s, sched, 4, K / 10, 1e-300, rng, opts);
        } else {
          run_base(inst, s, sched, 4, K, 1e-300, rng, opts);
        }
      }
    }
  }

  // Distance to the solution never grows on interpolation problems.
  const std::vector<ProblemInstance> interp{make(LossKind::LinReg, NoiseSpec::none(), 11),
                                            make(LossKind::AbsReg, NoiseSpec::none(), 12),
                                            make(LossKind::HalfspaceIntersection, NoiseSpec::none(), 13),
                                            make(LossKind::PowerReg, NoiseSpec::none(), 14, 1.0)};
  for (const ProblemInstance& inst : interp) {
    const Vector xs = *inst.optimum().x_star;
    for (const BatchStrategy& s : {BatchStrategy::prox(), BatchStrategy::pma(), BatchStrategy::pam(),
                                   BatchStrategy::pia()}) {
      RunOptions opts;
      opts.f_star = -1.0;
      opts.record_stride = K;
      opts.observer = [&](const StepInfo& info) {
        worst_expansion =
            std::max(worst_expansion, (*info.x_next - xs).squaredNorm() - (*info.x - xs).squaredNorm());
      };
      Rng rng = make_rng(8);
      run_base(inst, s, StepSchedule::poly(10.0), 4, K, 1e-300, rng, opts);
    }
  }
  return {worst_three_point <= 1e-8 && worst_expansion <= 1e-8,
          fmt("%ld checked steps; max three-point excess %.2e, max squared-distance increase %.2e",
              static_cast<long>(steps), worst_three_point, worst_expansion)};
}

// ---------------------------------------------------------------------------

Outcome theorem1_bound() {
  ProblemParams p;
  p.N = 200;
  p.n = 10;
  p.noise = NoiseSpec::gaussian(0.5);
  p.seed = 5;
  const ProblemInstance inst = generate_problem(p);
  const Vector xs = *inst.optimum().x_star;
  const double ball = 1.5 * xs.norm();
  // D(x, y) = |x - y|^2 / 2 <= R^2 on the ball.
  const double R = std::sqrt(2.0) * ball;
  const double L = *inst.smoothness();

  // Gradient variance is convex in x, so its maximum over the ball sits on the boundary.
  Gen gen(1005);
  std::vector<Vector> probes{Vector::Zero(p.n), xs};
  for (int i = 0; i < 2000; ++i) probes.push_back(gen.vec(p.n).normalized() * ball);
  Rng rng0 = make_rng(0);
  const double sigma = std::sqrt(estimate_sigma0(inst, probes, 0, rng0).sigma0_sq);

  std::string detail;
  bool pass = true;
  for (Index m : {1, 8}) {
    const double eta0 = sigma / (std::sqrt(static_cast<double>(m)) * R);
    double mean100 = 0.0, mean1000 = 0.0;
    for (int seed = 0; seed < 100; ++seed) {
      RunOptions opts;
      opts.domain = Domain::ball(Vector::Zero(p.n), ball);
      opts.track_average = true;
      opts.record_stride = 100;
      Rng rng = make_rng(derive_seed(77, {static_cast<std::uint64_t>(seed)}));
      const RunRecord rec =
          run_base(inst, BatchStrategy::sgm(), StepSchedule::smoothness_adaptive(L, eta0, 0.5), m, 1000, 1e-300, rng, opts);
      for (std::size_t j = 0; j < rec.iterations.size(); ++j) {
        if (rec.iterations[j] == 100) mean100 += rec.average_gaps[j] / 100.0;
        if (rec.iterations[j] == 1000) mean1000 += rec.average_gaps[j] / 100.0;
      }
    }
    for (auto [k, mean] : {std::pair<double, double>{100.0, mean100}, {1000.0, mean1000}}) {
      const double bound = L * R * R / k + 1.5 * R * sigma / std::sqrt(k * static_cast<double>(m));
      pass = pass && mean <= bound;
      detail += fmt("m=%ld k=%.0f: %.3e <= %.3e; ", static_cast<long>(m), k, mean, bound);
    }
  }
  return {pass, detail + fmt("sigma0 %.3f, R %.3f, L %.3f", sigma, R, L)};
}

// ---------------------------------------------------------------------------

Outcome rate_exponents() {
  // f(x) = sum_j lambda_j x_j^2 / 2 with log-uniform spectrum: the base method
  // decays like 1/k and the accelerated one like 1/k^2 over many decades.
  constexpr Index n = 400;
  ProblemParams p;
  p.N = n;
  p.n = n;
  Vector diag(n);
  for (Index j = 0; j < n; ++j) diag(j) = std::sqrt(static_cast<double>(n) * std::pow(10.0, -10.0 * j / (n - 1.0)));
  const ProblemInstance inst(p, Matrix(diag.asDiagonal()), Vector::Zero(n), Vector::Zero(n), Domain::all_space());

  RunOptions opts;
  opts.full_batch = true;
  opts.x0 = Vector::Ones(n);
  opts.f_star = 0.0;
  const StepSchedule sched = StepSchedule::smoothness_adaptive(1.0, 0.0, 0.5);

  std::vector<Index> ks;
  for (int i = 0; i <= 40; ++i) ks.push_back(static_cast<Index>(std::llround(std::pow(10.0, 2.0 + i / 20.0))));
  auto slope = [&](const RunRecord& rec) {
    std::vector<double> gaps;
    for (Index k : ks) gaps.push_back(rec.gaps[static_cast<std::size_t>(k - 1)]);
    return rate_slope(ks, gaps, 100, 10000).slope;
  };
  Rng rng = make_rng(0);
  const double base = slope(run_base(inst, BatchStrategy::sgm(), sched, 1, 10000, 1e-300, rng, opts));
  const double acc = slope(run_accelerated(inst, BatchStrategy::sgm(), sched, 1, 10000, 1e-300, rng, opts));
  return {std::abs(base + 1.0) <= 0.2 && std::abs(acc + 2.0) <= 0.3,
          fmt("base slope %.3f (target -1 +- 0.2), accelerated slope %.3f (target -2 +- 0.3)", base, acc)};
}

// ---------------------------------------------------------------------------

Outcome minibatch_speedup() {
  harness::SweepConfig cfg = harness::preset("desk-linreg");
  cfg.name = "speedup";
  cfg.problem.N = 500;
  cfg.problem.n = 20;
  cfg.problem.noise = NoiseSpec::gaussian(0.5);
  cfg.methods = {harness::method_spec("pma")};
  cfg.ms = {1, 4, 8, 16};
  cfg.seeds = 10;
  cfg.epsilon = 1e-2;
  cfg.budget = 200000;
  const harness::SweepResult res = harness::execute_sweep(cfg);
  const auto table = speedup_table(harness::speedup_samples(res, "pma", false, harness::TimeUnit::Iterations));
  bool pass = true;
  std::string detail;
  for (Index m : {4, 8, 16}) {
    const double s = table.at(m);
    pass = pass && s >= 0.5 * static_cast<double>(m);
    detail += fmt("m=%ld speedup %.2f (need %.1f); ", static_cast<long>(m), s, 0.5 * static_cast<double>(m));
  }
  return {pass, detail};
}

// ---------------------------------------------------------------------------

Outcome interpolation_rate() {
  ProblemParams p;
  p.kind = LossKind::HalfspaceIntersection;
  p.N = 100;
  p.n = 20;
  p.seed = 8;
  const ProblemInstance inst = generate_problem(p);
  RunOptions opts;
  opts.snapshot_stride = 1;
  opts.f_star = -1.0;
  opts.x0 = Vector::Constant(p.n, 10.0);
  Rng rng = make_rng(0);
  const RunRecord rec = run_base(inst, BatchStrategy::pma(), StepSchedule::poly(kInf), 8, 1000, 1e-300, rng, opts);
  std::vector<Index> ks;
  std::vector<double> dists;
  std::optional<Index> reached;
  for (const auto& [k, x] : rec.snapshots) {
    const double d = inst.distance_to_solution(x);
    if (!reached && d <= 1e-6) reached = k;
    if (reached) break;
    ks.push_back(k);
    dists.push_back(d);
  }
  const LinearFit fit = geometric_rate_fit(ks, dists);
  return {reached.has_value() && fit.r2 >= 0.95,
          fmt("distance <= 1e-6 at k=%ld; log-distance fit R^2 %.3f, per-step factor %.3f",
              reached ? static_cast<long>(*reached) : -1L, fit.r2, std::exp(fit.slope))};
}

// ---------------------------------------------------------------------------

Outcome one_shot_prox() {
  ProblemParams p;
  p.N = 200;
  p.n = 5;
  p.seed = 9;
  const ProblemInstance inst = generate_problem(p);
  Index worst = 0;
  double worst_gap = 0.0;
  bool pass = true;
  for (int seed = 0; seed < 10; ++seed) {
    RunOptions opts;
    opts.f_star = 0.0;
    Rng rng = make_rng(static_cast<std::uint64_t>(seed));
    const RunRecord rec = run_base(inst, BatchStrategy::prox(), StepSchedule::poly(100.0), 20, 3, 1e-8, rng, opts);
    pass = pass && rec.status == RunStatus::Converged;
    worst_gap = std::max(worst_gap, rec.gaps.empty() ? 0.0 : rec.gaps.back());
    if (rec.converged_k) worst = std::max(worst, *rec.converged_k);
  }
  return {pass, fmt("m=20 >= n=5, alpha0=100: worst iterations to gap <= 1e-8 is %ld, worst final gap %.2e",
                    static_cast<long>(worst), worst_gap)};
}

// ---------------------------------------------------------------------------

Outcome orthcol_lab() {
  const harness::OrthColReport rep = harness::orthcol_lab(32, 4, 1.0, 500, 10, 2024);
  const double err = rep.max_relative_error(10);
  const auto& last = rep.rounds.back();
  return {err <= 0.05, fmt("max relative error over k <= 10: %.3f (limit 0.05); k=%ld risk %.4f vs %.4f",
                           err, static_cast<long>(last.k), last.empirical_risk, last.closed_form)};
}

// ---------------------------------------------------------------------------

Outcome stepsize_robustness() {
  const harness::SweepConfig cfg = harness::preset("desk-absreg");
  const harness::SweepResult res = harness::execute_sweep(cfg);
  const ProfileResult prof = performance_profile(harness::profile_input(res, false));
  std::map<std::string, double> at2;
  for (const auto& c : prof.curves) at2[c.method] = c.value_at(2.0);

  const double largest = *std::max_element(cfg.alpha0s.begin(), cfg.alpha0s.end());
  std::map<std::string, Index> failed;
  for (const auto& r : res.rows) {
    if (r.alpha0 == largest && r.status != RunStatus::Converged) ++failed[r.method];
  }
  const bool order = at2["pma"] > at2["sgm"] && at2["pam"] > at2["sgm"] && at2["prox"] > at2["sgm"];
  const bool robust = failed["sgm"] >= 1 && failed["pma"] == 0 && failed["pam"] == 0;
  return {order && robust,
          fmt("profile at r=2: sgm %.2f, pma %.2f, pam %.2f, prox %.2f, pia %.2f; failed cells at alpha0=%.0f: "
              "sgm %ld, pma %ld, pam %ld",
              at2["sgm"], at2["pma"], at2["pam"], at2["prox"], at2["pia"], largest, static_cast<long>(failed["sgm"]),
              static_cast<long>(failed["pma"]), static_cast<long>(failed["pam"]))};
}

// ---------------------------------------------------------------------------

Outcome growth_estimator() {
  bool pass = true;
  std::string detail;
  for (double gamma : {0.0, 1.0}) {
    const double bound = 1.0 / (std::pow(2.0, 2.0 - gamma) * (1.0 + gamma) * 10.0);
    int ok = 0;
    std::vector<double> lams;
    for (int seed = 0; seed < 20; ++seed) {
      ProblemParams p;
      p.kind = LossKind::PowerReg;
      p.N = 1000;
      p.n = 10;
      p.gamma = gamma;
      p.seed = 500 + static_cast<std::uint64_t>(seed);
      const ProblemInstance inst = generate_problem(p);
      Rng rng = make_rng(static_cast<std::uint64_t>(seed));
      const GrowthEstimate est = estimate_gamma_growth(inst, gamma, kInf, GrowthOptions{}, rng);
      lams.push_back(est.lambda1);
      ok += est.lambda1 >= bound;
    }
    pass = pass && ok >= 18;
    detail += fmt("gamma=%.0f: %d/20 seeds >= %.4f (median lambda1 %.4f); ", gamma, ok, bound, median(lams));
  }
  return {pass, detail};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"prox oracle equivalence", prox_oracle},
      {"box QP correctness", box_qp},
      {"model conditions", model_conditions},
      {"three-point inequality and non-expansiveness", three_point_trajectories},
      {"minibatch rate bound", theorem1_bound},
      {"rate exponents", rate_exponents},
      {"minibatch speedup", minibatch_speedup},
      {"interpolation linear convergence", interpolation_rate},
      {"full-prox one-shot", one_shot_prox},
      {"lower-bound lab closed form", orthcol_lab},
      {"stepsize robustness ordering", stepsize_robustness},
      {"growth estimator", growth_estimator},
  };
  int failed = 0, idx = 0;
  for (const Criterion& c : criteria) {
    ++idx;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << idx << ". " << c.name << " [" << fmt("%.1fs", secs) << "] "
              << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
