#include "aprox/optimizers.hpp"

#include <cmath>
#include <stdexcept>

namespace aprox {

StepSchedule StepSchedule::poly(double alpha0, double beta) {
  StepSchedule s;
  s.kind = Kind::PolyDecay;
  s.alpha0 = alpha0;
  s.beta = beta;
  s.validate();
  return s;
}

StepSchedule StepSchedule::smoothness_adaptive(double L, double eta0, double power) {
  StepSchedule s;
  s.kind = Kind::SmoothnessAdaptive;
  s.L = L;
  s.eta0 = eta0;
  s.power = power;
  s.validate();
  return s;
}

void StepSchedule::validate() const {
  if (kind == Kind::PolyDecay) {
    if (!(alpha0 > 0.0)) throw std::invalid_argument("StepSchedule: alpha0 must be positive");
    if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("StepSchedule: beta must lie in [0, 1]");
  } else {
    if (!(L >= 0.0) || !std::isfinite(L)) throw std::invalid_argument("StepSchedule: L must be finite and >= 0");
    if (!(eta0 >= 0.0)) throw std::invalid_argument("StepSchedule: eta0 must be >= 0");
    if (power != 0.0 && power != 0.5) throw std::invalid_argument("StepSchedule: power must be 0 or 1/2");
    if (L == 0.0 && eta0 == 0.0) throw std::invalid_argument("StepSchedule: L and eta0 cannot both vanish");
  }
}

double StepSchedule::base_step(Index k) const {
  const double kk = static_cast<double>(std::max<Index>(k, 1));
  if (kind == Kind::PolyDecay) {
    return std::isinf(alpha0) ? alpha0 : alpha0 * std::pow(kk, -beta);
  }
  return 1.0 / (L + eta0 * std::pow(kk, power));
}

double StepSchedule::accel_step(Index k, double theta, bool theta_scaled) const {
  const double kk = static_cast<double>(k) + 1.0;
  if (kind == Kind::PolyDecay) {
    return std::isinf(alpha0) ? alpha0 : alpha0 * std::pow(kk, -beta);
  }
  const double smooth = theta_scaled ? L * theta : L;
  return 1.0 / (smooth + eta0 * std::pow(kk, power));
}

ThetaSchedule::ThetaSchedule() {
  // (1 - theta_k) / theta_k^2 <= 1 / theta_{k-1}^2, checked once per process.
  static const bool verified = [this] {
    for (Index k = 1; k <= 1000000; ++k) {
      const double t = (*this)(k);
      const double tp = (*this)(k - 1);
      if ((1.0 - t) / (t * t) > 1.0 / (tp * tp) * (1.0 + 1e-12)) return false;
    }
    return true;
  }();
  if (!verified) throw std::logic_error("ThetaSchedule: recursion inequality fails");
}

Regularizer Regularizer::squared_l2(double mu) {
  if (!(mu >= 0.0)) throw std::invalid_argument("Regularizer: mu must be nonnegative");
  return {Kind::SquaredL2, mu};
}

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "converged";
    case RunStatus::Budget: return "budget";
    case RunStatus::Diverged: return "diverged";
    case RunStatus::InnerFail: return "innerfail";
  }
  return "budget";
}

RunStatus run_status_from_string(std::string_view s) {
  for (RunStatus r : {RunStatus::Converged, RunStatus::Budget, RunStatus::Diverged, RunStatus::InnerFail}) {
    if (to_string(r) == s) return r;
  }
  throw std::invalid_argument("unknown run status '" + std::string(s) + "'");
}

double regularized_optimum(const ProblemInstance& inst, const Regularizer& reg) {
  if (reg.kind == Regularizer::Kind::Zero || reg.mu == 0.0) return inst.optimum().f_star;
  if (inst.kind() != LossKind::LinReg || inst.domain().kind != DomainKind::AllSpace) {
    throw std::invalid_argument("regularized_optimum: squared-l2 reference available for unconstrained linreg only");
  }
  const double N = static_cast<double>(inst.sample_count());
  Matrix H = inst.A().transpose() * inst.A() / N;
  H.diagonal().array() += reg.mu;
  const Vector x = H.llt().solve(inst.A().transpose() * inst.b() / N);
  return inst.objective(x) + reg.value(x);
}

namespace {

Vector default_start(const ProblemInstance& inst, const RunOptions& opts) {
  const Index n = inst.dimension();
  Vector x = opts.x0.value_or(Vector::Zero(n));
  if (x.size() != n) throw std::invalid_argument("run: x0 has the wrong dimension");
  if (!opts.x0 && opts.domain.kind == DomainKind::Simplex) x = Vector::Constant(n, 1.0 / static_cast<double>(n));
  if (!in_domain(opts.domain, x)) x = project_domain(opts.domain, x);
  return x;
}

RunRecord run_loop(const ProblemInstance& inst, BatchStrategy strategy, const StepSchedule& schedule, Index m,
                   Index K, double epsilon, Rng& rng, const RunOptions& opts, bool accelerated) {
  schedule.validate();
  if (K < 1) throw std::invalid_argument("run: iteration budget K must be at least 1");
  if (m < 1) throw std::invalid_argument("run: batch size m must be at least 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("run: epsilon must be positive");
  if (opts.record_stride < 1) throw std::invalid_argument("run: record stride must be at least 1");
  if (opts.geometry) validate_pairing(*opts.geometry, opts.domain);
  const bool regularized = opts.regularizer.kind == Regularizer::Kind::SquaredL2 && opts.regularizer.mu > 0.0;
  if (regularized && opts.geometry && opts.geometry->kind != DgfKind::EuclideanHalfSq) {
    throw std::invalid_argument("run: the squared-l2 regularizer is folded in for Euclidean geometry only");
  }

  const ThetaSchedule theta_of;
  const double f_opt = opts.f_star.value_or(regularized_optimum(inst, opts.regularizer));
  auto gap = [&](const Vector& x) { return inst.objective(x) + opts.regularizer.value(x) - f_opt; };

  RunRecord rec;
  rec.m = opts.full_batch ? inst.sample_count() : m;
  rec.config = {{"method", strategy.name()},
                {"accelerated", accelerated},
                {"m", rec.m},
                {"K", K},
                {"schedule", schedule.kind == StepSchedule::Kind::PolyDecay ? "poly" : "adaptive"},
                {"alpha0", schedule.alpha0},
                {"beta", schedule.beta},
                {"L", schedule.L},
                {"eta0", schedule.eta0},
                {"problem", inst.describe()}};

  Vector x = default_start(inst, opts);
  Vector z = x;
  Vector avg = Vector::Zero(x.size());
  rec.initial_gap = gap(x);
  if (rec.initial_gap <= epsilon) {
    rec.status = RunStatus::Converged;
    rec.converged_k = 0;
    rec.x_final = x;
    rec.x_average = x;
    return rec;
  }
  const double blowup = opts.divergence_factor * std::max(rec.initial_gap, epsilon);

  ProxOptions popts;
  popts.geometry = opts.geometry;
  popts.domain = opts.domain;
  popts.tol = opts.inner_tol;
  popts.max_inner = opts.max_inner;
  const Batch everything = full_batch(inst);

  rec.status = RunStatus::Budget;
  for (Index k = 0; k < K; ++k) {
    const Batch batch = opts.full_batch ? everything : sample_batch(inst, m, rng);
    const double theta = accelerated ? theta_of(k) : 1.0;
    const Vector y = accelerated ? Vector((1.0 - theta) * x + theta * z) : x;
    const Vector& center = accelerated ? z : x;
    double alpha = accelerated ? schedule.accel_step(k, theta, opts.theta_scaled) : schedule.base_step(k + 1);

    const BatchModel model = build_batch_model(inst, y, batch, strategy);

    Vector shifted = center;
    if (regularized) {
      // model + (mu/2)|x|^2 + |x - c|^2/(2a) = model + |x - c/(1 + a mu)|^2 (1 + a mu)/(2a) + const.
      const double mu = opts.regularizer.mu;
      if (std::isinf(alpha)) {
        shifted.setZero();
        alpha = 1.0 / mu;
      } else {
        shifted = center / (1.0 + alpha * mu);
        alpha = alpha / (1.0 + alpha * mu);
      }
    }

    ProxResult<double> prox;
    bool ok = true;
    try {
      prox = model_prox(model, shifted, alpha, popts);
      if (!prox.converged) {
        ProxOptions retry = popts;
        retry.max_inner *= 10;
        prox = model_prox(model, shifted, alpha, retry);
        ok = prox.converged;
      }
    } catch (const std::domain_error&) {
      ok = false;
    }
    if (!ok) {
      rec.status = RunStatus::InnerFail;
      break;
    }

    Vector x_next = accelerated ? Vector((1.0 - theta) * x + theta * prox.x_next) : prox.x_next;
    if (opts.observer) {
      StepInfo info;
      info.k = k;
      info.x = &x;
      info.center = &center;
      info.anchor = &y;
      info.z = accelerated ? &z : nullptr;
      info.x_next = &x_next;
      info.prox_out = &prox.x_next;
      info.alpha = alpha;
      info.theta = theta;
      info.model = &model;
      info.prox = &prox;
      opts.observer(info);
    }
    if (accelerated) z = prox.x_next;
    x = std::move(x_next);
    avg += (x - avg) / static_cast<double>(k + 1);

    const Index produced = k + 1;
    if (opts.snapshot_stride > 0 && produced % opts.snapshot_stride == 0) rec.snapshots.emplace_back(produced, x);
    if (!x.allFinite()) {
      rec.status = RunStatus::Diverged;
      break;
    }
    if (produced % opts.record_stride == 0 || produced == K) {
      const double g = gap(x);
      rec.iterations.push_back(produced);
      rec.gaps.push_back(g);
      rec.samples.push_back(produced * rec.m);
      if (opts.track_average) rec.average_gaps.push_back(gap(avg));
      if (!std::isfinite(g) || g > blowup) {
        rec.status = RunStatus::Diverged;
        break;
      }
      if (g <= epsilon) {
        rec.status = RunStatus::Converged;
        rec.converged_k = produced;
        break;
      }
    }
  }
  rec.x_final = x;
  rec.x_average = avg;
  return rec;
}

}  // namespace

RunRecord run_base(const ProblemInstance& inst, BatchStrategy strategy, const StepSchedule& schedule, Index m,
                   Index K, double epsilon, Rng& rng, const RunOptions& opts) {
  return run_loop(inst, strategy, schedule, m, K, epsilon, rng, opts, false);
}

RunRecord run_pia(const ProblemInstance& inst, ModelKind per_sample, const StepSchedule& schedule, Index m, Index K,
                  double epsilon, Rng& rng, const RunOptions& opts) {
  return run_loop(inst, BatchStrategy::pia(per_sample), schedule, m, K, epsilon, rng, opts, false);
}

RunRecord run_accelerated(const ProblemInstance& inst, BatchStrategy strategy, const StepSchedule& schedule,
                          Index m, Index K, double epsilon, Rng& rng, const RunOptions& opts) {
  return run_loop(inst, strategy, schedule, m, K, epsilon, rng, opts, true);
}

std::optional<Index> iterations_to_epsilon(const RunRecord& record, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("iterations_to_epsilon: epsilon must be positive");
  if (record.initial_gap <= epsilon && record.converged_k == Index{0}) return Index{0};
  for (std::size_t j = 0; j < record.gaps.size(); ++j) {
    if (record.gaps[j] <= epsilon) return record.iterations[j];
  }
  return std::nullopt;
}

std::optional<Index> time_to_epsilon(const RunRecord& record, double epsilon) {
  const auto k = iterations_to_epsilon(record, epsilon);
  if (!k) return std::nullopt;
  return *k * record.m;
}

}  // namespace aprox
