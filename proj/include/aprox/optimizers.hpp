#pragma once

// Outer loops: the base model-based iteration, iterate averaging, and the
// accelerated three-term iteration, with stepsize schedules and run records.

#include "aprox/models.hpp"
#include "aprox/prox.hpp"

#include <json.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace aprox {

struct StepSchedule {
  enum class Kind { PolyDecay, SmoothnessAdaptive };
  Kind kind = Kind::PolyDecay;
  double alpha0 = 1.0;
  double beta = 0.5;
  double L = 0.0;
  double eta0 = 0.0;
  double power = 0.5;

  /// alpha_k = alpha0 k^{-beta}.
  static StepSchedule poly(double alpha0, double beta = 0.5);
  /// alpha_k = 1 / (L + eta0 k^power) (base) or 1 / (L theta_k + eta0 (k+1)^power) (accelerated).
  static StepSchedule smoothness_adaptive(double L, double eta0, double power = 0.5);

  void validate() const;

  /// Stepsize for base iteration k >= 1.
  double base_step(Index k) const;
  /// Stepsize for accelerated iteration k >= 0 with weight theta. When
  /// `theta_scaled` is false the smoothness term uses L instead of L theta.
  double accel_step(Index k, double theta, bool theta_scaled = true) const;
};

/// theta_k = 2 / (k + 2).
struct ThetaSchedule {
  ThetaSchedule();
  double operator()(Index k) const { return 2.0 / (static_cast<double>(k) + 2.0); }
};

struct Regularizer {
  enum class Kind { Zero, SquaredL2 };
  Kind kind = Kind::Zero;
  double mu = 0.0;

  static Regularizer zero() { return {}; }
  static Regularizer squared_l2(double mu);

  double value(const Vector& x) const { return kind == Kind::Zero ? 0.0 : 0.5 * mu * x.squaredNorm(); }
};

enum class RunStatus { Converged, Budget, Diverged, InnerFail };

std::string_view to_string(RunStatus s);
RunStatus run_status_from_string(std::string_view s);

struct RunRecord {
  std::vector<Index> iterations;      // recorded k (>= 1)
  std::vector<double> gaps;           // f(x_k) + r(x_k) - optimum
  std::vector<double> average_gaps;   // same at the running average of x_1..x_k, if tracked
  std::vector<Index> samples;         // k m
  std::vector<std::pair<Index, Vector>> snapshots;
  RunStatus status = RunStatus::Budget;
  std::optional<Index> converged_k;
  double initial_gap = 0.0;
  Vector x_final;
  Vector x_average;
  Index m = 1;
  nlohmann::json config;
};

struct StepInfo {
  Index k = 0;              // iteration producing x_{k+1}
  const Vector* x = nullptr;       // x_k
  const Vector* center = nullptr;  // prox center: x_k (base) or z_k (accelerated)
  const Vector* anchor = nullptr;  // model anchor: x_k (base) or y_k (accelerated)
  const Vector* z = nullptr;       // accelerated only
  const Vector* x_next = nullptr;
  const Vector* prox_out = nullptr;  // z_{k+1} for accelerated runs, else x_{k+1}
  double alpha = 0.0;        // effective stepsize after folding in the regularizer
  double theta = 1.0;
  const BatchModel* model = nullptr;
  const ProxResult<double>* prox = nullptr;
};

struct RunOptions {
  std::optional<Vector> x0;  // zero when unset
  Index record_stride = 1;
  std::optional<DistanceGenerator> geometry;
  Domain domain = Domain::all_space();
  double inner_tol = kDefaultInnerTol;
  Index max_inner = 200000;
  bool full_batch = false;  // every iteration uses all N samples in order
  bool track_average = false;
  Index snapshot_stride = 0;
  double divergence_factor = 1e8;
  Regularizer regularizer;
  bool theta_scaled = true;  // accelerated: 1/(L theta + eta) rather than 1/(L + eta)
  std::optional<double> f_star;  // overrides the instance reference optimum
  std::function<void(const StepInfo&)> observer;
};

/// Stops once a recorded gap is <= epsilon (absolute), after K iterations, or
/// on divergence.
RunRecord run_base(const ProblemInstance& inst, BatchStrategy strategy, const StepSchedule& schedule, Index m,
                   Index K, double epsilon, Rng& rng, const RunOptions& opts = {});

/// Iterate averaging: m single-sample steps from the same point, averaged.
RunRecord run_pia(const ProblemInstance& inst, ModelKind per_sample, const StepSchedule& schedule, Index m, Index K,
                  double epsilon, Rng& rng, const RunOptions& opts = {});

RunRecord run_accelerated(const ProblemInstance& inst, BatchStrategy strategy, const StepSchedule& schedule,
                          Index m, Index K, double epsilon, Rng& rng, const RunOptions& opts = {});

/// Samples k m at the first recorded k with gap <= epsilon; 0 when the start
/// point already qualifies.
std::optional<Index> time_to_epsilon(const RunRecord& record, double epsilon);
std::optional<Index> iterations_to_epsilon(const RunRecord& record, double epsilon);

/// Optimal value of f + r. Uses the instance reference when r = 0.
double regularized_optimum(const ProblemInstance& inst, const Regularizer& reg);

}  // namespace aprox
