#pragma once

// Synthetic stochastic problem instances: per-sample losses F(x; s_i) over a
// finite (or two-point) sample space, with reference optima.

#include "aprox/geometry.hpp"
#include "aprox/rng.hpp"
#include "aprox/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace aprox {

enum class LossKind { LinReg, AbsReg, Logistic, HalfspaceIntersection, PowerReg, TwoPoint };

std::string_view to_string(LossKind kind);
LossKind loss_kind_from_string(std::string_view name);

enum class NoiseKind { None, GaussianResidual, LaplaceResidual, LabelFlip };

struct NoiseSpec {
  NoiseKind kind = NoiseKind::None;
  double level = 0.0;  // sigma for residual noise, flip probability for labels

  static NoiseSpec none() { return {}; }
  static NoiseSpec gaussian(double sigma) { return {NoiseKind::GaussianResidual, sigma}; }
  static NoiseSpec laplace(double sigma) { return {NoiseKind::LaplaceResidual, sigma}; }
  static NoiseSpec label_flip(double p) { return {NoiseKind::LabelFlip, p}; }

  bool is_zero() const { return kind == NoiseKind::None || level == 0.0; }
};

struct ProblemParams {
  LossKind kind = LossKind::LinReg;
  Index N = 1000;
  Index n = 40;
  NoiseSpec noise;
  double cond = 1.0;     // target singular-value ratio of A; 1 leaves A as drawn
  double gamma = 0.0;    // PowerReg / TwoPoint exponent
  double delta = 0.1;    // TwoPoint probability of the informative sample
  double radius = 1.0;   // TwoPoint optimum magnitude R
  int sign = 1;          // TwoPoint optimum sign v
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
  static ProblemParams from_json(const nlohmann::json& j);
};

enum class OptimumMethod { ClosedForm, HighAccuracySolve };

struct OptimumInfo {
  double f_star = 0.0;
  std::optional<Vector> x_star;
  OptimumMethod method = OptimumMethod::ClosedForm;
  double tolerance = 0.0;
  bool converged = true;
};

struct LossEval {
  double value = 0.0;
  Vector subgradient;
  double inf_value = 0.0;
};

struct Batch {
  std::vector<Index> indices;
  Index size() const { return static_cast<Index>(indices.size()); }
};

class ProblemInstance {
 public:
  ProblemInstance(ProblemParams params, Matrix A, Vector b, Vector x_planted, Domain domain);

  LossKind kind() const { return params_.kind; }
  const ProblemParams& params() const { return params_; }
  Index dimension() const { return A_.cols(); }
  Index sample_count() const { return A_.rows(); }
  const Matrix& A() const { return A_; }
  const Vector& b() const { return b_; }
  const Vector& x_planted() const { return x_planted_; }
  const Domain& domain() const { return domain_; }
  /// Probability of each sample index; uniform except for TwoPoint.
  const Vector& weights() const { return weights_; }

  /// True when a single point minimizes every per-sample loss.
  bool is_interpolation() const;

  LossEval loss(const Vector& x, Index i) const;
  double loss_value(const Vector& x, Index i) const;
  double loss_infimum(Index i) const;

  /// f(x) = sum_i w_i F(x; s_i).
  double objective(const Vector& x) const;
  /// An element of the subdifferential of f at x.
  Vector objective_subgradient(const Vector& x) const;

  Index sample_index(Rng& rng) const;

  /// Cached reference optimum; computed on first use.
  const OptimumInfo& optimum() const;

  /// Distance from x to the optimal set. Uses the halfspace polytope for
  /// HalfspaceIntersection and ||x - x*|| otherwise.
  double distance_to_solution(const Vector& x) const;

  /// Smoothness constant of f when one exists (LinReg, Logistic, PowerReg with gamma = 1).
  std::optional<double> smoothness() const;

  nlohmann::json describe() const;

 private:
  struct Cache;
  ProblemParams params_;
  Matrix A_;
  Vector b_;
  Vector x_planted_;
  Domain domain_;
  Vector weights_;
  std::shared_ptr<Cache> cache_;
};

ProblemInstance generate_problem(const ProblemParams& params);

Batch sample_batch(const ProblemInstance& inst, Index m, Rng& rng);
/// Indices 0..N-1 in order.
Batch full_batch(const ProblemInstance& inst);

LossEval loss_eval(const ProblemInstance& inst, const Vector& x, Index i);
double objective_value(const ProblemInstance& inst, const Vector& x);
OptimumInfo reference_optimum(const ProblemInstance& inst);

/// Average loss over the batch.
double batch_objective(const ProblemInstance& inst, const Vector& x, const Batch& batch);

/// Projection of y onto {x : A x <= b} for unit-norm rows, via the nonnegative
/// dual QP. Used for distances to halfspace intersections.
Vector project_polyhedron(const Matrix& A, const Vector& b, const Vector& y, double tol = 1e-12);

/// Random-orthogonal-column regression: each observation reveals
/// A x* with A = sqrt(n/m) [u_{i(1)} ... u_{i(m)}]^T for m distinct columns.
class OrthColRegression {
 public:
  OrthColRegression(Index n, Index m, double R, std::uint64_t seed, bool identity_basis = false);

  Index dimension() const { return U_.rows(); }
  Index batch() const { return m_; }
  double radius() const { return R_; }
  const Matrix& basis() const { return U_; }

  struct Observation {
    std::vector<Index> columns;
    Matrix A;  // m x n
    Vector b;  // m
  };

  Vector draw_optimum(Rng& rng) const;
  Observation observe(const Vector& x_star, Rng& rng) const;

 private:
  Matrix U_;
  Index m_;
  double R_;
};

OrthColRegression make_orthcol_regression(Index n, Index m, double R, std::uint64_t seed,
                                          bool identity_basis = false);

}  // namespace aprox
