#pragma once

// Batch models F_x(.; S^{1:m}) built from sampled losses, and checks of the
// model conditions (convexity, lower model with exact anchor value, bounded
// below by the sample infimum).

#include "aprox/problems.hpp"
#include "aprox/rng.hpp"
#include "aprox/types.hpp"

#include <string>

namespace aprox {

enum class ModelKind { Linear, Truncated, FullProx };

enum class StrategyScheme { IterateAverage, TruncatedAverage, AverageOfTruncated, ModelOfAverage };

struct BatchStrategy {
  StrategyScheme scheme = StrategyScheme::ModelOfAverage;
  ModelKind model = ModelKind::Linear;  // used by IterateAverage and ModelOfAverage

  static BatchStrategy sgm() { return {StrategyScheme::ModelOfAverage, ModelKind::Linear}; }
  static BatchStrategy prox() { return {StrategyScheme::ModelOfAverage, ModelKind::FullProx}; }
  static BatchStrategy pma() { return {StrategyScheme::TruncatedAverage, ModelKind::Truncated}; }
  static BatchStrategy pam() { return {StrategyScheme::AverageOfTruncated, ModelKind::Truncated}; }
  static BatchStrategy pia(ModelKind per_sample = ModelKind::Truncated) {
    return {StrategyScheme::IterateAverage, per_sample};
  }

  /// A truncated model of the batch average is the truncated-average scheme.
  BatchStrategy normalized() const;
  /// True for schemes whose model is bounded below by the sample infimum.
  bool is_truncated_or_prox() const;
  std::string name() const;
  static BatchStrategy from_name(const std::string& name);

  friend bool operator==(const BatchStrategy&, const BatchStrategy&) = default;
};

/// Immutable after construction. `inst` must outlive the model.
struct BatchModel {
  BatchStrategy strategy;
  const ProblemInstance* inst = nullptr;
  Batch batch;
  Vector anchor;
  double anchor_value = 0.0;  // F-bar(anchor; batch)
  Matrix G;                   // n x m per-sample subgradients at the anchor
  Vector values;              // per-sample losses at the anchor
  Vector infima;              // per-sample infima
  Vector gbar;                // averaged subgradient
  double lower_bound = 0.0;   // Lambda = mean of per-sample infima

  Index batch_size() const { return values.size(); }
};

BatchModel build_batch_model(const ProblemInstance& inst, const Vector& x, const Batch& batch,
                             BatchStrategy strategy);

double evaluate_model(const BatchModel& model, const Vector& y);

struct ModelConditionReport {
  bool c1_ok = true;  // convexity along random segments
  bool c2_ok = true;  // anchor equality and model <= F-bar
  bool c3_ok = true;  // model >= Lambda and Lambda <= F-bar
  bool c3_applicable = false;
  double anchor_error = 0.0;
  double max_model_excess = 0.0;   // max over probes of model - F-bar
  double min_lower_slack = 0.0;    // min over probes of model - Lambda
  double max_convexity_excess = 0.0;
  double worst_violation = 0.0;

  bool all_ok() const { return c1_ok && c2_ok && c3_ok; }
};

struct ModelCheckTolerances {
  double anchor = 1e-12;
  double lower = 1e-9;
};

/// Probes the anchor plus (||x|| + 1) N(0, I) perturbations.
ModelConditionReport check_model_conditions(const ProblemInstance& inst, const BatchModel& model, Index n_probes,
                                            Rng& rng, ModelCheckTolerances tol = {});

}  // namespace aprox
