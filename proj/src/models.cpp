#include "aprox/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aprox {

BatchStrategy BatchStrategy::normalized() const {
  if (scheme == StrategyScheme::ModelOfAverage && model == ModelKind::Truncated) return pma();
  if (scheme == StrategyScheme::TruncatedAverage) return pma();
  if (scheme == StrategyScheme::AverageOfTruncated) return pam();
  return *this;
}

bool BatchStrategy::is_truncated_or_prox() const {
  const BatchStrategy s = normalized();
  switch (s.scheme) {
    case StrategyScheme::TruncatedAverage:
    case StrategyScheme::AverageOfTruncated:
      return true;
    case StrategyScheme::IterateAverage:
    case StrategyScheme::ModelOfAverage:
      return s.model != ModelKind::Linear;
  }
  return false;
}

std::string BatchStrategy::name() const {
  const BatchStrategy s = normalized();
  switch (s.scheme) {
    case StrategyScheme::TruncatedAverage: return "pma";
    case StrategyScheme::AverageOfTruncated: return "pam";
    case StrategyScheme::ModelOfAverage: return s.model == ModelKind::Linear ? "sgm" : "prox";
    case StrategyScheme::IterateAverage:
      switch (s.model) {
        case ModelKind::Linear: return "pia-linear";
        case ModelKind::Truncated: return "pia";
        case ModelKind::FullProx: return "pia-prox";
      }
  }
  return "unknown";
}

BatchStrategy BatchStrategy::from_name(const std::string& name) {
  if (name == "sgm") return sgm();
  if (name == "prox") return prox();
  if (name == "pma") return pma();
  if (name == "pam") return pam();
  if (name == "pia") return pia(ModelKind::Truncated);
  if (name == "pia-linear") return pia(ModelKind::Linear);
  if (name == "pia-prox") return pia(ModelKind::FullProx);
  throw std::invalid_argument("unknown method '" + name + "'");
}

BatchModel build_batch_model(const ProblemInstance& inst, const Vector& x, const Batch& batch,
                             BatchStrategy strategy) {
  if (batch.indices.empty()) throw std::invalid_argument("build_batch_model: empty batch");
  if (x.size() != inst.dimension()) throw std::invalid_argument("build_batch_model: dimension mismatch");
  const Index m = batch.size();
  BatchModel model;
  model.strategy = strategy.normalized();
  model.inst = &inst;
  model.batch = batch;
  model.anchor = x;
  model.G.resize(inst.dimension(), m);
  model.values.resize(m);
  model.infima.resize(m);
  for (Index j = 0; j < m; ++j) {
    LossEval e = inst.loss(x, batch.indices[static_cast<std::size_t>(j)]);
    model.G.col(j) = e.subgradient;
    model.values(j) = e.value;
    model.infima(j) = e.inf_value;
  }
  model.anchor_value = model.values.mean();
  model.gbar = model.G.rowwise().mean();
  model.lower_bound = model.infima.mean();
  return model;
}

double evaluate_model(const BatchModel& model, const Vector& y) {
  if (y.size() != model.anchor.size()) throw std::invalid_argument("evaluate_model: dimension mismatch");
  const Vector d = y - model.anchor;
  auto average_of_truncations = [&] {
    const Vector affine = model.values + model.G.transpose() * d;
    return affine.cwiseMax(model.infima).mean();
  };
  auto full = [&] { return batch_objective(*model.inst, y, model.batch); };
  const BatchStrategy& s = model.strategy;
  switch (s.scheme) {
    case StrategyScheme::TruncatedAverage:
      return std::max(model.anchor_value + model.gbar.dot(d), model.lower_bound);
    case StrategyScheme::AverageOfTruncated:
      return average_of_truncations();
    case StrategyScheme::ModelOfAverage:
    case StrategyScheme::IterateAverage:
      switch (s.model) {
        case ModelKind::Linear: return model.anchor_value + model.gbar.dot(d);
        case ModelKind::Truncated: return average_of_truncations();
        case ModelKind::FullProx: return full();
      }
  }
  return 0.0;
}

ModelConditionReport check_model_conditions(const ProblemInstance& inst, const BatchModel& model, Index n_probes,
                                            Rng& rng, ModelCheckTolerances tol) {
  if (n_probes < 1) throw std::invalid_argument("check_model_conditions: n_probes must be at least 1");
  ModelConditionReport rep;
  rep.c3_applicable = model.strategy.is_truncated_or_prox();

  const Vector& x = model.anchor;
  const Index n = x.size();
  const double spread = x.norm() + 1.0;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto probe = [&] {
    Vector p(n);
    for (Index i = 0; i < n; ++i) p(i) = x(i) + spread * normal(rng);
    return p;
  };
  auto scale = [](double a) { return std::max(1.0, std::abs(a)); };

  const double f_anchor = batch_objective(inst, x, model.batch);
  rep.anchor_error = std::abs(evaluate_model(model, x) - f_anchor);
  if (rep.anchor_error > tol.anchor * scale(f_anchor)) rep.c2_ok = false;
  rep.worst_violation = rep.anchor_error;

  rep.max_model_excess = -infinity();
  rep.min_lower_slack = infinity();
  rep.max_convexity_excess = -infinity();
  const double lambda_bound = model.infima.mean();

  Vector prev = probe();
  double prev_model = evaluate_model(model, prev);
  for (Index p = 0; p < n_probes; ++p) {
    const Vector y = probe();
    const double my = evaluate_model(model, y);
    const double fy = batch_objective(inst, y, model.batch);

    const double excess = my - fy;
    rep.max_model_excess = std::max(rep.max_model_excess, excess);
    if (excess > tol.lower * scale(fy)) rep.c2_ok = false;

    const double slack = my - model.lower_bound;
    rep.min_lower_slack = std::min(rep.min_lower_slack, slack);
    if (rep.c3_applicable) {
      if (slack < -tol.lower * scale(model.lower_bound)) rep.c3_ok = false;
      if (model.lower_bound - fy > tol.lower * scale(fy)) rep.c3_ok = false;
    }

    const double t = unit(rng);
    const Vector mid = t * y + (1.0 - t) * prev;
    const double chord = t * my + (1.0 - t) * prev_model;
    const double conv_excess = evaluate_model(model, mid) - chord;
    rep.max_convexity_excess = std::max(rep.max_convexity_excess, conv_excess);
    if (conv_excess > tol.lower * scale(chord)) rep.c1_ok = false;

    rep.worst_violation = std::max({rep.worst_violation, excess, conv_excess,
                                    rep.c3_applicable ? -slack : 0.0});
    prev = y;
    prev_model = my;
  }
  if (rep.c3_applicable && model.lower_bound > lambda_bound + tol.lower * scale(lambda_bound)) {
    rep.c3_ok = false;
    rep.worst_violation = std::max(rep.worst_violation, model.lower_bound - lambda_bound);
  }
  return rep;
}

}  // namespace aprox
