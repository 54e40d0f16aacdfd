#include "aprox/prox.hpp"

#include <stdexcept>

namespace aprox {

namespace {

void require_euclidean_unconstrained(const ProxOptions& opts, const char* what) {
  const bool euclid = !opts.geometry || opts.geometry->kind == DgfKind::EuclideanHalfSq;
  if (!euclid || opts.domain.kind != DomainKind::AllSpace) {
    throw std::invalid_argument(std::string(what) +
                                ": only the Euclidean geometry on the whole space is supported");
  }
}

void require_finite(double alpha, const char* what) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument(std::string(what) + ": stepsize must be positive and finite");
  }
}

ProxResult<double> flat_result(const Vector& center) {
  ProxResult<double> out;
  out.x_next = center;
  return out;
}

// Truncated step that treats a flat model (zero gradient) as already minimized
// at the center instead of failing: the model is constant there.
Vector safe_truncated_step(const Vector& center, double value, const Vector& g, double lower, double alpha) {
  if (g.squaredNorm() == 0.0) return center;
  return truncated_step(center, value, g, lower, alpha);
}

// Two-point family: minimize w |x - R|^{1+gamma} / (1+gamma) + (x - c)^2 / (2 alpha)
// by bisection on the monotone derivative.
double two_point_prox(double center, double target, double w, double gamma, double alpha) {
  if (w == 0.0 || center == target) return center;
  auto deriv = [&](double x) {
    const double r = x - target;
    const double s = r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0);
    return w * s * (gamma == 0.0 ? 1.0 : std::pow(std::abs(r), gamma)) + (x - center) / alpha;
  };
  double lo = std::min(center, target);
  double hi = std::max(center, target);
  for (int it = 0; it < 200 && hi > lo; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (deriv(mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  // Pick the better endpoint of the final bracket.
  auto phi = [&](double x) {
    return w * std::pow(std::abs(x - target), 1.0 + gamma) / (1.0 + gamma) + 0.5 * (x - center) * (x - center) / alpha;
  };
  return phi(lo) <= phi(hi) ? lo : hi;
}

// Exact prox of the batch average of the true losses.
ProxResult<double> full_prox(const ProblemInstance& inst, const std::vector<Index>& rows, const Vector& center,
                             double alpha, const ProxOptions& opts) {
  require_finite(alpha, "full prox");
  const Index m = static_cast<Index>(rows.size());
  if (inst.kind() == LossKind::TwoPoint) {
    Index informative = 0;
    for (Index i : rows) informative += (i == 1);
    const double w = static_cast<double>(informative) / static_cast<double>(m);
    Vector x(1);
    x(0) = two_point_prox(center(0), inst.b()(1), w, inst.params().gamma, alpha);
    ProxResult<double> out;
    out.x_next = x;
    return out;
  }
  Matrix A(m, inst.dimension());
  Vector b(m);
  for (Index j = 0; j < m; ++j) {
    A.row(j) = inst.A().row(rows[static_cast<std::size_t>(j)]);
    b(j) = inst.b()(rows[static_cast<std::size_t>(j)]);
  }
  const double gamma = inst.params().gamma;
  switch (inst.kind()) {
    case LossKind::LinReg: {
      ProxResult<double> out;
      out.x_next = prox_step_linreg(center, A, b, alpha);
      return out;
    }
    case LossKind::AbsReg:
      return prox_step_absreg(center, A, b, alpha, opts.tol, std::nullopt, opts.max_inner);
    case LossKind::Logistic:
      return prox_step_logistic(center, A, b, alpha, opts.tol);
    case LossKind::HalfspaceIntersection: {
      // max{<a_i, x> - b_i, 0} is its own truncated model, so the PAM dual is exact.
      const Vector v = A * center - b;
      return pam_step(center, Matrix(A.transpose()), v, alpha, opts.tol, opts.max_inner);
    }
    case LossKind::PowerReg:
      if (gamma == 1.0) {
        ProxResult<double> out;
        out.x_next = prox_step_linreg(center, A, b, alpha);
        return out;
      }
      if (gamma == 0.0) {
        return prox_step_absreg(center, A, b, alpha, opts.tol, 1.0 / static_cast<double>(m), opts.max_inner);
      }
      throw std::invalid_argument("full prox: power regression supports gamma in {0, 1} only");
    case LossKind::TwoPoint:
      break;
  }
  throw std::logic_error("full prox: unhandled problem kind");
}

}  // namespace

ProxResult<double> model_prox(const BatchModel& model, const Vector& center, double alpha, const ProxOptions& opts) {
  if (center.size() != model.anchor.size()) throw std::invalid_argument("model_prox: dimension mismatch");
  if (!(alpha > 0.0)) throw std::invalid_argument("model_prox: stepsize must be positive");
  const BatchStrategy s = model.strategy.normalized();
  const Vector shift = center - model.anchor;
  const DistanceGenerator h = opts.geometry.value_or(DistanceGenerator::euclidean(center.size()));

  switch (s.scheme) {
    case StrategyScheme::ModelOfAverage:
      if (s.model == ModelKind::Linear) {
        require_finite(alpha, "linear step");
        ProxResult<double> out;
        out.x_next = linear_step(h, opts.domain, center, model.gbar, alpha);
        return out;
      }
      require_euclidean_unconstrained(opts, "full prox");
      return full_prox(*model.inst, model.batch.indices, center, alpha, opts);

    case StrategyScheme::TruncatedAverage: {
      require_euclidean_unconstrained(opts, "truncated step");
      const double value = model.anchor_value + model.gbar.dot(shift);
      if (model.gbar.squaredNorm() == 0.0) return flat_result(center);
      ProxResult<double> out;
      out.x_next = truncated_step(center, value, model.gbar, model.lower_bound, alpha);
      return out;
    }

    case StrategyScheme::AverageOfTruncated: {
      require_euclidean_unconstrained(opts, "averaged truncated step");
      require_finite(alpha, "averaged truncated step");
      const Vector v = model.values + model.G.transpose() * shift - model.infima;
      return pam_step(center, model.G, v, alpha, opts.tol, opts.max_inner);
    }

    case StrategyScheme::IterateAverage: {
      const Index m = model.batch_size();
      Vector sum = Vector::Zero(center.size());
      ProxResult<double> out;
      for (Index j = 0; j < m; ++j) {
        const Vector g = model.G.col(j);
        switch (s.model) {
          case ModelKind::Linear:
            require_finite(alpha, "linear step");
            sum += linear_step(h, opts.domain, center, g, alpha);
            break;
          case ModelKind::Truncated: {
            require_euclidean_unconstrained(opts, "truncated step");
            const double value = model.values(j) + g.dot(shift);
            sum += safe_truncated_step(center, value, g, model.infima(j), alpha);
            break;
          }
          case ModelKind::FullProx: {
            require_euclidean_unconstrained(opts, "full prox");
            const auto r = full_prox(*model.inst, {model.batch.indices[static_cast<std::size_t>(j)]}, center,
                                     alpha, opts);
            sum += r.x_next;
            out.inner_iterations += r.inner_iterations;
            out.duality_gap = std::max(out.duality_gap, r.duality_gap);
            out.converged = out.converged && r.converged;
            break;
          }
        }
      }
      out.x_next = sum / static_cast<double>(m);
      return out;
    }
  }
  throw std::logic_error("model_prox: unhandled strategy");
}

}  // namespace aprox
