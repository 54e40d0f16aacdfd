#pragma once

// Prox subproblems argmin_x { model(x) + (1/2 alpha) ||x - x_k||^2 }.
// Dense kernels are templated on the scalar type; model_prox dispatches a
// BatchModel to the right kernel.

#include "aprox/box_qp.hpp"
#include "aprox/geometry.hpp"
#include "aprox/models.hpp"
#include "aprox/types.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace aprox {

template <typename Scalar>
struct ProxResult {
  VectorX<Scalar> x_next;
  std::optional<VectorX<Scalar>> lambda;
  Scalar duality_gap = Scalar(0);
  Index inner_iterations = 0;
  bool converged = true;
};

inline constexpr double kDefaultInnerTol = 1e-9;

/// Mirror step on the linear model.
template <typename DerivedX, typename DerivedG>
VectorX<typename DerivedX::Scalar> linear_step(const DistanceGenerator& h, const Domain& dom,
                                               const Eigen::MatrixBase<DerivedX>& x_k,
                                               const Eigen::MatrixBase<DerivedG>& gbar,
                                               typename DerivedX::Scalar alpha) {
  return mirror_linear_step(h, dom, x_k, gbar, alpha);
}

/// x_k - min{alpha, (F - Lambda)_+ / ||g||^2} g. alpha may be +inf.
template <typename DerivedX, typename DerivedG>
VectorX<typename DerivedX::Scalar> truncated_step(const Eigen::MatrixBase<DerivedX>& x_k,
                                                  typename DerivedX::Scalar value,
                                                  const Eigen::MatrixBase<DerivedG>& gbar,
                                                  typename DerivedX::Scalar lower_bound,
                                                  typename DerivedX::Scalar alpha) {
  using Scalar = typename DerivedX::Scalar;
  if (x_k.size() != gbar.size()) throw std::invalid_argument("truncated_step: dimension mismatch");
  if (!(alpha > Scalar(0))) throw std::invalid_argument("truncated_step: stepsize must be positive");
  const Scalar excess = std::max(value - lower_bound, Scalar(0));
  const Scalar gsq = gbar.squaredNorm();
  if (gsq == Scalar(0)) {
    if (excess > Scalar(0)) throw std::domain_error("truncated_step: zero gradient above the lower bound");
    return x_k;
  }
  const Scalar step = std::min(alpha, excess / gsq);
  return x_k - step * gbar;
}

/// Prox step on (1/m) sum_i max{v_i + <g_i, x - x_k>, 0} with v_i already
/// shifted by the per-sample infima. Dual box QP on [0, 1/m].
template <typename DerivedX, typename DerivedG, typename DerivedV>
ProxResult<typename DerivedX::Scalar> pam_step(const Eigen::MatrixBase<DerivedX>& x_k,
                                               const Eigen::MatrixBase<DerivedG>& G,
                                               const Eigen::MatrixBase<DerivedV>& v,
                                               typename DerivedX::Scalar alpha,
                                               typename DerivedX::Scalar tol = kDefaultInnerTol,
                                               Index max_sweeps = 200000) {
  using Scalar = typename DerivedX::Scalar;
  if (!(alpha > Scalar(0)) || !std::isfinite(static_cast<double>(alpha))) {
    throw std::invalid_argument("pam_step: stepsize must be positive and finite");
  }
  if (G.rows() != x_k.size() || G.cols() != v.size() || v.size() == 0) {
    throw std::invalid_argument("pam_step: dimension mismatch");
  }
  const Index m = v.size();
  auto qp = BoxQP<Scalar>::uniform(G.transpose() * G, v, alpha, Scalar(0), Scalar(1) / Scalar(m));
  BoxQPResult<Scalar> sol = solve_box_qp(qp, tol, max_sweeps);
  ProxResult<Scalar> out;
  out.x_next = x_k - alpha * (G * sol.lambda);
  out.duality_gap = sol.duality_gap;
  out.inner_iterations = sol.sweeps;
  out.converged = sol.converged;
  out.lambda = std::move(sol.lambda);
  return out;
}

/// argmin (c/2) ||A x - b||^2 + (1/2 alpha) ||x - x_k||^2. The default weight
/// c = 1/m gives the batch average of squared residuals / 2.
template <typename DerivedX, typename DerivedA, typename DerivedB>
VectorX<typename DerivedX::Scalar> prox_step_linreg(const Eigen::MatrixBase<DerivedX>& x_k,
                                                    const Eigen::MatrixBase<DerivedA>& A,
                                                    const Eigen::MatrixBase<DerivedB>& b,
                                                    typename DerivedX::Scalar alpha,
                                                    std::optional<typename DerivedX::Scalar> weight = std::nullopt) {
  using Scalar = typename DerivedX::Scalar;
  if (!(alpha > Scalar(0)) || !std::isfinite(static_cast<double>(alpha))) {
    throw std::invalid_argument("prox_step_linreg: stepsize must be positive and finite");
  }
  if (A.cols() != x_k.size() || A.rows() != b.size() || b.size() == 0) {
    throw std::invalid_argument("prox_step_linreg: dimension mismatch");
  }
  const Index m = A.rows();
  const Index n = A.cols();
  const Scalar c = weight.value_or(Scalar(1) / Scalar(m));
  const Scalar t = alpha * c;
  const VectorX<Scalar> r = A * x_k - b;
  if (m < n) {
    // Woodbury: x = x_k - t A^T (I + t A A^T)^{-1} r.
    MatrixX<Scalar> S = t * (A * A.transpose());
    S.diagonal().array() += Scalar(1);
    return x_k - t * (A.transpose() * S.llt().solve(r));
  }
  MatrixX<Scalar> H = t * (A.transpose() * A);
  H.diagonal().array() += Scalar(1);
  return x_k - t * H.llt().solve(A.transpose() * r);
}

/// argmin c ||A x - b||_1 + (1/2 alpha) ||x - x_k||^2 through the dual box
/// QP on [-c, c]. Default c = 1/(2m), matching the 1/2 in the absolute loss.
template <typename DerivedX, typename DerivedA, typename DerivedB>
ProxResult<typename DerivedX::Scalar> prox_step_absreg(const Eigen::MatrixBase<DerivedX>& x_k,
                                                       const Eigen::MatrixBase<DerivedA>& A,
                                                       const Eigen::MatrixBase<DerivedB>& b,
                                                       typename DerivedX::Scalar alpha,
                                                       typename DerivedX::Scalar tol = kDefaultInnerTol,
                                                       std::optional<typename DerivedX::Scalar> weight = std::nullopt,
                                                       Index max_sweeps = 200000) {
  using Scalar = typename DerivedX::Scalar;
  if (!(alpha > Scalar(0)) || !std::isfinite(static_cast<double>(alpha))) {
    throw std::invalid_argument("prox_step_absreg: stepsize must be positive and finite");
  }
  if (A.cols() != x_k.size() || A.rows() != b.size() || b.size() == 0) {
    throw std::invalid_argument("prox_step_absreg: dimension mismatch");
  }
  const Index m = A.rows();
  const Scalar c = weight.value_or(Scalar(1) / Scalar(2 * m));
  auto qp = BoxQP<Scalar>::uniform(A * A.transpose(), A * x_k - b, alpha, -c, c);
  BoxQPResult<Scalar> sol = solve_box_qp(qp, tol, max_sweeps);
  ProxResult<Scalar> out;
  out.x_next = x_k - alpha * (A.transpose() * sol.lambda);
  out.duality_gap = sol.duality_gap;
  out.inner_iterations = sol.sweeps;
  out.converged = sol.converged;
  out.lambda = std::move(sol.lambda);
  return out;
}

namespace detail {

template <typename Scalar>
Scalar softplus_neg(Scalar z) {
  return z > Scalar(0) ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
}

template <typename Scalar>
Scalar sigmoid_neg(Scalar z) {  // 1 / (1 + e^z)
  if (z > Scalar(0)) {
    const Scalar e = std::exp(-z);
    return e / (Scalar(1) + e);
  }
  return Scalar(1) / (Scalar(1) + std::exp(z));
}

}  // namespace detail

/// argmin c sum_i log(1 + exp(-b_i <a_i, x>)) + (1/2 alpha) ||x - x_k||^2 by
/// damped Newton from x_k. Iterates stay in x_k + range(A^T), so each Newton
/// system is solved in the smaller of the m- and n-dimensional forms.
/// Default c = 1/(2m).
template <typename DerivedX, typename DerivedA, typename DerivedB>
ProxResult<typename DerivedX::Scalar> prox_step_logistic(const Eigen::MatrixBase<DerivedX>& x_k,
                                                         const Eigen::MatrixBase<DerivedA>& A,
                                                         const Eigen::MatrixBase<DerivedB>& b,
                                                         typename DerivedX::Scalar alpha,
                                                         typename DerivedX::Scalar tol = kDefaultInnerTol,
                                                         std::optional<typename DerivedX::Scalar> weight = std::nullopt,
                                                         Index max_newton = 100) {
  using Scalar = typename DerivedX::Scalar;
  using Vec = VectorX<Scalar>;
  if (!(alpha > Scalar(0)) || !std::isfinite(static_cast<double>(alpha))) {
    throw std::invalid_argument("prox_step_logistic: stepsize must be positive and finite");
  }
  if (A.cols() != x_k.size() || A.rows() != b.size() || b.size() == 0) {
    throw std::invalid_argument("prox_step_logistic: dimension mismatch");
  }
  const Index m = A.rows();
  const Index n = A.cols();
  const Scalar c = weight.value_or(Scalar(1) / Scalar(2 * m));
  const Scalar inv_alpha = Scalar(1) / alpha;

  auto objective = [&](const Vec& x) {
    const Vec z = b.cwiseProduct(A * x);
    Scalar s(0);
    for (Index i = 0; i < m; ++i) s += detail::softplus_neg(z(i));
    return c * s + Scalar(0.5) * inv_alpha * (x - x_k).squaredNorm();
  };

  auto gradient = [&](const Vec& x, Vec& curv) {
    const Vec z = b.cwiseProduct(A * x);
    Vec coef(m);
    for (Index i = 0; i < m; ++i) {
      const Scalar s = detail::sigmoid_neg(z(i));
      coef(i) = -c * b(i) * s;  // derivative of the loss wrt <a_i, x>
      curv(i) = c * s * (Scalar(1) - s);
    }
    return Vec(A.transpose() * coef + inv_alpha * (x - x_k));
  };

  ProxResult<Scalar> out;
  Vec x = x_k;
  Scalar fx = objective(x);
  Vec curv(m);
  Vec grad = gradient(x, curv);
  out.converged = false;
  for (Index it = 0; it < max_newton; ++it) {
    if (grad.norm() <= tol) {
      out.converged = true;
      break;
    }
    Vec dir;
    if (m < n) {
      // (I/alpha + A^T E A)^{-1} g = alpha g - alpha^2 A^T E^{1/2} S^{-1} E^{1/2} A g,
      // S = I + alpha E^{1/2} A A^T E^{1/2}.
      const Vec e = curv.cwiseSqrt();
      MatrixX<Scalar> S = alpha * (e.asDiagonal() * (A * A.transpose()) * e.asDiagonal());
      S.diagonal().array() += Scalar(1);
      const Vec Ag = e.cwiseProduct(A * grad);
      dir = -(alpha * grad - alpha * alpha * (A.transpose() * e.cwiseProduct(S.llt().solve(Ag))));
    } else {
      MatrixX<Scalar> H = A.transpose() * curv.asDiagonal() * A;
      H.diagonal().array() += inv_alpha;
      dir = -H.llt().solve(grad);
    }
    const Scalar slope = grad.dot(dir);
    ++out.inner_iterations;
    Vec trial_curv(m);
    // Once the predicted decrease is below the resolution of f, Armijo
    // cannot tell steps apart; take the full Newton step if it shrinks the gradient.
    if (-slope <= Scalar(64) * std::numeric_limits<Scalar>::epsilon() * (Scalar(1) + std::abs(fx))) {
      Vec trial = x + dir;
      Vec g_trial = gradient(trial, trial_curv);
      if (!(g_trial.norm() < grad.norm())) break;
      x = std::move(trial);
      fx = objective(x);
      grad = std::move(g_trial);
      curv = trial_curv;
      continue;
    }
    Scalar t(1);
    Vec trial = x + dir;
    Scalar ft = objective(trial);
    while (ft > fx + Scalar(1e-4) * t * slope && t > Scalar(1e-16)) {
      t *= Scalar(0.5);
      trial = x + t * dir;
      ft = objective(trial);
    }
    if (!(ft <= fx)) break;  // no progress possible at working precision
    x = std::move(trial);
    fx = ft;
    grad = gradient(x, curv);
  }
  if (!out.converged) out.converged = grad.norm() <= tol;
  out.x_next = std::move(x);
  return out;
}

/// Left side minus right side of the three-point inequality
///   model(x+) + |x+ - x_k|^2/(2a) <= model(y) + |y - x_k|^2/(2a) - |y - x+|^2/(2a).
/// Nonpositive (up to solver tolerance) for an exact prox solve.
template <typename Scalar>
Scalar three_point_excess(Scalar model_xplus, Scalar model_y, const VectorX<Scalar>& x_k, const VectorX<Scalar>& x_plus,
                     const VectorX<Scalar>& y, Scalar alpha) {
  const Scalar half_inv = Scalar(0.5) / alpha;
  const Scalar lhs = model_xplus + half_inv * (x_plus - x_k).squaredNorm();
  const Scalar rhs = model_y + half_inv * (y - x_k).squaredNorm() - half_inv * (y - x_plus).squaredNorm();
  return lhs - rhs;
}

struct ProxOptions {
  std::optional<DistanceGenerator> geometry;  // Euclidean when unset
  Domain domain = Domain::all_space();
  double tol = kDefaultInnerTol;
  Index max_inner = 200000;
};

/// Minimizes model + (1/alpha) D_h(., center). The model keeps its own anchor,
/// which may differ from the prox center (accelerated iterations anchor at y
/// and center at z). For IterateAverage the single-sample steps from `center`
/// are averaged. alpha = +inf is accepted by the truncated-average scheme only.
ProxResult<double> model_prox(const BatchModel& model, const Vector& center, double alpha,
                              const ProxOptions& opts = {});

}  // namespace aprox
