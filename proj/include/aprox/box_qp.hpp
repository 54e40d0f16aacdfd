#pragma once

// Box-constrained concave quadratic maximization
//
//   maximize  -(alpha/2) l^T Q l + l^T v   subject to  lo <= l <= hi,
//
// the dual of the prox step on an average of truncated (or absolute-value)
// models, with Q = G^T G. Solved by cyclic coordinate ascent with exact
// clipped one-dimensional updates.

#include "aprox/types.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace aprox {

template <typename Scalar>
struct BoxQP {
  MatrixX<Scalar> Q;
  VectorX<Scalar> v;
  Scalar alpha = Scalar(1);
  VectorX<Scalar> lo;
  VectorX<Scalar> hi;

  Index size() const { return v.size(); }

  static BoxQP uniform(MatrixX<Scalar> Q, VectorX<Scalar> v, Scalar alpha, Scalar lo, Scalar hi) {
    const Index m = v.size();
    return BoxQP{std::move(Q), std::move(v), alpha, VectorX<Scalar>::Constant(m, lo),
                 VectorX<Scalar>::Constant(m, hi)};
  }

  void validate() const {
    const Index m = v.size();
    if (Q.rows() != m || Q.cols() != m || lo.size() != m || hi.size() != m) {
      throw std::invalid_argument("BoxQP: inconsistent dimensions");
    }
    if (!(alpha > Scalar(0)) || !std::isfinite(static_cast<double>(alpha))) {
      throw std::invalid_argument("BoxQP: stepsize must be positive and finite");
    }
    if ((lo.array() > hi.array()).any()) throw std::invalid_argument("BoxQP: lo > hi");
  }
};

template <typename Scalar>
struct BoxQPResult {
  VectorX<Scalar> lambda;
  Scalar kkt_residual = Scalar(0);
  Scalar duality_gap = Scalar(0);
  Index sweeps = 0;
  bool converged = false;
};

template <typename Scalar>
Scalar box_qp_dual_value(const BoxQP<Scalar>& qp, const VectorX<Scalar>& lambda) {
  return lambda.dot(qp.v) - Scalar(0.5) * qp.alpha * lambda.dot(qp.Q * lambda);
}

namespace detail {

// max(lo t, hi t) with the convention 0 * inf = 0.
template <typename Scalar>
Scalar support_of_interval(Scalar lo, Scalar hi, Scalar t) {
  if (t > Scalar(0)) return std::isinf(static_cast<double>(hi)) ? infinity<Scalar>() : hi * t;
  if (t < Scalar(0)) return std::isinf(static_cast<double>(lo)) ? infinity<Scalar>() : lo * t;
  return Scalar(0);
}

template <typename Scalar>
Scalar kkt_violation(Scalar lambda, Scalar lo, Scalar hi, Scalar grad) {
  if (lo == hi) return Scalar(0);
  if (lambda <= lo) return std::max(grad, Scalar(0));
  if (lambda >= hi) return std::max(-grad, Scalar(0));
  return std::abs(grad);
}

}  // namespace detail

/// Primal value at the point x_k - alpha G lambda, expressed through Q only:
/// sum_i max(lo_i t_i, hi_i t_i) + (alpha/2) l^T Q l with t = v - alpha Q l.
template <typename Scalar>
Scalar box_qp_primal_value(const BoxQP<Scalar>& qp, const VectorX<Scalar>& lambda) {
  const VectorX<Scalar> Ql = qp.Q * lambda;
  const VectorX<Scalar> t = qp.v - qp.alpha * Ql;
  Scalar p = Scalar(0.5) * qp.alpha * lambda.dot(Ql);
  for (Index i = 0; i < qp.size(); ++i) p += detail::support_of_interval(qp.lo(i), qp.hi(i), t(i));
  return p;
}

/// Largest per-coordinate KKT violation of lambda.
template <typename Scalar>
Scalar box_qp_kkt_residual(const BoxQP<Scalar>& qp, const VectorX<Scalar>& lambda) {
  const VectorX<Scalar> grad = qp.v - qp.alpha * (qp.Q * lambda);
  Scalar r(0);
  for (Index i = 0; i < qp.size(); ++i) {
    r = std::max(r, detail::kkt_violation(lambda(i), qp.lo(i), qp.hi(i), grad(i)));
  }
  return r;
}

/// primal - dual at lambda; zero exactly at the optimum.
template <typename Scalar>
Scalar box_qp_duality_gap(const BoxQP<Scalar>& qp, const VectorX<Scalar>& lambda) {
  const VectorX<Scalar> t = qp.v - qp.alpha * (qp.Q * lambda);
  Scalar gap(0);
  for (Index i = 0; i < qp.size(); ++i) {
    gap += detail::support_of_interval(qp.lo(i), qp.hi(i), t(i)) - lambda(i) * t(i);
  }
  return gap;
}

/// Cyclic coordinate ascent. Stops once the KKT residual is at most `tol`.
///
/// A zero diagonal entry of the PSD matrix Q means the whole row vanishes, so
/// the objective is linear in that coordinate and it moves straight to the
/// bound selected by the sign of v_i. If that bound is infinite the dual is
/// unbounded and std::domain_error is thrown.
template <typename Scalar>
BoxQPResult<Scalar> solve_box_qp(const BoxQP<Scalar>& qp, Scalar tol, Index max_sweeps = 200000,
                                 const std::optional<VectorX<Scalar>>& warm_start = std::nullopt) {
  qp.validate();
  if (!(tol > Scalar(0))) throw std::invalid_argument("solve_box_qp: tol must be positive");
  const Index m = qp.size();
  const Scalar alpha = qp.alpha;

  BoxQPResult<Scalar> out;
  out.lambda = VectorX<Scalar>::Zero(m);
  if (warm_start && warm_start->size() == m) out.lambda = *warm_start;
  for (Index i = 0; i < m; ++i) {
    out.lambda(i) = std::clamp(out.lambda(i), qp.lo(i), qp.hi(i));
    if (std::isinf(static_cast<double>(out.lambda(i)))) out.lambda(i) = Scalar(0);
  }
  VectorX<Scalar>& lambda = out.lambda;

  const Scalar diag_max = m > 0 ? qp.Q.diagonal().cwiseAbs().maxCoeff() : Scalar(0);
  const Scalar diag_floor = Scalar(1e-14) * std::max(Scalar(1), diag_max);

  VectorX<Scalar> Ql = qp.Q * lambda;
  for (Index sweep = 1; sweep <= max_sweeps; ++sweep) {
    for (Index i = 0; i < m; ++i) {
      const Scalar grad = qp.v(i) - alpha * Ql(i);
      const Scalar qii = qp.Q(i, i);
      Scalar next;
      if (qii > diag_floor) {
        next = std::clamp(lambda(i) + grad / (alpha * qii), qp.lo(i), qp.hi(i));
      } else if (grad > Scalar(0)) {
        next = qp.hi(i);
      } else if (grad < Scalar(0)) {
        next = qp.lo(i);
      } else {
        next = lambda(i);
      }
      if (std::isinf(static_cast<double>(next))) {
        throw std::domain_error("solve_box_qp: dual unbounded along a zero-curvature coordinate");
      }
      const Scalar delta = next - lambda(i);
      if (delta != Scalar(0)) {
        Ql.noalias() += delta * qp.Q.col(i);
        lambda(i) = next;
      }
    }
    if (sweep % 64 == 0) Ql.noalias() = qp.Q * lambda;

    Scalar resid(0);
    for (Index i = 0; i < m; ++i) {
      const Scalar grad = qp.v(i) - alpha * Ql(i);
      resid = std::max(resid, detail::kkt_violation(lambda(i), qp.lo(i), qp.hi(i), grad));
    }
    out.sweeps = sweep;
    out.kkt_residual = resid;
    if (resid <= tol) {
      out.converged = true;
      break;
    }
  }
  out.kkt_residual = box_qp_kkt_residual(qp, lambda);
  out.converged = out.kkt_residual <= tol;
  out.duality_gap = box_qp_duality_gap(qp, lambda);
  return out;
}

}  // namespace aprox
