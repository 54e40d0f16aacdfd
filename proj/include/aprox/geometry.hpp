#pragma once

// Distance-generating functions, Bregman divergences and the mirror step
// argmin_{x in dom} <g, x> + D_h(x, z) / alpha.

#include "aprox/types.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace aprox {

enum class DgfKind { EuclideanHalfSq, NegEntropySimplex };

struct DistanceGenerator {
  DgfKind kind = DgfKind::EuclideanHalfSq;
  Index dimension = 1;

  static DistanceGenerator euclidean(Index n) { return {DgfKind::EuclideanHalfSq, n}; }
  static DistanceGenerator entropy(Index n) { return {DgfKind::NegEntropySimplex, n}; }
};

enum class DomainKind { AllSpace, EuclideanBall, Simplex };

struct Domain {
  DomainKind kind = DomainKind::AllSpace;
  Vector center;  // ball only
  double radius = 0.0;

  static Domain all_space() { return {}; }
  static Domain ball(Vector center, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("Domain::ball: radius must be positive");
    return {DomainKind::EuclideanBall, std::move(center), radius};
  }
  static Domain simplex() { return {DomainKind::Simplex, Vector(), 0.0}; }
};

/// Entropy iterates are clamped to this floor before logarithms are taken.
inline constexpr double kEntropyFloor = 1e-15;

namespace detail {

template <typename DerivedA, typename DerivedB>
void check_same_size(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
                     const char* what) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
}

inline void check_dimension(const DistanceGenerator& h, Index size, const char* what) {
  if (size != h.dimension) {
    throw std::invalid_argument(std::string(what) + ": expected dimension " +
                                std::to_string(h.dimension) + ", got " + std::to_string(size));
  }
}

}  // namespace detail

inline void validate_pairing(const DistanceGenerator& h, const Domain& dom) {
  const bool entropy = h.kind == DgfKind::NegEntropySimplex;
  const bool simplex = dom.kind == DomainKind::Simplex;
  if (entropy != simplex) {
    throw std::invalid_argument("negative-entropy geometry pairs only with the simplex domain");
  }
  if (dom.kind == DomainKind::EuclideanBall && dom.center.size() != h.dimension) {
    throw std::invalid_argument("ball center dimension does not match the geometry");
  }
}

/// h(x). Euclidean: ||x||^2 / 2. Entropy: sum x_i log x_i.
template <typename Derived>
typename Derived::Scalar dgf_value(const DistanceGenerator& h, const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  detail::check_dimension(h, x.size(), "dgf_value");
  if (h.kind == DgfKind::EuclideanHalfSq) return Scalar(0.5) * x.squaredNorm();
  Scalar s(0);
  for (Index i = 0; i < x.size(); ++i) {
    const Scalar xi = std::max<Scalar>(x(i), Scalar(kEntropyFloor));
    s += xi * std::log(xi);
  }
  return s;
}

template <typename Derived>
VectorX<typename Derived::Scalar> dgf_gradient(const DistanceGenerator& h,
                                                const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  detail::check_dimension(h, x.size(), "dgf_gradient");
  if (h.kind == DgfKind::EuclideanHalfSq) return x;
  VectorX<Scalar> g(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    g(i) = std::log(std::max<Scalar>(x(i), Scalar(kEntropyFloor))) + Scalar(1);
  }
  return g;
}

/// D_h(x, y) = h(x) - h(y) - <grad h(y), x - y>.
///
/// For the entropy generator y must be strictly positive; a zero or negative
/// coordinate sits on the boundary where the gradient is undefined.
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar bregman_divergence(const DistanceGenerator& h,
                                             const Eigen::MatrixBase<DerivedX>& x,
                                             const Eigen::MatrixBase<DerivedY>& y) {
  using Scalar = typename DerivedX::Scalar;
  detail::check_same_size(x, y, "bregman_divergence");
  detail::check_dimension(h, x.size(), "bregman_divergence");
  if (h.kind == DgfKind::EuclideanHalfSq) return Scalar(0.5) * (x - y).squaredNorm();
  Scalar d(0);
  for (Index i = 0; i < x.size(); ++i) {
    if (!(y(i) > Scalar(0))) {
      throw std::domain_error("bregman_divergence: entropy reference point on the simplex boundary");
    }
    const Scalar xi = std::max<Scalar>(x(i), Scalar(kEntropyFloor));
    // x log(x/y) - x + y; the last two terms cancel on the simplex.
    d += xi * std::log(xi / y(i)) - xi + y(i);
  }
  return std::max<Scalar>(d, Scalar(0));
}

/// Reference norm: l2 for the Euclidean generator, l1 for entropy.
template <typename Derived>
typename Derived::Scalar reference_norm(const DistanceGenerator& h, const Eigen::MatrixBase<Derived>& v) {
  return h.kind == DgfKind::EuclideanHalfSq ? v.norm() : v.template lpNorm<1>();
}

template <typename Derived>
typename Derived::Scalar dual_norm(const DistanceGenerator& h, const Eigen::MatrixBase<Derived>& v) {
  return h.kind == DgfKind::EuclideanHalfSq ? v.norm() : v.template lpNorm<Eigen::Infinity>();
}

/// Euclidean projection onto the probability simplex (sort-based).
template <typename Derived>
VectorX<typename Derived::Scalar> project_simplex(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  const Index n = v.size();
  if (n == 0) throw std::invalid_argument("project_simplex: empty vector");
  std::vector<Scalar> u(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) u[static_cast<std::size_t>(i)] = v(i);
  std::sort(u.begin(), u.end(), std::greater<Scalar>());
  Scalar cumsum(0), theta(0);
  for (Index j = 0; j < n; ++j) {
    cumsum += u[static_cast<std::size_t>(j)];
    const Scalar t = (cumsum - Scalar(1)) / Scalar(j + 1);
    if (u[static_cast<std::size_t>(j)] - t > Scalar(0)) theta = t;
  }
  return (v.array() - theta).cwiseMax(Scalar(0)).matrix();
}

/// Nearest point of the domain in l2.
template <typename Derived>
VectorX<typename Derived::Scalar> project_domain(const Domain& dom, const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  switch (dom.kind) {
    case DomainKind::AllSpace:
      return x;
    case DomainKind::EuclideanBall: {
      detail::check_same_size(x, dom.center, "project_domain");
      const VectorX<Scalar> c = dom.center.template cast<Scalar>();
      const VectorX<Scalar> d = x - c;
      const Scalar norm = d.norm();
      if (norm <= Scalar(dom.radius)) return x;
      return c + (Scalar(dom.radius) / norm) * d;
    }
    case DomainKind::Simplex:
      return project_simplex(x);
  }
  return x;
}

template <typename Derived>
bool in_domain(const Domain& dom, const Eigen::MatrixBase<Derived>& x, double tol = 1e-12) {
  switch (dom.kind) {
    case DomainKind::AllSpace:
      return true;
    case DomainKind::EuclideanBall:
      return (x - dom.center.template cast<typename Derived::Scalar>()).norm() <= dom.radius + tol;
    case DomainKind::Simplex:
      return x.minCoeff() >= -tol && std::abs(x.sum() - 1.0) <= tol * std::max<Index>(1, x.size());
  }
  return false;
}

/// argmin_{x in dom} <g, x> + D_h(x, z) / alpha.
///
/// Euclidean geometry: projection of z - alpha g. Entropy on the simplex:
/// the multiplicative update z_i exp(-alpha g_i), renormalized.
template <typename DerivedZ, typename DerivedG>
VectorX<typename DerivedZ::Scalar> mirror_linear_step(const DistanceGenerator& h, const Domain& dom,
                                                      const Eigen::MatrixBase<DerivedZ>& z,
                                                      const Eigen::MatrixBase<DerivedG>& g,
                                                      typename DerivedZ::Scalar alpha) {
  using Scalar = typename DerivedZ::Scalar;
  if (!(alpha > Scalar(0)) || !std::isfinite(static_cast<double>(alpha))) {
    throw std::invalid_argument("mirror_linear_step: stepsize must be positive and finite");
  }
  detail::check_same_size(z, g, "mirror_linear_step");
  detail::check_dimension(h, z.size(), "mirror_linear_step");
  validate_pairing(h, dom);
  if (h.kind == DgfKind::EuclideanHalfSq) {
    VectorX<Scalar> y = z - alpha * g;
    return dom.kind == DomainKind::AllSpace ? y : project_domain(dom, y);
  }
  VectorX<Scalar> logits(z.size());
  for (Index i = 0; i < z.size(); ++i) {
    logits(i) = std::log(std::max<Scalar>(z(i), Scalar(kEntropyFloor))) - alpha * g(i);
  }
  const Scalar shift = logits.maxCoeff();
  VectorX<Scalar> x = (logits.array() - shift).exp().matrix();
  x /= x.sum();
  x = x.cwiseMax(Scalar(kEntropyFloor));
  return x / x.sum();
}

}  // namespace aprox
