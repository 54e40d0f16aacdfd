#include "aprox/problems.hpp"

#include "aprox/box_qp.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace aprox {

namespace {

double sign_of(double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); }

// log(1 + exp(-z)) without overflow.
double logistic_loss(double z) { return z > 0.0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z)); }

// d/dz log(1 + exp(-z)) = -1 / (1 + exp(z)).
double logistic_slope(double z) {
  if (z > 0.0) {
    const double e = std::exp(-z);
    return -e / (1.0 + e);
  }
  return -1.0 / (1.0 + std::exp(z));
}

double logistic_curvature(double z) {
  const double s = -logistic_slope(z);
  return s * (1.0 - s);
}

double power_value(double r, double gamma) { return std::pow(std::abs(r), 1.0 + gamma) / (1.0 + gamma); }

double power_slope(double r, double gamma) {
  if (gamma == 0.0) return sign_of(r);
  return sign_of(r) * std::pow(std::abs(r), gamma);
}

// Coordinate ascent on max_l l^T v - (alpha/2) ||R^T l||^2 over lo <= l <= hi,
// where the rows of R are the per-sample vectors. Keeps w = R^T l so one
// coordinate update costs O(n).
struct RowBoxAscent {
  const Matrix& R;
  Vector row_sq;

  explicit RowBoxAscent(const Matrix& rows) : R(rows), row_sq(rows.rowwise().squaredNorm()) {}

  double solve(const Vector& v, double alpha, double lo, double hi, Vector& lambda, double tol,
               Index max_sweeps) const {
    const Index N = R.rows();
    Vector w = R.transpose() * lambda;
    double resid = infinity();
    for (Index sweep = 1; sweep <= max_sweeps; ++sweep) {
      resid = 0.0;
      for (Index i = 0; i < N; ++i) {
        const double grad = v(i) - alpha * R.row(i).dot(w);
        double next;
        if (row_sq(i) > 0.0) {
          next = std::clamp(lambda(i) + grad / (alpha * row_sq(i)), lo, hi);
        } else {
          next = grad > 0.0 ? hi : (grad < 0.0 ? lo : lambda(i));
          if (std::isinf(next)) throw std::domain_error("RowBoxAscent: unbounded dual");
        }
        const double viol = detail::kkt_violation(lambda(i), lo, hi, grad);
        resid = std::max(resid, viol);
        const double d = next - lambda(i);
        if (d != 0.0) {
          w.noalias() += d * R.row(i).transpose();
          lambda(i) = next;
        }
      }
      if (sweep % 32 == 0) w.noalias() = R.transpose() * lambda;
      if (resid <= tol) break;
    }
    return resid;
  }
};

Matrix standard_normal_matrix(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix M(rows, cols);
  // Row-major fill order so that growing N keeps the leading rows.
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) M(i, j) = normal(rng);
  return M;
}

Vector standard_normal_vector(Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

void apply_condition_number(Matrix& A, double cond) {
  const Index n = A.cols();
  if (cond <= 1.0 || n < 2) return;
  Eigen::BDCSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& s = svd.singularValues();
  Vector ramp(s.size());
  for (Index j = 0; j < s.size(); ++j) {
    ramp(j) = std::pow(cond, -static_cast<double>(j) / static_cast<double>(s.size() - 1));
  }
  ramp *= s.norm() / ramp.norm();
  A = svd.matrixU() * ramp.asDiagonal() * svd.matrixV().transpose();
}

void validate(const ProblemParams& p) {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("generate_problem: " + msg); };
  if (p.N < 1 || p.n < 1) fail("N and n must be at least 1");
  if (!(p.cond >= 1.0)) fail("condition number must be >= 1");
  if (!(p.noise.level >= 0.0)) fail("noise level must be nonnegative");
  if (p.noise.kind == NoiseKind::LabelFlip && p.noise.level > 1.0) fail("flip probability must lie in [0, 1]");
  switch (p.kind) {
    case LossKind::LinReg:
    case LossKind::AbsReg:
      if (p.noise.kind == NoiseKind::LabelFlip) fail("label-flip noise applies only to logistic regression");
      break;
    case LossKind::Logistic:
      if (p.noise.kind != NoiseKind::None && p.noise.kind != NoiseKind::LabelFlip) {
        fail("logistic regression takes label-flip noise only");
      }
      break;
    case LossKind::HalfspaceIntersection:
    case LossKind::PowerReg:
    case LossKind::TwoPoint:
      if (!p.noise.is_zero()) fail("this problem kind is noiseless by construction");
      break;
  }
  if ((p.kind == LossKind::PowerReg || p.kind == LossKind::TwoPoint) && !(p.gamma >= 0.0 && p.gamma <= 1.0)) {
    fail("exponent gamma must lie in [0, 1]");
  }
  if (p.kind == LossKind::TwoPoint) {
    if (!(p.delta > 0.0 && p.delta < 1.0)) fail("two-point delta must lie in (0, 1)");
    if (!(p.radius > 0.0)) fail("two-point radius must be positive");
    if (p.sign != 1 && p.sign != -1) fail("two-point sign must be +1 or -1");
  }
}

}  // namespace

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::LinReg: return "linreg";
    case LossKind::AbsReg: return "absreg";
    case LossKind::Logistic: return "logistic";
    case LossKind::HalfspaceIntersection: return "halfspace";
    case LossKind::PowerReg: return "powerreg";
    case LossKind::TwoPoint: return "twopoint";
  }
  return "unknown";
}

LossKind loss_kind_from_string(std::string_view name) {
  for (LossKind k : {LossKind::LinReg, LossKind::AbsReg, LossKind::Logistic, LossKind::HalfspaceIntersection,
                     LossKind::PowerReg, LossKind::TwoPoint}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown problem kind '" + std::string(name) + "'");
}

namespace {

std::string_view noise_name(NoiseKind k) {
  switch (k) {
    case NoiseKind::None: return "none";
    case NoiseKind::GaussianResidual: return "gaussian";
    case NoiseKind::LaplaceResidual: return "laplace";
    case NoiseKind::LabelFlip: return "flip";
  }
  return "none";
}

NoiseKind noise_from_string(std::string_view s) {
  for (NoiseKind k : {NoiseKind::None, NoiseKind::GaussianResidual, NoiseKind::LaplaceResidual, NoiseKind::LabelFlip}) {
    if (noise_name(k) == s) return k;
  }
  throw std::invalid_argument("unknown noise kind '" + std::string(s) + "'");
}

}  // namespace

nlohmann::json ProblemParams::to_json() const {
  nlohmann::json j{{"kind", std::string(to_string(kind))},
                   {"N", N},
                   {"n", n},
                   {"noise", {{"kind", std::string(noise_name(noise.kind))}, {"level", noise.level}}},
                   {"cond", cond},
                   {"seed", seed}};
  if (kind == LossKind::PowerReg || kind == LossKind::TwoPoint) j["gamma"] = gamma;
  if (kind == LossKind::TwoPoint) {
    j["delta"] = delta;
    j["radius"] = radius;
    j["sign"] = sign;
  }
  return j;
}

ProblemParams ProblemParams::from_json(const nlohmann::json& j) {
  ProblemParams p;
  p.kind = loss_kind_from_string(j.at("kind").get<std::string>());
  p.N = j.value("N", p.N);
  p.n = j.value("n", p.n);
  if (j.contains("noise")) {
    p.noise.kind = noise_from_string(j.at("noise").at("kind").get<std::string>());
    p.noise.level = j.at("noise").value("level", 0.0);
  }
  p.cond = j.value("cond", p.cond);
  p.gamma = j.value("gamma", p.gamma);
  p.delta = j.value("delta", p.delta);
  p.radius = j.value("radius", p.radius);
  p.sign = j.value("sign", p.sign);
  p.seed = j.value("seed", p.seed);
  return p;
}

struct ProblemInstance::Cache {
  std::once_flag optimum_flag;
  OptimumInfo optimum;
  std::once_flag smooth_flag;
  std::optional<double> smoothness;
  std::exception_ptr optimum_error;
};

ProblemInstance::ProblemInstance(ProblemParams params, Matrix A, Vector b, Vector x_planted, Domain domain)
    : params_(std::move(params)),
      A_(std::move(A)),
      b_(std::move(b)),
      x_planted_(std::move(x_planted)),
      domain_(std::move(domain)),
      cache_(std::make_shared<Cache>()) {
  if (A_.rows() != b_.size() || A_.cols() != x_planted_.size()) {
    throw std::invalid_argument("ProblemInstance: inconsistent data shapes");
  }
  if (params_.kind == LossKind::TwoPoint) {
    weights_.resize(2);
    weights_ << 1.0 - params_.delta, params_.delta;
  } else {
    weights_ = Vector::Constant(A_.rows(), 1.0 / static_cast<double>(A_.rows()));
  }
}

bool ProblemInstance::is_interpolation() const {
  bool planted_optimal = false;
  switch (kind()) {
    case LossKind::LinReg:
    case LossKind::AbsReg:
      planted_optimal = params_.noise.is_zero();
      break;
    case LossKind::Logistic: {
      // Separable labels drive the infimum of every loss to zero along x*.
      planted_optimal = true;
      const Vector margins = A_ * x_planted_;
      for (Index i = 0; i < A_.rows(); ++i) {
        if ((margins(i) >= 0.0 ? 1.0 : -1.0) != b_(i)) planted_optimal = false;
      }
      break;
    }
    case LossKind::HalfspaceIntersection:
    case LossKind::PowerReg:
    case LossKind::TwoPoint:
      planted_optimal = true;
      break;
  }
  return planted_optimal && in_domain(domain_, x_planted_, 1e-12);
}

LossEval ProblemInstance::loss(const Vector& x, Index i) const {
  if (i < 0 || i >= sample_count()) throw std::out_of_range("loss: sample index out of range");
  if (x.size() != dimension()) throw std::invalid_argument("loss: dimension mismatch");
  LossEval out;
  out.inf_value = 0.0;
  const auto a = A_.row(i);
  switch (kind()) {
    case LossKind::LinReg: {
      const double r = a.dot(x) - b_(i);
      out.value = 0.5 * r * r;
      out.subgradient = r * a.transpose();
      break;
    }
    case LossKind::AbsReg: {
      const double r = a.dot(x) - b_(i);
      out.value = 0.5 * std::abs(r);
      out.subgradient = 0.5 * sign_of(r) * a.transpose();
      break;
    }
    case LossKind::Logistic: {
      const double z = b_(i) * a.dot(x);
      out.value = 0.5 * logistic_loss(z);
      out.subgradient = 0.5 * b_(i) * logistic_slope(z) * a.transpose();
      break;
    }
    case LossKind::HalfspaceIntersection: {
      const double t = a.dot(x) - b_(i);
      out.value = std::max(t, 0.0);
      out.subgradient = t > 0.0 ? Vector(a.transpose()) : Vector::Zero(dimension());
      break;
    }
    case LossKind::PowerReg: {
      const double r = a.dot(x) - b_(i);
      out.value = power_value(r, params_.gamma);
      out.subgradient = power_slope(r, params_.gamma) * a.transpose();
      break;
    }
    case LossKind::TwoPoint: {
      if (i == 0) {
        out.value = 0.0;
        out.subgradient = Vector::Zero(1);
      } else {
        const double r = x(0) - b_(1);
        out.value = power_value(r, params_.gamma);
        out.subgradient = Vector::Constant(1, power_slope(r, params_.gamma));
      }
      break;
    }
  }
  return out;
}

double ProblemInstance::loss_value(const Vector& x, Index i) const {
  const auto a = A_.row(i);
  switch (kind()) {
    case LossKind::LinReg: {
      const double r = a.dot(x) - b_(i);
      return 0.5 * r * r;
    }
    case LossKind::AbsReg: return 0.5 * std::abs(a.dot(x) - b_(i));
    case LossKind::Logistic: return 0.5 * logistic_loss(b_(i) * a.dot(x));
    case LossKind::HalfspaceIntersection: return std::max(a.dot(x) - b_(i), 0.0);
    case LossKind::PowerReg: return power_value(a.dot(x) - b_(i), params_.gamma);
    case LossKind::TwoPoint: return i == 0 ? 0.0 : power_value(x(0) - b_(1), params_.gamma);
  }
  return 0.0;
}

double ProblemInstance::loss_infimum(Index) const { return 0.0; }

double ProblemInstance::objective(const Vector& x) const {
  if (x.size() != dimension()) throw std::invalid_argument("objective: dimension mismatch");
  if (kind() == LossKind::TwoPoint) return weights_(1) * loss_value(x, 1);
  const Vector Ax = A_ * x;
  double s = 0.0;
  switch (kind()) {
    case LossKind::LinReg:
      s = 0.5 * (Ax - b_).squaredNorm();
      break;
    case LossKind::AbsReg:
      s = 0.5 * (Ax - b_).lpNorm<1>();
      break;
    case LossKind::Logistic:
      for (Index i = 0; i < Ax.size(); ++i) s += 0.5 * logistic_loss(b_(i) * Ax(i));
      break;
    case LossKind::HalfspaceIntersection:
      s = (Ax - b_).cwiseMax(0.0).sum();
      break;
    case LossKind::PowerReg:
      for (Index i = 0; i < Ax.size(); ++i) s += power_value(Ax(i) - b_(i), params_.gamma);
      break;
    case LossKind::TwoPoint:
      break;
  }
  return s / static_cast<double>(sample_count());
}

Vector ProblemInstance::objective_subgradient(const Vector& x) const {
  Vector g = Vector::Zero(dimension());
  for (Index i = 0; i < sample_count(); ++i) {
    if (weights_(i) == 0.0) continue;
    g += weights_(i) * loss(x, i).subgradient;
  }
  return g;
}

Index ProblemInstance::sample_index(Rng& rng) const {
  if (kind() == LossKind::TwoPoint) {
    std::bernoulli_distribution informative(params_.delta);
    return informative(rng) ? 1 : 0;
  }
  std::uniform_int_distribution<Index> pick(0, sample_count() - 1);
  return pick(rng);
}

std::optional<double> ProblemInstance::smoothness() const {
  std::call_once(cache_->smooth_flag, [this] {
    const bool smooth = kind() == LossKind::LinReg || kind() == LossKind::Logistic ||
                        (kind() == LossKind::PowerReg && params_.gamma == 1.0) ||
                        (kind() == LossKind::TwoPoint && params_.gamma == 1.0);
    if (!smooth) return;
    if (kind() == LossKind::TwoPoint) {
      cache_->smoothness = params_.delta;
      return;
    }
    const Matrix gram = A_.transpose() * A_;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
    const double top = eig.eigenvalues().maxCoeff() / static_cast<double>(sample_count());
    cache_->smoothness = kind() == LossKind::Logistic ? top / 8.0 : top;
  });
  return cache_->smoothness;
}

namespace {

OptimumInfo solve_least_squares(const ProblemInstance& inst) {
  const Matrix& A = inst.A();
  const Vector& b = inst.b();
  const Vector x_qr = A.colPivHouseholderQr().solve(b);
  const Vector x_ne = (A.transpose() * A).ldlt().solve(A.transpose() * b);
  const double f_qr = inst.objective(x_qr);
  const double f_ne = inst.objective(x_ne);
  OptimumInfo info;
  info.f_star = std::min(f_qr, f_ne);
  info.x_star = f_qr <= f_ne ? x_qr : x_ne;
  info.method = OptimumMethod::ClosedForm;
  info.tolerance = std::abs(f_qr - f_ne);
  info.converged = info.tolerance <= 1e-8 * (1.0 + std::abs(info.f_star));
  return info;
}

// Proximal point iterations on (1/2N) ||A x - b||_1 with each prox solved in
// the dual by coordinate ascent; polyhedral objectives terminate finitely.
OptimumInfo solve_least_absolute(const ProblemInstance& inst) {
  const Matrix& A = inst.A();
  const Vector& b = inst.b();
  const Index N = A.rows();
  const double c = 0.5 / static_cast<double>(N);
  RowBoxAscent ascent(A);

  Vector x = A.colPivHouseholderQr().solve(b);  // least-squares warm start
  Vector lambda = Vector::Zero(N);
  double f = inst.objective(x);
  double alpha = 1.0;
  double last_decrease = infinity();
  bool converged = false;
  for (int outer = 0; outer < 200; ++outer) {
    const Vector r = A * x - b;
    ascent.solve(r, alpha, -c, c, lambda, 1e-13, 20000);
    const Vector x_next = x - alpha * (A.transpose() * lambda);
    const double f_next = inst.objective(x_next);
    const double step = (x_next - x).norm();
    last_decrease = f - f_next;
    x = x_next;
    f = f_next;
    if (step <= 1e-12 * (1.0 + x.norm())) {
      converged = true;
      break;
    }
    alpha = std::min(alpha * 4.0, 1e6);
  }
  OptimumInfo info;
  info.f_star = f;
  info.x_star = x;
  info.method = OptimumMethod::HighAccuracySolve;
  info.tolerance = std::abs(last_decrease);
  info.converged = converged;
  return info;
}

OptimumInfo solve_logistic(const ProblemInstance& inst) {
  const Matrix& A = inst.A();
  const Vector& b = inst.b();
  const Index N = A.rows();
  const Index n = A.cols();
  const double scale = 0.5 / static_cast<double>(N);
  Vector x = Vector::Zero(n);
  double f = inst.objective(x);
  double grad_norm = infinity();
  bool converged = false;
  for (int it = 0; it < 200; ++it) {
    const Vector z = b.cwiseProduct(A * x);
    Vector coef(N), curv(N);
    for (Index i = 0; i < N; ++i) {
      coef(i) = b(i) * logistic_slope(z(i));
      curv(i) = logistic_curvature(z(i));
    }
    const Vector grad = scale * (A.transpose() * coef);
    grad_norm = grad.norm();
    if (grad_norm <= 1e-11) {
      converged = true;
      break;
    }
    Matrix H = scale * (A.transpose() * curv.asDiagonal() * A);
    H.diagonal().array() += 1e-14;
    const Vector dir = -H.ldlt().solve(grad);
    double t = 1.0;
    const double slope = grad.dot(dir);
    double f_next = inst.objective(x + dir);
    while (f_next > f + 1e-4 * t * slope && t > 1e-12) {
      t *= 0.5;
      f_next = inst.objective(x + t * dir);
    }
    x += t * dir;
    f = f_next;
  }
  OptimumInfo info;
  info.f_star = f;
  info.x_star = x;
  info.method = OptimumMethod::HighAccuracySolve;
  info.tolerance = grad_norm;
  info.converged = converged;
  return info;
}

// Accelerated projected gradient for smooth objectives on a bounded domain.
OptimumInfo solve_smooth_constrained(const ProblemInstance& inst, Vector x0) {
  const auto L = inst.smoothness();
  if (!L) throw std::runtime_error("reference_optimum: constrained solve needs a smooth objective");
  const double step = 1.0 / *L;
  Vector x = project_domain(inst.domain(), x0);
  Vector y = x;
  double t = 1.0;
  double mapping_norm = infinity();
  bool converged = false;
  for (int it = 0; it < 200000; ++it) {
    const Vector x_next = project_domain(inst.domain(), y - step * inst.objective_subgradient(y));
    mapping_norm = (x_next - y).norm() / step;
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = x_next + ((t - 1.0) / t_next) * (x_next - x);
    // Restart when momentum stops helping.
    if (inst.objective(x_next) > inst.objective(x)) {
      y = x_next;
      t = 1.0;
    } else {
      t = t_next;
    }
    x = x_next;
    if (mapping_norm <= 1e-11) {
      converged = true;
      break;
    }
  }
  OptimumInfo info;
  info.f_star = inst.objective(x);
  info.x_star = x;
  info.method = OptimumMethod::HighAccuracySolve;
  info.tolerance = mapping_norm;
  info.converged = converged;
  return info;
}

OptimumInfo compute_optimum(const ProblemInstance& inst) {
  if (inst.is_interpolation()) {
    OptimumInfo info;
    info.f_star = 0.0;
    info.x_star = inst.x_planted();
    if (inst.kind() == LossKind::Logistic) info.x_star.reset();  // infimum not attained
    info.method = OptimumMethod::ClosedForm;
    return info;
  }
  OptimumInfo info;
  switch (inst.kind()) {
    case LossKind::LinReg:
      info = solve_least_squares(inst);
      break;
    case LossKind::AbsReg:
      info = solve_least_absolute(inst);
      break;
    case LossKind::Logistic:
      info = solve_logistic(inst);
      break;
    default:
      // The remaining kinds interpolate on all of R^n; only a domain that
      // excludes the planted point lands here.
      info.x_star = inst.x_planted();
      break;
  }
  if (inst.domain().kind != DomainKind::AllSpace &&
      !(info.x_star && in_domain(inst.domain(), *info.x_star, 1e-12))) {
    info = solve_smooth_constrained(inst, info.x_star.value_or(Vector::Zero(inst.dimension())));
  }
  return info;
}

}  // namespace

const OptimumInfo& ProblemInstance::optimum() const {
  std::call_once(cache_->optimum_flag, [this] {
    try {
      cache_->optimum = compute_optimum(*this);
    } catch (...) {
      cache_->optimum_error = std::current_exception();
    }
  });
  if (cache_->optimum_error) std::rethrow_exception(cache_->optimum_error);
  return cache_->optimum;
}

Vector project_polyhedron(const Matrix& A, const Vector& b, const Vector& y, double tol) {
  const Vector slack = A * y - b;
  if (slack.maxCoeff() <= 0.0) return y;
  RowBoxAscent ascent(A);
  Vector mu = Vector::Zero(A.rows());
  ascent.solve(slack, 1.0, 0.0, infinity(), mu, tol, 200000);
  return y - A.transpose() * mu;
}

double ProblemInstance::distance_to_solution(const Vector& x) const {
  if (kind() == LossKind::HalfspaceIntersection) {
    return (x - project_polyhedron(A_, b_, x, 1e-14)).norm();
  }
  const auto& opt = optimum();
  if (!opt.x_star) throw std::runtime_error("distance_to_solution: optimum not attained for this instance");
  return (x - *opt.x_star).norm();
}

nlohmann::json ProblemInstance::describe() const { return params_.to_json(); }

ProblemInstance generate_problem(const ProblemParams& params) {
  validate(params);
  Rng rng = make_rng(derive_seed(params.seed, {static_cast<std::uint64_t>(params.kind)}));
  ProblemParams p = params;

  if (p.kind == LossKind::TwoPoint) {
    p.N = 2;
    p.n = 1;
    Matrix A = Matrix::Ones(2, 1);
    Vector b(2);
    b << 0.0, p.sign * p.radius;
    Vector x_star = Vector::Constant(1, p.sign * p.radius);
    return ProblemInstance(p, std::move(A), std::move(b), std::move(x_star), Domain::all_space());
  }

  Matrix A = standard_normal_matrix(p.N, p.n, rng);
  const Vector x_star = standard_normal_vector(p.n, rng);
  Vector b(p.N);

  switch (p.kind) {
    case LossKind::LinReg:
    case LossKind::AbsReg:
    case LossKind::PowerReg: {
      apply_condition_number(A, p.cond);
      b = A * x_star;
      if (p.noise.kind == NoiseKind::GaussianResidual) {
        std::normal_distribution<double> normal(0.0, 1.0);
        for (Index i = 0; i < p.N; ++i) b(i) += p.noise.level * normal(rng);
      } else if (p.noise.kind == NoiseKind::LaplaceResidual) {
        std::exponential_distribution<double> expo(1.0);
        for (Index i = 0; i < p.N; ++i) b(i) += p.noise.level * (expo(rng) - expo(rng));
      }
      break;
    }
    case LossKind::Logistic: {
      apply_condition_number(A, p.cond);
      const Vector margins = A * x_star;
      std::bernoulli_distribution flip(p.noise.kind == NoiseKind::LabelFlip ? p.noise.level : 0.0);
      for (Index i = 0; i < p.N; ++i) {
        b(i) = margins(i) >= 0.0 ? 1.0 : -1.0;
        if (flip(rng)) b(i) = -b(i);
      }
      break;
    }
    case LossKind::HalfspaceIntersection: {
      std::uniform_real_distribution<double> margin(0.1, 1.0);
      for (Index i = 0; i < p.N; ++i) {
        A.row(i).normalize();
        b(i) = A.row(i).dot(x_star) + margin(rng);
      }
      break;
    }
    case LossKind::TwoPoint:
      break;
  }
  return ProblemInstance(p, std::move(A), std::move(b), x_star, Domain::all_space());
}

Batch sample_batch(const ProblemInstance& inst, Index m, Rng& rng) {
  if (m < 1) throw std::invalid_argument("sample_batch: batch size must be at least 1");
  Batch batch;
  batch.indices.resize(static_cast<std::size_t>(m));
  for (auto& i : batch.indices) i = inst.sample_index(rng);
  return batch;
}

Batch full_batch(const ProblemInstance& inst) {
  Batch batch;
  batch.indices.resize(static_cast<std::size_t>(inst.sample_count()));
  std::iota(batch.indices.begin(), batch.indices.end(), Index{0});
  return batch;
}

LossEval loss_eval(const ProblemInstance& inst, const Vector& x, Index i) { return inst.loss(x, i); }

double objective_value(const ProblemInstance& inst, const Vector& x) { return inst.objective(x); }

OptimumInfo reference_optimum(const ProblemInstance& inst) { return inst.optimum(); }

double batch_objective(const ProblemInstance& inst, const Vector& x, const Batch& batch) {
  if (batch.indices.empty()) throw std::invalid_argument("batch_objective: empty batch");
  double s = 0.0;
  for (Index i : batch.indices) s += inst.loss_value(x, i);
  return s / static_cast<double>(batch.size());
}

OrthColRegression::OrthColRegression(Index n, Index m, double R, std::uint64_t seed, bool identity_basis)
    : m_(m), R_(R) {
  if (n < 1 || m < 1) throw std::invalid_argument("OrthColRegression: n and m must be positive");
  if (m > n) throw std::invalid_argument("OrthColRegression: batch size m exceeds dimension n");
  if (!(R > 0.0)) throw std::invalid_argument("OrthColRegression: R must be positive");
  if (identity_basis) {
    U_ = Matrix::Identity(n, n);
  } else {
    Rng rng = make_rng(seed);
    const Matrix G = standard_normal_matrix(n, n, rng);
    Eigen::HouseholderQR<Matrix> qr(G);
    U_ = qr.householderQ() * Matrix::Identity(n, n);
  }
}

Vector OrthColRegression::draw_optimum(Rng& rng) const {
  return (R_ / std::sqrt(static_cast<double>(dimension()))) * standard_normal_vector(dimension(), rng);
}

OrthColRegression::Observation OrthColRegression::observe(const Vector& x_star, Rng& rng) const {
  const Index n = dimension();
  std::vector<Index> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), Index{0});
  // Partial Fisher-Yates: m distinct columns, uniformly.
  for (Index j = 0; j < m_; ++j) {
    std::uniform_int_distribution<Index> pick(j, n - 1);
    std::swap(all[static_cast<std::size_t>(j)], all[static_cast<std::size_t>(pick(rng))]);
  }
  Observation obs;
  obs.columns.assign(all.begin(), all.begin() + m_);
  const double scale = std::sqrt(static_cast<double>(n) / static_cast<double>(m_));
  obs.A.resize(m_, n);
  for (Index j = 0; j < m_; ++j) obs.A.row(j) = scale * U_.col(obs.columns[static_cast<std::size_t>(j)]).transpose();
  obs.b = obs.A * x_star;
  return obs;
}

OrthColRegression make_orthcol_regression(Index n, Index m, double R, std::uint64_t seed, bool identity_basis) {
  return OrthColRegression(n, m, R, seed, identity_basis);
}

}  // namespace aprox
