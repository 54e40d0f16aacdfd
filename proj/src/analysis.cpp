#include "aprox/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace aprox {

namespace {

// E ||g_i - gbar||^2 over the sample distribution, with gbar = E g_i.
double exact_gradient_variance(const ProblemInstance& inst, const Vector& x, Vector* mean_out = nullptr) {
  const Vector& w = inst.weights();
  std::vector<Vector> grads;
  grads.reserve(static_cast<std::size_t>(inst.sample_count()));
  Vector mean = Vector::Zero(inst.dimension());
  for (Index i = 0; i < inst.sample_count(); ++i) {
    grads.push_back(inst.loss(x, i).subgradient);
    mean += w(i) * grads.back();
  }
  double var = 0.0;
  for (Index i = 0; i < inst.sample_count(); ++i) var += w(i) * (grads[static_cast<std::size_t>(i)] - mean).squaredNorm();
  if (mean_out) *mean_out = mean;
  return var;
}

}  // namespace

Sigma0Estimate estimate_sigma0(const ProblemInstance& inst, const std::vector<Vector>& probes, Index draws,
                               Rng& rng) {
  if (probes.empty()) throw std::invalid_argument("estimate_sigma0: no probe points");
  if (draws == 1 || draws < 0) throw std::invalid_argument("estimate_sigma0: draws must be 0 (exact) or >= 2");
  Sigma0Estimate est;
  for (std::size_t p = 0; p < probes.size(); ++p) {
    double v;
    if (draws == 0) {
      v = exact_gradient_variance(inst, probes[p]);
    } else {
      const Vector mean = inst.objective_subgradient(probes[p]);
      double s = 0.0;
      for (Index d = 0; d < draws; ++d) s += (inst.loss(probes[p], inst.sample_index(rng)).subgradient - mean).squaredNorm();
      v = s / static_cast<double>(draws);
    }
    est.per_probe.push_back(v);
    if (p == 0 || v > est.sigma0_sq) {
      est.sigma0_sq = v;
      est.argmax_probe = static_cast<Index>(p);
    }
  }
  return est;
}

NoiseToSignalEstimate estimate_noise_to_signal(const ProblemInstance& inst, const std::vector<Vector>& probes) {
  if (probes.empty()) throw std::invalid_argument("estimate_noise_to_signal: no probe points");
  NoiseToSignalEstimate est;
  bool any = false;
  for (std::size_t p = 0; p < probes.size(); ++p) {
    Vector mean;
    const double var = exact_gradient_variance(inst, probes[p], &mean);
    const double signal = mean.squaredNorm();
    if (signal <= 1e-24 * std::max(1.0, var)) {
      ++est.skipped;
      continue;
    }
    const double r = var / signal;
    if (!any || r > est.rho) {
      est.rho = r;
      est.argmax_probe = static_cast<Index>(p);
    }
    any = true;
  }
  if (!any) throw std::domain_error("estimate_noise_to_signal: every probe has a vanishing gradient");
  return est;
}

GrowthEstimate estimate_gamma_growth(const ProblemInstance& inst, double gamma, double alpha,
                                     const GrowthOptions& opts, Rng& rng) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw std::invalid_argument("estimate_gamma_growth: gamma must lie in [0, 1]");
  if (!(alpha > 0.0)) throw std::invalid_argument("estimate_gamma_growth: alpha must be positive");
  if (opts.radii.empty() || opts.directions < 1) throw std::invalid_argument("estimate_gamma_growth: empty probe set");
  for (double r : opts.radii) {
    if (!(r > 0.0)) throw std::invalid_argument("estimate_gamma_growth: radii must be positive");
  }
  if (opts.batch < 1) throw std::invalid_argument("estimate_gamma_growth: batch must be at least 1");
  if (opts.batch > 1 && opts.draws < 2) {
    throw std::invalid_argument("estimate_gamma_growth: batched growth needs Monte Carlo draws >= 2");
  }
  const auto& opt = inst.optimum();
  if (!opt.x_star) throw std::invalid_argument("estimate_gamma_growth: the optimum must be attained");
  const Vector& xs = *opt.x_star;
  const Index n = inst.dimension();

  GrowthEstimate est;
  est.gamma = gamma;
  est.alpha = alpha;
  est.draws = opts.draws;

  auto term = [&](double delta, double grad_sq) {
    if (delta <= 0.0) return 0.0;
    const double polyak = grad_sq > 0.0 ? delta / grad_sq : infinity();
    return delta * std::min(alpha, polyak);
  };

  std::normal_distribution<double> normal(0.0, 1.0);
  for (Index d = 0; d < opts.directions; ++d) {
    Vector dir(n);
    for (Index i = 0; i < n; ++i) dir(i) = normal(rng);
    dir.normalize();
    for (double r : opts.radii) {
      const Vector x = xs + r * dir;
      GrowthProbe probe;
      probe.radius = r;
      probe.dist = inst.distance_to_solution(x);
      bool negative = false;
      if (opts.draws == 0) {
        const Vector& w = inst.weights();
        for (Index i = 0; i < inst.sample_count(); ++i) {
          if (w(i) == 0.0) continue;
          const LossEval e = inst.loss(x, i);
          const double delta = e.value - inst.loss_value(xs, i);
          negative = negative || delta < 0.0;
          probe.expectation += w(i) * term(delta, e.subgradient.squaredNorm());
        }
      } else {
        double s = 0.0, s2 = 0.0;
        for (Index t = 0; t < opts.draws; ++t) {
          double delta = 0.0;
          Vector g = Vector::Zero(n);
          for (Index j = 0; j < opts.batch; ++j) {
            const Index i = inst.sample_index(rng);
            const LossEval e = inst.loss(x, i);
            delta += e.value - inst.loss_value(xs, i);
            g += e.subgradient;
          }
          delta /= static_cast<double>(opts.batch);
          g /= static_cast<double>(opts.batch);
          negative = negative || delta < 0.0;
          const double v = term(delta, g.squaredNorm());
          s += v;
          s2 += v * v;
        }
        const double N = static_cast<double>(opts.draws);
        probe.expectation = s / N;
        const double var = std::max(0.0, (s2 - s * s / N) / (N - 1.0));
        probe.half_width = 1.96 * std::sqrt(var / N);
      }
      est.negative_probes += negative;
      est.probes.push_back(probe);
    }
  }

  est.lambda0 = infinity();
  est.lambda1 = infinity();
  for (const auto& p : est.probes) {
    if (p.dist <= 0.0) continue;
    const double e = p.expectation / std::pow(p.dist, 1.0 + gamma);
    est.lambda1 = std::min(est.lambda1, e / std::pow(p.dist, 1.0 - gamma));
    if (!std::isinf(alpha)) est.lambda0 = std::min(est.lambda0, e / alpha);
  }
  if (std::isinf(est.lambda1)) throw std::domain_error("estimate_gamma_growth: all probes lie on the solution set");
  est.lambda1 = std::clamp(est.lambda1, 0.0, 1.0);

  for (const auto& p : est.probes) {
    const double branch0 = std::isinf(alpha) ? infinity() : est.lambda0 * alpha;
    const double bound = std::min(branch0, est.lambda1 * std::pow(p.dist, 1.0 - gamma)) * std::pow(p.dist, 1.0 + gamma);
    est.max_fit_violation = std::max(est.max_fit_violation, bound - p.expectation);
  }
  return est;
}

double ProfileCurve::value_at(double r) const {
  const auto it = std::upper_bound(ratios.begin(), ratios.end(), r);
  if (it == ratios.begin()) return 0.0;
  return fractions[static_cast<std::size_t>(std::distance(ratios.begin(), it) - 1)];
}

ProfileResult performance_profile(const ProfileInput& input, Index max_failures) {
  const std::size_t A = input.methods.size();
  if (A == 0 || input.times.empty()) throw std::invalid_argument("performance_profile: empty result set");
  std::vector<std::vector<double>> ratios(A);
  ProfileResult out;
  for (const auto& row : input.times) {
    if (row.size() != A) throw std::invalid_argument("performance_profile: ragged table");
    const auto failures = std::count_if(row.begin(), row.end(), [](double t) { return std::isinf(t); });
    if (failures > max_failures) {
      ++out.discarded_cells;
      continue;
    }
    ++out.kept_cells;
    const double best = *std::min_element(row.begin(), row.end());
    for (std::size_t a = 0; a < A; ++a) {
      double r = infinity();
      if (std::isfinite(row[a])) r = row[a] == best ? 1.0 : row[a] / best;
      ratios[a].push_back(r);
    }
  }
  std::set<double> grid;
  for (const auto& rs : ratios) {
    for (double r : rs) {
      if (std::isfinite(r)) grid.insert(r);
    }
  }
  for (std::size_t a = 0; a < A; ++a) {
    ProfileCurve c;
    c.method = input.methods[a];
    std::vector<double> sorted = ratios[a];
    std::sort(sorted.begin(), sorted.end());
    for (double r : grid) {
      const auto solved = std::upper_bound(sorted.begin(), sorted.end(), r) - sorted.begin();
      c.ratios.push_back(r);
      c.fractions.push_back(out.kept_cells > 0 ? static_cast<double>(solved) / static_cast<double>(out.kept_cells)
                                               : 0.0);
    }
    out.curves.push_back(std::move(c));
  }
  return out;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  const double lo = values[n / 2 - 1];
  const double hi = values[n / 2];
  if (std::isinf(hi)) return hi;
  return 0.5 * (lo + hi);
}

std::map<Index, double> best_times(const std::vector<SpeedupSample>& samples) {
  std::map<Index, std::map<double, std::vector<double>>> grouped;
  for (const auto& s : samples) grouped[s.m][s.alpha0].push_back(s.time);
  std::map<Index, double> best;
  for (const auto& [m, by_alpha] : grouped) {
    double b = infinity();
    for (const auto& [alpha0, times] : by_alpha) b = std::min(b, median(times));
    best[m] = b;
  }
  return best;
}

std::map<Index, double> speedup_table(const std::vector<SpeedupSample>& samples) {
  const auto best = best_times(samples);
  const auto one = best.find(1);
  if (one == best.end() || !std::isfinite(one->second)) {
    throw std::domain_error("speedup_table: no successful m = 1 runs");
  }
  std::map<Index, double> out;
  for (const auto& [m, t] : best) out[m] = std::isfinite(t) ? one->second / t : 0.0;
  return out;
}

LinearFit least_squares_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("least_squares_line: need >= 2 points");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("least_squares_line: degenerate abscissae");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.count = static_cast<Index>(xs.size());
  return fit;
}

LinearFit rate_slope(const std::vector<Index>& ks, const std::vector<double>& gaps, Index k_lo, Index k_hi) {
  if (ks.size() != gaps.size()) throw std::invalid_argument("rate_slope: size mismatch");
  std::vector<double> lx, ly;
  for (std::size_t j = 0; j < ks.size(); ++j) {
    if (ks[j] < k_lo || ks[j] > k_hi) continue;
    if (!(gaps[j] > 0.0)) throw std::domain_error("rate_slope: nonpositive gap in window; fit a geometric rate instead");
    lx.push_back(std::log(static_cast<double>(ks[j])));
    ly.push_back(std::log(gaps[j]));
  }
  return least_squares_line(lx, ly);
}

LinearFit geometric_rate_fit(const std::vector<Index>& ks, const std::vector<double>& values) {
  if (ks.size() != values.size()) throw std::invalid_argument("geometric_rate_fit: size mismatch");
  std::vector<double> lx, ly;
  for (std::size_t j = 0; j < ks.size(); ++j) {
    if (!(values[j] > 0.0)) continue;
    lx.push_back(static_cast<double>(ks[j]));
    ly.push_back(std::log(values[j]));
  }
  return least_squares_line(lx, ly);
}

}  // namespace aprox
