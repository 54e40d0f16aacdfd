#pragma once

// Estimators for the problem constants (gradient variance, noise-to-signal
// ratio, growth constants) and summaries of experiment tables (performance
// profiles, minibatch speedups, rate fits).

#include "aprox/problems.hpp"
#include "aprox/rng.hpp"
#include "aprox/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace aprox {

struct Sigma0Estimate {
  double sigma0_sq = 0.0;
  Index argmax_probe = 0;
  std::vector<double> per_probe;
};

/// max over probes of E ||g(x; S) - grad f(x)||^2. draws = 0 enumerates the
/// sample space exactly; otherwise draws >= 2 Monte Carlo samples per probe.
Sigma0Estimate estimate_sigma0(const ProblemInstance& inst, const std::vector<Vector>& probes, Index draws,
                               Rng& rng);

struct NoiseToSignalEstimate {
  double rho = 0.0;
  Index argmax_probe = 0;
  Index skipped = 0;  // probes with a vanishing gradient
};

/// max over probes of Var(g(x; S)) / ||grad f(x)||^2 by exact enumeration.
NoiseToSignalEstimate estimate_noise_to_signal(const ProblemInstance& inst, const std::vector<Vector>& probes);

struct GrowthProbe {
  double radius = 0.0;
  double dist = 0.0;
  double expectation = 0.0;  // E[(F - F*) min{alpha, (F - F*) / |F'|^2}]
  double half_width = 0.0;   // 95% normal-approximation half-width (0 when exact)
};

struct GrowthEstimate {
  double gamma = 0.0;
  double alpha = 0.0;
  double lambda0 = 0.0;
  double lambda1 = 0.0;
  Index draws = 0;
  std::vector<GrowthProbe> probes;
  Index negative_probes = 0;  // probes where some F(x; S) < F(x*; S)
  double max_fit_violation = 0.0;
};

struct GrowthOptions {
  std::vector<double> radii{0.1, 0.5, 1.0, 2.0};
  Index directions = 8;
  Index draws = 0;   // 0 = exact enumeration over the sample space
  Index batch = 1;   // growth of the m-sample averaged loss
};

/// Probes x* + r d over random unit directions d and fits growth constants:
/// lambda1 is the largest value whose branch alone bounds every probe, and
/// likewise lambda0; the pair is jointly feasible. alpha may be +inf.
GrowthEstimate estimate_gamma_growth(const ProblemInstance& inst, double gamma, double alpha,
                                     const GrowthOptions& opts, Rng& rng);

struct ProfileCurve {
  std::string method;
  std::vector<double> ratios;     // sorted ascending, finite
  std::vector<double> fractions;  // fraction of kept cells with ratio <= ratios[j]

  /// Fraction of kept cells solved within factor r of the best.
  double value_at(double r) const;
};

struct ProfileInput {
  std::vector<std::string> methods;
  std::vector<std::vector<double>> times;  // one row per cell, one column per method; inf = failure
};

struct ProfileResult {
  std::vector<ProfileCurve> curves;
  Index kept_cells = 0;
  Index discarded_cells = 0;
};

/// Dolan-More profiles. Cells in which more than `max_failures` methods fail are discarded.
ProfileResult performance_profile(const ProfileInput& input, Index max_failures = 3);

struct SpeedupSample {
  Index m = 1;
  double alpha0 = 1.0;
  double time = 0.0;  // inf = failure
};

/// Median over seeds per (m, alpha0), minimum over alpha0 per m.
std::map<Index, double> best_times(const std::vector<SpeedupSample>& samples);
/// T*_1 / T*_m for every m present.
std::map<Index, double> speedup_table(const std::vector<SpeedupSample>& samples);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  Index count = 0;
};

LinearFit least_squares_line(const std::vector<double>& xs, const std::vector<double>& ys);

/// Slope of log(gap) against log(k) over k in [k_lo, k_hi]. Throws
/// std::domain_error on a nonpositive gap in the window.
LinearFit rate_slope(const std::vector<Index>& ks, const std::vector<double>& gaps, Index k_lo, Index k_hi);

/// Fit of log(value) against k over the positive entries (geometric decay).
LinearFit geometric_rate_fit(const std::vector<Index>& ks, const std::vector<double>& values);

double median(std::vector<double> values);

}  // namespace aprox
