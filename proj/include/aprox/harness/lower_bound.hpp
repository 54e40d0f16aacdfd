#pragma once

// Lower-bound laboratory: random orthogonal-column regression and the
// two-point one-dimensional family.

#include "aprox/models.hpp"
#include "aprox/types.hpp"

#include <cstdint>
#include <vector>

namespace aprox::harness {

struct OrthColRound {
  Index k = 0;
  double empirical_risk = 0.0;   // mean ||x_hat - x*||^2 with the posterior mean
  double closed_form = 0.0;      // R^2 (1 - m/n)^k
  double mean_rank = 0.0;        // observed columns
  double expected_rank = 0.0;    // n - n (1 - m/n)^k
  double rank_risk = 0.0;        // mean R^2 (n - r_k) / n
  double max_recursion_error = 0.0;  // |E[r_k | r_{k-1}] - ((1 - m/n) r_{k-1} + m)| averaged
};

struct OrthColReport {
  Index n = 0, m = 0, trials = 0;
  double R = 1.0;
  std::vector<OrthColRound> rounds;

  /// Largest relative deviation of the empirical risk from the closed form over k <= k_max.
  double max_relative_error(Index k_max) const;
};

OrthColReport orthcol_lab(Index n, Index m, double R, Index trials, Index rounds, std::uint64_t seed,
                          bool identity_basis = false);

struct TwoPointRound {
  Index k = 0;
  double mean_dist_sq = 0.0;
  double envelope = 0.0;  // R^2 (1 - delta)^k
};

struct TwoPointReport {
  double gamma = 0.0, delta = 0.0, radius = 1.0, lambda1 = 0.0;
  Index trials = 0;
  std::vector<TwoPointRound> rounds;
};

/// Runs `strategy` with steps alpha0 k^{-1/2} (alpha0 = +inf for pure Polyak
/// steps) from x0 = 0 on instances with a random sign, m = 1.
TwoPointReport twopoint_lab(double gamma, double delta, double R, Index trials, Index rounds, BatchStrategy strategy,
                            double alpha0, std::uint64_t seed);

}  // namespace aprox::harness
