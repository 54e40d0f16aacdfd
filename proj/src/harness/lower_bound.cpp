#include "aprox/harness/lower_bound.hpp"

#include "aprox/optimizers.hpp"
#include "aprox/problems.hpp"
#include "aprox/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace aprox::harness {

double OrthColReport::max_relative_error(Index k_max) const {
  double worst = 0.0;
  for (const auto& r : rounds) {
    if (r.k > k_max) break;
    if (r.closed_form > 0.0) {
      worst = std::max(worst, std::abs(r.empirical_risk - r.closed_form) / r.closed_form);
    } else {
      worst = std::max(worst, std::abs(r.empirical_risk));
    }
  }
  return worst;
}

OrthColReport orthcol_lab(Index n, Index m, double R, Index trials, Index rounds, std::uint64_t seed,
                          bool identity_basis) {
  if (trials < 1 || rounds < 1) throw std::invalid_argument("orthcol_lab: trials and rounds must be positive");
  const OrthColRegression model(n, m, R, seed, identity_basis);
  Rng rng = make_rng(derive_seed(seed, {0x6f7274686f636f6cULL}));
  const double scale = std::sqrt(static_cast<double>(n) / static_cast<double>(m));
  const double keep = 1.0 - static_cast<double>(m) / static_cast<double>(n);

  OrthColReport rep;
  rep.n = n;
  rep.m = m;
  rep.R = R;
  rep.trials = trials;
  rep.rounds.resize(static_cast<std::size_t>(rounds));
  std::vector<double> predicted(static_cast<std::size_t>(rounds), 0.0);

  const Matrix& U = model.basis();
  for (Index t = 0; t < trials; ++t) {
    const Vector x_star = model.draw_optimum(rng);
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    Vector coords = Vector::Zero(n);
    Index rank = 0;
    for (Index k = 1; k <= rounds; ++k) {
      predicted[static_cast<std::size_t>(k - 1)] += keep * static_cast<double>(rank) + static_cast<double>(m);
      const auto obs = model.observe(x_star, rng);
      for (Index j = 0; j < m; ++j) {
        const Index col = obs.columns[static_cast<std::size_t>(j)];
        coords(col) = obs.b(j) / scale;  // u_col^T x*
        if (!seen[static_cast<std::size_t>(col)]) {
          seen[static_cast<std::size_t>(col)] = true;
          ++rank;
        }
      }
      // Posterior mean: observed coordinates are known exactly, the rest stay at the prior mean 0.
      const Vector x_hat = U * coords;
      auto& round = rep.rounds[static_cast<std::size_t>(k - 1)];
      round.empirical_risk += (x_hat - x_star).squaredNorm();
      round.mean_rank += static_cast<double>(rank);
      round.rank_risk += R * R * static_cast<double>(n - rank) / static_cast<double>(n);
    }
  }
  const double T = static_cast<double>(trials);
  for (Index k = 1; k <= rounds; ++k) {
    auto& round = rep.rounds[static_cast<std::size_t>(k - 1)];
    round.k = k;
    round.empirical_risk /= T;
    round.mean_rank /= T;
    round.rank_risk /= T;
    const double decay = std::pow(keep, static_cast<double>(k));
    round.closed_form = R * R * decay;
    round.expected_rank = static_cast<double>(n) * (1.0 - decay);
    round.max_recursion_error = std::abs(round.mean_rank - predicted[static_cast<std::size_t>(k - 1)] / T);
  }
  return rep;
}

TwoPointReport twopoint_lab(double gamma, double delta, double R, Index trials, Index rounds, BatchStrategy strategy,
                            double alpha0, std::uint64_t seed) {
  if (trials < 1 || rounds < 1) throw std::invalid_argument("twopoint_lab: trials and rounds must be positive");
  TwoPointReport rep;
  rep.gamma = gamma;
  rep.delta = delta;
  rep.radius = R;
  rep.lambda1 = delta / ((1.0 + gamma) * (1.0 + gamma));
  rep.trials = trials;
  rep.rounds.resize(static_cast<std::size_t>(rounds));

  Rng rng = make_rng(derive_seed(seed, {0x74776f706f696e74ULL}));
  std::bernoulli_distribution coin(0.5);
  StepSchedule schedule;
  schedule.kind = StepSchedule::Kind::PolyDecay;
  schedule.alpha0 = alpha0;
  schedule.beta = 0.5;
  for (Index t = 0; t < trials; ++t) {
    ProblemParams p;
    p.kind = LossKind::TwoPoint;
    p.gamma = gamma;
    p.delta = delta;
    p.radius = R;
    p.sign = coin(rng) ? 1 : -1;
    p.seed = seed + static_cast<std::uint64_t>(t);
    const ProblemInstance inst = generate_problem(p);
    const double target = p.sign * R;

    RunOptions opts;
    opts.snapshot_stride = 1;
    opts.f_star = 0.0;
    const RunRecord rec =
        run_base(inst, strategy, schedule, 1, rounds, std::numeric_limits<double>::min(), rng, opts);
    double last = R * R;  // x0 = 0
    std::size_t s = 0;
    for (Index k = 1; k <= rounds; ++k) {
      if (s < rec.snapshots.size() && rec.snapshots[s].first == k) {
        const double d = rec.snapshots[s].second(0) - target;
        last = d * d;
        ++s;
      }
      rep.rounds[static_cast<std::size_t>(k - 1)].mean_dist_sq += last;
    }
  }
  for (Index k = 1; k <= rounds; ++k) {
    auto& round = rep.rounds[static_cast<std::size_t>(k - 1)];
    round.k = k;
    round.mean_dist_sq /= static_cast<double>(trials);
    round.envelope = R * R * std::pow(1.0 - delta, static_cast<double>(k));
  }
  return rep;
}

}  // namespace aprox::harness
