#include "aprox/analysis.hpp"
#include "support/testing.hpp"

#include <doctest.h>

using namespace aprox;
using testing::Gen;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ProblemInstance scalar_regression(LossKind kind, const std::vector<double>& targets) {
  ProblemParams p;
  p.kind = kind;
  p.N = static_cast<Index>(targets.size());
  p.n = 1;
  Vector b(p.N);
  for (Index i = 0; i < p.N; ++i) b(i) = targets[static_cast<std::size_t>(i)];
  return ProblemInstance(p, Matrix::Ones(p.N, 1), b, Vector::Zero(1), Domain::all_space());
}

}  // namespace

TEST_CASE("gradient variance on hand examples") {
  Rng rng = make_rng(0);
  const ProblemInstance single = scalar_regression(LossKind::LinReg, {0.7});
  CHECK(estimate_sigma0(single, {Vector::Constant(1, 3.0)}, 0, rng).sigma0_sq == 0.0);
  CHECK(estimate_noise_to_signal(single, {Vector::Constant(1, 3.0)}).rho == 0.0);

  // Targets +-1: every gradient is x - b_i, so the variance is 1 everywhere
  // and the squared mean gradient is x^2.
  const ProblemInstance four = scalar_regression(LossKind::LinReg, {-1.0, -1.0, 1.0, 1.0});
  const Sigma0Estimate s = estimate_sigma0(four, {Vector::Constant(1, 2.0), Vector::Constant(1, -5.0)}, 0, rng);
  CHECK(s.sigma0_sq == doctest::Approx(1.0).epsilon(1e-14));
  const NoiseToSignalEstimate r =
      estimate_noise_to_signal(four, {Vector::Constant(1, 2.0), Vector::Constant(1, 4.0), Vector::Zero(1)});
  CHECK(r.rho == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(r.argmax_probe == 0);
  CHECK(r.skipped == 1);
  CHECK_THROWS_AS(estimate_noise_to_signal(four, {Vector::Zero(1)}), std::domain_error);
}

TEST_CASE("noiseless problems have no gradient variance at the solution") {
  ProblemParams p;
  p.N = 40;
  p.n = 5;
  p.seed = 3;
  const ProblemInstance inst = generate_problem(p);
  Rng rng = make_rng(0);
  CHECK(estimate_sigma0(inst, {inst.x_planted()}, 0, rng).sigma0_sq <= 1e-24);
}

TEST_CASE("variance estimators are invariant to row order and duplication") {
  Gen gen(71);
  for (int t = 0; t < 20; ++t) {
    const Index N = gen.integer(2, 12), n = gen.integer(1, 4);
    ProblemParams p;
    p.N = N;
    p.n = n;
    const Matrix A = gen.mat(N, n);
    const Vector b = gen.vec(N);
    const ProblemInstance inst(p, A, b, Vector::Zero(n), Domain::all_space());

    std::vector<Index> perm(static_cast<std::size_t>(N));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen.rng());
    Matrix Ap(N, n);
    Vector bp(N);
    for (Index i = 0; i < N; ++i) {
      Ap.row(i) = A.row(perm[static_cast<std::size_t>(i)]);
      bp(i) = b(perm[static_cast<std::size_t>(i)]);
    }
    const ProblemInstance permuted(p, Ap, bp, Vector::Zero(n), Domain::all_space());

    ProblemParams p2 = p;
    p2.N = 2 * N;
    Matrix A2(2 * N, n);
    A2 << A, A;
    Vector b2(2 * N);
    b2 << b, b;
    const ProblemInstance doubled(p2, A2, b2, Vector::Zero(n), Domain::all_space());

    const std::vector<Vector> probes{gen.vec(n), gen.vec(n), gen.vec(n)};
    Rng rng = make_rng(0);
    const double s = estimate_sigma0(inst, probes, 0, rng).sigma0_sq;
    CHECK(estimate_sigma0(permuted, probes, 0, rng).sigma0_sq == doctest::Approx(s).epsilon(1e-12));
    CHECK(estimate_sigma0(doubled, probes, 0, rng).sigma0_sq == doctest::Approx(s).epsilon(1e-12));
    const double rho = estimate_noise_to_signal(inst, probes).rho;
    CHECK(estimate_noise_to_signal(permuted, probes).rho == doctest::Approx(rho).epsilon(1e-12));
    CHECK(estimate_noise_to_signal(doubled, probes).rho == doctest::Approx(rho).epsilon(1e-12));
  }
}

TEST_CASE("Monte Carlo gradient variance approaches the exact value") {
  const ProblemInstance four = scalar_regression(LossKind::LinReg, {-1.0, -1.0, 1.0, 1.0});
  Rng rng = make_rng(5);
  const double mc = estimate_sigma0(four, {Vector::Constant(1, 2.0)}, 20000, rng).sigma0_sq;
  CHECK(mc == doctest::Approx(1.0).epsilon(0.05));
  CHECK_THROWS_AS(estimate_sigma0(four, {Vector::Zero(1)}, 1, rng), std::invalid_argument);
  CHECK_THROWS_AS(estimate_sigma0(four, {}, 0, rng), std::invalid_argument);
}

TEST_CASE("growth of the absolute value") {
  // F(x) = |x| / 2 with Polyak steps: (F - F*)^2 / |F'|^2 = x^2 exactly.
  const ProblemInstance abs = scalar_regression(LossKind::AbsReg, {0.0});
  Rng rng = make_rng(1);
  const GrowthEstimate g = estimate_gamma_growth(abs, 1.0, kInf, GrowthOptions{}, rng);
  CHECK(g.lambda1 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g.negative_probes == 0);
  CHECK(g.max_fit_violation <= 1e-12);
  for (const GrowthProbe& p : g.probes) CHECK(p.expectation == doctest::Approx(p.dist * p.dist).epsilon(1e-12));

  // A finite alpha caps the step: E = min(alpha, 4 |x| / 2 ...) and lambda0 fits the cap.
  const GrowthEstimate h = estimate_gamma_growth(abs, 0.0, 0.5, GrowthOptions{}, rng);
  for (const GrowthProbe& p : h.probes) {
    const double delta = 0.5 * p.dist;
    CHECK(p.expectation == doctest::Approx(delta * std::min(0.5, delta / 0.25)).epsilon(1e-12));
  }
  CHECK(h.lambda0 > 0.0);
  CHECK(h.max_fit_violation <= 1e-12);
}

TEST_CASE("growth fit bounds every probe") {
  Gen gen(72);
  for (double gamma : {0.0, 0.5, 1.0}) {
    ProblemParams p;
    p.kind = LossKind::PowerReg;
    p.N = 30;
    p.n = 5;
    p.gamma = gamma;
    p.seed = 7;
    const ProblemInstance inst = generate_problem(p);
    for (double alpha : {0.3, kInf}) {
      const GrowthEstimate g = estimate_gamma_growth(inst, gamma, alpha, GrowthOptions{}, gen.rng());
      CHECK(g.lambda1 >= 0.0);
      CHECK(g.lambda1 <= 1.0);
      CHECK(g.max_fit_violation <= 1e-10);
      CHECK(g.probes.size() == 32);
    }
  }
}

TEST_CASE("growth estimator validates its inputs") {
  const ProblemInstance abs = scalar_regression(LossKind::AbsReg, {0.0});
  Rng rng = make_rng(0);
  CHECK_THROWS_AS(estimate_gamma_growth(abs, 1.5, 1.0, GrowthOptions{}, rng), std::invalid_argument);
  CHECK_THROWS_AS(estimate_gamma_growth(abs, 0.5, 0.0, GrowthOptions{}, rng), std::invalid_argument);
  GrowthOptions o;
  o.batch = 4;
  CHECK_THROWS_AS(estimate_gamma_growth(abs, 0.5, 1.0, o, rng), std::invalid_argument);
  o.radii = {};
  CHECK_THROWS_AS(estimate_gamma_growth(abs, 0.5, 1.0, o, rng), std::invalid_argument);
}

TEST_CASE("performance profile examples") {
  // One method: every cell is its own best.
  const ProfileResult one = performance_profile({{"a"}, {{3.0}, {5.0}, {kInf}}});
  CHECK(one.curves[0].value_at(1.0) == doctest::Approx(2.0 / 3.0));
  CHECK(one.curves[0].value_at(100.0) == doctest::Approx(2.0 / 3.0));

  const ProfileResult two = performance_profile({{"a", "b"}, {{10.0, 20.0}, {30.0, 15.0}}});
  CHECK(two.curves[0].value_at(1.0) == 0.5);
  CHECK(two.curves[0].value_at(2.0) == 1.0);
  CHECK(two.curves[1].value_at(1.0) == 0.5);
  CHECK(two.curves[1].value_at(1.99) == 0.5);
  CHECK(two.curves[1].value_at(0.5) == 0.0);

  const ProfileResult fail = performance_profile({{"a", "b"}, {{1.0, kInf}, {2.0, kInf}}});
  CHECK(fail.curves[1].value_at(1e9) == 0.0);
  CHECK(fail.curves[0].value_at(1.0) == 1.0);

  // Cells where more than three methods fail are dropped.
  const ProfileResult drop =
      performance_profile({{"a", "b", "c", "d", "e"}, {{1, kInf, kInf, kInf, kInf}, {1, 2, kInf, kInf, kInf}}});
  CHECK(drop.kept_cells == 1);
  CHECK(drop.discarded_cells == 1);
  CHECK(drop.curves[1].value_at(2.0) == 1.0);

  CHECK_THROWS_AS(performance_profile({{}, {}}), std::invalid_argument);
  CHECK_THROWS_AS(performance_profile({{"a", "b"}, {{1.0}}}), std::invalid_argument);
}

TEST_CASE("profile curves are monotone fractions") {
  Gen gen(73);
  for (int t = 0; t < 100; ++t) {
    const Index A = gen.integer(1, 6), C = gen.integer(1, 20);
    ProfileInput in;
    for (Index a = 0; a < A; ++a) in.methods.push_back("m" + std::to_string(a));
    for (Index c = 0; c < C; ++c) {
      std::vector<double> row;
      for (Index a = 0; a < A; ++a) {
        row.push_back(gen.uniform(0.0, 1.0) < 0.2 ? kInf : std::pow(10.0, gen.uniform(0, 4)));
      }
      in.times.push_back(row);
    }
    Index solvable = 0;
    for (const auto& row : in.times) {
      const auto fails = std::count_if(row.begin(), row.end(), [](double x) { return std::isinf(x); });
      solvable += fails <= 3 && fails < A;
    }
    const ProfileResult res = performance_profile(in);
    CHECK(res.kept_cells + res.discarded_cells == C);
    if (res.kept_cells == 0) continue;
    double best_at_one = 0.0;
    for (const ProfileCurve& c : res.curves) {
      double prev = 0.0;
      for (double r : {1.0, 1.5, 2.0, 4.0, 16.0, 1e6}) {
        const double v = c.value_at(r);
        CHECK(v >= prev);
        CHECK(v <= 1.0);
        prev = v;
      }
      best_at_one += c.value_at(1.0);
    }
    // Every kept cell with a finite time has at least one winner.
    CHECK(best_at_one * static_cast<double>(res.kept_cells) >= static_cast<double>(solvable) - 1e-9);
  }
}

TEST_CASE("speedup tables") {
  std::vector<SpeedupSample> s;
  for (Index m : {1, 2, 4, 8}) {
    for (double a : {0.1, 1.0}) {
      for (int seed = 0; seed < 3; ++seed) {
        s.push_back({m, a, (a == 1.0 ? 1000.0 : 4000.0) / static_cast<double>(m) + seed});
      }
    }
  }
  const auto table = speedup_table(s);
  CHECK(table.at(1) == 1.0);
  CHECK(table.at(2) == doctest::Approx(1001.0 / 501.0));
  CHECK(table.at(8) == doctest::Approx(1001.0 / 126.0));

  // Median over seeds, then the best stepsize per m.
  const std::vector<SpeedupSample> hand{{1, 1.0, 10.0}, {1, 1.0, 30.0}, {1, 1.0, 20.0}, {1, 2.0, 40.0},
                                        {3, 1.0, 12.0}, {3, 2.0, 5.0},  {3, 2.0, kInf}, {3, 2.0, 4.0},
                                        {5, 1.0, kInf}};
  const auto best = best_times(hand);
  CHECK(best.at(1) == 20.0);
  CHECK(best.at(3) == 5.0);
  const auto sp = speedup_table(hand);
  CHECK(sp.at(3) == 4.0);
  CHECK(sp.at(5) == 0.0);
  CHECK_THROWS_AS(speedup_table({{2, 1.0, 3.0}}), std::domain_error);
}

TEST_CASE("rate fits") {
  std::vector<Index> ks;
  std::vector<double> a, b, c;
  Gen gen(74);
  for (Index k = 100; k <= 10000; k += 100) {
    ks.push_back(k);
    a.push_back(3.0 / static_cast<double>(k));
    b.push_back(1.0 / (static_cast<double>(k) * static_cast<double>(k)));
    c.push_back(std::pow(static_cast<double>(k), -1.5) * std::exp(0.05 * gen.normal()));
  }
  CHECK(rate_slope(ks, a, 100, 10000).slope == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(rate_slope(ks, b, 100, 10000).slope == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(std::abs(rate_slope(ks, c, 100, 10000).slope + 1.5) < 0.05);
  CHECK(rate_slope(ks, a, 1000, 2000).count == 11);
  c[5] = 0.0;
  CHECK_THROWS_AS(rate_slope(ks, c, 100, 10000), std::domain_error);
  CHECK_NOTHROW(rate_slope(ks, c, 1000, 10000));

  std::vector<Index> gk;
  std::vector<double> gv;
  for (Index k = 0; k < 30; ++k) {
    gk.push_back(k);
    gv.push_back(2.0 * std::pow(0.8, static_cast<double>(k)));
  }
  gv.push_back(0.0);
  gk.push_back(30);
  const LinearFit g = geometric_rate_fit(gk, gv);
  CHECK(g.slope == doctest::Approx(std::log(0.8)).epsilon(1e-12));
  CHECK(g.r2 == doctest::Approx(1.0));
  CHECK(g.count == 30);
}

TEST_CASE("median") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
  CHECK(std::isinf(median({1.0, kInf})));
  CHECK(std::isinf(median({kInf, 1.0, kInf})));
  CHECK_THROWS_AS(median({}), std::invalid_argument);
}
