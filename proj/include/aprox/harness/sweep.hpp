#pragma once

// Grid execution over (cond, method, m, alpha0, seed) cells.

#include "aprox/analysis.hpp"
#include "aprox/harness/config.hpp"
#include "aprox/optimizers.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace aprox::harness {

struct CellResult {
  std::string problem;
  std::string noise;
  double cond = 1.0;
  std::string method;
  bool accelerated = false;
  Index m = 1;
  double alpha0 = 1.0;
  Index seed = 0;
  std::optional<Index> k_to_eps;
  std::optional<Index> samples_to_eps;
  double final_gap = 0.0;
  RunStatus status = RunStatus::Budget;

  auto key() const { return std::tie(problem, noise, cond, method, accelerated, m, alpha0, seed); }
};

struct SweepResult {
  std::vector<CellResult> rows;
  /// Canonical order: lexicographic on the key columns.
  void sort();
};

std::string noise_label(const NoiseSpec& noise);

/// The instance shared by every method, m and alpha0 at (cond, seed).
ProblemInstance make_cell_instance(const SweepConfig& cfg, double cond, Index seed);

StepSchedule cell_schedule(const SweepConfig& cfg, const ProblemInstance& inst, const MethodSpec& method,
                           double alpha0);

CellResult run_cell(const SweepConfig& cfg, const ProblemInstance& inst, const MethodSpec& method, Index m,
                    double alpha0, Index seed);

/// Every grid cell; results do not depend on `cfg.jobs`. Progress goes to
/// `progress` when non-null.
SweepResult execute_sweep(const SweepConfig& cfg, std::ostream* progress = nullptr);

enum class TimeUnit { Iterations, Samples };

/// Experiments are (problem, noise, cond, accelerated, m, alpha0, seed);
/// methods form the columns. Failures enter as +inf.
ProfileInput profile_input(const SweepResult& result, bool accelerated, TimeUnit unit = TimeUnit::Samples);

std::vector<SpeedupSample> speedup_samples(const SweepResult& result, const std::string& method, bool accelerated,
                                           TimeUnit unit = TimeUnit::Iterations);

}  // namespace aprox::harness
