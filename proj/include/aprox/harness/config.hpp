#pragma once

// Sweep configuration: JSON schema, validation and built-in presets.

#include "aprox/models.hpp"
#include "aprox/problems.hpp"

#include <json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace aprox::harness {

/// Raised for malformed or inconsistent configurations (CLI exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MethodSpec {
  std::string name;  // sgm, prox, pia, pma, pam, pia-linear, pia-prox
  BatchStrategy strategy;
  bool accelerated = false;

  std::string label() const { return accelerated ? name + "+acc" : name; }
};

MethodSpec method_spec(const std::string& name, bool accelerated = false);

enum class ScheduleChoice { Poly, Adaptive };

struct SweepConfig {
  std::string name = "custom";
  ProblemParams problem;
  std::vector<double> conds{1.0};
  std::vector<MethodSpec> methods;
  std::vector<double> alpha0s;
  std::vector<Index> ms;
  Index seeds = 30;
  double epsilon = 1e-2;  // relative to f(x0) - f*
  Index budget = 100000;  // samples per run
  ScheduleChoice schedule = ScheduleChoice::Poly;
  double beta = 0.5;
  std::uint64_t master_seed = 0;
  Index record_stride = 1;
  unsigned jobs = 1;
  std::string out_dir = "out";

  /// Throws ConfigError naming the offending field or combination.
  void validate() const;
  nlohmann::json to_json() const;
};

/// Default step grid {10^{i/2} : i = -4..5}.
std::vector<double> default_alpha0_grid();
std::vector<Index> default_batch_grid();

SweepConfig parse_config(const nlohmann::json& j);
SweepConfig load_config_text(const std::string& text);
SweepConfig load_config_file(const std::string& path);

SweepConfig preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace aprox::harness
