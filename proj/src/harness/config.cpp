#include "aprox/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace aprox::harness {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
T get_as(const json& obj, const std::string& key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

bool smooth_loss(const ProblemParams& p) {
  switch (p.kind) {
    case LossKind::LinReg:
    case LossKind::Logistic:
      return true;
    case LossKind::PowerReg:
    case LossKind::TwoPoint:
      return p.gamma == 1.0;
    case LossKind::AbsReg:
    case LossKind::HalfspaceIntersection:
      return false;
  }
  return false;
}

ProblemParams parse_problem(const json& j, ProblemParams p) {
  reject_unknown(j, {"kind", "N", "n", "noise", "gamma", "delta", "radius", "sign"}, "problem");
  if (j.contains("kind")) {
    try {
      p.kind = loss_kind_from_string(get_as<std::string>(j, "kind", "problem"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("problem.kind: ") + e.what());
    }
  }
  if (j.contains("N")) p.N = get_as<Index>(j, "N", "problem");
  if (j.contains("n")) p.n = get_as<Index>(j, "n", "problem");
  if (j.contains("gamma")) p.gamma = get_as<double>(j, "gamma", "problem");
  if (j.contains("delta")) p.delta = get_as<double>(j, "delta", "problem");
  if (j.contains("radius")) p.radius = get_as<double>(j, "radius", "problem");
  if (j.contains("sign")) p.sign = get_as<int>(j, "sign", "problem");
  if (j.contains("noise")) {
    const json& nz = j.at("noise");
    reject_unknown(nz, {"kind", "level"}, "problem.noise");
    const auto kind = get_as<std::string>(nz, "kind", "problem.noise");
    const double level = nz.contains("level") ? get_as<double>(nz, "level", "problem.noise") : 0.0;
    if (kind == "none") {
      p.noise = NoiseSpec::none();
    } else if (kind == "gaussian") {
      p.noise = NoiseSpec::gaussian(level);
    } else if (kind == "laplace") {
      p.noise = NoiseSpec::laplace(level);
    } else if (kind == "flip") {
      p.noise = NoiseSpec::label_flip(level);
    } else {
      throw ConfigError("problem.noise.kind: unknown noise '" + kind + "'");
    }
  }
  return p;
}

std::string schedule_name(ScheduleChoice s) { return s == ScheduleChoice::Poly ? "poly" : "adaptive"; }

}  // namespace

MethodSpec method_spec(const std::string& name, bool accelerated) {
  try {
    return MethodSpec{name, BatchStrategy::from_name(name), accelerated};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("methods: ") + e.what());
  }
}

std::vector<double> default_alpha0_grid() {
  std::vector<double> grid;
  for (int i = -4; i <= 5; ++i) grid.push_back(std::pow(10.0, i / 2.0));
  return grid;
}

std::vector<Index> default_batch_grid() { return {1, 4, 8, 16, 32, 64}; }

void SweepConfig::validate() const {
  if (methods.empty()) throw ConfigError("methods: the method list is empty");
  if (alpha0s.empty()) throw ConfigError("alpha0: the step grid is empty");
  if (ms.empty()) throw ConfigError("m: the batch grid is empty");
  if (conds.empty()) throw ConfigError("conds: the condition grid is empty");
  for (double a : alpha0s) {
    if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("alpha0: every initial step must be positive and finite");
  }
  for (Index m : ms) {
    if (m < 1) throw ConfigError("m: batch sizes must be at least 1");
  }
  for (double c : conds) {
    if (!(c >= 1.0)) throw ConfigError("conds: condition numbers must be >= 1");
  }
  if (seeds < 1) throw ConfigError("seeds: need at least one seed");
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ConfigError("epsilon: must be positive");
  if (budget < 1) throw ConfigError("budget: must be at least one sample");
  if (record_stride < 1) throw ConfigError("record_stride: must be at least 1");
  if (jobs < 1) throw ConfigError("jobs: must be at least 1");
  if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("schedule.beta: must lie in [0, 1]");
  if (schedule == ScheduleChoice::Adaptive && !smooth_loss(problem)) {
    throw ConfigError("schedule: 'adaptive' needs a smoothness constant, but " + std::string(to_string(problem.kind)) +
                      " is nonsmooth here");
  }
  for (const auto& m : methods) {
    const bool full = m.strategy.model == ModelKind::FullProx &&
                      (m.strategy.scheme == StrategyScheme::ModelOfAverage ||
                       m.strategy.scheme == StrategyScheme::IterateAverage);
    if (full && problem.kind == LossKind::PowerReg && problem.gamma != 0.0 && problem.gamma != 1.0) {
      throw ConfigError("methods: '" + m.name + "' has no exact prox for powerreg with gamma not in {0, 1}");
    }
  }
  try {
    ProblemParams probe = problem;
    probe.cond = conds.front();
    (void)generate_problem(probe);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("problem: ") + e.what());
  }
}

json SweepConfig::to_json() const {
  json methods_json = json::array();
  for (const auto& m : methods) methods_json.push_back({{"name", m.name}, {"accelerated", m.accelerated}});
  json problem_json = problem.to_json();
  problem_json.erase("cond");
  problem_json.erase("seed");
  return {{"name", name},
          {"problem", problem_json},
          {"conds", conds},
          {"methods", methods_json},
          {"alpha0", alpha0s},
          {"m", ms},
          {"seeds", seeds},
          {"epsilon", epsilon},
          {"budget", budget},
          {"schedule", {{"kind", schedule_name(schedule)}, {"beta", beta}}},
          {"master_seed", master_seed},
          {"record_stride", record_stride},
          {"jobs", jobs},
          {"out", out_dir}};
}

SweepConfig parse_config(const json& j) {
  reject_unknown(j,
                 {"preset", "name", "problem", "conds", "methods", "accelerated", "alpha0", "m", "seeds", "epsilon",
                  "budget", "schedule", "master_seed", "record_stride", "jobs", "out"},
                 "config");
  SweepConfig cfg;
  if (j.contains("preset")) cfg = preset(get_as<std::string>(j, "preset", "config"));
  if (j.contains("name")) cfg.name = get_as<std::string>(j, "name", "config");
  if (j.contains("problem")) cfg.problem = parse_problem(j.at("problem"), cfg.problem);
  if (j.contains("conds")) cfg.conds = get_as<std::vector<double>>(j, "conds", "config");
  const bool default_acc = j.contains("accelerated") ? get_as<bool>(j, "accelerated", "config") : false;
  if (j.contains("methods")) {
    cfg.methods.clear();
    const json& ms = j.at("methods");
    if (!ms.is_array()) throw ConfigError("config.methods: expected an array");
    for (const auto& entry : ms) {
      if (entry.is_string()) {
        cfg.methods.push_back(method_spec(entry.get<std::string>(), default_acc));
      } else {
        reject_unknown(entry, {"name", "accelerated"}, "methods[]");
        const bool acc = entry.contains("accelerated") ? get_as<bool>(entry, "accelerated", "methods[]") : default_acc;
        cfg.methods.push_back(method_spec(get_as<std::string>(entry, "name", "methods[]"), acc));
      }
    }
  } else if (j.contains("accelerated")) {
    for (auto& m : cfg.methods) m.accelerated = default_acc;
  }
  if (j.contains("alpha0")) cfg.alpha0s = get_as<std::vector<double>>(j, "alpha0", "config");
  if (j.contains("m")) cfg.ms = get_as<std::vector<Index>>(j, "m", "config");
  if (j.contains("seeds")) cfg.seeds = get_as<Index>(j, "seeds", "config");
  if (j.contains("epsilon")) cfg.epsilon = get_as<double>(j, "epsilon", "config");
  if (j.contains("budget")) cfg.budget = get_as<Index>(j, "budget", "config");
  if (j.contains("schedule")) {
    const json& s = j.at("schedule");
    reject_unknown(s, {"kind", "beta"}, "schedule");
    const auto kind = get_as<std::string>(s, "kind", "schedule");
    if (kind == "poly") {
      cfg.schedule = ScheduleChoice::Poly;
    } else if (kind == "adaptive") {
      cfg.schedule = ScheduleChoice::Adaptive;
    } else {
      throw ConfigError("schedule.kind: expected 'poly' or 'adaptive', got '" + kind + "'");
    }
    if (s.contains("beta")) cfg.beta = get_as<double>(s, "beta", "schedule");
  }
  if (j.contains("master_seed")) cfg.master_seed = get_as<std::uint64_t>(j, "master_seed", "config");
  if (j.contains("record_stride")) cfg.record_stride = get_as<Index>(j, "record_stride", "config");
  if (j.contains("jobs")) cfg.jobs = get_as<unsigned>(j, "jobs", "config");
  if (j.contains("out")) cfg.out_dir = get_as<std::string>(j, "out", "config");
  cfg.validate();
  return cfg;
}

SweepConfig load_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("parse error: ") + e.what());
  }
  return parse_config(j);
}

SweepConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return load_config_text(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

namespace {

std::vector<MethodSpec> five_methods() {
  return {method_spec("sgm"), method_spec("prox"), method_spec("pia"), method_spec("pma"), method_spec("pam")};
}

SweepConfig paper_base(LossKind kind, NoiseSpec noise) {
  SweepConfig cfg;
  cfg.problem.kind = kind;
  cfg.problem.N = 1000;
  cfg.problem.n = 40;
  cfg.problem.noise = noise;
  cfg.conds = {1.0, 10.0, 100.0};
  cfg.methods = five_methods();
  cfg.alpha0s = default_alpha0_grid();
  cfg.ms = default_batch_grid();
  cfg.seeds = 30;
  cfg.epsilon = 1e-2;
  cfg.budget = 200000;
  return cfg;
}

SweepConfig desk(SweepConfig cfg) {
  cfg.problem.N = 200;
  cfg.problem.n = 20;
  cfg.conds = {1.0};
  cfg.ms = {1, 4, 8, 16};
  cfg.seeds = 5;
  cfg.budget = 20000;
  return cfg;
}

}  // namespace

SweepConfig preset(const std::string& name) {
  SweepConfig cfg;
  if (name == "paper-linreg") {
    cfg = paper_base(LossKind::LinReg, NoiseSpec::gaussian(0.5));
  } else if (name == "paper-absreg") {
    cfg = paper_base(LossKind::AbsReg, NoiseSpec::laplace(0.5));
  } else if (name == "paper-absreg-noiseless") {
    cfg = paper_base(LossKind::AbsReg, NoiseSpec::none());
  } else if (name == "paper-logistic") {
    cfg = paper_base(LossKind::Logistic, NoiseSpec::label_flip(0.01));
  } else if (name == "desk-linreg") {
    cfg = desk(paper_base(LossKind::LinReg, NoiseSpec::gaussian(0.5)));
  } else if (name == "desk-absreg") {
    cfg = desk(paper_base(LossKind::AbsReg, NoiseSpec::none()));
  } else if (name == "desk-logistic") {
    cfg = desk(paper_base(LossKind::Logistic, NoiseSpec::label_flip(0.01)));
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  cfg.name = name;
  return cfg;
}

std::vector<std::string> preset_names() {
  return {"paper-linreg", "paper-absreg", "paper-absreg-noiseless", "paper-logistic",
          "desk-linreg",  "desk-absreg",  "desk-logistic"};
}

}  // namespace aprox::harness
